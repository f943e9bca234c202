//! Products of inhomogeneous systems, separation conditions, and
//! inhomogeneous invariant measures sampled by the chaos game.
//!
//! Product maps `Φ_ij(x, y) = (f_i(x), g_j(y))` act on the concatenated
//! space with the max-of-factors metric, in which `Φ_ij` contracts by
//! `max(ratio f_i, ratio g_j)`.

use crate::construct::{attractor_cloud, isss_cloud, SystemSpec, VerificationReport};
use crate::error::{IsssError, Result};
use crate::geometry::{hausdorff_distance_with, AmbientBox, CondensationSet, set_gap, Metric, Point, PointCloud, Similarity, MAX_DIM};
use crate::codespace::Sft;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct ProductSpec {
    pub left: SystemSpec,
    pub right: SystemSpec,
    /// Maps `Φ_ij` at index `i * M + j`, condensation `C_1 × C_2`.
    pub combined: SystemSpec,
    /// `p_0 + q_0 - p_0 q_0` when both factors carry probabilities.
    pub condensation_weight: Option<f64>,
}

impl ProductSpec {
    pub fn metric(&self) -> Metric {
        Metric::MaxOfFactors { split: self.left.dim() }
    }
}

/// Product of two full-shift systems.
pub fn product_system(a: &SystemSpec, b: &SystemSpec) -> Result<ProductSpec> {
    if !a.codespace.is_full_shift() || !b.codespace.is_full_shift() {
        return Err(IsssError::Unsupported("products are defined for full-shift factors only".into()));
    }
    let d = a.dim() + b.dim();
    if d > MAX_DIM {
        return Err(IsssError::UnsupportedDimension(d));
    }
    let maps = a
        .maps
        .iter()
        .flat_map(|f| b.maps.iter().map(move |g| Similarity::product(f, g)))
        .collect::<Result<Vec<_>>>()?;
    let (probabilities, weight) = match (&a.probabilities, &b.probabilities) {
        (Some(p), Some(q)) => {
            let w = p[0] + q[0] - p[0] * q[0];
            let mut r = vec![w];
            r.extend(p[1..].iter().flat_map(|pi| q[1..].iter().map(move |qj| pi * qj)));
            (Some(r), Some(w))
        }
        _ => (None, None),
    };
    let n = maps.len();
    let combined = SystemSpec::new(
        maps,
        Sft::full(n),
        CondensationSet::product(&a.condensation, &b.condensation)?,
        a.ambient.product(&b.ambient)?,
        probabilities,
        a.osc_asserted && b.osc_asserted,
    )?;
    Ok(ProductSpec { left: a.clone(), right: b.clone(), combined, condensation_weight: weight })
}

/// `{(x, y) : x ∈ a, y ∈ b}`; the resolution is that of the product of nets.
pub fn cartesian(a: &PointCloud, b: &PointCloud) -> Result<PointCloud> {
    let pts = a.points().iter().flat_map(|x| b.points().iter().map(move |y| x.concat(y))).collect::<Result<Vec<_>>>()?;
    Ok(PointCloud::new(a.dim() + b.dim(), pts, a.resolution().hypot(b.resolution())).normalize())
}

/// Hausdorff distance (max metric) between the attractor of the product
/// system and the Cartesian product of the factor attractors.
pub fn attractor_product_gap(p: &ProductSpec, resolution: f64) -> Result<f64> {
    let joint = attractor_cloud(&p.combined, resolution)?;
    let pair = cartesian(&attractor_cloud(&p.left, resolution)?, &attractor_cloud(&p.right, resolution)?)?;
    hausdorff_distance_with(&joint, &pair, p.metric())
}

/// `∪ Φ_ij(A_1 × A_2) ∪ (C_1 × C_2) ⊆ A_1 × A_2` for the inhomogeneous
/// attractors `A_i` of the factors, checked within `tol`.
pub fn check_super_self_similar(p: &ProductSpec, resolution: f64, tol: f64) -> Result<VerificationReport> {
    let a1 = isss_cloud(&p.left.with_full_shift(), resolution)?;
    let a2 = isss_cloud(&p.right.with_full_shift(), resolution)?;
    let target = cartesian(&a1, &a2)?;
    let mut probe: Vec<Point> =
        p.combined.maps.iter().flat_map(|m| target.points().iter().map(|x| m.apply_unchecked(x))).collect();
    if !p.combined.condensation.is_empty() {
        probe.extend(p.combined.condensation.discretize(resolution)?.into_points());
    }
    let idx = target.index();
    let worst = probe
        .iter()
        .map(|x| idx.nearest(x, p.metric()).map_or(f64::INFINITY, |(d, _)| d))
        .fold(0.0, f64::max);
    Ok(VerificationReport { passed: worst <= tol, worst_gap: worst, tolerance: tol })
}

/// Outcome of the strong separation check. Cloud separations overestimate
/// the true ones by at most `2 * resolution`, so a condition counts as
/// satisfied only when `separation - 2 * resolution > margin`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsscReport {
    pub passed: bool,
    /// Smallest distance between two image clouds `f_i(A)`, `f_j(A)`.
    pub min_image_separation: f64,
    /// Smallest distance between an image cloud and the condensation set.
    pub min_condensation_separation: f64,
    /// 1-based `(i, j)` of the closest image pair; `j = 0` stands for `C`.
    pub witness: Option<(usize, usize)>,
    pub resolution: f64,
}

/// `f_i(A) ∩ f_j(A) = ∅` for `i ≠ j` and `f_i(A) ∩ C = ∅`, with `A` the
/// inhomogeneous attractor of the full-shift system.
pub fn check_issc(spec: &SystemSpec, resolution: f64, margin: f64) -> Result<IsscReport> {
    let metric = spec.metric();
    let a = isss_cloud(&spec.with_full_shift(), resolution)?;
    let res = a.resolution();
    let images: Vec<Vec<Point>> = spec.maps.iter().map(|f| a.points().iter().map(|x| f.apply_unchecked(x)).collect()).collect();
    let c = if spec.condensation.is_empty() { Vec::new() } else { spec.condensation.discretize(res)?.into_points() };
    let mut min_image = f64::INFINITY;
    let mut min_c = f64::INFINITY;
    let mut witness = None;
    let mut closest = f64::INFINITY;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let g = set_gap(&images[i], &images[j], metric);
            min_image = min_image.min(g);
            if g < closest {
                closest = g;
                witness = Some((i + 1, j + 1));
            }
        }
        let g = set_gap(&images[i], &c, metric);
        min_c = min_c.min(g);
        if g < closest {
            closest = g;
            witness = Some((i + 1, 0));
        }
    }
    Ok(IsscReport {
        passed: closest - 2.0 * res > margin,
        min_image_separation: min_image,
        min_condensation_separation: min_c,
        witness,
        resolution: res,
    })
}

/// Which form of the third open-set clause to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IoscVariant {
    /// `U ⊂ closure(C)`, the clause as literally written.
    AsStated,
    /// `C ⊆ closure(U)`.
    Conventional,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IoscReport {
    pub passed: bool,
    /// `f_i(U) ⊂ U` for every map.
    pub images_inside: bool,
    /// The open images are pairwise disjoint.
    pub disjoint: bool,
    pub condensation_clause: bool,
    /// Smallest separating gap between two images; 0 when they touch.
    pub min_gap: f64,
}

/// Open set condition for an open box `U`. Images of `U` are parallelotopes;
/// disjointness is decided by separating axes drawn from the face normals
/// (plus edge cross products in three dimensions), which is exact up to
/// dimension three and for axis-aligned or product maps. Elsewhere a pair
/// with no separating face normal is reported as overlapping.
pub fn check_iosc(spec: &SystemSpec, u: &AmbientBox, variant: IoscVariant) -> Result<IoscReport> {
    crate::geometry::check_same_dim(spec.dim(), u.dim())?;
    let tol = 1e-12 * (1.0 + u.diam());
    let corners: Vec<Vec<Point>> = spec.maps.iter().map(|f| u.corners().map(|c| f.apply_unchecked(&c)).collect()).collect();
    let images_inside = corners.iter().flatten().all(|p| u.contains(p, tol));
    let normals: Vec<Vec<[f64; MAX_DIM]>> = spec.maps.iter().map(|f| face_normals(f, u.dim())).collect();
    let mut min_gap = f64::INFINITY;
    for i in 0..corners.len() {
        for j in i + 1..corners.len() {
            let mut axes: Vec<[f64; MAX_DIM]> = normals[i].iter().chain(&normals[j]).copied().collect();
            if u.dim() == 3 {
                let (ni, nj) = (&normals[i], &normals[j]);
                for a in ni {
                    for b in nj {
                        let c = cross(a, b);
                        if c.iter().map(|v| v * v).sum::<f64>() > 1e-24 {
                            axes.push(c);
                        }
                    }
                }
            }
            let gap = axes.iter().map(|n| separation(&corners[i], &corners[j], n)).fold(f64::NEG_INFINITY, f64::max);
            min_gap = min_gap.min(gap);
        }
    }
    let disjoint = min_gap >= -tol;
    let condensation_clause = match variant {
        IoscVariant::AsStated => spec.condensation.contains_open_box(u),
        IoscVariant::Conventional => spec.condensation.is_within(u, tol),
    };
    Ok(IoscReport {
        passed: images_inside && disjoint && condensation_clause,
        images_inside,
        disjoint,
        condensation_clause,
        min_gap: if min_gap.is_finite() { min_gap.max(0.0) } else { f64::INFINITY },
    })
}

/// Unit normals of the faces of `f(U)`: images of the coordinate axes.
fn face_normals(f: &Similarity, d: usize) -> Vec<[f64; MAX_DIM]> {
    let origin = f.apply_unchecked(&Point::origin(d));
    (0..d)
        .map(|k| {
            let mut e = [0.0; MAX_DIM];
            e[k] = 1.0;
            let img = f.apply_unchecked(&Point::new(&e[..d]).unwrap());
            let mut n = [0.0; MAX_DIM];
            let mut len = 0.0;
            for i in 0..d {
                n[i] = img[i] - origin[i];
                len += n[i] * n[i];
            }
            for v in n.iter_mut() {
                *v /= len.sqrt();
            }
            n
        })
        .collect()
}

fn cross(a: &[f64; MAX_DIM], b: &[f64; MAX_DIM]) -> [f64; MAX_DIM] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0], 0.0]
}

/// Gap between the projections of two corner sets on `n`; negative when
/// the projections overlap.
fn separation(a: &[Point], b: &[Point], n: &[f64; MAX_DIM]) -> f64 {
    let proj = |pts: &[Point]| {
        pts.iter()
            .map(|p| (0..p.dim()).map(|i| p[i] * n[i]).sum::<f64>())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (alo, ahi) = proj(a);
    let (blo, bhi) = proj(b);
    (blo - ahi).max(alo - bhi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSample {
    pub points: Vec<Point>,
    pub seed: u64,
    pub burn_in: usize,
    pub n: usize,
}

fn weights(spec: &SystemSpec) -> Result<WeightedIndex<f64>> {
    let p = spec.probabilities.as_ref().ok_or(IsssError::MissingProbabilities)?;
    if p[0] > 0.0 && spec.condensation.is_empty() {
        return Err(IsssError::InvalidParameter { name: "probabilities", reason: "p_0 > 0 needs a nonempty condensation set".into() });
    }
    WeightedIndex::new(p).map_err(|e| IsssError::InvalidParameter { name: "probabilities", reason: e.to_string() })
}

/// One step of the chaos game: index 0 restarts from `restart`, index
/// `i ≥ 1` applies `f_i`.
fn step(spec: &SystemSpec, pick: &WeightedIndex<f64>, x: &Point, rng: &mut ChaCha8Rng, restart: &mut impl FnMut(&mut ChaCha8Rng) -> Point) -> Point {
    match pick.sample(rng) {
        0 => restart(rng),
        i => spec.maps[i - 1].apply_unchecked(x),
    }
}

fn run(
    spec: &SystemSpec,
    n: usize,
    burn: usize,
    rng: &mut ChaCha8Rng,
    mut restart: impl FnMut(&mut ChaCha8Rng) -> Point,
) -> Result<Vec<Point>> {
    let pick = weights(spec)?;
    let mut x = spec.ambient.center();
    for _ in 0..burn {
        x = step(spec, &pick, &x, rng, &mut restart);
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        x = step(spec, &pick, &x, rng, &mut restart);
        out.push(x);
    }
    Ok(out)
}

/// Chaos game for `μ = Σ p_i μ∘f_i⁻¹ + p_0 ν`, with `ν` the uniform measure
/// on the condensation set. ChaCha8 seeded by `seed`.
pub fn chaos_game(spec: &SystemSpec, n: usize, burn: usize, seed: u64) -> Result<MeasureSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = spec.condensation.clone();
    let points = run(spec, n, burn, &mut rng, |r| c.sample(r).expect("checked nonempty"))?;
    Ok(MeasureSample { points, seed, burn_in: burn, n })
}

/// Empirical mixed moment `E[x^a]` with a batch-means standard error, which
/// accounts for the correlation between successive chaos-game states.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentEstimate {
    pub exponents: Vec<u32>,
    pub mean: f64,
    pub std_error: f64,
}

/// Number of batches used for standard errors.
pub const BATCHES: usize = 100;

/// All exponent vectors with total order `1..=max_order`.
pub fn exponent_vectors(dim: usize, max_order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for order in 1..=max_order {
        let mut cur = vec![0u32; dim];
        fill(&mut out, &mut cur, 0, order);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos == cur.len() - 1 {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        fill(out, cur, pos + 1, left - k);
    }
    cur[pos] = 0;
}

pub fn moments(points: &[Point], max_order: u32) -> Vec<MomentEstimate> {
    let dim = points.first().map_or(1, Point::dim);
    let batch = (points.len() / BATCHES).max(1);
    exponent_vectors(dim, max_order)
        .into_iter()
        .map(|e| {
            let value = |p: &Point| (0..dim).map(|i| p[i].powi(e[i] as i32)).product::<f64>();
            let means: Vec<f64> = points.chunks(batch).filter(|c| c.len() == batch).map(|c| c.iter().map(value).sum::<f64>() / batch as f64).collect();
            let k = means.len() as f64;
            let mean = points.iter().map(value).sum::<f64>() / points.len() as f64;
            let bm = means.iter().sum::<f64>() / k;
            let var = means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
            MomentEstimate { exponents: e, mean, std_error: (var / k).sqrt() }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentRow {
    pub exponents: Vec<u32>,
    pub independent: (f64, f64),
    pub decomposition: (f64, f64),
    /// `|difference| / sqrt(se_a² + se_b²)`.
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureComparison {
    pub rows: Vec<MomentRow>,
    pub max_z: f64,
    pub condensation_weight: f64,
}

impl MeasureComparison {
    pub fn agrees_within(&self, z: f64) -> bool {
        self.max_z <= z
    }
}

/// Sample A pairs independent chaos games for `μ_1` and `μ_2`. Sample B runs
/// the product system with weights `r_ij = p_i q_j` and restarts from the
/// mixture of `μ_1∘f_i⁻¹ × ν_2`, `ν_1 × μ_2∘g_j⁻¹` and `ν_1 × ν_2` with
/// weights `Σ p_i q_0`, `Σ p_0 q_j` and `p_0 q_0`. The `μ` draws inside the
/// mixture come from auxiliary factor chains.
pub fn product_measure_check(p: &ProductSpec, n: usize, seed: u64, max_order: u32) -> Result<MeasureComparison> {
    let (pl, pr) = match (&p.left.probabilities, &p.right.probabilities) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(IsssError::MissingProbabilities),
    };
    let burn = 1000;
    let a = chaos_game(&p.left, n, burn, seed)?;
    let b = chaos_game(&p.right, n, burn, seed.wrapping_add(1))?;
    let sample_a: Vec<Point> = a.points.iter().zip(&b.points).map(|(x, y)| x.concat(y)).collect::<Result<_>>()?;

    let (c1, c2) = (p.left.condensation.clone(), p.right.condensation.clone());
    let (p0, q0) = (pl[0], pr[0]);
    let mixture = WeightedIndex::new([(1.0 - p0) * q0, p0 * (1.0 - q0), p0 * q0]).ok();
    let left_maps = WeightedIndex::new(&pl[1..]).ok();
    let right_maps = WeightedIndex::new(&pr[1..]).ok();
    let pick_l = weights(&p.left)?;
    let pick_r = weights(&p.right)?;
    let mut aux_l = p.left.ambient.center();
    let mut aux_r = p.right.ambient.center();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    // warm the auxiliary chains before they feed the mixture
    for _ in 0..burn {
        aux_l = step(&p.left, &pick_l, &aux_l, &mut rng, &mut |r| c1.sample(r).unwrap());
        aux_r = step(&p.right, &pick_r, &aux_r, &mut rng, &mut |r| c2.sample(r).unwrap());
    }
    let (left, right) = (&p.left, &p.right);
    let sample_b = run(&p.combined, n, burn, &mut rng, |r| {
        let which = mixture.as_ref().expect("restart implies positive weight").sample(r);
        let (x, y) = match which {
            0 => {
                aux_l = step(left, &pick_l, &aux_l, r, &mut |r| c1.sample(r).unwrap());
                let i = left_maps.as_ref().unwrap().sample(r);
                (left.maps[i].apply_unchecked(&aux_l), c2.sample(r).unwrap())
            }
            1 => {
                aux_r = step(right, &pick_r, &aux_r, r, &mut |r| c2.sample(r).unwrap());
                let j = right_maps.as_ref().unwrap().sample(r);
                (c1.sample(r).unwrap(), right.maps[j].apply_unchecked(&aux_r))
            }
            _ => (c1.sample(r).unwrap(), c2.sample(r).unwrap()),
        };
        x.concat(&y).unwrap()
    })?;

    let ma = moments(&sample_a, max_order);
    let mb = moments(&sample_b, max_order);
    let rows: Vec<MomentRow> = ma
        .into_iter()
        .zip(mb)
        .map(|(a, b)| {
            let se = a.std_error.hypot(b.std_error);
            let diff = (a.mean - b.mean).abs();
            let z = if se > 0.0 { diff / se } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
            MomentRow { exponents: a.exponents, independent: (a.mean, a.std_error), decomposition: (b.mean, b.std_error), z }
        })
        .collect();
    let max_z = rows.iter().map(|r| r.z).fold(0.0, f64::max);
    Ok(MeasureComparison { rows, max_z, condensation_weight: p0 + q0 - p0 * q0 })
}

/// Right-hand side of the mean equation `m = Σ p_i f_i(m) + p_0 E[ν]`,
/// evaluated at `m`; affine maps commute with expectation.
pub fn mean_equation_rhs(spec: &SystemSpec, m: &Point) -> Result<Point> {
    let p = spec.probabilities.as_ref().ok_or(IsssError::MissingProbabilities)?;
    let d = spec.dim();
    let mut acc = [0.0; MAX_DIM];
    for (i, f) in spec.maps.iter().enumerate() {
        let y = f.apply_unchecked(m);
        for k in 0..d {
            acc[k] += p[i + 1] * y[k];
        }
    }
    if p[0] > 0.0 {
        let nu = spec.condensation.sample_mean().ok_or(IsssError::EmptyInput("condensation mean"))?;
        for k in 0..d {
            acc[k] += p[0] * nu[k];
        }
    }
    Point::new(&acc[..d])
}
