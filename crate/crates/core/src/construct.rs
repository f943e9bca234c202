//! Finite approximations of attractors, SSS sets `E = Θ(S)`, orbits
//! `O_S = ∪_{ω ∈ S*} f_ω(C)` and ISSS sets `F = E ∪ O_S`, with numerical
//! checks of the inclusion `F ⊆ ∪ f_i(F) ∪ C` and of `closure(O_S) ⊇ E`.
//!
//! Clouds are indexed by stopping sets, so every word contributes a piece
//! of diameter below the requested resolution whatever the ratios are.

use crate::codespace::{level_words, reaches, validate_shift_closed, RatioVector, Sft};
use crate::dimension::{moran_root, spectral_dim};
use crate::error::{IsssError, Result};
use crate::geometry::{check_same_dim, compose, AmbientBox, CondensationSet, GridIndex, Metric, Point, PointCloud, Similarity};
use std::collections::HashMap;

/// Clouds larger than this are thinned, and fail if thinning is not enough.
pub const POINT_CAP: usize = 10_000_000;
/// Largest alphabet a power system may have.
pub const MAP_CAP: usize = 65_536;

/// An inhomogeneous system `{X; f_1..f_N, C}` restricted to a subshift.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub maps: Vec<Similarity>,
    pub codespace: Sft,
    pub condensation: CondensationSet,
    pub ambient: AmbientBox,
    /// `(p_0, p_1..p_N)` with `p_0` the condensation weight.
    pub probabilities: Option<Vec<f64>>,
    pub osc_asserted: bool,
}

impl SystemSpec {
    pub fn new(
        maps: Vec<Similarity>,
        codespace: Sft,
        condensation: CondensationSet,
        ambient: AmbientBox,
        probabilities: Option<Vec<f64>>,
        osc_asserted: bool,
    ) -> Result<Self> {
        let spec = Self { maps, codespace, condensation, ambient, probabilities, osc_asserted };
        spec.validate()?;
        Ok(spec)
    }

    /// Full shift, no probabilities.
    pub fn full(maps: Vec<Similarity>, condensation: CondensationSet, ambient: AmbientBox) -> Result<Self> {
        let n = maps.len();
        Self::new(maps, Sft::full(n), condensation, ambient, None, false)
    }

    pub fn validate(&self) -> Result<()> {
        if self.maps.is_empty() {
            return Err(IsssError::EmptyInput("a system needs at least one map"));
        }
        let d = self.ambient.dim();
        for (i, f) in self.maps.iter().enumerate() {
            check_same_dim(d, f.dim())?;
            if !self.ambient.is_invariant_under(f) {
                return Err(IsssError::NotInvariant { index: i + 1 });
            }
        }
        if self.codespace.alphabet_size() != self.maps.len() {
            return Err(IsssError::DimensionMismatch { expected: self.maps.len(), found: self.codespace.alphabet_size() });
        }
        check_same_dim(d, self.condensation.dim())?;
        if !self.condensation.is_within(&self.ambient, 1e-9 * (1.0 + self.ambient.diam())) {
            return Err(IsssError::InvalidParameter { name: "condensation", reason: "not contained in the ambient box".into() });
        }
        if let Some(p) = &self.probabilities {
            if p.len() != self.maps.len() + 1 {
                return Err(IsssError::DimensionMismatch { expected: self.maps.len() + 1, found: p.len() });
            }
            if p.iter().any(|&x| !(x >= 0.0)) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                return Err(IsssError::InvalidParameter { name: "probabilities", reason: "must be nonnegative and sum to 1".into() });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn ratios(&self) -> RatioVector {
        RatioVector::from_maps(&self.maps).expect("maps validated")
    }

    /// Same system with the full shift in place of its subshift.
    pub fn with_full_shift(&self) -> Self {
        Self { codespace: Sft::full(self.maps.len()), ..self.clone() }
    }

    pub fn with_condensation(&self, c: CondensationSet) -> Result<Self> {
        let spec = Self { condensation: c, ..self.clone() };
        spec.validate()?;
        Ok(spec)
    }

    /// Metric in which the maps are similarities: max-of-factors for
    /// product maps.
    pub fn metric(&self) -> Metric {
        match self.maps[0].factors() {
            [_, second] => Metric::MaxOfFactors { split: second.offset },
            _ => Metric::Euclidean,
        }
    }

    fn delta_for(&self, resolution: f64) -> Result<f64> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(IsssError::InvalidParameter { name: "resolution", reason: format!("{resolution} is not positive") });
        }
        Ok((resolution / self.ambient.diam()).min(1.0))
    }
}

/// Depth-first walk carrying the composed map `f_ω` and the ratio product.
fn walk_maps(spec: &SystemSpec, sft: &Sft, visit: &mut impl FnMut(&[u16], f64, &Similarity) -> bool) {
    let ratios = spec.ratios();
    let mut word = Vec::with_capacity(64);
    for s in sft.initial_symbols() {
        word.push(s as u16);
        walk_from(spec, sft, &ratios, &mut word, ratios.get(s), &spec.maps[s], visit);
        word.pop();
    }
}

fn walk_from(
    spec: &SystemSpec,
    sft: &Sft,
    ratios: &RatioVector,
    word: &mut Vec<u16>,
    ratio: f64,
    map: &Similarity,
    visit: &mut impl FnMut(&[u16], f64, &Similarity) -> bool,
) {
    if !visit(word, ratio, map) {
        return;
    }
    let last = *word.last().unwrap() as usize;
    for j in sft.successors(last) {
        word.push(j as u16);
        let next = compose(map, &spec.maps[j]).expect("maps share a layout");
        walk_from(spec, sft, ratios, word, ratio * ratios.get(j), &next, visit);
        word.pop();
    }
}

/// Accumulates points, thinning to cells of `cell` whenever the cap is hit.
struct Collector {
    dim: usize,
    points: Vec<Point>,
    cell: f64,
    thinned: bool,
}

impl Collector {
    fn new(dim: usize, resolution: f64) -> Self {
        Self { dim, points: Vec::new(), cell: resolution / 2.0, thinned: false }
    }

    fn push(&mut self, p: Point) -> Result<()> {
        self.points.push(p);
        if self.points.len() > POINT_CAP {
            let cloud = PointCloud::new(self.dim, std::mem::take(&mut self.points), 0.0).thin(self.cell);
            self.thinned = true;
            self.points = cloud.into_points();
            if self.points.len() > POINT_CAP / 2 {
                return Err(IsssError::CapExceeded { what: "cloud points", count: self.points.len(), cap: POINT_CAP });
            }
        }
        Ok(())
    }

    fn finish(self, resolution: f64) -> PointCloud {
        let extra = if self.thinned { self.cell * (self.dim as f64).sqrt() } else { 0.0 };
        PointCloud::new(self.dim, self.points, resolution + extra).normalize()
    }
}

fn theta_cloud(spec: &SystemSpec, sft: &Sft, resolution: f64) -> Result<PointCloud> {
    let delta = spec.delta_for(resolution)?;
    let x0 = spec.ambient.center();
    let mut out = Collector::new(spec.dim(), resolution);
    let mut err = None;
    walk_maps(spec, sft, &mut |_, ratio, f| {
        if err.is_some() || reaches(ratio, delta) {
            return err.is_none();
        }
        if let Err(e) = out.push(f.apply_unchecked(&x0)) {
            err = Some(e);
        }
        false
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out.finish(resolution)),
    }
}

/// `f_ω(x_0)` for every ω in the full-shift stopping set `S(resolution/diam X)`,
/// with `x_0` the centre of the ambient box.
pub fn attractor_cloud(spec: &SystemSpec, resolution: f64) -> Result<PointCloud> {
    theta_cloud(spec, &Sft::full(spec.maps.len()), resolution)
}

/// Same construction over the system's subshift, approximating `E = Θ(S)`.
pub fn sss_cloud(spec: &SystemSpec, resolution: f64) -> Result<PointCloud> {
    validate_shift_closed(&spec.codespace).into_result()?;
    theta_cloud(spec, &spec.codespace, resolution)
}

/// `C ∪ f_ω(C)` over admissible ω, keeping only images with `include(ρ_ω)`.
/// Words are followed down to the stopping set `S(resolution/diam X)`;
/// images of deeper words lie inside the stopping word's image of `X` and
/// are represented by it.
fn orbit_points(spec: &SystemSpec, resolution: f64, with_c: bool, include: impl Fn(f64) -> bool) -> Result<PointCloud> {
    let c = &spec.condensation;
    if c.is_empty() {
        return Ok(PointCloud::empty(spec.dim()));
    }
    let delta = spec.delta_for(resolution)?;
    let mut nets: HashMap<u64, Vec<Point>> = HashMap::new();
    let mut net = |eps: f64| -> Result<Vec<Point>> {
        if let Some(v) = nets.get(&eps.to_bits()) {
            return Ok(v.clone());
        }
        let pts = c.discretize(eps)?.into_points();
        nets.insert(eps.to_bits(), pts.clone());
        Ok(pts)
    };
    let mut out = Collector::new(spec.dim(), resolution);
    if with_c {
        for p in net(resolution)? {
            out.push(p)?;
        }
    }
    let mut err = None;
    walk_maps(spec, &spec.codespace, &mut |_, ratio, f| {
        if err.is_some() {
            return false;
        }
        if include(ratio) {
            let pushed = net(resolution / ratio).and_then(|pts| pts.iter().try_for_each(|p| out.push(f.apply_unchecked(p))));
            if let Err(e) = pushed {
                err = Some(e);
                return false;
            }
        }
        reaches(ratio, delta)
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out.finish(resolution)),
    }
}

/// Approximation of `O_S = ∪_{ω ∈ S*} f_ω(C)` (empty word included); an
/// empty condensation set gives an empty cloud.
pub fn orbit_cloud(spec: &SystemSpec, resolution: f64) -> Result<PointCloud> {
    orbit_points(spec, resolution, true, |_| true)
}

/// `sss_cloud ∪ orbit_cloud`, approximating `F = E ∪ O_S`.
pub fn isss_cloud(spec: &SystemSpec, resolution: f64) -> Result<PointCloud> {
    sss_cloud(spec, resolution)?.union(&orbit_cloud(spec, resolution)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    pub worst_gap: f64,
    pub tolerance: f64,
}

impl VerificationReport {
    fn new(worst_gap: f64, tolerance: f64) -> Self {
        Self { passed: worst_gap <= tolerance, worst_gap, tolerance }
    }
}

fn directed_gap(from: &[Point], to: &[Point], metric: Metric) -> f64 {
    if from.is_empty() {
        return 0.0;
    }
    if to.is_empty() {
        return f64::INFINITY;
    }
    let idx = GridIndex::auto(to);
    from.iter().map(|p| idx.nearest(p, metric).map_or(f64::INFINITY, |(d, _)| d)).fold(0.0, f64::max)
}

/// Largest distance from a point of `F` to `∪ f_i(F) ∪ C`, with `C`
/// discretized at `F`'s resolution.
pub fn verify_inclusion(f: &PointCloud, spec: &SystemSpec, tol: f64) -> Result<VerificationReport> {
    check_same_dim(spec.dim(), f.dim())?;
    if tol < 2.0 * f.resolution() {
        return Err(IsssError::ResolutionTooCoarse { scale: tol, resolution: f.resolution() });
    }
    let mut targets: Vec<Point> = spec.maps.iter().flat_map(|m| f.points().iter().map(|p| m.apply_unchecked(p))).collect();
    if !spec.condensation.is_empty() {
        let eps = if f.resolution() > 0.0 { f.resolution() } else { tol.max(f64::MIN_POSITIVE) };
        targets.extend(spec.condensation.discretize(eps)?.into_points());
    }
    Ok(VerificationReport::new(directed_gap(f.points(), &targets, spec.metric()), tol))
}

/// Whether every point of `e` lies within `tol` of `o`.
pub fn verify_closure(e: &PointCloud, o: &PointCloud, tol: f64) -> Result<VerificationReport> {
    check_same_dim(e.dim(), o.dim())?;
    if o.is_empty() {
        return Err(IsssError::EmptyInput("closure check needs a nonempty orbit cloud"));
    }
    Ok(VerificationReport::new(directed_gap(e.points(), o.points(), Metric::Euclidean), tol))
}

/// Points of `e` farther than `tol` from `∪ f_i(e)`: a discrete stand-in for
/// the smallest condensation set making `e` an ISSS set.
pub fn minimal_condensation(e: &PointCloud, maps: &[Similarity], tol: f64) -> Result<PointCloud> {
    if tol < 2.0 * e.resolution() {
        return Err(IsssError::ResolutionTooCoarse { scale: tol, resolution: e.resolution() });
    }
    for m in maps {
        check_same_dim(e.dim(), m.dim())?;
    }
    let images: Vec<Point> = maps.iter().flat_map(|m| e.points().iter().map(|p| m.apply_unchecked(p))).collect();
    let idx = GridIndex::auto(&images);
    let keep = e.points().iter().filter(|p| !idx.any_within(p, tol, Metric::Euclidean)).copied().collect();
    Ok(PointCloud::new(e.dim(), keep, e.resolution()))
}

/// Check that the images `f_ω(C)` with `ρ_ω < δ` (sampled down to
/// `resolution`) all lie in `∪_{ω' ∈ S(δ)} f_{ω'}(X)`. The gap of a point
/// is its distance to the nearest covering box, measured in the box's
/// preimage coordinates and scaled back by `ρ_{ω'}`.
pub fn covering_check(spec: &SystemSpec, delta: f64, resolution: f64) -> Result<VerificationReport> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(IsssError::InvalidParameter { name: "delta", reason: format!("{delta} out of range") });
    }
    let cloud = orbit_points(spec, resolution, false, |r| !reaches(r, delta))?;
    let mut covers: Vec<(Similarity, f64)> = Vec::new();
    walk_maps(spec, &spec.codespace, &mut |_, ratio, f| {
        if reaches(ratio, delta) {
            true
        } else {
            covers.push((f.clone(), ratio));
            false
        }
    });
    let (lo, hi) = (spec.ambient.lo(), spec.ambient.hi());
    let box_gap = |y: &Point| -> f64 {
        (0..y.dim()).map(|i| (lo[i] - y[i]).max(y[i] - hi[i]).max(0.0).powi(2)).sum::<f64>().sqrt()
    };
    let worst = cloud
        .points()
        .iter()
        .map(|x| covers.iter().map(|(f, r)| r * box_gap(&f.invert_unchecked(x))).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    Ok(VerificationReport::new(worst, 1e-9 * (1.0 + spec.ambient.diam())))
}

/// `{f_1..f_N, g_1..g_M, C ∪ C'}` over the union box. The subshifts sit
/// block-diagonally unless both are full shifts.
pub fn union_systems(a: &SystemSpec, b: &SystemSpec) -> Result<SystemSpec> {
    check_same_dim(a.dim(), b.dim())?;
    let (n, m) = (a.maps.len(), b.maps.len());
    let codespace = if a.codespace.is_full_shift() && b.codespace.is_full_shift() {
        Sft::full(n + m)
    } else {
        let mut t = vec![vec![false; n + m]; n + m];
        for i in 0..n {
            for j in a.codespace.successors(i) {
                t[i][j] = true;
            }
        }
        for i in 0..m {
            for j in b.codespace.successors(i) {
                t[n + i][n + j] = true;
            }
        }
        let initial: Vec<usize> = a.codespace.initial_symbols().chain(b.codespace.initial_symbols().map(|s| s + n)).collect();
        Sft::new(t, &initial)?
    };
    let maps: Vec<Similarity> = a.maps.iter().chain(&b.maps).cloned().collect();
    SystemSpec::new(
        maps,
        codespace,
        CondensationSet::union(&a.condensation, &b.condensation)?,
        a.ambient.union(&b.ambient)?,
        None,
        false,
    )
}

/// The iterated system `I_k = {f_ω : ω ∈ S^k}`; `ω ω'` is allowed when
/// `T[last(ω)][first(ω')]` is.
pub fn power_system(spec: &SystemSpec, k: usize) -> Result<(SystemSpec, Vec<crate::codespace::Word>)> {
    let count = spec.codespace.level_count(k.max(1));
    if count > MAP_CAP as f64 {
        return Err(IsssError::CapExceeded { what: "power system maps", count: count as usize, cap: MAP_CAP });
    }
    let words = level_words(&spec.codespace, k)?;
    let maps = words
        .iter()
        .map(|w| {
            let s = w.symbols();
            s[1..].iter().try_fold(spec.maps[s[0] as usize].clone(), |acc, &j| compose(&acc, &spec.maps[j as usize]))
        })
        .collect::<Result<Vec<_>>>()?;
    let t: Vec<Vec<bool>> = words
        .iter()
        .map(|a| {
            let last = *a.symbols().last().unwrap() as usize;
            words.iter().map(|b| spec.codespace.allows(last, b.symbols()[0] as usize)).collect()
        })
        .collect();
    let initial: Vec<usize> = (0..words.len()).collect();
    let codespace = Sft::new(t, &initial)?;
    validate_shift_closed(&codespace).into_result()?;
    let power = SystemSpec::new(maps, codespace, spec.condensation.clone(), spec.ambient.clone(), None, spec.osc_asserted)?;
    Ok((power, words))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityReport {
    /// `(k, s_k, max{s_k, dim_H C})`.
    pub rows: Vec<(usize, f64, f64)>,
    /// Transfer-matrix dimension and `max{s, dim_H C}`.
    pub limit: (f64, f64),
}

/// Moran roots of the level systems paired with the dimension of the
/// corresponding ISSS sets.
pub fn continuity_report(spec: &SystemSpec, k_max: usize, tol: f64) -> Result<ContinuityReport> {
    if k_max < 2 {
        return Err(IsssError::InvalidParameter { name: "k_max", reason: "need at least two levels".into() });
    }
    let r = spec.ratios();
    let c_dim = if spec.condensation.is_empty() { 0.0 } else { spec.condensation.hausdorff_dim() };
    let rows = (1..=k_max)
        .map(|k| {
            let s = moran_root(&spec.codespace, &r, k, tol)?;
            Ok((k, s, s.max(c_dim)))
        })
        .collect::<Result<Vec<_>>>()?;
    let s = spectral_dim(&spec.codespace, &r, tol)?;
    Ok(ContinuityReport { rows, limit: (s, s.max(c_dim)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{hausdorff_distance, Orientation, Shape};

    fn pt(x: f64) -> Point {
        Point::new(&[x]).unwrap()
    }

    fn cantor_maps() -> Vec<Similarity> {
        vec![Similarity::line(1.0 / 3.0, 1.0, 0.0).unwrap(), Similarity::line(1.0 / 3.0, 1.0, 2.0 / 3.0).unwrap()]
    }

    fn dyadic_maps() -> Vec<Similarity> {
        vec![Similarity::line(0.5, 1.0, 0.0).unwrap(), Similarity::line(0.5, 1.0, 0.5).unwrap()]
    }

    fn golden() -> Sft {
        Sft::new(vec![vec![true, true], vec![true, false]], &[0, 1]).unwrap()
    }

    fn system(maps: Vec<Similarity>, sft: Sft, c: CondensationSet) -> SystemSpec {
        SystemSpec::new(maps, sft, c, AmbientBox::unit(1), None, false).unwrap()
    }

    fn points(xs: &[f64]) -> CondensationSet {
        CondensationSet::points(xs.iter().map(|&x| pt(x)).collect()).unwrap()
    }

    fn cloud(xs: &[f64]) -> PointCloud {
        PointCloud::new(1, xs.iter().map(|&x| pt(x)).collect(), 0.0)
    }

    fn contains(c: &PointCloud, x: f64) -> bool {
        c.points().iter().any(|p| (p[0] - x).abs() < 1e-12)
    }

    #[test]
    fn spec_validation() {
        let bad = vec![Similarity::line(0.5, 1.0, 0.75).unwrap()];
        assert!(matches!(SystemSpec::full(bad, CondensationSet::empty(1), AmbientBox::unit(1)), Err(IsssError::NotInvariant { index: 1 })));
        let mut s = system(cantor_maps(), Sft::full(2), CondensationSet::empty(1));
        s.probabilities = Some(vec![0.2, 0.4, 0.5]);
        assert!(s.validate().is_err());
        s.probabilities = Some(vec![0.2, 0.4, 0.4]);
        assert!(s.validate().is_ok());
        assert!(SystemSpec::new(cantor_maps(), Sft::full(3), CondensationSet::empty(1), AmbientBox::unit(1), None, false).is_err());
        assert!(s.with_condensation(points(&[1.5])).is_err());
    }

    #[test]
    fn attractor_examples() {
        let spec = system(cantor_maps(), Sft::full(2), CondensationSet::empty(1));
        let c = attractor_cloud(&spec, 3f64.powi(-5)).unwrap();
        assert_eq!(c.len(), 64);
        assert!(c.points().iter().all(|p| (0.0..=1.0).contains(&p[0]) && !(p[0] > 1.0 / 3.0 && p[0] < 2.0 / 3.0)));

        let one = system(vec![Similarity::line(0.5, 1.0, 0.0).unwrap()], Sft::full(1), CondensationSet::empty(1));
        let c = attractor_cloud(&one, 1e-3).unwrap();
        assert!(c.points().iter().all(|p| p[0].abs() <= 1e-3));

        let dy = system(dyadic_maps(), Sft::full(2), CondensationSet::empty(1));
        let c = attractor_cloud(&dy, 1e-3).unwrap();
        let interval = CondensationSet::segment(pt(0.0), pt(1.0)).unwrap().discretize(1e-4).unwrap();
        assert!(hausdorff_distance(&c, &interval).unwrap() <= 1e-3 + 1e-4);
    }

    #[test]
    fn sss_examples() {
        let full = system(cantor_maps(), Sft::full(2), CondensationSet::empty(1));
        let res = 3f64.powi(-6);
        assert_eq!(sss_cloud(&full, res).unwrap(), attractor_cloud(&full, res).unwrap());

        let gm = system(cantor_maps(), golden(), CondensationSet::empty(1));
        let e = sss_cloud(&gm, res).unwrap();
        let a = attractor_cloud(&gm, res).unwrap();
        assert!(e.len() < a.len());
        assert!(e.points().iter().all(|p| contains(&a, p[0])));

        let one = system(vec![Similarity::line(0.5, 1.0, 0.5).unwrap()], Sft::full(1), CondensationSet::empty(1));
        let c = sss_cloud(&one, 1e-4).unwrap();
        assert!(c.points().iter().all(|p| (p[0] - 1.0).abs() <= 1e-4));

        let open = Sft::new(vec![vec![true, true], vec![true, false]], &[0]).unwrap();
        let s = system(cantor_maps(), open, CondensationSet::empty(1));
        assert!(matches!(sss_cloud(&s, 0.01), Err(IsssError::NotShiftClosed(_))));
    }

    #[test]
    fn orbit_examples() {
        let spec = system(cantor_maps(), Sft::full(2), points(&[0.5]));
        // resolution just below 1/3 keeps words of length 1 and stops at length 2
        let o = orbit_cloud(&spec, 0.3).unwrap();
        for x in [0.5, 1.0 / 6.0, 5.0 / 6.0, 1.0 / 18.0, 5.0 / 18.0, 13.0 / 18.0, 17.0 / 18.0] {
            assert!(contains(&o, x), "{x}");
        }
        assert_eq!(o.len(), 7);
        let empty = system(cantor_maps(), Sft::full(2), CondensationSet::empty(1));
        assert!(orbit_cloud(&empty, 0.01).unwrap().is_empty());
    }

    #[test]
    fn isss_examples() {
        let res = 3f64.powi(-6);
        let spec = system(cantor_maps(), Sft::full(2), points(&[0.5]));
        let f = isss_cloud(&spec, res).unwrap();
        let e = sss_cloud(&spec, res).unwrap();
        let o = orbit_cloud(&spec, res).unwrap();
        assert!(e.points().iter().chain(o.points()).all(|p| contains(&f, p[0])));
        let bare = system(cantor_maps(), Sft::full(2), CondensationSet::empty(1));
        assert_eq!(isss_cloud(&bare, res).unwrap(), sss_cloud(&bare, res).unwrap());
    }

    #[test]
    fn inclusion_examples() {
        let dy = system(dyadic_maps(), Sft::full(2), CondensationSet::empty(1));
        assert!(verify_inclusion(&cloud(&[0.0, 1.0]), &dy, 1e-9).unwrap().passed);
        let mut xs = vec![0.0, 1.0];
        xs.extend((2..=50).map(|n| 1.0 / n as f64));
        let r = verify_inclusion(&cloud(&xs), &dy, 1e-9).unwrap();
        assert!(!r.passed && r.worst_gap > 1e-3);

        for spec in [
            system(cantor_maps(), Sft::full(2), points(&[0.5])),
            system(dyadic_maps(), golden(), points(&[0.0])),
            system(cantor_maps(), golden(), CondensationSet::segment(pt(0.4), pt(0.6)).unwrap()),
        ] {
            let res = 1e-3;
            let f = isss_cloud(&spec, res).unwrap();
            let rep = verify_inclusion(&f, &spec, 2.0 * f.resolution()).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
    }

    #[test]
    fn closure_examples() {
        let res = 3f64.powi(-6);
        let spec = system(cantor_maps(), Sft::full(2), points(&[0.5]));
        let e = sss_cloud(&spec, res).unwrap();
        let o = orbit_cloud(&spec, res).unwrap();
        assert!(verify_closure(&e, &o, 3.0 * res).unwrap().passed);

        let gm = system(dyadic_maps(), golden(), points(&[0.0]));
        let res = 1e-3;
        assert!(verify_closure(&sss_cloud(&gm, res).unwrap(), &orbit_cloud(&gm, res).unwrap(), 3.0 * res).unwrap().passed);

        // orbit truncated after one level
        let shallow = cloud(&[0.5, 1.0 / 6.0, 5.0 / 6.0]);
        assert!(!verify_closure(&e, &shallow, 3.0 * 3f64.powi(-6)).unwrap().passed);
        assert!(verify_closure(&e, &PointCloud::empty(1), 1.0).is_err());
    }

    #[test]
    fn minimal_condensation_examples() {
        assert!(minimal_condensation(&cloud(&[0.0, 1.0]), &dyadic_maps(), 1e-9).unwrap().is_empty());
        let m = minimal_condensation(&cloud(&[0.0, 1.0, 0.5]), &cantor_maps(), 1e-9).unwrap();
        assert_eq!(m, cloud(&[0.5]));
        let mut xs = vec![0.0, 1.0];
        xs.extend((2..=50).map(|n| 1.0 / n as f64));
        let m = minimal_condensation(&cloud(&xs), &cantor_maps(), 1e-9).unwrap();
        assert!(!m.is_empty() && m.len() < xs.len());
        assert!(contains(&m, 0.5));
    }

    #[test]
    fn covering_check_examples() {
        for spec in [
            system(cantor_maps(), Sft::full(2), points(&[0.5])),
            system(dyadic_maps(), golden(), CondensationSet::segment(pt(0.2), pt(0.9)).unwrap()),
        ] {
            for delta in [0.3, 0.1] {
                assert!(covering_check(&spec, delta, delta / 20.0).unwrap().passed);
            }
        }
    }

    #[test]
    fn union_examples() {
        let a = system(cantor_maps(), Sft::full(2), points(&[0.5]));
        let shifted = vec![Similarity::line(1.0 / 3.0, 1.0, 0.1).unwrap(), Similarity::line(1.0 / 3.0, 1.0, 0.5).unwrap()];
        let b = system(shifted, Sft::full(2), CondensationSet::empty(1));
        let u = union_systems(&a, &b).unwrap();
        assert_eq!(u.maps.len(), 4);
        assert!(u.codespace.is_full_shift());
        assert_eq!(u.condensation, a.condensation);
        let f = isss_cloud(&u, 1e-3).unwrap();
        assert!(verify_inclusion(&f, &u, 2.0 * f.resolution()).unwrap().passed);

        let g = system(dyadic_maps(), golden(), points(&[0.0]));
        let ug = union_systems(&g, &a).unwrap();
        assert!(!ug.codespace.allows(0, 2) && ug.codespace.allows(2, 3) && !ug.codespace.allows(1, 1));
        assert_eq!(union_systems(&a, &a).unwrap().maps.len(), 4);
    }

    #[test]
    fn power_examples() {
        let cantor = system(cantor_maps(), Sft::full(2), CondensationSet::empty(1));
        let (p, _) = power_system(&cantor, 2).unwrap();
        assert_eq!(p.maps.len(), 4);
        assert!(p.codespace.is_full_shift());
        assert!(p.maps.iter().all(|m| (m.ratio() - 1.0 / 9.0).abs() < 1e-15));

        let gm = system(dyadic_maps(), golden(), CondensationSet::empty(1));
        let (p, words) = power_system(&gm, 2).unwrap();
        let names: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["11", "12", "21"]);
        let t = &p.codespace;
        assert!(t.allows(1, 0) && t.allows(1, 1) && !t.allows(1, 2));
        assert!(t.allows(2, 0) && t.allows(2, 1) && t.allows(2, 2));
        let base = spectral_dim(&gm.codespace, &gm.ratios(), 1e-12).unwrap();
        for k in 2..=4 {
            let (p, _) = power_system(&gm, k).unwrap();
            assert!((spectral_dim(&p.codespace, &p.ratios(), 1e-12).unwrap() - base).abs() < 1e-6);
            let level_one = moran_root(&p.codespace, &p.ratios(), 1, 1e-12).unwrap();
            let level_k = moran_root(&gm.codespace, &gm.ratios(), k, 1e-12).unwrap();
            assert!((level_one - level_k).abs() < 1e-10);
        }
    }

    #[test]
    fn continuity_examples() {
        let gm = system(dyadic_maps(), golden(), points(&[0.0]));
        let rep = continuity_report(&gm, 20, 1e-12).unwrap();
        assert!((rep.rows[0].1 - 1.0).abs() < 1e-10);
        assert!((rep.rows[1].1 - 0.792_481_250_360_578).abs() < 1e-10);
        assert!(rep.rows.windows(2).all(|w| w[1].1 < w[0].1));
        assert!((rep.rows[19].2 - 0.694_242).abs() <= 0.02);

        let seg = gm.with_condensation(CondensationSet::segment(pt(0.0), pt(1.0)).unwrap()).unwrap();
        assert!(continuity_report(&seg, 5, 1e-12).unwrap().rows.iter().all(|r| r.2 == 1.0));

        let cantor = system(cantor_maps(), Sft::full(2), CondensationSet::empty(1));
        let rows = continuity_report(&cantor, 6, 1e-12).unwrap().rows;
        assert!(rows.iter().all(|r| (r.1 - rows[0].1).abs() < 1e-10));
    }

    #[test]
    fn planar_orbit_passes_inclusion() {
        let rot = Similarity::new(0.5, Orientation::Planar { angle_deg: 90.0, reflect: false }, &[0.5, 0.0]).unwrap();
        let flip = Similarity::new(0.4, Orientation::Planar { angle_deg: 0.0, reflect: true }, &[0.0, 0.6]).unwrap();
        let c = CondensationSet::new(Shape::Circle { center: Point::new(&[0.5, 0.5]).unwrap(), radius: 0.2 }).unwrap();
        let spec = SystemSpec::new(vec![rot, flip], Sft::full(2), c, AmbientBox::unit(2), None, false).unwrap();
        let f = isss_cloud(&spec, 0.01).unwrap();
        assert!(verify_inclusion(&f, &spec, 2.0 * f.resolution()).unwrap().passed);
        assert!(verify_closure(&sss_cloud(&spec, 0.01).unwrap(), &orbit_cloud(&spec, 0.01).unwrap(), 0.03).unwrap().passed);
    }
}
