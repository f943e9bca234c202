//! Box counting on point clouds and the covering regularity exponent
//! `P_{t,δ}(C) = sup{p ∈ [0,1] : N_{δ^p}(C) ≥ δ^{-pt}}`.
//!
//! `N_δ` is the number of occupied cells of an axis-aligned grid of mesh δ
//! anchored at the ambient box corner. This differs from the minimal
//! cover count by a factor of at most `2^d` either way, which leaves all
//! log-slope dimensions unchanged.

use crate::error::{IsssError, Result};
use crate::geometry::{AmbientBox, PointCloud, MAX_DIM};
use std::collections::HashSet;

/// Counts at several scales with their least-squares fit.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxCountScan {
    /// `(δ, N_δ)` with δ strictly decreasing.
    pub rows: Vec<(f64, usize)>,
    /// Slope of `log N_δ` against `-log δ`.
    pub fitted_slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityScan {
    pub t: f64,
    pub rows: Vec<(f64, f64)>,
    /// Minimum over the rows; a finite stand-in for the liminf as δ → 0.
    pub p_liminf_proxy: f64,
    /// Spacing of the p grid, i.e. how far below the true sup a row may sit.
    pub p_step: f64,
}

fn check_scale(cloud: &PointCloud, delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(IsssError::InvalidParameter { name: "delta", reason: format!("{delta} is not positive") });
    }
    if delta < 2.0 * cloud.resolution() {
        return Err(IsssError::ResolutionTooCoarse { scale: delta, resolution: cloud.resolution() });
    }
    Ok(())
}

/// Occupied cells of the mesh-δ grid anchored at `ambient.lo()`.
pub fn grid_count(cloud: &PointCloud, ambient: &AmbientBox, delta: f64) -> Result<usize> {
    check_scale(cloud, delta)?;
    crate::geometry::check_same_dim(ambient.dim(), cloud.dim())?;
    Ok(count_cells(cloud, ambient, delta))
}

fn count_cells(cloud: &PointCloud, ambient: &AmbientBox, delta: f64) -> usize {
    let d = cloud.dim();
    let lo = ambient.lo();
    let mut cells: HashSet<[i64; MAX_DIM]> = HashSet::with_capacity(cloud.len().min(1 << 20));
    for p in cloud.points() {
        let mut k = [0i64; MAX_DIM];
        for i in 0..d {
            k[i] = ((p[i] - lo[i]) / delta).floor() as i64;
        }
        cells.insert(k);
    }
    cells.len()
}

/// Ordinary least squares `y = a + b x`, returning `(b, a, max |residual|)`.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let resid = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    (slope, intercept, resid)
}

/// Box counts at every δ in `deltas` and the log-log slope. Needs at least
/// four distinct scales.
pub fn fit_dimension(cloud: &PointCloud, ambient: &AmbientBox, deltas: &[f64]) -> Result<BoxCountScan> {
    if cloud.is_empty() {
        return Err(IsssError::EmptyInput("box counting needs a nonempty cloud"));
    }
    let mut scales = deltas.to_vec();
    scales.sort_by(|a, b| b.total_cmp(a));
    scales.dedup();
    if scales.len() < 4 {
        return Err(IsssError::InvalidParameter { name: "deltas", reason: format!("need at least 4 distinct scales, got {}", scales.len()) });
    }
    let rows = scales
        .iter()
        .map(|&delta| Ok((delta, grid_count(cloud, ambient, delta)?)))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|(d, _)| -d.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|&(_, n)| (n as f64).ln()).collect();
    let (fitted_slope, intercept, max_residual) = least_squares(&xs, &ys);
    Ok(BoxCountScan { rows, fitted_slope, intercept, max_residual })
}

/// `2^-lo, ..., 2^-hi`.
pub fn dyadic_scales(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(-k)).collect()
}

/// Largest `p` in `{0, 1/p_grid, ..., 1}` with `N_{δ^p} ≥ δ^{-pt}`.
pub fn regularity_exponent(cloud: &PointCloud, ambient: &AmbientBox, t: f64, delta: f64, p_grid: usize) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(IsssError::InvalidParameter { name: "delta", reason: format!("{delta} is not in (0, 1)") });
    }
    if p_grid < 16 {
        return Err(IsssError::InvalidParameter { name: "p_grid", reason: format!("{p_grid} is below 16") });
    }
    if !(t >= 0.0) {
        return Err(IsssError::InvalidParameter { name: "t", reason: format!("{t} is negative") });
    }
    if cloud.is_empty() {
        return Err(IsssError::EmptyInput("regularity exponent needs a nonempty cloud"));
    }
    // the finest scale evaluated is δ itself
    check_scale(cloud, delta)?;
    crate::geometry::check_same_dim(ambient.dim(), cloud.dim())?;
    let mut best = 0.0;
    for i in 1..=p_grid {
        let p = i as f64 / p_grid as f64;
        let n = count_cells(cloud, ambient, delta.powf(p)) as f64;
        if n >= delta.powf(-p * t) {
            best = p;
        }
    }
    Ok(best)
}

pub fn regularity_liminf(cloud: &PointCloud, ambient: &AmbientBox, t: f64, deltas: &[f64], p_grid: usize) -> Result<RegularityScan> {
    if deltas.is_empty() {
        return Err(IsssError::EmptyInput("regularity scan needs at least one scale"));
    }
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(IsssError::InvalidParameter { name: "deltas", reason: "scales must be strictly decreasing".into() });
    }
    let rows = deltas
        .iter()
        .map(|&delta| Ok((delta, regularity_exponent(cloud, ambient, t, delta, p_grid)?)))
        .collect::<Result<Vec<_>>>()?;
    let p_liminf_proxy = rows.iter().map(|r| r.1).fold(1.0, f64::min);
    Ok(RegularityScan { t, rows, p_liminf_proxy, p_step: 1.0 / p_grid as f64 })
}

/// Greedy cover by sup-norm cubes of side δ centred at uncovered points.
/// Within a factor `2^d` of the grid count in both directions.
pub fn greedy_cover_count(cloud: &PointCloud, delta: f64) -> usize {
    let half = delta / 2.0;
    let mut centers: Vec<&crate::geometry::Point> = Vec::new();
    for p in cloud.points() {
        let covered = centers.iter().any(|c| (0..cloud.dim()).all(|i| (p[i] - c[i]).abs() <= half));
        if !covered {
            centers.push(p);
        }
    }
    centers.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CondensationSet, Point, Shape};
    use proptest::prelude::*;

    fn unit(d: usize) -> AmbientBox {
        AmbientBox::unit(d)
    }

    fn segment01(eps: f64) -> PointCloud {
        CondensationSet::new(Shape::Segment(Point::new(&[0.0]).unwrap(), Point::new(&[1.0]).unwrap()))
            .unwrap()
            .discretize(eps)
            .unwrap()
    }

    #[test]
    fn counts() {
        let two = PointCloud::new(1, vec![Point::new(&[0.0]).unwrap(), Point::new(&[1.0]).unwrap()], 0.0);
        assert_eq!(grid_count(&two, &unit(1), 0.5).unwrap(), 2);
        assert_eq!(grid_count(&segment01(1e-4), &unit(1), 2f64.powi(-6)).unwrap(), 65);
        let corner = |x: f64, y: f64| Point::new(&[x, y]).unwrap();
        let seg = |a, b| CondensationSet::new(Shape::Segment(a, b)).unwrap();
        let sq = CondensationSet::new(Shape::Union(vec![
            seg(corner(0.0, 0.0), corner(1.0, 0.0)),
            seg(corner(1.0, 0.0), corner(1.0, 1.0)),
            seg(corner(1.0, 1.0), corner(0.0, 1.0)),
            seg(corner(0.0, 1.0), corner(0.0, 0.0)),
        ]))
        .unwrap();
        assert_eq!(grid_count(&sq.discretize(1e-3).unwrap(), &unit(2), 0.25).unwrap(), 16);
    }

    #[test]
    fn scale_below_resolution_is_rejected() {
        let c = segment01(0.01);
        assert!(matches!(grid_count(&c, &unit(1), c.resolution()), Err(IsssError::ResolutionTooCoarse { .. })));
    }

    #[test]
    fn fits() {
        // the closed right endpoint adds one cell at every scale: N = 2^k + 1
        let seg = fit_dimension(&segment01(1e-4), &unit(1), &dyadic_scales(3, 9)).unwrap();
        let xs: Vec<f64> = (3..=9).map(|k| k as f64 * 2f64.ln()).collect();
        let ys: Vec<f64> = (3..=9).map(|k| (2f64.powi(k) + 1.0).ln()).collect();
        assert!((seg.fitted_slope - least_squares(&xs, &ys).0).abs() < 1e-12);
        assert!((seg.fitted_slope - 1.0).abs() < 0.03, "{seg:?}");
        let fine = fit_dimension(&segment01(1e-5), &unit(1), &dyadic_scales(6, 12)).unwrap();
        assert!((fine.fitted_slope - 1.0).abs() < 0.02, "{fine:?}");
        let pt = PointCloud::new(1, vec![Point::new(&[0.3]).unwrap()], 0.0);
        assert_eq!(fit_dimension(&pt, &unit(1), &dyadic_scales(1, 6)).unwrap().fitted_slope, 0.0);
        assert!(fit_dimension(&pt, &unit(1), &dyadic_scales(1, 3)).is_err());
        // midpoints of the level-12 Cantor intervals
        let pts: Vec<Point> = (0u32..1 << 12)
            .map(|w| {
                let x: f64 = (0..12).map(|i| if w >> i & 1 == 1 { 2.0 * 3f64.powi(-(12 - i as i32)) } else { 0.0 }).sum();
                Point::new(&[x + 0.5 * 3f64.powi(-12)]).unwrap()
            })
            .collect();
        let cantor = PointCloud::new(1, pts, 3f64.powi(-12));
        let scales: Vec<f64> = (2..=6).map(|k| 3f64.powi(-k)).collect();
        let scan = fit_dimension(&cantor, &unit(1), &scales).unwrap();
        assert!((scan.fitted_slope - 2f64.ln() / 3f64.ln()).abs() < 0.05, "{scan:?}");
        assert!(scan.rows.windows(2).all(|w| w[0].0 > w[1].0 && w[0].1 <= w[1].1));
    }

    #[test]
    fn regularity_examples() {
        let seg = segment01(1e-4);
        assert!(regularity_exponent(&seg, &unit(1), 0.5, 1e-2, 16).unwrap() >= 0.9);
        assert!(regularity_exponent(&seg, &unit(1), 1.5, 1e-2, 16).unwrap() <= 0.1);
        let pt = PointCloud::new(1, vec![Point::new(&[0.5]).unwrap()], 0.0);
        assert_eq!(regularity_exponent(&pt, &unit(1), 0.5, 1e-2, 16).unwrap(), 0.0);
        assert!(regularity_exponent(&seg, &unit(1), 0.5, 1e-2, 8).is_err());
        assert!(regularity_exponent(&segment01(0.05), &unit(1), 0.5, 1e-2, 16).is_err());
    }

    #[test]
    fn liminf_is_monotone_in_t() {
        let seg = segment01(1e-5);
        let deltas = [0.1, 0.03, 0.01, 0.003];
        let proxies: Vec<f64> = [0.5, 1.0, 1.5]
            .iter()
            .map(|&t| regularity_liminf(&seg, &unit(1), t, &deltas, 16).unwrap().p_liminf_proxy)
            .collect();
        assert!(proxies[0] >= 0.9 && proxies[2] <= 0.1, "{proxies:?}");
        assert!(proxies.windows(2).all(|w| w[0] >= w[1]));
        assert!(regularity_liminf(&seg, &unit(1), 0.5, &[0.01, 0.1], 16).is_err());
    }

    fn arb_cloud() -> impl Strategy<Value = (usize, PointCloud)> {
        (1usize..=3).prop_flat_map(|d| {
            prop::collection::vec(prop::collection::vec(0.0f64..1.0, d), 1..60)
                .prop_map(move |v| (d, PointCloud::new(d, v.iter().map(|c| Point::new(c).unwrap()).collect(), 0.0)))
        })
    }

    proptest! {
        #[test]
        fn grid_matches_greedy_cover((d, cloud) in arb_cloud(), delta in 0.02f64..0.5) {
            let g = greedy_cover_count(&cloud, delta) as f64;
            let n = grid_count(&cloud, &unit(d), delta).unwrap() as f64;
            let f = (1 << d) as f64;
            prop_assert!(g / f <= n && n <= f * g);
        }

        #[test]
        fn counts_are_monotone_and_bounded((d, cloud) in arb_cloud(), k in 1i32..8) {
            let coarse = grid_count(&cloud, &unit(d), 2f64.powi(-k)).unwrap();
            let fine = grid_count(&cloud, &unit(d), 2f64.powi(-k - 1)).unwrap();
            prop_assert!(coarse <= fine);
            let per_axis = (unit(d).diam() / 2f64.powi(-k)).ceil() + 1.0;
            prop_assert!(coarse as f64 <= per_axis.powi(d as i32));
        }

        #[test]
        fn regularity_in_unit_interval((d, cloud) in arb_cloud(), t in 0.0f64..3.0) {
            let p = regularity_exponent(&cloud, &unit(d), t, 0.05, 16).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
