use super::{Metric, Point, MAX_DIM};
use std::collections::{HashMap, HashSet};

type Key = [i64; MAX_DIM];

/// Uniform hash grid over a point set for nearest-neighbour and
/// fixed-radius queries.
pub struct GridIndex<'a> {
    points: &'a [Point],
    cell: f64,
    dim: usize,
    cells: HashMap<Key, Vec<u32>>,
}

impl<'a> GridIndex<'a> {
    /// Index with mesh `cell` (> 0). All points must share a dimension.
    pub fn new(points: &'a [Point], cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "grid cell must be positive");
        let dim = points.first().map_or(1, Point::dim);
        let mut cells: HashMap<Key, Vec<u32>> = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            cells.entry(key(p, cell, dim)).or_default().push(i as u32);
        }
        Self { points, cell, dim, cells }
    }

    /// Mesh chosen so that the average occupied cell holds a handful of points.
    pub fn auto(points: &'a [Point]) -> Self {
        let dim = points.first().map_or(1, Point::dim);
        let mut extent: f64 = 0.0;
        if let Some(first) = points.first() {
            let mut lo = *first.raw();
            let mut hi = lo;
            for p in points {
                for i in 0..dim {
                    lo[i] = lo[i].min(p.raw()[i]);
                    hi[i] = hi[i].max(p.raw()[i]);
                }
            }
            extent = (0..dim).map(|i| hi[i] - lo[i]).fold(0.0, f64::max);
        }
        let per_axis = (points.len() as f64).powf(1.0 / dim as f64).max(1.0);
        let cell = if extent > 0.0 { 2.0 * extent / per_axis } else { 1.0 };
        Self::new(points, cell)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance from `p` to the nearest indexed point, with its index.
    pub fn nearest(&self, p: &Point, metric: Metric) -> Option<(f64, usize)> {
        self.nearest_below(p, metric, f64::INFINITY)
    }

    /// Like [`nearest`](Self::nearest) but only reports points closer than
    /// `cap`, so the search stops once no such point can remain.
    pub fn nearest_below(&self, p: &Point, metric: Metric, cap: f64) -> Option<(f64, usize)> {
        if self.points.is_empty() {
            return None;
        }
        let center = key(p, self.cell, self.dim);
        let mut best = (f64::INFINITY, usize::MAX);
        // ring r holds cells at Chebyshev offset r; beyond it everything is at
        // least r * cell away
        let ring_budget = 4 * self.cells.len();
        let mut visited = 0usize;
        let mut r: i64 = 0;
        loop {
            visited += ring_size(self.dim, r);
            if visited > ring_budget {
                best = self.scan(p, metric);
                break;
            }
            for_each_ring_cell(&center, self.dim, r, |k| {
                if let Some(ids) = self.cells.get(k) {
                    for &i in ids {
                        let d = metric.distance(p, &self.points[i as usize]);
                        if d < best.0 || (d == best.0 && (i as usize) < best.1) {
                            best = (d, i as usize);
                        }
                    }
                }
            });
            if best.0 <= r as f64 * self.cell || cap <= r as f64 * self.cell {
                break;
            }
            r += 1;
        }
        (best.0 < cap).then_some(best)
    }

    /// Whether some indexed point lies within `radius` of `p`.
    pub fn any_within(&self, p: &Point, radius: f64, metric: Metric) -> bool {
        let reach = (radius / self.cell).floor() as i64 + 1;
        if ring_size_total(self.dim, reach) > 4 * self.cells.len() {
            return self.scan(p, metric).0 <= radius;
        }
        let center = key(p, self.cell, self.dim);
        let mut found = false;
        for r in 0..=reach {
            for_each_ring_cell(&center, self.dim, r, |k| {
                if found {
                    return;
                }
                if let Some(ids) = self.cells.get(k) {
                    found = ids.iter().any(|&i| metric.distance(p, &self.points[i as usize]) <= radius);
                }
            });
            if found {
                return true;
            }
        }
        false
    }

    fn scan(&self, p: &Point, metric: Metric) -> (f64, usize) {
        self.points
            .iter()
            .enumerate()
            .map(|(i, q)| (metric.distance(p, q), i))
            .fold((f64::INFINITY, usize::MAX), |a, b| if b.0 < a.0 { b } else { a })
    }
}

/// Smallest distance between a point of `a` and a point of `b`; infinite
/// when either is empty.
pub fn set_gap(a: &[Point], b: &[Point], metric: Metric) -> f64 {
    let (Some(first), false) = (a.first(), b.is_empty()) else { return f64::INFINITY };
    let dim = first.dim();
    let mut lo = *first.raw();
    let mut hi = lo;
    for p in a.iter().chain(b) {
        for i in 0..dim {
            lo[i] = lo[i].min(p.raw()[i]);
            hi[i] = hi[i].max(p.raw()[i]);
        }
    }
    let extent = (0..dim).map(|i| hi[i] - lo[i]).fold(0.0, f64::max);
    if extent == 0.0 {
        return 0.0;
    }
    // Adjacent occupied cells at mesh h hold a pair closer than 2h per axis,
    // and a pair closer than h per axis makes cells adjacent at mesh h, so
    // adjacency is monotone along the dyadic meshes extent * 2^-k.
    let adjacent = |h: f64| {
        let cells: HashSet<Key> = b.iter().map(|q| key(q, h, dim)).collect();
        a.iter().any(|p| {
            let mut found = false;
            let c = key(p, h, dim);
            for r in 0..=1 {
                for_each_ring_cell(&c, dim, r, |k| found |= cells.contains(k));
            }
            found
        })
    };
    let (mut coarse, mut fine) = (0i32, 48i32);
    if adjacent(extent * 0.5f64.powi(fine)) {
        coarse = fine;
    }
    while fine - coarse > 1 {
        let mid = (coarse + fine) / 2;
        if adjacent(extent * 0.5f64.powi(mid)) {
            coarse = mid;
        } else {
            fine = mid;
        }
    }
    let h = extent * 0.5f64.powi(coarse);
    let cap = 2.0 * h * (dim as f64).sqrt() * (1.0 + 1e-9);
    let idx = GridIndex::new(b, cap);
    let mut best = cap;
    for p in a {
        if let Some((d, _)) = idx.nearest_below(p, metric, best) {
            best = d;
        }
    }
    best
}

fn key(p: &Point, cell: f64, dim: usize) -> Key {
    let mut k = [0i64; MAX_DIM];
    for i in 0..dim {
        k[i] = (p.raw()[i] / cell).floor() as i64;
    }
    k
}

fn ring_size(dim: usize, r: i64) -> usize {
    if r == 0 {
        1
    } else {
        ((2 * r + 1).pow(dim as u32) - (2 * r - 1).pow(dim as u32)) as usize
    }
}

fn ring_size_total(dim: usize, reach: i64) -> usize {
    (2 * reach + 1).saturating_pow(dim as u32) as usize
}

fn for_each_ring_cell(center: &Key, dim: usize, r: i64, mut visit: impl FnMut(&Key)) {
    let mut off = [-r; MAX_DIM];
    for o in off.iter_mut().skip(dim) {
        *o = 0;
    }
    loop {
        if (0..dim).any(|i| off[i].abs() == r) {
            let mut k = *center;
            for i in 0..dim {
                k[i] += off[i];
            }
            visit(&k);
        }
        // odometer increment over [-r, r]^dim
        let mut i = 0;
        loop {
            if i == dim {
                return;
            }
            if off[i] < r {
                off[i] += 1;
                break;
            }
            off[i] = -r;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn set_gap_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in 1..=4 {
            for scale in [1e-6, 0.01, 1.0] {
                let mut cloud = |shift: f64, n: usize| -> Vec<Point> {
                    (0..n)
                        .map(|_| {
                            let c: Vec<f64> = (0..dim).map(|i| rng.random::<f64>() * scale + if i == 0 { shift } else { 0.0 }).collect();
                            Point::new(&c).unwrap()
                        })
                        .collect()
                };
                let a = cloud(0.0, 120);
                let b = cloud(1.5 * scale, 80);
                let metric = if dim >= 2 { Metric::MaxOfFactors { split: 1 } } else { Metric::Euclidean };
                let brute = a.iter().flat_map(|p| b.iter().map(move |q| metric.distance(p, q))).fold(f64::INFINITY, f64::min);
                assert_eq!(set_gap(&a, &b, metric), brute);
            }
        }
        let p = Point::new(&[0.25, 0.5]).unwrap();
        assert_eq!(set_gap(&[p], &[p], Metric::Euclidean), 0.0);
        assert_eq!(set_gap(&[], &[p], Metric::Euclidean), f64::INFINITY);
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in 1..=4 {
            let pts: Vec<Point> = (0..300)
                .map(|_| {
                    let c: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
                    Point::new(&c).unwrap()
                })
                .collect();
            let idx = GridIndex::auto(&pts);
            for _ in 0..50 {
                let c: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 3.0 - 1.0).collect();
                let q = Point::new(&c).unwrap();
                let brute = pts.iter().map(|p| p.distance(&q)).fold(f64::INFINITY, f64::min);
                let (d, _) = idx.nearest(&q, Metric::Euclidean).unwrap();
                assert_eq!(d, brute);
                assert!(idx.any_within(&q, brute, Metric::Euclidean));
                assert!(!idx.any_within(&q, brute * 0.999, Metric::Euclidean));
                assert_eq!(idx.nearest_below(&q, Metric::Euclidean, brute), None);
                assert_eq!(idx.nearest_below(&q, Metric::Euclidean, brute * 1.001).map(|b| b.0), Some(brute));
            }
        }
    }

    #[test]
    fn empty_index() {
        let idx = GridIndex::new(&[], 1.0);
        assert!(idx.nearest(&Point::origin(1), Metric::Euclidean).is_none());
        assert!(!idx.any_within(&Point::origin(1), 10.0, Metric::Euclidean));
    }
}
