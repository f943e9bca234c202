use super::{check_same_dim, GridIndex, Metric, Point, MAX_DIM};
use crate::error::{IsssError, Result};
use std::collections::HashSet;

/// A finite point set standing in for a compact set: the represented set is
/// within `resolution` of the cloud in Hausdorff distance.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Point>,
    resolution: f64,
}

impl PointCloud {
    pub fn new(dim: usize, points: Vec<Point>, resolution: f64) -> Self {
        debug_assert!(points.iter().all(|p| p.dim() == dim));
        debug_assert!(resolution >= 0.0);
        Self { dim, points, resolution }
    }

    /// The cloud of the empty set.
    pub fn empty(dim: usize) -> Self {
        Self { dim, points: Vec::new(), resolution: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sort lexicographically and drop exact duplicates, so that equal sets
    /// produce identical clouds regardless of construction order.
    pub fn normalize(mut self) -> Self {
        self.points.sort_by(|a, b| {
            a.coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        self.points.dedup();
        self
    }

    pub fn union(&self, other: &PointCloud) -> Result<PointCloud> {
        check_same_dim(self.dim, other.dim)?;
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        let resolution = match (self.is_empty(), other.is_empty()) {
            (true, _) => other.resolution,
            (_, true) => self.resolution,
            _ => self.resolution.max(other.resolution),
        };
        Ok(PointCloud::new(self.dim, points, resolution).normalize())
    }

    /// Keep the first point of every occupied grid cell of side `cell`. The
    /// resolution grows by the cell diagonal.
    pub fn thin(self, cell: f64) -> Self {
        let mut seen = HashSet::with_capacity(self.points.len() / 2);
        let d = self.dim;
        let points: Vec<Point> = self
            .points
            .into_iter()
            .filter(|p| {
                let mut k = [0i64; MAX_DIM];
                for i in 0..d {
                    k[i] = (p[i] / cell).floor() as i64;
                }
                seen.insert(k)
            })
            .collect();
        let resolution = self.resolution + cell * (d as f64).sqrt();
        PointCloud::new(d, points, resolution).normalize()
    }

    pub fn index(&self) -> GridIndex<'_> {
        GridIndex::auto(&self.points)
    }
}

/// Hausdorff distance between two finite clouds in the Euclidean metric.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    hausdorff_distance_with(a, b, Metric::Euclidean)
}

/// Hausdorff distance `max(sup_a min_b d, sup_b min_a d)`; exact for finite
/// clouds, with nearest neighbours found through a grid index.
pub fn hausdorff_distance_with(a: &PointCloud, b: &PointCloud, metric: Metric) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(IsssError::EmptyInput("hausdorff distance needs two nonempty clouds"));
    }
    check_same_dim(a.dim, b.dim)?;
    Ok(directed(a, b, metric).max(directed(b, a, metric)))
}

fn directed(from: &PointCloud, to: &PointCloud, metric: Metric) -> f64 {
    let idx = to.index();
    from.points
        .iter()
        .map(|p| idx.nearest(p, metric).map_or(f64::INFINITY, |(d, _)| d))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cloud(xs: &[f64]) -> PointCloud {
        PointCloud::new(1, xs.iter().map(|&x| Point::new(&[x]).unwrap()).collect(), 0.0)
    }

    #[test]
    fn examples() {
        assert_eq!(hausdorff_distance(&cloud(&[0.0, 0.3]), &cloud(&[0.3, 0.0])).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&cloud(&[0.0]), &cloud(&[1.0])).unwrap(), 1.0);
        assert_eq!(hausdorff_distance(&cloud(&[0.0, 1.0]), &cloud(&[0.0])).unwrap(), 1.0);
        assert!(hausdorff_distance(&cloud(&[]), &cloud(&[0.0])).is_err());
    }

    #[test]
    fn normalize_is_order_independent() {
        let a = cloud(&[0.3, 0.1, 0.2, 0.1]).normalize();
        let b = cloud(&[0.2, 0.1, 0.3]).normalize();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn thinning_respects_new_resolution() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
        let full = cloud(&xs);
        let thin = full.clone().thin(0.05);
        assert!(thin.len() <= 21);
        assert!(hausdorff_distance(&full, &thin).unwrap() <= thin.resolution());
    }

    fn arb_cloud() -> impl Strategy<Value = PointCloud> {
        prop::collection::vec(prop::array::uniform2(-1.0f64..1.0), 1..40).prop_map(|v| {
            PointCloud::new(2, v.iter().map(|c| Point::new(c).unwrap()).collect(), 0.0)
        })
    }

    proptest! {
        #[test]
        fn is_a_metric(a in arb_cloud(), b in arb_cloud(), c in arb_cloud()) {
            let ab = hausdorff_distance(&a, &b).unwrap();
            let ba = hausdorff_distance(&b, &a).unwrap();
            let bc = hausdorff_distance(&b, &c).unwrap();
            let ac = hausdorff_distance(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-12);
            prop_assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        }
    }
}
