//! Euclidean substrate: points, similarity maps, condensation primitives,
//! point clouds and the distances between them.

mod cloud;
mod condensation;
mod grid;
mod similarity;

pub use cloud::{hausdorff_distance, hausdorff_distance_with, PointCloud};
pub use condensation::{CondensationSet, Shape};
pub use grid::{set_gap, GridIndex};
pub use similarity::{compose, Factor, Orientation, Similarity};

use crate::error::{IsssError, Result};
use std::fmt;

pub const MAX_DIM: usize = 4;

pub(crate) type Mat = [[f64; MAX_DIM]; MAX_DIM];

pub(crate) const IDENTITY: Mat = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// A point of a Euclidean space of dimension 1 to 4.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    dim: u8,
    c: [f64; MAX_DIM],
}

impl Point {
    pub fn new(coords: &[f64]) -> Result<Self> {
        check_dim(coords.len())?;
        if let Some(bad) = coords.iter().find(|v| !v.is_finite()) {
            return Err(IsssError::InvalidParameter {
                name: "coords",
                reason: format!("non-finite coordinate {bad}"),
            });
        }
        let mut c = [0.0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Self { dim: coords.len() as u8, c })
    }

    pub fn origin(dim: usize) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&dim));
        Self { dim: dim as u8, c: [0.0; MAX_DIM] }
    }

    pub(crate) fn from_raw(dim: usize, c: [f64; MAX_DIM]) -> Self {
        Self { dim: dim as u8, c }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim as usize]
    }

    #[inline]
    pub(crate) fn raw(&self) -> &[f64; MAX_DIM] {
        &self.c
    }

    /// Concatenation `(x, y)` used by product spaces.
    pub fn concat(&self, other: &Point) -> Result<Point> {
        let d = self.dim() + other.dim();
        check_dim(d)?;
        let mut c = [0.0; MAX_DIM];
        c[..self.dim()].copy_from_slice(self.coords());
        c[self.dim()..d].copy_from_slice(other.coords());
        Ok(Point::from_raw(d, c))
    }

    pub fn split_at(&self, at: usize) -> (Point, Point) {
        let (a, b) = self.coords().split_at(at);
        (Point::new(a).unwrap(), Point::new(b).unwrap())
    }

    #[inline]
    pub fn distance(&self, other: &Point) -> f64 {
        Metric::Euclidean.distance(self, other)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords()).finish()
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords()[i]
    }
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(IsssError::UnsupportedDimension(d))
    }
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(IsssError::DimensionMismatch { expected, found })
    }
}

/// Distance used when comparing clouds. Product spaces carry the maximum of
/// the two factor distances; the split index is the dimension of the left factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    MaxOfFactors { split: usize },
}

impl Metric {
    #[inline]
    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        let d = a.dim();
        match *self {
            Metric::Euclidean => norm(&a.c, &b.c, 0, d),
            Metric::MaxOfFactors { split } => norm(&a.c, &b.c, 0, split).max(norm(&a.c, &b.c, split, d)),
        }
    }
}

#[inline]
fn norm(a: &[f64; MAX_DIM], b: &[f64; MAX_DIM], from: usize, to: usize) -> f64 {
    let mut s = 0.0;
    for i in from..to {
        let t = a[i] - b[i];
        s += t * t;
    }
    s.sqrt()
}

/// Axis-aligned compact box; the ambient space X of a system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmbientBox {
    lo: Point,
    hi: Point,
}

impl AmbientBox {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        check_same_dim(lo.dim(), hi.dim())?;
        if lo.coords().iter().zip(hi.coords()).any(|(a, b)| a > b) {
            return Err(IsssError::InvalidParameter {
                name: "ambient",
                reason: format!("lo {lo:?} exceeds hi {hi:?}"),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn unit(dim: usize) -> Self {
        let mut hi = Point::origin(dim);
        hi.c[..dim].fill(1.0);
        Self { lo: Point::origin(dim), hi }
    }

    pub fn lo(&self) -> &Point {
        &self.lo
    }

    pub fn hi(&self) -> &Point {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    /// Euclidean diameter.
    pub fn diam(&self) -> f64 {
        self.lo.distance(&self.hi)
    }

    pub fn center(&self) -> Point {
        let mut c = [0.0; MAX_DIM];
        for (i, v) in c.iter_mut().enumerate().take(self.dim()) {
            *v = 0.5 * (self.lo.c[i] + self.hi.c[i]);
        }
        Point::from_raw(self.dim(), c)
    }

    pub fn corners(&self) -> impl Iterator<Item = Point> + '_ {
        let d = self.dim();
        (0..1usize << d).map(move |mask| {
            let mut c = [0.0; MAX_DIM];
            for (i, v) in c.iter_mut().enumerate().take(d) {
                *v = if mask >> i & 1 == 1 { self.hi.c[i] } else { self.lo.c[i] };
            }
            Point::from_raw(d, c)
        })
    }

    /// Closed-box membership with absolute slack `tol`.
    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        p.dim() == self.dim()
            && (0..self.dim()).all(|i| p.c[i] >= self.lo.c[i] - tol && p.c[i] <= self.hi.c[i] + tol)
    }

    /// Whether the affine map `f` sends this box into itself. The image of a
    /// box under an affine map is the hull of the corner images.
    pub fn is_invariant_under(&self, f: &Similarity) -> bool {
        let tol = 1e-12 * (1.0 + self.diam());
        f.dim() == self.dim() && self.corners().all(|c| self.contains(&f.apply_unchecked(&c), tol))
    }

    pub fn union(&self, other: &AmbientBox) -> Result<AmbientBox> {
        check_same_dim(self.dim(), other.dim())?;
        let mut lo = self.lo;
        let mut hi = self.hi;
        for i in 0..self.dim() {
            lo.c[i] = lo.c[i].min(other.lo.c[i]);
            hi.c[i] = hi.c[i].max(other.hi.c[i]);
        }
        Ok(AmbientBox { lo, hi })
    }

    pub fn product(&self, other: &AmbientBox) -> Result<AmbientBox> {
        AmbientBox::new(self.lo.concat(&other.lo)?, self.hi.concat(&other.hi)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_rejects_bad_input() {
        assert!(Point::new(&[]).is_err());
        assert!(Point::new(&[0.0; 5]).is_err());
        assert!(Point::new(&[f64::NAN]).is_err());
    }

    #[test]
    fn max_metric_takes_larger_factor() {
        let a = Point::new(&[0.0, 0.0]).unwrap();
        let b = Point::new(&[0.3, 0.4]).unwrap();
        assert!((a.distance(&b) - 0.5).abs() < 1e-15);
        assert_eq!(Metric::MaxOfFactors { split: 1 }.distance(&a, &b), 0.4);
    }

    #[test]
    fn box_corners_and_invariance() {
        let b = AmbientBox::unit(2);
        assert_eq!(b.corners().count(), 4);
        let f = Similarity::new(0.5, Orientation::Planar { angle_deg: 90.0, reflect: false }, &[1.0, 0.0]).unwrap();
        // rotation by 90 degrees sends [0,1]^2 to [-0.5,0]x[0,0.5] + (1,0)
        assert!(b.is_invariant_under(&f));
        let g = Similarity::new(0.5, Orientation::Identity, &[0.6, 0.0]).unwrap();
        assert!(!b.is_invariant_under(&g));
    }
}
