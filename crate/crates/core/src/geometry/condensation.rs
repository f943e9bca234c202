use super::{check_dim, check_same_dim, AmbientBox, Point, PointCloud, MAX_DIM};
use crate::error::{IsssError, Result};
use rand::Rng;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Empty { dim: usize },
    Points(Vec<Point>),
    Segment(Point, Point),
    /// Circle in the plane.
    Circle { center: Point, radius: f64 },
    /// Closed disk in the plane.
    Disk { center: Point, radius: f64 },
    Box { lo: Point, hi: Point },
    Union(Vec<CondensationSet>),
    /// Cartesian product `left x right`.
    Product(Box<CondensationSet>, Box<CondensationSet>),
}

/// A compact condensation set with analytically known dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct CondensationSet {
    shape: Shape,
    dim: usize,
    hausdorff_dim: f64,
    lower_box_dim: f64,
    upper_box_dim: f64,
}

impl CondensationSet {
    pub fn new(shape: Shape) -> Result<Self> {
        let (dim, hd) = match &shape {
            Shape::Empty { dim } => (*dim, 0.0),
            Shape::Points(pts) => {
                let first = pts.first().ok_or(IsssError::EmptyInput("point list"))?;
                for p in pts {
                    check_same_dim(first.dim(), p.dim())?;
                }
                (first.dim(), 0.0)
            }
            Shape::Segment(a, b) => {
                check_same_dim(a.dim(), b.dim())?;
                (a.dim(), if a == b { 0.0 } else { 1.0 })
            }
            Shape::Circle { center, radius } | Shape::Disk { center, radius } => {
                check_same_dim(2, center.dim())?;
                if !(*radius >= 0.0 && radius.is_finite()) {
                    return Err(IsssError::InvalidParameter { name: "radius", reason: format!("{radius}") });
                }
                let full = if matches!(shape, Shape::Disk { .. }) { 2.0 } else { 1.0 };
                (2, if *radius == 0.0 { 0.0 } else { full })
            }
            Shape::Box { lo, hi } => {
                let b = AmbientBox::new(*lo, *hi)?;
                let d = (0..b.dim()).filter(|&i| hi[i] > lo[i]).count();
                (b.dim(), d as f64)
            }
            Shape::Union(parts) => {
                let first = parts.first().ok_or(IsssError::EmptyInput("union"))?;
                for p in parts {
                    check_same_dim(first.dim, p.dim)?;
                }
                let hd = parts.iter().filter(|p| !p.is_empty()).map(|p| p.hausdorff_dim).fold(0.0, f64::max);
                (first.dim, hd)
            }
            Shape::Product(a, b) => {
                check_dim(a.dim + b.dim)?;
                (a.dim + b.dim, a.hausdorff_dim + b.hausdorff_dim)
            }
        };
        check_dim(dim)?;
        // every primitive here is Ahlfors regular, so the three dimensions agree
        Ok(Self { shape, dim, hausdorff_dim: hd, lower_box_dim: hd, upper_box_dim: hd })
    }

    pub fn empty(dim: usize) -> Self {
        Self::new(Shape::Empty { dim }).expect("valid dimension")
    }

    pub fn points(points: Vec<Point>) -> Result<Self> {
        Self::new(Shape::Points(points))
    }

    pub fn segment(a: Point, b: Point) -> Result<Self> {
        Self::new(Shape::Segment(a, b))
    }

    /// `C ∪ C'`, collapsing empty operands.
    pub fn union(a: &CondensationSet, b: &CondensationSet) -> Result<Self> {
        check_same_dim(a.dim, b.dim)?;
        match (a.is_empty(), b.is_empty()) {
            (true, _) => Ok(b.clone()),
            (_, true) => Ok(a.clone()),
            _ => Self::new(Shape::Union(vec![a.clone(), b.clone()])),
        }
    }

    /// `C1 x C2`; empty if either factor is.
    pub fn product(a: &CondensationSet, b: &CondensationSet) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            check_dim(a.dim + b.dim)?;
            return Ok(Self::empty(a.dim + b.dim));
        }
        Self::new(Shape::Product(Box::new(a.clone()), Box::new(b.clone())))
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        match &self.shape {
            Shape::Empty { .. } => true,
            Shape::Union(parts) => parts.iter().all(CondensationSet::is_empty),
            Shape::Product(a, b) => a.is_empty() || b.is_empty(),
            _ => false,
        }
    }

    pub fn hausdorff_dim(&self) -> f64 {
        self.hausdorff_dim
    }

    pub fn lower_box_dim(&self) -> f64 {
        self.lower_box_dim
    }

    pub fn upper_box_dim(&self) -> f64 {
        self.upper_box_dim
    }

    /// Axis-aligned bounding box, `None` when empty.
    pub fn bounds(&self) -> Option<AmbientBox> {
        if self.is_empty() {
            return None;
        }
        let from_points = |pts: &[Point]| {
            let mut b = AmbientBox::new(pts[0], pts[0]).ok()?;
            for p in &pts[1..] {
                b = b.union(&AmbientBox::new(*p, *p).ok()?).ok()?;
            }
            Some(b)
        };
        match &self.shape {
            Shape::Empty { .. } => None,
            Shape::Points(pts) => from_points(pts),
            Shape::Segment(a, b) => from_points(&[*a, *b]),
            Shape::Circle { center, radius } | Shape::Disk { center, radius } => {
                let lo = Point::new(&[center[0] - radius, center[1] - radius]).ok()?;
                let hi = Point::new(&[center[0] + radius, center[1] + radius]).ok()?;
                AmbientBox::new(lo, hi).ok()
            }
            Shape::Box { lo, hi } => AmbientBox::new(*lo, *hi).ok(),
            Shape::Union(parts) => parts
                .iter()
                .filter_map(CondensationSet::bounds)
                .reduce(|a, b| a.union(&b).expect("same dimension")),
            Shape::Product(a, b) => a.bounds()?.product(&b.bounds()?).ok(),
        }
    }

    /// Finite `eps`-net of the set: every point of the set lies within the
    /// returned cloud's resolution (at most `eps`) of a cloud point, and every
    /// cloud point lies on the set.
    pub fn discretize(&self, eps: f64) -> Result<PointCloud> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(IsssError::InvalidParameter { name: "eps", reason: format!("{eps} is not positive") });
        }
        let (points, resolution) = self.net(eps);
        if points.is_empty() {
            return Ok(PointCloud::empty(self.dim));
        }
        Ok(PointCloud::new(self.dim, points, resolution))
    }

    fn net(&self, eps: f64) -> (Vec<Point>, f64) {
        match &self.shape {
            Shape::Empty { .. } => (Vec::new(), 0.0),
            Shape::Points(pts) => (pts.clone(), 0.0),
            Shape::Segment(a, b) => {
                let len = a.distance(b);
                let n = (len / eps).ceil().max(1.0) as usize;
                let pts = (0..=n).map(|i| lerp(a, b, i as f64 / n as f64)).collect();
                (pts, 0.5 * len / n as f64)
            }
            Shape::Circle { center, radius } => circle_net(center, *radius, eps),
            Shape::Disk { center, radius } => {
                if *radius == 0.0 {
                    return (vec![*center], 0.0);
                }
                // interior lattice of mesh h, closed up by a boundary net; a disk
                // point is within h/sqrt2 of a lattice point, and if that lattice
                // point is outside, the chord to it crosses the rim
                let h = 0.7 * eps;
                let (mut pts, rim_res) = circle_net(center, *radius, 0.25 * eps);
                let n = (radius / h).ceil() as i64;
                for i in -n..=n {
                    for j in -n..=n {
                        let (x, y) = (i as f64 * h, j as f64 * h);
                        if x * x + y * y <= radius * radius {
                            pts.push(Point::new(&[center[0] + x, center[1] + y]).unwrap());
                        }
                    }
                }
                (pts, h / 2f64.sqrt() + rim_res)
            }
            Shape::Box { lo, hi } => {
                let d = lo.dim();
                let h = 2.0 * eps / (d as f64).sqrt();
                let counts: Vec<usize> =
                    (0..d).map(|i| if hi[i] > lo[i] { ((hi[i] - lo[i]) / h).ceil() as usize } else { 0 }).collect();
                let mut pts = Vec::new();
                let mut idx = vec![0usize; d];
                loop {
                    let mut c = [0.0; MAX_DIM];
                    for i in 0..d {
                        c[i] = if counts[i] == 0 {
                            lo[i]
                        } else {
                            lo[i] + (hi[i] - lo[i]) * idx[i] as f64 / counts[i] as f64
                        };
                    }
                    pts.push(Point::from_raw(d, c));
                    let mut i = 0;
                    while i < d && idx[i] == counts[i] {
                        idx[i] = 0;
                        i += 1;
                    }
                    if i == d {
                        break;
                    }
                    idx[i] += 1;
                }
                let res = (0..d)
                    .filter(|&i| counts[i] > 0)
                    .map(|i| ((hi[i] - lo[i]) / (2.0 * counts[i] as f64)).powi(2))
                    .sum::<f64>()
                    .sqrt();
                (pts, res)
            }
            Shape::Union(parts) => {
                let mut pts = Vec::new();
                let mut res: f64 = 0.0;
                for p in parts {
                    let (q, r) = p.net(eps);
                    pts.extend(q);
                    res = res.max(r);
                }
                (pts, res)
            }
            Shape::Product(a, b) => {
                let e = eps / 2f64.sqrt();
                let (pa, ra) = a.net(e);
                let (pb, rb) = b.net(e);
                let pts = pa.iter().flat_map(|x| pb.iter().map(move |y| x.concat(y).unwrap())).collect();
                (pts, ra.hypot(rb))
            }
        }
    }

    /// One draw from the uniform measure on the set (counting, arc-length,
    /// area or volume as appropriate); unions pick a component uniformly.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Point> {
        match &self.shape {
            Shape::Empty { .. } => None,
            Shape::Points(pts) => Some(pts[rng.random_range(0..pts.len())]),
            Shape::Segment(a, b) => Some(lerp(a, b, rng.random::<f64>())),
            Shape::Circle { center, radius } => {
                let th = 2.0 * PI * rng.random::<f64>();
                Some(Point::new(&[center[0] + radius * th.cos(), center[1] + radius * th.sin()]).unwrap())
            }
            Shape::Disk { center, radius } => {
                let th = 2.0 * PI * rng.random::<f64>();
                let r = radius * rng.random::<f64>().sqrt();
                Some(Point::new(&[center[0] + r * th.cos(), center[1] + r * th.sin()]).unwrap())
            }
            Shape::Box { lo, hi } => {
                let mut c = [0.0; MAX_DIM];
                for i in 0..lo.dim() {
                    c[i] = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
                }
                Some(Point::from_raw(lo.dim(), c))
            }
            Shape::Union(parts) => {
                let live: Vec<&CondensationSet> = parts.iter().filter(|p| !p.is_empty()).collect();
                if live.is_empty() {
                    return None;
                }
                live[rng.random_range(0..live.len())].sample(rng)
            }
            Shape::Product(a, b) => {
                let x = a.sample(rng)?;
                let y = b.sample(rng)?;
                Some(x.concat(&y).unwrap())
            }
        }
    }

    /// Mean of the measure drawn from by [`CondensationSet::sample`].
    pub fn sample_mean(&self) -> Option<Point> {
        match &self.shape {
            Shape::Empty { .. } => None,
            Shape::Points(pts) => Some(average(pts.iter().copied())),
            Shape::Segment(a, b) => Some(lerp(a, b, 0.5)),
            Shape::Circle { center, .. } | Shape::Disk { center, .. } => Some(*center),
            Shape::Box { lo, hi } => Some(lerp(lo, hi, 0.5)),
            Shape::Union(parts) => {
                let means: Vec<Point> = parts.iter().filter_map(CondensationSet::sample_mean).collect();
                (!means.is_empty()).then(|| average(means.into_iter()))
            }
            Shape::Product(a, b) => Some(a.sample_mean()?.concat(&b.sample_mean()?).unwrap()),
        }
    }

    /// Whether the set lies in the closed box `b`.
    pub fn is_within(&self, b: &AmbientBox, tol: f64) -> bool {
        match self.bounds() {
            None => true,
            Some(bb) => b.contains(bb.lo(), tol) && b.contains(bb.hi(), tol),
        }
    }

    /// Whether the open box `u` lies inside this (closed) set.
    pub fn contains_open_box(&self, u: &AmbientBox) -> bool {
        let degenerate = (0..u.dim()).any(|i| u.hi()[i] <= u.lo()[i]);
        if degenerate {
            return false;
        }
        match &self.shape {
            Shape::Box { lo, hi } => AmbientBox::new(*lo, *hi).is_ok_and(|b| b.contains(u.lo(), 0.0) && b.contains(u.hi(), 0.0)),
            Shape::Disk { center, radius } => u.corners().all(|c| c.distance(center) <= *radius),
            Shape::Product(a, b) => {
                let da = a.dim;
                let (lo_a, lo_b) = u.lo().split_at(da);
                let (hi_a, hi_b) = u.hi().split_at(da);
                match (AmbientBox::new(lo_a, hi_a), AmbientBox::new(lo_b, hi_b)) {
                    (Ok(ua), Ok(ub)) => a.contains_open_box(&ua) && b.contains_open_box(&ub),
                    _ => false,
                }
            }
            // a union of closed sets covers U if one part does; finer covers are not detected
            Shape::Union(parts) => parts.iter().any(|p| p.contains_open_box(u)),
            // lower-dimensional sets contain no open box
            _ => false,
        }
    }
}

fn average(points: impl Iterator<Item = Point>) -> Point {
    let mut c = [0.0; MAX_DIM];
    let mut n = 0usize;
    let mut dim = 1;
    for p in points {
        dim = p.dim();
        for i in 0..dim {
            c[i] += p[i];
        }
        n += 1;
    }
    for v in c.iter_mut() {
        *v /= n as f64;
    }
    Point::from_raw(dim, c)
}

fn lerp(a: &Point, b: &Point, t: f64) -> Point {
    let mut c = [0.0; MAX_DIM];
    for i in 0..a.dim() {
        c[i] = a[i] + (b[i] - a[i]) * t;
    }
    Point::from_raw(a.dim(), c)
}

/// Mesh with consecutive chords of length at most `eps`.
fn circle_net(center: &Point, radius: f64, eps: f64) -> (Vec<Point>, f64) {
    if radius == 0.0 {
        return (vec![*center], 0.0);
    }
    let n = if eps >= 2.0 * radius { 3 } else { (PI / (eps / (2.0 * radius)).asin()).ceil().max(3.0) as usize };
    let step = 2.0 * PI / n as f64;
    let pts = (0..n)
        .map(|i| {
            let th = step * i as f64;
            Point::new(&[center[0] + radius * th.cos(), center[1] + radius * th.sin()]).unwrap()
        })
        .collect();
    // farthest circle point from the mesh: the arc midpoint
    (pts, 2.0 * radius * (step / 4.0).sin())
}
