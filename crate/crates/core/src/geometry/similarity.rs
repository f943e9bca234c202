use super::{check_dim, check_same_dim, Mat, Point, IDENTITY, MAX_DIM};
use crate::error::{IsssError, Result};

const ORTHO_TOL: f64 = 1e-12;

/// Orthogonal part of a similarity, kept in the form it was specified in so
/// that configurations can be written back out unchanged.
#[derive(Clone, Debug, PartialEq)]
pub enum Orientation {
    Identity,
    /// `+1` or `-1` on the line.
    Sign(f64),
    /// Planar rotation by `angle_deg` degrees, preceded by a reflection in the
    /// first axis when `reflect` is set: `R(angle) * diag(1, -1)`.
    Planar { angle_deg: f64, reflect: bool },
    /// Explicit row-major orthogonal matrix.
    Matrix(Vec<Vec<f64>>),
}

impl Orientation {
    pub fn matrix(&self, dim: usize) -> Result<Mat> {
        check_dim(dim)?;
        let mut m = IDENTITY;
        match self {
            Orientation::Identity => {}
            Orientation::Sign(s) => {
                check_same_dim(1, dim)?;
                if *s != 1.0 && *s != -1.0 {
                    return Err(IsssError::InvalidParameter { name: "sign", reason: format!("{s} is not +1 or -1") });
                }
                m[0][0] = *s;
            }
            Orientation::Planar { angle_deg, reflect } => {
                check_same_dim(2, dim)?;
                let (s, c) = angle_deg.to_radians().sin_cos();
                let r = if *reflect { -1.0 } else { 1.0 };
                m[0][0] = c;
                m[0][1] = -s * r;
                m[1][0] = s;
                m[1][1] = c * r;
            }
            Orientation::Matrix(rows) => {
                check_same_dim(dim, rows.len())?;
                for (i, row) in rows.iter().enumerate() {
                    check_same_dim(dim, row.len())?;
                    m[i][..dim].copy_from_slice(row);
                }
            }
        }
        let dev = orthogonality_defect(&m, dim);
        if !(dev <= ORTHO_TOL) {
            return Err(IsssError::NotOrthogonal(dev));
        }
        Ok(m)
    }

    fn compose(&self, other: &Orientation, product: &Mat, dim: usize) -> Orientation {
        use Orientation::*;
        match (self, other) {
            (Identity, o) | (o, Identity) => o.clone(),
            (Sign(a), Sign(b)) => Sign(a * b),
            // R(a) F^r1 R(b) F^r2 = R(a -/+ b) F^(r1 xor r2), since F R(b) = R(-b) F
            (Planar { angle_deg: a, reflect: r1 }, Planar { angle_deg: b, reflect: r2 }) => Planar {
                angle_deg: if *r1 { a - b } else { a + b },
                reflect: r1 ^ r2,
            },
            _ => Matrix((0..dim).map(|i| product[i][..dim].to_vec()).collect()),
        }
    }
}

fn orthogonality_defect(m: &Mat, d: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let dot: f64 = (0..d).map(|k| m[i][k] * m[j][k]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}

/// One diagonal block of a similarity: a scaled orthogonal map acting on
/// coordinates `offset..offset + dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub offset: usize,
    pub dim: usize,
    pub ratio: f64,
    pub orientation: Orientation,
    ortho: Mat,
}

impl Factor {
    pub fn ortho(&self) -> &Mat {
        &self.ortho
    }
}

/// A contracting similarity `x -> ratio * ortho * x + translation`.
///
/// Maps of a product system carry two factors, one per coordinate block,
/// each contracting with its own ratio; [`Similarity::ratio`] is then the
/// larger of the two, which is the Lipschitz constant in both the Euclidean
/// and the max-of-factors metric.
#[derive(Clone, Debug, PartialEq)]
pub struct Similarity {
    dim: usize,
    factors: Vec<Factor>,
    linear: Mat,
    translation: Point,
}

impl Similarity {
    pub fn new(ratio: f64, orientation: Orientation, translation: &[f64]) -> Result<Self> {
        let t = Point::new(translation)?;
        let dim = t.dim();
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(IsssError::InvalidRatio(ratio));
        }
        let ortho = orientation.matrix(dim)?;
        let factor = Factor { offset: 0, dim, ratio, orientation, ortho };
        Ok(Self::assemble(dim, vec![factor], t))
    }

    /// Map on the line: `x -> ratio * sign * x + shift`.
    pub fn line(ratio: f64, sign: f64, shift: f64) -> Result<Self> {
        let o = if sign == 1.0 { Orientation::Identity } else { Orientation::Sign(sign) };
        Self::new(ratio, o, &[shift])
    }

    /// `(x, y) -> (f(x), g(y))`.
    pub fn product(f: &Similarity, g: &Similarity) -> Result<Self> {
        let dim = f.dim + g.dim;
        check_dim(dim)?;
        let mut factors = f.factors.clone();
        factors.extend(g.factors.iter().cloned().map(|mut fc| {
            fc.offset += f.dim;
            fc
        }));
        let t = f.translation.concat(&g.translation)?;
        Ok(Self::assemble(dim, factors, t))
    }

    fn assemble(dim: usize, factors: Vec<Factor>, translation: Point) -> Self {
        let mut linear = [[0.0; MAX_DIM]; MAX_DIM];
        for fc in &factors {
            for i in 0..fc.dim {
                for j in 0..fc.dim {
                    linear[fc.offset + i][fc.offset + j] = fc.ratio * fc.ortho[i][j];
                }
            }
        }
        Self { dim, factors, linear, translation }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Contraction ratio (largest factor ratio for product maps).
    pub fn ratio(&self) -> f64 {
        self.factors.iter().map(|f| f.ratio).fold(0.0, f64::max)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn translation(&self) -> &Point {
        &self.translation
    }

    /// Orthogonal part; only defined for single-factor maps.
    pub fn ortho(&self) -> Option<&Mat> {
        match self.factors.as_slice() {
            [f] => Some(&f.ortho),
            _ => None,
        }
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        check_same_dim(self.dim, x.dim())?;
        Ok(self.apply_unchecked(x))
    }

    #[inline]
    pub fn apply_unchecked(&self, x: &Point) -> Point {
        debug_assert_eq!(x.dim(), self.dim);
        let d = self.dim;
        let xc = x.raw();
        let mut out = *self.translation.raw();
        for (i, o) in out.iter_mut().enumerate().take(d) {
            let row = &self.linear[i];
            for j in 0..d {
                *o += row[j] * xc[j];
            }
        }
        Point::from_raw(d, out)
    }

    /// Preimage of `y`.
    pub fn invert_unchecked(&self, y: &Point) -> Point {
        let d = self.dim;
        let mut v = [0.0; MAX_DIM];
        for (i, vi) in v.iter_mut().enumerate().take(d) {
            *vi = y.raw()[i] - self.translation.raw()[i];
        }
        let mut out = [0.0; MAX_DIM];
        for fc in &self.factors {
            // (r O)^-1 = O^T / r
            for i in 0..fc.dim {
                let mut s = 0.0;
                for j in 0..fc.dim {
                    s += fc.ortho[j][i] * v[fc.offset + j];
                }
                out[fc.offset + i] = s / fc.ratio;
            }
        }
        Point::from_raw(d, out)
    }

    /// Fixed point, by iterating the contraction from the translation vector.
    pub fn fixed_point(&self) -> Point {
        let mut x = self.translation;
        let r = self.ratio();
        let mut scale = 1.0 + x.coords().iter().map(|v| v.abs()).sum::<f64>();
        while scale > 1e-18 {
            x = self.apply_unchecked(&x);
            scale *= r;
        }
        x
    }
}

/// `f ∘ g`.
pub fn compose(f: &Similarity, g: &Similarity) -> Result<Similarity> {
    check_same_dim(f.dim, g.dim)?;
    let layout = |s: &Similarity| s.factors.iter().map(|c| (c.offset, c.dim)).collect::<Vec<_>>();
    if layout(f) != layout(g) {
        return Err(IsssError::Unsupported("composition of maps with different block layouts".into()));
    }
    let factors = f
        .factors
        .iter()
        .zip(&g.factors)
        .map(|(a, b)| {
            let mut ortho = [[0.0; MAX_DIM]; MAX_DIM];
            for i in 0..a.dim {
                for j in 0..a.dim {
                    ortho[i][j] = (0..a.dim).map(|k| a.ortho[i][k] * b.ortho[k][j]).sum();
                }
            }
            let orientation = a.orientation.compose(&b.orientation, &ortho, a.dim);
            Factor { offset: a.offset, dim: a.dim, ratio: a.ratio * b.ratio, orientation, ortho }
        })
        .collect();
    let translation = f.apply_unchecked(&g.translation);
    Ok(Similarity::assemble(f.dim, factors, translation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(c: &[f64]) -> Point {
        Point::new(c).unwrap()
    }

    #[test]
    fn apply_examples() {
        let f = Similarity::line(0.5, 1.0, 0.0).unwrap();
        assert_eq!(f.apply(&pt(&[1.0])).unwrap()[0], 0.5);
        let g = Similarity::line(1.0 / 3.0, 1.0, 2.0 / 3.0).unwrap();
        assert!((g.apply(&pt(&[1.0])).unwrap()[0] - 1.0).abs() < 1e-15);
        let h = Similarity::new(0.5, Orientation::Planar { angle_deg: 90.0, reflect: false }, &[1.0, 0.0]).unwrap();
        let y = h.apply(&pt(&[1.0, 0.0])).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-15 && (y[1] - 0.5).abs() < 1e-15);
        assert!(f.apply(&pt(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn rejects_non_contractions() {
        assert!(matches!(Similarity::line(1.0, 1.0, 0.0), Err(IsssError::InvalidRatio(_))));
        assert!(Similarity::line(0.0, 1.0, 0.0).is_err());
        let skew = Orientation::Matrix(vec![vec![1.0, 0.1], vec![0.0, 1.0]]);
        assert!(matches!(Similarity::new(0.5, skew, &[0.0, 0.0]), Err(IsssError::NotOrthogonal(_))));
    }

    #[test]
    fn cantor_composition() {
        let f1 = Similarity::line(1.0 / 3.0, 1.0, 0.0).unwrap();
        let f2 = Similarity::line(1.0 / 3.0, 1.0, 2.0 / 3.0).unwrap();
        let h = compose(&f1, &f2).unwrap();
        assert!((h.ratio() - 1.0 / 9.0).abs() < 1e-16);
        assert!((h.apply(&pt(&[0.0])).unwrap()[0] - 2.0 / 9.0).abs() < 1e-16);
        // x = x/9 + 2/9
        assert!((h.fixed_point()[0] - 0.25).abs() < 1e-15);
        let ff = compose(&f1, &f1).unwrap();
        assert!((ff.ratio() - 1.0 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn planar_composition_stays_symbolic() {
        let a = Similarity::new(0.5, Orientation::Planar { angle_deg: 30.0, reflect: true }, &[0.1, 0.2]).unwrap();
        let b = Similarity::new(0.5, Orientation::Planar { angle_deg: 50.0, reflect: false }, &[0.3, -0.2]).unwrap();
        let ab = compose(&a, &b).unwrap();
        assert_eq!(ab.factors()[0].orientation, Orientation::Planar { angle_deg: -20.0, reflect: true });
        let x = pt(&[0.7, -0.4]);
        let direct = a.apply_unchecked(&b.apply_unchecked(&x));
        assert!(ab.apply_unchecked(&x).distance(&direct) < 1e-14);
    }

    #[test]
    fn inverse_round_trips_on_products() {
        let f = Similarity::new(0.5, Orientation::Planar { angle_deg: 40.0, reflect: true }, &[0.1, 0.2]).unwrap();
        let g = Similarity::line(0.25, -1.0, 0.5).unwrap();
        let p = Similarity::product(&f, &g).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.ratio(), 0.5);
        let x = pt(&[0.3, 0.9, -0.2]);
        assert!(p.invert_unchecked(&p.apply_unchecked(&x)).distance(&x) < 1e-14);
    }

    fn arb_planar() -> impl Strategy<Value = Similarity> {
        (0.01f64..0.99, -180.0f64..180.0, any::<bool>(), -1.0f64..1.0, -1.0f64..1.0).prop_map(|(r, a, refl, tx, ty)| {
            Similarity::new(r, Orientation::Planar { angle_deg: a, reflect: refl }, &[tx, ty]).unwrap()
        })
    }

    proptest! {
        #[test]
        fn scales_distances_exactly(f in arb_planar(), x in prop::array::uniform2(-5.0f64..5.0), y in prop::array::uniform2(-5.0f64..5.0)) {
            let (x, y) = (pt(&x), pt(&y));
            let d = x.distance(&y);
            prop_assume!(d > 1e-6);
            let ratio = f.apply_unchecked(&x).distance(&f.apply_unchecked(&y)) / d;
            prop_assert!((ratio - f.ratio()).abs() < 1e-10);
        }

        #[test]
        fn composition_is_associative(f in arb_planar(), g in arb_planar(), h in arb_planar()) {
            let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
            let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
            prop_assert!((left.ratio() - right.ratio()).abs() < 1e-12);
            prop_assert!(left.translation().distance(right.translation()) < 1e-12);
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert!((left.linear[i][j] - right.linear[i][j]).abs() < 1e-12);
                }
            }
        }
    }
}
