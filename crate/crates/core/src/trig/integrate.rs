//! Closed-form integration of trigonometric polynomials over triangles with
//! rational lattice vertices.
//!
//! The triangle is split at its middle vertex (in `x`) into two pieces whose
//! top and bottom edges are graphs `s = p·x + q`. The inner `s` integral of
//! each term is again a trig term in `x` (or a linear polynomial times one
//! when the term does not depend on `s`), and the outer `x` integral is done
//! by parts.

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use super::fixed::Fixed;
use super::{r64_to_big, TrigError, TrigKind, TrigPoly};
use crate::exact::{self, Scalar};

/// Arithmetic needed by the integrator.
pub trait IntegrationField: Clone {
    fn zero() -> Self;
    fn from_scalar(s: &Scalar) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn pi_pow(k: i32) -> Self;
    fn sin_pi(q: &BigRational) -> Result<Self, TrigError>;
    fn cos_pi(q: &BigRational) -> Result<Self, TrigError>;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

impl IntegrationField for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn from_rational(q: &BigRational) -> Self {
        Scalar::from_rational(q.clone())
    }
    fn pi_pow(k: i32) -> Self {
        Scalar::pi_pow(k)
    }
    fn sin_pi(q: &BigRational) -> Result<Self, TrigError> {
        exact::sin_pi(q).ok_or_else(|| TrigError::ExactField(format!("sin(pi*{q})")))
    }
    fn cos_pi(q: &BigRational) -> Result<Self, TrigError> {
        exact::cos_pi(q).ok_or_else(|| TrigError::ExactField(format!("cos(pi*{q})")))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl IntegrationField for Fixed {
    fn zero() -> Self {
        Fixed::zero()
    }
    fn from_scalar(s: &Scalar) -> Self {
        Fixed::from_scalar(s)
    }
    fn from_rational(q: &BigRational) -> Self {
        Fixed::from_rational(q)
    }
    fn pi_pow(k: i32) -> Self {
        Fixed::pi_pow(k)
    }
    fn sin_pi(q: &BigRational) -> Result<Self, TrigError> {
        Ok(Fixed::sin_pi(q))
    }
    fn cos_pi(q: &BigRational) -> Result<Self, TrigError> {
        Ok(Fixed::cos_pi(q))
    }
    fn add(&self, o: &Self) -> Self {
        Fixed::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Fixed::mul(self, o)
    }
}

/// Result of [`integrate_with_fallback`].
#[derive(Debug, Clone, PartialEq)]
pub enum Integral {
    Exact(Scalar),
    /// High-precision value used when the exact field is insufficient.
    Numeric(Fixed),
}

impl Integral {
    pub fn to_f64(&self) -> f64 {
        match self {
            Integral::Exact(s) => s.to_f64(),
            Integral::Numeric(f) => f.to_f64(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Integral::Exact(_))
    }
}

fn trig_val<F: IntegrationField>(kind: TrigKind, q: &BigRational) -> Result<F, TrigError> {
    match kind {
        TrigKind::Sin => F::sin_pi(q),
        TrigKind::Cos => F::cos_pi(q),
    }
}

/// `∫_{x0}^{x1} x^p · kind(π(γx + δ)) dx` for `p ∈ {0, 1}`.
fn outer<F: IntegrationField>(
    kind: TrigKind,
    p: u32,
    gamma: &BigRational,
    delta: &BigRational,
    x0: &BigRational,
    x1: &BigRational,
) -> Result<F, TrigError> {
    let q = |n: &BigRational| F::from_rational(n);
    if gamma.is_zero() {
        let v: F = trig_val(kind, delta)?;
        let len = if p == 0 {
            x1 - x0
        } else {
            (x1 * x1 - x0 * x0) / BigRational::from_integer(2.into())
        };
        return Ok(v.mul(&q(&len)));
    }
    let inv_w = F::pi_pow(-1).mul(&q(&gamma.recip()));
    let inv_w2 = F::pi_pow(-2).mul(&q(&(gamma * gamma).recip()));
    let at = |x: &BigRational, k: TrigKind| trig_val::<F>(k, &(gamma * x + delta));
    let (s0, s1) = (at(x0, TrigKind::Sin)?, at(x1, TrigKind::Sin)?);
    let (c0, c1) = (at(x0, TrigKind::Cos)?, at(x1, TrigKind::Cos)?);
    let neg = |f: &F| f.mul(&q(&-BigRational::one()));
    let diff = |a: &F, b: &F| a.add(&neg(b));
    Ok(match (kind, p) {
        (TrigKind::Sin, 0) => neg(&diff(&c1, &c0).mul(&inv_w)),
        (TrigKind::Cos, 0) => diff(&s1, &s0).mul(&inv_w),
        (TrigKind::Sin, _) => {
            let a = diff(&c1.mul(&q(x1)), &c0.mul(&q(x0)));
            neg(&a.mul(&inv_w)).add(&diff(&s1, &s0).mul(&inv_w2))
        }
        (TrigKind::Cos, _) => {
            let a = diff(&s1.mul(&q(x1)), &s0.mul(&q(x0)));
            a.mul(&inv_w).add(&diff(&c1, &c0).mul(&inv_w2))
        }
    })
}

type Line = (BigRational, BigRational);

fn line(p: &[BigRational; 2], q: &[BigRational; 2]) -> Line {
    let m = (&q[1] - &p[1]) / (&q[0] - &p[0]);
    let c = &p[1] - &m * &p[0];
    (m, c)
}

/// `∫ dx ds` of `poly` over the lattice triangle with the given vertices
/// (not multiplied by the frame scale).
fn integrate_lattice<F: IntegrationField>(poly: &TrigPoly, verts: [[Rational64; 2]; 3]) -> Result<F, TrigError> {
    let mut vs: Vec<[BigRational; 2]> = verts.iter().map(|v| [r64_to_big(v[0]), r64_to_big(v[1])]).collect();
    vs.sort();
    let long = line(&vs[0], &vs[2]);
    let mut total = F::zero();
    for (a, b) in [(0usize, 1usize), (1, 2)] {
        if vs[a][0] == vs[b][0] {
            continue;
        }
        let e = line(&vs[a], &vs[b]);
        let xm = (&vs[a][0] + &vs[b][0]) / BigRational::from_integer(2.into());
        let ev = |l: &Line| &l.0 * &xm + &l.1;
        let (lo, hi) = if ev(&e) < ev(&long) { (&e, &long) } else { (&long, &e) };
        total = total.add(&integrate_piece::<F>(poly, &vs[a][0], &vs[b][0], lo, hi)?);
    }
    Ok(total)
}

fn integrate_piece<F: IntegrationField>(
    poly: &TrigPoly,
    x0: &BigRational,
    x1: &BigRational,
    lo: &Line,
    hi: &Line,
) -> Result<F, TrigError> {
    let mut total = F::zero();
    for t in poly.terms() {
        let (ax, as_, c) = (r64_to_big(t.arg.x), r64_to_big(t.arg.s), r64_to_big(t.arg.c));
        let coeff = F::from_scalar(&t.coeff);
        let value = if as_.is_zero() {
            // (hi(x) − lo(x))·trig(π(ax·x + c))
            let dm = &hi.0 - &lo.0;
            let dc = &hi.1 - &lo.1;
            let i1: F = outer(t.kind, 1, &ax, &c, x0, x1)?;
            let i0: F = outer(t.kind, 0, &ax, &c, x0, x1)?;
            i1.mul(&F::from_rational(&dm)).add(&i0.mul(&F::from_rational(&dc)))
        } else {
            // antiderivative in s, evaluated on the two edges
            let inv = F::pi_pow(-1).mul(&F::from_rational(&as_.recip()));
            let mut acc = F::zero();
            for (edge, sign) in [(hi, 1i64), (lo, -1i64)] {
                let gamma = &ax + &as_ * &edge.0;
                let delta = &c + &as_ * &edge.1;
                let (kind, s) = match t.kind {
                    TrigKind::Sin => (TrigKind::Cos, -sign),
                    TrigKind::Cos => (TrigKind::Sin, sign),
                };
                let v: F = outer(kind, 0, &gamma, &delta, x0, x1)?;
                acc = acc.add(&v.mul(&F::from_rational(&BigRational::from_integer(s.into()))));
            }
            acc.mul(&inv)
        };
        total = total.add(&coeff.mul(&value));
    }
    Ok(total)
}

/// Exact `∫∫ p dA` over a triangle given in lattice coordinates of `p`'s frame.
pub fn integrate_frame_triangle(p: &TrigPoly, verts: [[Rational64; 2]; 3]) -> Result<Scalar, TrigError> {
    let v: Scalar = integrate_lattice(p, verts)?;
    Ok(&v * &p.scale().scalar())
}

pub fn integrate_frame_triangle_numeric(p: &TrigPoly, verts: [[Rational64; 2]; 3]) -> Fixed {
    let v: Fixed = integrate_lattice(p, verts).expect("fixed-point evaluation is total");
    v.mul(&Fixed::from_scalar(&p.scale().scalar()))
}

/// Exact integral over a reference triangle. `p` must live on that
/// triangle's frame.
pub fn integrate_triangle(p: &TrigPoly, reference: crate::triangle::ReferenceTriangle) -> Result<Scalar, TrigError> {
    let (scale, verts) = super::reference_frame(reference);
    if p.scale() != scale {
        return Err(TrigError::FrameMismatch);
    }
    integrate_frame_triangle(p, verts)
}

/// Exact integral when possible, otherwise a tagged high-precision value.
pub fn integrate_with_fallback(p: &TrigPoly, verts: [[Rational64; 2]; 3]) -> Integral {
    match integrate_frame_triangle(p, verts) {
        Ok(v) => Integral::Exact(v),
        Err(_) => Integral::Numeric(integrate_frame_triangle_numeric(p, verts)),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exact::Surd;
    use crate::triangle::ReferenceTriangle;
    use crate::trig::{Arg, YScale};

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    /// Tensor Gauss–Legendre rule on the triangle via the Duffy collapse,
    /// independent of the closed-form integrator.
    pub(crate) fn quadrature(f: impl Fn(f64, f64) -> f64, v: [[f64; 2]; 3], n: usize) -> f64 {
        let (x, w) = gauss_legendre(n);
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (a, b) = ((x[i] + 1.0) / 2.0, (x[j] + 1.0) / 2.0);
                // (a, b) ∈ [0,1]² ↦ barycentric (1−a, a(1−b), ab), jacobian a
                let (l1, l2) = (a * (1.0 - b), a * b);
                let px = v[0][0] + l1 * (v[1][0] - v[0][0]) + l2 * (v[2][0] - v[0][0]);
                let py = v[0][1] + l1 * (v[1][1] - v[0][1]) + l2 * (v[2][1] - v[0][1]);
                sum += w[i] * w[j] / 4.0 * a * f(px, py);
            }
        }
        let det = ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1])).abs();
        sum * det
    }

    fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut xs = vec![0.0; n];
        let mut ws = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
                    break;
                }
            }
            xs[i] = x;
        }
        (xs, ws)
    }

    #[test]
    fn area_of_equilateral() {
        let one = TrigPoly::constant(YScale::Sqrt3, Scalar::one());
        let a = integrate_triangle(&one, ReferenceTriangle::Equilateral).unwrap();
        assert_eq!(a, Scalar::term(exact::rat(1, 4), Surd::Sqrt3, 0));
    }

    #[test]
    fn matches_quadrature_on_general_triangle() {
        let p = &TrigPoly::sin(YScale::Unit, Arg::new(r(3, 2), r(1, 3), r(1, 4)))
            + &TrigPoly::cos(YScale::Unit, Arg::new(r(0, 1), r(2, 1), r(0, 1)));
        let verts = [[r(0, 1), r(0, 1)], [r(2, 1), r(1, 2)], [r(1, 3), r(3, 2)]];
        let exact = integrate_with_fallback(&p, verts);
        let fv = verts.map(|v| v.map(|c| *c.numer() as f64 / *c.denom() as f64));
        let q = quadrature(|x, y| p.eval(x, y), fv, 40);
        assert!((exact.to_f64() - q).abs() < 1e-12, "{} vs {q}", exact.to_f64());
    }

    #[test]
    fn fallback_for_unrepresentable_arguments() {
        let p = TrigPoly::sin(YScale::Unit, Arg::new(r(1, 5), r(0, 1), r(0, 1)));
        let verts = [[r(0, 1), r(0, 1)], [r(1, 1), r(0, 1)], [r(0, 1), r(1, 1)]];
        assert!(matches!(integrate_frame_triangle(&p, verts), Err(TrigError::ExactField(_))));
        let v = integrate_with_fallback(&p, verts);
        assert!(!v.is_exact());
        let q = quadrature(|x, y| p.eval(x, y), [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 30);
        assert!((v.to_f64() - q).abs() < 1e-13);
    }

    #[test]
    fn linearity() {
        let e = YScale::Sqrt3;
        let a = TrigPoly::cos(e, Arg::new(r(2, 3), r(-2, 1), r(1, 3)));
        let b = TrigPoly::sin(e, Arg::new(r(0, 1), r(4, 1), r(0, 1)));
        let i = |p: &TrigPoly| integrate_triangle(p, ReferenceTriangle::Equilateral).unwrap();
        assert_eq!(i(&(&a + &b)), &i(&a) + &i(&b));
    }
}
