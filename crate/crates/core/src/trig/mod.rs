//! Exact trigonometric polynomials on the reference triangles.
//!
//! A [`TrigPoly`] is a sum of `coeff · sin/cos(π(αx + βs + δ))` with rational
//! `α, β, δ`. Functions live in lattice coordinates `(x, s)`; the physical
//! second coordinate is `y = σ·s` where `σ` is the poly's [`YScale`]. On the
//! equilateral frame `σ = √3`, so `T_e` has lattice vertices `(0,0)`,
//! `(1,0)`, `(1/2,1/2)` and all arguments stay rational.

mod catalog;
mod fixed;
mod integrate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Scalar, Surd};

pub use catalog::{
    eigenfunction, family, gram, gram_constants, reference_frame, CatalogFunction, Eigenfunction, Family,
    FamilyGrams, GramConstants, GramSet, FAMILY_IDS, GRAM_CONSTANTS_JSON,
};
pub use fixed::Fixed;
pub use integrate::{
    integrate_frame_triangle, integrate_frame_triangle_numeric, integrate_triangle, integrate_with_fallback,
    Integral, IntegrationField,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrigError {
    #[error("argument {0} leaves the exact scalar field; numeric fallback required")]
    ExactField(String),
    #[error("operands live on different frames")]
    FrameMismatch,
}

/// Physical `y` per unit of lattice `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum YScale {
    Unit,
    Sqrt3,
}

impl YScale {
    pub fn value(self) -> f64 {
        match self {
            YScale::Unit => 1.0,
            YScale::Sqrt3 => 3f64.sqrt(),
        }
    }

    pub fn scalar(self) -> Scalar {
        match self {
            YScale::Unit => Scalar::one(),
            YScale::Sqrt3 => Scalar::sqrt(Surd::Sqrt3),
        }
    }

    /// `1/σ`.
    pub fn inverse(self) -> Scalar {
        match self {
            YScale::Unit => Scalar::one(),
            YScale::Sqrt3 => Scalar::term(crate::exact::rat(1, 3), Surd::Sqrt3, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrigKind {
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

/// Affine argument `π(x·X + s·S + c)` in lattice coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arg {
    pub x: Rational64,
    pub s: Rational64,
    pub c: Rational64,
}

impl Arg {
    pub fn new(x: Rational64, s: Rational64, c: Rational64) -> Self {
        Arg { x, s, c }
    }

    pub fn ints(x: i64, s: i64, c: i64) -> Self {
        Arg::new(x.into(), s.into(), c.into())
    }

    pub fn is_constant(&self) -> bool {
        self.x.is_zero() && self.s.is_zero()
    }

    fn value(&self, x: f64, s: f64) -> f64 {
        let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
        std::f64::consts::PI * (f(self.x) * x + f(self.s) * s + f(self.c))
    }
}

impl Add for Arg {
    type Output = Arg;
    fn add(self, o: Arg) -> Arg {
        Arg::new(self.x + o.x, self.s + o.s, self.c + o.c)
    }
}

impl Sub for Arg {
    type Output = Arg;
    fn sub(self, o: Arg) -> Arg {
        Arg::new(self.x - o.x, self.s - o.s, self.c - o.c)
    }
}

impl Neg for Arg {
    type Output = Arg;
    fn neg(self) -> Arg {
        Arg::new(-self.x, -self.s, -self.c)
    }
}

pub fn r64_to_big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrigTerm {
    pub coeff: Scalar,
    pub kind: TrigKind,
    pub arg: Arg,
}

/// Canonical trigonometric polynomial. Keys are unique, zero coefficients
/// are dropped, the leading nonzero argument coefficient is positive and the
/// phase lies in `[0, 1)`.
#[derive(Clone, PartialEq)]
pub struct TrigPoly {
    scale: YScale,
    terms: BTreeMap<(TrigKind, Arg), Scalar>,
}

impl TrigPoly {
    pub fn zero(scale: YScale) -> Self {
        TrigPoly {
            scale,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(scale: YScale, c: Scalar) -> Self {
        Self::single(scale, TrigKind::Cos, Arg::ints(0, 0, 0), c)
    }

    pub fn single(scale: YScale, kind: TrigKind, arg: Arg, coeff: Scalar) -> Self {
        let mut p = TrigPoly::zero(scale);
        p.push(kind, arg, coeff);
        p
    }

    pub fn sin(scale: YScale, arg: Arg) -> Self {
        Self::single(scale, TrigKind::Sin, arg, Scalar::one())
    }

    pub fn cos(scale: YScale, arg: Arg) -> Self {
        Self::single(scale, TrigKind::Cos, arg, Scalar::one())
    }

    pub fn scale(&self) -> YScale {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = TrigTerm> + '_ {
        self.terms.iter().map(|(&(kind, arg), c)| TrigTerm {
            coeff: c.clone(),
            kind,
            arg,
        })
    }

    /// Adds `coeff·kind(arg)` in canonical form.
    pub fn push(&mut self, kind: TrigKind, arg: Arg, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let (kind, arg, coeff) = canonical(kind, arg, coeff);
        let slot = self.terms.entry((kind, arg)).or_default();
        *slot += &coeff;
        if slot.is_zero() {
            self.terms.remove(&(kind, arg));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> TrigPoly {
        let mut out = TrigPoly::zero(self.scale);
        for (&(k, a), v) in &self.terms {
            out.push(k, a, v * c);
        }
        out
    }

    /// Pointwise value at physical coordinates `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let s = y / self.scale.value();
        self.terms
            .iter()
            .map(|(&(k, a), c)| {
                let t = a.value(x, s);
                c.to_f64() * if k == TrigKind::Sin { t.sin() } else { t.cos() }
            })
            .sum()
    }

    /// Composition with the lattice substitution `(x, s) ↦ (ax·x + as·s, bx·x + bs·s)`,
    /// landing on a frame with the given scale.
    pub fn substitute(&self, m: [[Rational64; 2]; 2], scale: YScale) -> TrigPoly {
        let mut out = TrigPoly::zero(scale);
        for (&(k, a), v) in &self.terms {
            let arg = Arg::new(a.x * m[0][0] + a.s * m[1][0], a.x * m[0][1] + a.s * m[1][1], a.c);
            out.push(k, arg, v.clone());
        }
        out
    }
}

fn canonical(mut kind: TrigKind, mut arg: Arg, mut coeff: Scalar) -> (TrigKind, Arg, Scalar) {
    let lead = if !arg.x.is_zero() { arg.x } else { arg.s };
    if lead.is_negative() {
        arg = -arg;
        if kind == TrigKind::Sin {
            coeff = -coeff;
        }
    }
    // phase into [0, 2), then into [0, 1) with a sign flip
    let two = Rational64::from_integer(2);
    let q = (arg.c / two).floor();
    arg.c -= q * two;
    if arg.c >= Rational64::one() {
        arg.c -= Rational64::one();
        coeff = -coeff;
    }
    if arg.is_constant() {
        let c = r64_to_big(arg.c);
        let v = match kind {
            TrigKind::Sin => crate::exact::sin_pi(&c),
            TrigKind::Cos => crate::exact::cos_pi(&c),
        };
        if let Some(v) = v {
            kind = TrigKind::Cos;
            arg = Arg::ints(0, 0, 0);
            coeff = &coeff * &v;
        }
    }
    (kind, arg, coeff)
}

/// Linearises `p·q` with the product-to-sum identities.
pub fn product_to_sum(p: &TrigPoly, q: &TrigPoly) -> Result<TrigPoly, TrigError> {
    if p.scale != q.scale {
        return Err(TrigError::FrameMismatch);
    }
    let half = Scalar::from_ratio(1, 2);
    let mut out = TrigPoly::zero(p.scale);
    for (&(k1, a), c1) in &p.terms {
        for (&(k2, b), c2) in &q.terms {
            let v = &(c1 * c2) * &half;
            use TrigKind::*;
            match (k1, k2) {
                (Sin, Sin) => {
                    out.push(Cos, a - b, v.clone());
                    out.push(Cos, a + b, -v);
                }
                (Cos, Cos) => {
                    out.push(Cos, a - b, v.clone());
                    out.push(Cos, a + b, v);
                }
                (Sin, Cos) => {
                    out.push(Sin, a + b, v.clone());
                    out.push(Sin, a - b, v);
                }
                (Cos, Sin) => {
                    out.push(Sin, a + b, v.clone());
                    out.push(Sin, b - a, v);
                }
            }
        }
    }
    Ok(out)
}

/// Term-wise derivative with respect to the physical variable.
pub fn partial(p: &TrigPoly, var: Var) -> TrigPoly {
    let mut out = TrigPoly::zero(p.scale);
    let factor = match var {
        Var::X => Scalar::pi_pow(1),
        Var::Y => &Scalar::pi_pow(1) * &p.scale.inverse(),
    };
    for (&(k, a), c) in &p.terms {
        let f = match var {
            Var::X => a.x,
            Var::Y => a.s,
        };
        if f.is_zero() {
            continue;
        }
        let c = &(c * &factor) * &r64_to_big(f);
        match k {
            TrigKind::Sin => out.push(TrigKind::Cos, a, c),
            TrigKind::Cos => out.push(TrigKind::Sin, a, -c),
        }
    }
    out
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, o: &TrigPoly) -> TrigPoly {
        assert_eq!(self.scale, o.scale, "frame mismatch");
        let mut out = self.clone();
        for (&(k, a), c) in &o.terms {
            out.push(k, a, c.clone());
        }
        out
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, o: &TrigPoly) -> TrigPoly {
        self + &(-o)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scaled(&Scalar::from_int(-1))
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, o: &TrigPoly) -> TrigPoly {
        product_to_sum(self, o).expect("frame mismatch")
    }
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(k, a), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let name = if k == TrigKind::Sin { "sin" } else { "cos" };
            write!(f, "({c})*{name}(pi*({}*x + {}*s + {}))", a.x, a.s, a.c)?;
        }
        Ok(())
    }
}

/// Reduces a rational to `[0, 2)` as a `BigRational`; shared with integration.
pub(crate) fn phase_mod2(q: &BigRational) -> BigRational {
    let two = BigInt::from(2);
    let n = q.numer().clone();
    let d = q.denom().clone();
    let r = n.mod_floor(&(&two * &d));
    BigRational::new(r, d)
}
