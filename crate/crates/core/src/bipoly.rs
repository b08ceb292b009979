//! Bivariate polynomials with coefficients in a commutative ring, and the
//! ring `ℚ(√3)[π]` used by the prover.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::OnceCell;
use thiserror::Error;

use crate::exact::{format_rational, pi_enclosure, rat_to_f64, Scalar, Surd};

/// Ring operations needed by [`BiPoly`].
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: BigRational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: BigRational) -> Self {
        q
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn from_rational(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(self)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrecisionError {
    #[error("sign of {value} undecided with a {digits}-digit enclosure of pi")]
    Undecided { value: String, digits: u32 },
}

/// Element `r + s√3` of `ℚ(√3)`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct QSqrt3 {
    pub r: BigRational,
    pub s: BigRational,
}

impl QSqrt3 {
    pub fn rational(r: BigRational) -> Self {
        QSqrt3 { r, s: Zero::zero() }
    }

    pub fn is_zero(&self) -> bool {
        Zero::is_zero(&self.r) && Zero::is_zero(&self.s)
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.s)
    }

    fn add(&self, o: &Self) -> Self {
        QSqrt3 {
            r: &self.r + &o.r,
            s: &self.s + &o.s,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let three = BigRational::from_integer(BigInt::from(3));
        QSqrt3 {
            r: &self.r * &o.r + &self.s * &o.s * three,
            s: &self.r * &o.s + &self.s * &o.r,
        }
    }

    fn scale(&self, q: &BigRational) -> Self {
        QSqrt3 {
            r: &self.r * q,
            s: &self.s * q,
        }
    }

    fn neg(&self) -> Self {
        QSqrt3 {
            r: -&self.r,
            s: -&self.s,
        }
    }

    /// Interval `[lo, hi]` given an enclosure of `√3`.
    pub fn interval(&self, root_lo: &BigRational, root_hi: &BigRational) -> (BigRational, BigRational) {
        let (a, b) = (&self.s * root_lo, &self.s * root_hi);
        let (l, h) = if a <= b { (a, b) } else { (b, a) };
        (&self.r + l, &self.r + h)
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.r) + rat_to_f64(&self.s) * 3f64.sqrt()
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (Zero::is_zero(&self.r), Zero::is_zero(&self.s)) {
            (_, true) => write!(f, "{}", format_rational(&self.r)),
            (true, false) => write!(f, "{}*sqrt3", format_rational(&self.s)),
            (false, false) => write!(f, "({} + {}*sqrt3)", format_rational(&self.r), format_rational(&self.s)),
        }
    }
}

/// Polynomial in `π` over `ℚ(√3)`, `Σ c_k πᵏ`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PiPoly {
    c: Vec<QSqrt3>,
}

/// Rational enclosures of `π` (with cached powers) and `√3`.
#[derive(Clone)]
pub struct PiBounds {
    pub digits: u32,
    lo: Vec<BigRational>,
    hi: Vec<BigRational>,
    root3: (BigRational, BigRational),
}

impl PiBounds {
    fn new(digits: u32) -> Self {
        let (lo, hi) = pi_enclosure(digits);
        let scale = num_traits::pow(BigInt::from(10), digits as usize);
        let s = (BigInt::from(3) * &scale * &scale).sqrt();
        let root3 = (
            BigRational::new(s.clone(), scale.clone()),
            BigRational::new(s + 1, scale),
        );
        let mut b = PiBounds {
            digits,
            lo: vec![BigRational::one(), lo],
            hi: vec![BigRational::one(), hi],
            root3,
        };
        b.extend(8);
        b
    }

    fn extend(&mut self, k: usize) {
        while self.lo.len() <= k {
            let n = self.lo.len();
            let l = &self.lo[n - 1] * &self.lo[1];
            let h = &self.hi[n - 1] * &self.hi[1];
            self.lo.push(l);
            self.hi.push(h);
        }
    }

    pub fn bounds(&self) -> (&BigRational, &BigRational) {
        (&self.lo[1], &self.hi[1])
    }
}

/// Enclosure with `digits` digits; 30, 60 and 120 are cached.
pub fn pi_bounds(digits: u32) -> std::borrow::Cow<'static, PiBounds> {
    static CACHE: [OnceCell<PiBounds>; 3] = [OnceCell::new(), OnceCell::new(), OnceCell::new()];
    let slot = match digits {
        30 => Some(0),
        60 => Some(1),
        120 => Some(2),
        _ => None,
    };
    match slot {
        Some(i) => std::borrow::Cow::Borrowed(CACHE[i].get_or_init(|| PiBounds::new(digits))),
        None => std::borrow::Cow::Owned(PiBounds::new(digits)),
    }
}

/// Largest enclosure precision tried before giving up.
pub const MAX_PI_DIGITS: u32 = 120;
pub const DEFAULT_PI_DIGITS: u32 = 30;

fn qzero() -> BigRational {
    Zero::zero()
}

impl PiPoly {
    pub fn zero() -> Self {
        PiPoly { c: Vec::new() }
    }

    pub fn from_rational(q: BigRational) -> Self {
        PiPoly::monomial(q, 0)
    }

    pub fn from_int(n: i64) -> Self {
        PiPoly::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `q·πᵏ`.
    pub fn monomial(q: BigRational, k: usize) -> Self {
        PiPoly::term(QSqrt3::rational(q), k)
    }

    /// `c·πᵏ`.
    pub fn term(c: QSqrt3, k: usize) -> Self {
        let mut v = vec![QSqrt3::default(); k + 1];
        v[k] = c;
        PiPoly::from_parts(v)
    }

    /// Rational coefficients by power of `π`.
    pub fn from_coeffs(c: Vec<BigRational>) -> Self {
        PiPoly::from_parts(c.into_iter().map(QSqrt3::rational).collect())
    }

    pub fn from_parts(c: Vec<QSqrt3>) -> Self {
        let mut p = PiPoly { c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn coeffs(&self) -> &[QSqrt3] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> QSqrt3 {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(|x| x.is_rational())
    }

    pub fn scale(&self, q: &BigRational) -> PiPoly {
        PiPoly::from_parts(self.c.iter().map(|x| x.scale(q)).collect())
    }

    /// Interval value over the enclosure.
    fn interval(&self, b: &PiBounds) -> (BigRational, BigRational) {
        let (mut lo, mut hi) = (qzero(), qzero());
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (cl, ch) = c.interval(&b.root3.0, &b.root3.1);
            let (pl, ph) = (&b.lo[k], &b.hi[k]);
            let (l, h) = if !cl.is_negative() {
                (&cl * pl, &ch * ph)
            } else if !ch.is_positive() {
                (&cl * ph, &ch * pl)
            } else {
                (&cl * ph, &ch * ph)
            };
            lo += l;
            hi += h;
        }
        (lo, hi)
    }

    /// Sign decided with a `digits`-digit enclosure, if conclusive.
    pub fn sign_at(&self, digits: u32) -> Option<Ordering> {
        if self.c.is_empty() {
            return Some(Ordering::Equal);
        }
        if self.c.len() == 1 && self.c[0].is_rational() {
            return Some(self.c[0].r.cmp(&qzero()));
        }
        let mut b = pi_bounds(digits);
        if b.lo.len() < self.c.len() {
            b.to_mut().extend(self.c.len());
        }
        let (lo, hi) = self.interval(&b);
        if lo.is_positive() {
            Some(Ordering::Greater)
        } else if hi.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Sign of the real number, doubling the enclosure precision from
    /// `start_digits` up to [`MAX_PI_DIGITS`].
    pub fn sign(&self, start_digits: u32) -> Result<Ordering, PrecisionError> {
        let mut d = start_digits.max(1);
        loop {
            if let Some(s) = self.sign_at(d) {
                return Ok(s);
            }
            if d >= MAX_PI_DIGITS {
                return Err(PrecisionError::Undecided {
                    value: self.to_string(),
                    digits: d,
                });
            }
            d = (d * 2).min(MAX_PI_DIGITS);
        }
    }

    pub fn to_f64(&self) -> f64 {
        let pi = std::f64::consts::PI;
        self.c.iter().enumerate().map(|(k, q)| q.to_f64() * pi.powi(k as i32)).sum()
    }
}

impl fmt::Debug for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, q) in self.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{q}")?,
                1 => write!(f, "{q}*pi")?,
                _ => write!(f, "{q}*pi^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &PiPoly {
    type Output = PiPoly;
    fn add(self, o: &PiPoly) -> PiPoly {
        Coeff::add(self, o)
    }
}

impl Coeff for PiPoly {
    fn zero() -> Self {
        PiPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn from_rational(q: BigRational) -> Self {
        PiPoly::from_rational(q)
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        PiPoly::from_parts((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return PiPoly::zero();
        }
        let mut c = vec![QSqrt3::default(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        PiPoly::from_parts(c)
    }
    fn neg(&self) -> Self {
        PiPoly {
            c: self.c.iter().map(|x| x.neg()).collect(),
        }
    }
    fn to_f64(&self) -> f64 {
        PiPoly::to_f64(self)
    }
}

/// `Σ c_{ij} xⁱ yʲ`.
#[derive(Clone, PartialEq)]
pub struct BiPoly<C: Coeff> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Coeff> Default for BiPoly<C> {
    fn default() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> BiPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: C, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(C::from_rational(BigRational::one()), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(C::from_rational(BigRational::one()), 0, 1)
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::constant(C::from_rational(q))
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&(i, j)) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert((i, j), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &C)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (&(i, j), v) in &self.terms {
            out.add_term(i, j, v.mul(c));
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BiPoly<D> {
        let mut out = BiPoly::zero();
        for (&(i, j), v) in &self.terms {
            out.add_term(i, j, f(v));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(C::from_rational(BigRational::one()));
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `P(X(x,y), Y(x,y))` by Horner's scheme in both variables.
    pub fn compose(&self, px: &Self, py: &Self) -> Self {
        let dy = self.deg_y();
        let mut ypows = vec![Self::constant(C::from_rational(BigRational::one()))];
        for k in 1..=dy {
            let next = &ypows[k as usize - 1] * py;
            ypows.push(next);
        }
        let mut out = Self::zero();
        for i in (0..=self.deg_x()).rev() {
            out = &out * px;
            let mut row = Self::zero();
            for (&(a, b), c) in self.terms.range((i, 0)..=(i, u32::MAX)) {
                debug_assert_eq!(a, i);
                row = &row + &ypows[b as usize].scale(c);
            }
            out = &out + &row;
        }
        out
    }

    /// `P(x + x0, y + y0)`.
    pub fn shift(&self, x0: &BigRational, y0: &BigRational) -> Self {
        let px = &Self::x() + &Self::from_rational(x0.clone());
        let py = &Self::y() + &Self::from_rational(y0.clone());
        self.compose(&px, &py)
    }

    pub fn swap_xy(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), v) in &self.terms {
            out.add_term(j, i, v.clone());
        }
        out
    }

    /// Coefficient polynomial of `yᵏ`, as a polynomial in `x` alone.
    pub fn y_coefficient(&self, k: u32) -> Self {
        let mut out = Self::zero();
        for (&(i, j), v) in &self.terms {
            if j == k {
                out.add_term(i, 0, v.clone());
            }
        }
        out
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64() * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &BigRational, y: &BigRational) -> C {
        let mut out = C::zero();
        for (&(i, j), c) in &self.terms {
            let m = num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize);
            out = out.add(&c.mul(&C::from_rational(m)));
        }
        out
    }
}

impl<C: Coeff> Add for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn add(self, o: &BiPoly<C>) -> BiPoly<C> {
        let mut out = self.clone();
        for (&(i, j), v) in &o.terms {
            out.add_term(i, j, v.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn sub(self, o: &BiPoly<C>) -> BiPoly<C> {
        let mut out = self.clone();
        for (&(i, j), v) in &o.terms {
            out.add_term(i, j, v.neg());
        }
        out
    }
}

impl<C: Coeff> Neg for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn neg(self) -> BiPoly<C> {
        self.map_coeffs(|c| c.neg())
    }
}

impl<C: Coeff> Mul for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn mul(self, o: &BiPoly<C>) -> BiPoly<C> {
        let mut out = BiPoly::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &o.terms {
                out.add_term(i1 + i2, j1 + j2, a.mul(b));
            }
        }
        out
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for BiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*x^{i}*y^{j}")?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for BiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConversionError {
    #[error("coefficient involves {0:?}, outside Q(sqrt3)")]
    UnsupportedSurd(Surd),
}

/// Converts a `ℚ(√2,√3)[π^±1]` polynomial with coefficients in `ℚ(√3)[π^±1]`
/// into `ℚ(√3)[π]` by dividing out the lowest power of `π` (a positive
/// factor). Returns the polynomial and that power.
pub fn to_pi_poly(p: &BiPoly<Scalar>) -> Result<(BiPoly<PiPoly>, i32), ConversionError> {
    if let Some(s) = p
        .terms()
        .flat_map(|(_, _, c)| c.surds())
        .find(|s| !matches!(s, Surd::One | Surd::Sqrt3))
    {
        return Err(ConversionError::UnsupportedSurd(s));
    }
    let min_pow = p.terms().filter_map(|(_, _, c)| c.pi_range()).map(|r| r.0).min().unwrap_or(0);
    let out = p.map_coeffs(|c| {
        let mut v: Vec<QSqrt3> = Vec::new();
        for (surd, k, q) in c.terms() {
            let idx = (k - min_pow) as usize;
            if v.len() <= idx {
                v.resize(idx + 1, QSqrt3::default());
            }
            match surd {
                Surd::Sqrt3 => v[idx].s += q,
                _ => v[idx].r += q,
            }
        }
        PiPoly::from_parts(v)
    });
    Ok((out, min_pow))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    type P = BiPoly<BigRational>;

    fn q(n: i64) -> BigRational {
        rat(n, 1)
    }

    #[test]
    fn shift_example() {
        let p = P::x();
        let s = p.shift(&q(1), &q(0));
        assert_eq!(s, &P::x() + &P::from_rational(q(1)));
        let c = P::from_rational(rat(7, 3));
        assert_eq!(c.shift(&rat(1, 2), &rat(5, 7)), c);
    }

    #[test]
    fn pi_signs() {
        // π − 355/113 < 0 is decided only with a fine enclosure
        let p = PiPoly::from_coeffs(vec![rat(-355, 113), rat(1, 1)]);
        assert_eq!(p.sign(30).unwrap(), Ordering::Less);
        let tight = PiPoly::from_coeffs(vec![-crate::exact::parse_rational("3.14159265358979323846").unwrap(), q(1)]);
        assert_eq!(tight.sign(30).unwrap(), Ordering::Greater);
        let z = PiPoly::zero();
        assert_eq!(z.sign(30).unwrap(), Ordering::Equal);
        let big = PiPoly::from_coeffs(vec![q(-10), q(0), q(1)]);
        assert_eq!(big.sign(30).unwrap(), Ordering::Less);
        // widening agrees with narrower decisions
        for d in [30, 60, 120] {
            assert_eq!(p.sign_at(d), Some(Ordering::Less));
        }
    }

    #[test]
    fn conversion_divides_lowest_pi_power() {
        let s = |n: i64, k: i32| Scalar::term(rat(n, 1), Surd::Sqrt3, k);
        let mut p = BiPoly::<Scalar>::zero();
        p.add_term(1, 0, s(2, -2));
        p.add_term(0, 1, &s(-3, 0) + &Scalar::from_int(5));
        let (r, k) = to_pi_poly(&p).unwrap();
        assert_eq!(k, -2);
        assert_eq!(r.coeff(1, 0), PiPoly::term(QSqrt3 { r: q(0), s: q(2) }, 0));
        assert_eq!(r.coeff(0, 1), PiPoly::term(QSqrt3 { r: q(5), s: q(-3) }, 2));
        let mut mixed = p.clone();
        mixed.add_term(2, 2, Scalar::sqrt(Surd::Sqrt2));
        assert!(to_pi_poly(&mixed).is_err());
    }

    #[test]
    fn sqrt3_signs() {
        // 265/153 < √3 < 97/56 are continued-fraction convergents
        let a = PiPoly::term(QSqrt3 { r: rat(-97, 56), s: q(1) }, 0);
        assert_eq!(a.sign(30).unwrap(), Ordering::Less);
        let b = PiPoly::term(QSqrt3 { r: rat(-265, 153), s: q(1) }, 0);
        assert_eq!(b.sign(30).unwrap(), Ordering::Greater);
        // (√3 − π/2)·π² + 1 > 0
        let c = PiPoly::from_parts(vec![
            QSqrt3::rational(q(1)),
            QSqrt3::default(),
            QSqrt3 { r: q(0), s: q(1) },
            QSqrt3::rational(rat(-1, 2)),
        ]);
        let want = 1.0 + (3f64.sqrt() - std::f64::consts::PI / 2.0) * std::f64::consts::PI.powi(2);
        assert!((c.to_f64() - want).abs() < 1e-12);
        assert_eq!(c.sign(30).unwrap(), Ordering::Greater);
        let sq = Coeff::mul(&PiPoly::term(QSqrt3 { r: q(0), s: q(1) }, 0), &PiPoly::term(QSqrt3 { r: q(0), s: q(1) }, 0));
        assert_eq!(sq, PiPoly::from_int(3));
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        prop::collection::vec((0u32..4, 0u32..4, -9i64..10), 0..8).prop_map(|ts| {
            let mut p = P::zero();
            for (i, j, c) in ts {
                p.add_term(i, j, q(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn compose_and_shift_agree_with_evaluation(p in arb_poly(), a in -5i64..5, b in -5i64..5, x in -3i64..3, y in -3i64..3) {
            let s = p.shift(&rat(a, 2), &rat(b, 3));
            let lhs = s.eval(&q(x), &q(y));
            let rhs = p.eval(&(q(x) + rat(a, 2)), &(q(y) + rat(b, 3)));
            prop_assert_eq!(lhs, rhs);
            let r = &p * &p;
            prop_assert_eq!(r.eval(&q(x), &q(y)), p.eval(&q(x), &q(y)) * p.eval(&q(x), &q(y)));
        }
    }
}
