//! Exact scalars in `ℚ(√2, √3)[π, π⁻¹]`.
//!
//! A [`Scalar`] is a finite sum `Σ q·√s·πᵏ` with rational `q`, `s ∈ {1,2,3,6}`
//! and integer `k`. This is closed under the products that arise when
//! integrating trigonometric polynomials with rational-multiple-of-π
//! arguments over triangles with rational vertices, provided every sine and
//! cosine evaluation has a denominator dividing 12.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("cannot parse exact scalar: {0}")]
    Parse(String),
}

/// Square-root basis element `√s` for square-free `s ∈ {1, 2, 3, 6}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Surd {
    One,
    Sqrt2,
    Sqrt3,
    Sqrt6,
}

impl Surd {
    pub const ALL: [Surd; 4] = [Surd::One, Surd::Sqrt2, Surd::Sqrt3, Surd::Sqrt6];

    pub fn radicand(self) -> u32 {
        match self {
            Surd::One => 1,
            Surd::Sqrt2 => 2,
            Surd::Sqrt3 => 3,
            Surd::Sqrt6 => 6,
        }
    }

    fn from_radicand(r: u32) -> Surd {
        match r {
            1 => Surd::One,
            2 => Surd::Sqrt2,
            3 => Surd::Sqrt3,
            6 => Surd::Sqrt6,
            _ => unreachable!("radicand {r}"),
        }
    }

    pub fn value(self) -> f64 {
        (self.radicand() as f64).sqrt()
    }

    /// `√a·√b = k·√c`.
    pub fn mul(self, other: Surd) -> (u32, Surd) {
        let (a, b) = (self.radicand(), other.radicand());
        let g = a.gcd(&b);
        (g, Surd::from_radicand(a * b / (g * g)))
    }

    fn label(self) -> &'static str {
        match self {
            Surd::One => "",
            Surd::Sqrt2 => "sqrt2",
            Surd::Sqrt3 => "sqrt3",
            Surd::Sqrt6 => "sqrt6",
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    // Direct conversion handles the huge numerators that appear in the
    // generated inequalities without overflowing to inf/inf.
    q.to_f64().unwrap_or_else(|| {
        let (n, d) = (q.numer(), q.denom());
        let shift = n.bits().max(d.bits()) as i64 - 60;
        let n2 = if shift > 0 { n >> shift as usize } else { n.clone() };
        let d2 = if shift > 0 { d >> shift as usize } else { d.clone() };
        n2.to_f64().unwrap_or(0.0) / d2.to_f64().unwrap_or(1.0)
    })
}

pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let bad = || ExactError::Parse(s.to_string());
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip: BigInt = if ip.is_empty() || ip == "-" { BigInt::zero() } else { ip.parse().map_err(|_| bad())? };
        let digits: BigInt = if fp.is_empty() { BigInt::zero() } else { fp.parse().map_err(|_| bad())? };
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let frac = BigRational::new(digits, den);
        let ipq = BigRational::from_integer(ip);
        Ok(if neg { ipq - frac } else { ipq + frac })
    } else {
        Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact element of `ℚ(√2, √3)[π, π⁻¹]`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    terms: BTreeMap<(Surd, i32), BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(rat(n, d))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::term(q, Surd::One, 0)
    }

    /// `q·√s·πᵏ`.
    pub fn term(q: BigRational, surd: Surd, pi_pow: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert((surd, pi_pow), q);
        }
        Scalar { terms }
    }

    pub fn pi_pow(k: i32) -> Self {
        Scalar::term(BigRational::one(), Surd::One, k)
    }

    pub fn sqrt(s: Surd) -> Self {
        Scalar::term(BigRational::one(), s, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Surd, i32, &BigRational)> {
        self.terms.iter().map(|(&(s, k), q)| (s, k, q))
    }

    pub fn coefficient(&self, surd: Surd, pi_pow: i32) -> BigRational {
        self.terms.get(&(surd, pi_pow)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The rational value when the scalar has no surd or π content.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&(Surd::One, 0)).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, key: (Surd, i32), q: BigRational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(k, v)| (*k, v * q)).collect(),
        }
    }

    pub fn mul_pi_pow(&self, k: i32) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(&(s, p), v)| ((s, p + k), v.clone())).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let pi = std::f64::consts::PI;
        self.terms
            .iter()
            .map(|(&(s, k), q)| rat_to_f64(q) * s.value() * pi.powi(k))
            .sum()
    }

    /// Range of π exponents present, `None` for zero.
    pub fn pi_range(&self) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|k| k.1);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), k| (lo.min(k), hi.max(k))))
    }

    /// Surd basis elements with nonzero coefficients.
    pub fn surds(&self) -> Vec<Surd> {
        let mut v: Vec<Surd> = self.terms.keys().map(|k| k.0).collect();
        v.dedup();
        v.sort();
        v.dedup();
        v
    }

    /// Encoding used by the constants file: `{"sqrt3*pi^2": "3/32", ...}`.
    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(&(s, k), q)| (basis_label(s, k), format_rational(q)))
            .collect()
    }

    pub fn from_json_map(map: &BTreeMap<String, String>) -> Result<Scalar, ExactError> {
        let mut out = Scalar::zero();
        for (key, val) in map {
            let (s, k) = parse_basis_label(key)?;
            out.add_term((s, k), parse_rational(val)?);
        }
        Ok(out)
    }
}

fn basis_label(s: Surd, k: i32) -> String {
    match (s, k) {
        (Surd::One, 0) => "1".to_string(),
        (s, 0) => s.label().to_string(),
        (Surd::One, k) => format!("pi^{k}"),
        (s, k) => format!("{}*pi^{k}", s.label()),
    }
}

fn parse_basis_label(key: &str) -> Result<(Surd, i32), ExactError> {
    let bad = || ExactError::Parse(key.to_string());
    let mut surd = Surd::One;
    let mut k = 0;
    for part in key.split('*') {
        match part {
            "1" => {}
            "sqrt2" => surd = Surd::Sqrt2,
            "sqrt3" => surd = Surd::Sqrt3,
            "sqrt6" => surd = Surd::Sqrt6,
            p => {
                let e = p.strip_prefix("pi^").ok_or_else(bad)?;
                k = e.parse().map_err(|_| bad())?;
            }
        }
    }
    Ok((surd, k))
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(s, k), q)) in self.terms.iter().enumerate() {
            let sign = if q.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            write!(f, "{}", format_rational(&q.abs()))?;
            if s != Surd::One {
                write!(f, "*{}", s.label())?;
            }
            if k != 0 {
                write!(f, "*pi^{k}")?;
            }
        }
        Ok(())
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (k, v) in &rhs.terms {
            self.add_term(*k, v.clone());
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (k, v) in &rhs.terms {
            self.add_term(*k, -v.clone());
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (&(s1, k1), q1) in &self.terms {
            for (&(s2, k2), q2) in &rhs.terms {
                let (c, s) = s1.mul(s2);
                let mut q = q1 * q2;
                if c != 1 {
                    q *= BigRational::from_integer(BigInt::from(c));
                }
                out.add_term((s, k1 + k2), q);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl<'a> Mul<&'a BigRational> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &BigRational) -> Scalar {
        self.scale(rhs)
    }
}

/// Exact `sin(πq)` when `q` has denominator dividing 12.
pub fn sin_pi(q: &BigRational) -> Option<Scalar> {
    let twelfths = q * BigRational::from_integer(BigInt::from(12));
    if !twelfths.is_integer() {
        return None;
    }
    let k = twelfths.to_integer().mod_floor(&BigInt::from(24)).to_i64()?;
    Some(sin_twelfth(k))
}

pub fn cos_pi(q: &BigRational) -> Option<Scalar> {
    sin_pi(&(q + rat(1, 2)))
}

/// `sin(kπ/12)` for `k ∈ [0, 24)`.
fn sin_twelfth(k: i64) -> Scalar {
    let (k, sign) = if k >= 12 { (k - 12, -1) } else { (k, 1) };
    let k = if k > 6 { 12 - k } else { k };
    let r = |n: i64, d: i64| rat(sign * n, d);
    match k {
        0 => Scalar::zero(),
        // (√6 − √2)/4
        1 => Scalar::term(r(1, 4), Surd::Sqrt6, 0) + Scalar::term(r(-1, 4), Surd::Sqrt2, 0),
        2 => Scalar::from_rational(r(1, 2)),
        3 => Scalar::term(r(1, 2), Surd::Sqrt2, 0),
        4 => Scalar::term(r(1, 2), Surd::Sqrt3, 0),
        5 => Scalar::term(r(1, 4), Surd::Sqrt6, 0) + Scalar::term(r(1, 4), Surd::Sqrt2, 0),
        6 => Scalar::from_rational(r(1, 1)),
        _ => unreachable!(),
    }
}

/// Rigorous rational enclosure `lo < π < hi` with width about `10^-digits`.
///
/// Machin's formula `π = 16·atan(1/5) − 4·atan(1/239)` is summed in scaled
/// integer arithmetic with ten guard digits; every truncating division
/// contributes at most one unit, which bounds the enclosure width.
pub fn pi_enclosure(digits: u32) -> (BigRational, BigRational) {
    let guard = 10;
    let scale = num_traits::pow(BigInt::from(10), (digits + guard) as usize);
    let (a, na) = atan_inv_scaled(5, &scale);
    let (b, nb) = atan_inv_scaled(239, &scale);
    let approx = a * 16 - b * 4;
    // each atan sum is off by at most (terms + 1) units before scaling by 16 or 4
    let err = BigInt::from(16 * (na + 1) + 4 * (nb + 1) + 1);
    (
        BigRational::new(&approx - &err, scale.clone()),
        BigRational::new(approx + err, scale),
    )
}

/// `atan(1/x)·scale` truncated term by term, with the number of terms used.
fn atan_inv_scaled(x: i64, scale: &BigInt) -> (BigInt, u64) {
    let x2 = BigInt::from(x * x);
    let mut power = scale / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    (sum, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn surd_products() {
        assert_eq!(Surd::Sqrt2.mul(Surd::Sqrt3), (1, Surd::Sqrt6));
        assert_eq!(Surd::Sqrt6.mul(Surd::Sqrt3), (3, Surd::Sqrt2));
        assert_eq!(Surd::Sqrt6.mul(Surd::Sqrt6), (6, Surd::One));
        let r3 = Scalar::sqrt(Surd::Sqrt3);
        assert_eq!(&r3 * &r3, Scalar::from_int(3));
    }

    #[test]
    fn exact_trig_table() {
        for k in -30..30 {
            let q = rat(k, 12);
            let s = sin_pi(&q).unwrap().to_f64();
            let c = cos_pi(&q).unwrap().to_f64();
            let x = std::f64::consts::PI * k as f64 / 12.0;
            assert!((s - x.sin()).abs() < 1e-14, "sin {k}");
            assert!((c - x.cos()).abs() < 1e-14, "cos {k}");
        }
        assert!(sin_pi(&rat(1, 5)).is_none());
        assert!(sin_pi(&rat(1, 3)).is_some());
    }

    #[test]
    fn pi_enclosure_contains_pi() {
        // 40 digits of π
        let reference = parse_rational("3.1415926535897932384626433832795028841971").unwrap();
        for d in [5, 30] {
            let (lo, hi) = pi_enclosure(d);
            assert!(lo < reference && reference < hi);
            assert!(rat_to_f64(&(&hi - &lo)) < 10f64.powi(-(d as i32) + 1));
        }
        let (lo60, hi60) = pi_enclosure(60);
        let (lo30, hi30) = pi_enclosure(30);
        assert!(lo30 < lo60 && hi60 < hi30);
    }

    #[test]
    fn json_round_trip() {
        let x = Scalar::term(rat(3, 32), Surd::Sqrt3, 2) + Scalar::from_ratio(-7, 5) + Scalar::pi_pow(-1);
        let back = Scalar::from_json_map(&x.to_json_map()).unwrap();
        assert_eq!(x, back);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("3/100").unwrap(), rat(3, 100));
        assert_eq!(parse_rational("1.39").unwrap(), rat(139, 100));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7, 1));
        assert!(parse_rational("1/0").is_err());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((-20i64..20, 1i64..9, 0usize..4, -2i32..3), 0..5).prop_map(|ts| {
            ts.into_iter()
                .map(|(n, d, s, k)| Scalar::term(rat(n, d), Surd::ALL[s], k))
                .fold(Scalar::zero(), |a, b| a + b)
        })
    }

    proptest! {
        #[test]
        fn ring_matches_floats(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            let lhs = (&(&a + &b) * &c).to_f64();
            let rhs = (&a * &c).to_f64() + (&b * &c).to_f64();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!((&a - &a).is_zero());
        }
    }
}
