//! Binary fixed-point numbers with about 67 significant decimal digits, used
//! when an integral leaves the exact scalar field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::exact::{pi_enclosure, Scalar};

const BITS: usize = 224;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

static PI: Lazy<Fixed> = Lazy::new(|| Fixed::from_rational(&pi_enclosure(80).0));
static INV_PI: Lazy<Fixed> = Lazy::new(|| Fixed((BigInt::from(1) << (2 * BITS)) / &PI.0));

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Fixed((q.numer() << BITS) / q.denom())
    }

    pub fn pi() -> Self {
        PI.clone()
    }

    pub fn pi_pow(k: i32) -> Self {
        let base = if k >= 0 { &*PI } else { &*INV_PI };
        let mut out = Fixed(BigInt::from(1) << BITS);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(base);
        }
        out
    }

    pub fn sqrt_int(n: u32) -> Self {
        Fixed((BigInt::from(n) << (2 * BITS)).sqrt())
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> BITS)
    }

    pub fn from_scalar(s: &Scalar) -> Fixed {
        let mut out = Fixed::zero();
        for (surd, k, q) in s.terms() {
            let t = Fixed::from_rational(q)
                .mul(&Fixed::sqrt_int(surd.radicand()))
                .mul(&Fixed::pi_pow(k));
            out = out.add(&t);
        }
        out
    }

    /// `sin(πq)` by Taylor series after reducing `q` to `[-1, 1)`.
    pub fn sin_pi(q: &BigRational) -> Fixed {
        let r = super::phase_mod2(q);
        let one = BigRational::from_integer(1.into());
        let (r, neg) = if r >= one { (r - one, true) } else { (r, false) };
        // sin(πr) with r ∈ [0,1) equals sin(π(1 − r)); use the smaller argument
        let half = BigRational::new(1.into(), 2.into());
        let r = if r > half { BigRational::from_integer(1.into()) - r } else { r };
        let x = Fixed::from_rational(&r).mul(&PI);
        let x2 = x.mul(&x);
        let mut term = x.clone();
        let mut sum = x;
        let mut k: i64 = 1;
        while !term.0.is_zero() {
            term = term.mul(&x2);
            term = Fixed(-&term.0 / BigInt::from((2 * k) * (2 * k + 1)));
            sum = sum.add(&term);
            k += 1;
        }
        if neg {
            Fixed(-sum.0)
        } else {
            sum
        }
    }

    pub fn cos_pi(q: &BigRational) -> Fixed {
        Fixed::sin_pi(&(q + BigRational::new(1.into(), 2.into())))
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.0.bits().saturating_sub(60) as usize;
        let top = (&self.0 >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - BITS as i32)
    }

    pub fn abs(&self) -> Fixed {
        Fixed(self.0.abs())
    }

    /// Decimal rendering with `digits` fractional digits (truncated).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled = (self.0.abs() * num_traits::pow(BigInt::from(10), digits)) >> BITS;
        let s = format!("{:0>width$}", scaled.to_string(), width = digits + 1);
        let (ip, fp) = s.split_at(s.len() - digits);
        let sign = if self.0.is_negative() { "-" } else { "" };
        format!("{sign}{ip}.{fp}")
    }
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(40))
    }
}
