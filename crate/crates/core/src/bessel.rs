//! Bessel functions of the first kind of real order and their first two
//! positive zeros.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// First two zeros of the Airy function `Ai`.
pub const AIRY_A1: f64 = -2.338107410;
pub const AIRY_A2: f64 = -4.087949444;

pub const MAX_ORDER: f64 = 200.0;
pub const MAX_ARG: f64 = 500.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BesselError {
    #[error("J_v(x) requested outside 0 <= v <= {MAX_ORDER}, 0 < x <= {MAX_ARG}: v = {v}, x = {x}")]
    UnsupportedOrder { v: f64, x: f64 },
    #[error("only the first two zeros are supported, got k = {0}")]
    UnsupportedIndex(u32),
    #[error("no sign change of J_{v} in [{lo}, {hi}]")]
    BracketFailure { v: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselZero {
    pub order: f64,
    pub index: u32,
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub residual: f64,
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (v, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return v;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, 0.5 * tol, depth - 1) + adaptive(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss–Kronrod over `[a, b]`, pre-split into `pieces` panels.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| adaptive(&f, a + i as f64 * h, a + (i + 1) as f64 * h, tol / pieces as f64, 40))
        .sum()
}

/// `J_v(x)` from the integral representation valid for real `v ≥ 0`.
pub fn eval_j(v: f64, x: f64) -> Result<f64, BesselError> {
    if !(0.0..=MAX_ORDER).contains(&v) || !(x > 0.0 && x <= MAX_ARG) {
        return Err(BesselError::UnsupportedOrder { v, x });
    }
    let tol = 1e-13;
    let pieces = 4 + ((v + x) / 4.0).ceil() as usize;
    let first = integrate(|t| (v * t - x * t.sin()).cos(), 0.0, PI, pieces, tol * PI) / PI;
    let sin_vpi = (v * PI).sin();
    if v.fract() == 0.0 || sin_vpi == 0.0 {
        return Ok(first);
    }
    // truncate where the integrand drops below 1e-18
    let cut = 18.0 * std::f64::consts::LN_10;
    let g = |t: f64| v * t + x * t.sinh();
    let (mut lo, mut hi) = (0.0, 1.0);
    while g(hi) < cut {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if g(m) < cut {
            lo = m;
        } else {
            hi = m;
        }
    }
    let second = integrate(|t| (-g(t)).exp(), 0.0, hi, 8, tol);
    Ok(first - sin_vpi / PI * second)
}

/// Qu–Wong bounds `lo < j_{v,k} < hi` for `k ∈ {1, 2}`.
pub fn quwong_bracket(v: f64, k: u32) -> Result<(f64, f64), BesselError> {
    let a = match k {
        1 => AIRY_A1,
        2 => AIRY_A2,
        _ => return Err(BesselError::UnsupportedIndex(k)),
    };
    let c2 = 2f64.cbrt();
    let cv = v.cbrt();
    let lo = v - a / c2 * cv;
    Ok((lo, lo + 0.15 * a * a * c2 / cv))
}

/// Brent's method on a bracket with `f(a)·f(b) < 0`.
fn brent(f: impl Fn(f64) -> Result<f64, BesselError>, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<f64, BesselError> {
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 1e-15;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Ok(b)
}

/// `k`-th positive zero of `J_v`, refined inside its Qu–Wong bracket.
pub fn zero(v: f64, k: u32) -> Result<BesselZero, BesselError> {
    let (lo, hi) = quwong_bracket(v, k)?;
    if !(v > 0.0) || hi > MAX_ARG || v > MAX_ORDER {
        return Err(BesselError::UnsupportedOrder { v, x: hi });
    }
    // the bracket for k = 2 can reach below j_{v,1} at small order
    let start = if k == 2 { lo.max(zero(v, 1)?.value + 0.5) } else { lo };
    let j = |x: f64| eval_j(v, x);
    let (fa, fb) = (j(start)?, j(hi)?);
    if fa * fb >= 0.0 {
        return Err(BesselError::BracketFailure { v, lo: start, hi });
    }
    let value = brent(j, start, hi, fa, fb)?;
    let residual = j(value)?.abs();
    Ok(BesselZero {
        order: v,
        index: k,
        lo,
        hi,
        value,
        residual,
    })
}
