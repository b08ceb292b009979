//! Closed-form lower bounds for the first Dirichlet eigenvalue of a triangle.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bessel::{self, BesselError};
use crate::triangle::TriangleMetrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    Polya,
    Protter,
    Freitas,
    RectThm,
    SectorThm,
    SectorContaining,
    /// Variational upper bound for `λ₂`.
    Variational,
    /// Large-M analytic bound for `λ₂/λ₁`.
    LargeM,
}

impl Method {
    /// Lower-bound methods in tie-breaking order.
    pub const LOWER: [Method; 6] = [
        Method::Polya,
        Method::Protter,
        Method::Freitas,
        Method::RectThm,
        Method::SectorThm,
        Method::SectorContaining,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Polya => "Polya",
            Method::Protter => "Protter",
            Method::Freitas => "Freitas",
            Method::RectThm => "RectThm",
            Method::SectorThm => "SectorThm",
            Method::SectorContaining => "SectorContaining",
            Method::Variational => "Variational",
            Method::LargeM => "LargeM",
        }
    }

    pub fn needs_bessel(self) -> bool {
        matches!(self, Method::SectorThm | Method::SectorContaining)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let all = [
            Method::Polya,
            Method::Protter,
            Method::Freitas,
            Method::RectThm,
            Method::SectorThm,
            Method::SectorContaining,
            Method::Variational,
            Method::LargeM,
        ];
        all.into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub method: Method,
    pub direction: Direction,
    pub value: f64,
    /// True when the bound is attained by this triangle.
    pub tight: bool,
}

impl BoundResult {
    fn lower(method: Method, value: f64, tight: bool) -> Self {
        BoundResult {
            method,
            direction: Direction::Lower,
            value,
            tight,
        }
    }
}

fn is_equilateral(m: &TriangleMetrics) -> bool {
    (m.n - 1.0).abs() < 1e-12
}

/// `4√3π²/(3A)`, attained by the equilateral triangle.
pub fn polya(m: &TriangleMetrics) -> BoundResult {
    let v = 4.0 * 3f64.sqrt() * PI * PI / (3.0 * m.area);
    BoundResult::lower(Method::Polya, v, is_equilateral(m))
}

/// `(π²/4)(R⁻² + d⁻²)`.
pub fn protter(m: &TriangleMetrics) -> BoundResult {
    let v = PI * PI / 4.0 * (m.inradius.powi(-2) + m.diameter.powi(-2));
    BoundResult::lower(Method::Protter, v, false)
}

/// `π²(4/d² + d²/(4A²))`.
pub fn freitas(m: &TriangleMetrics) -> BoundResult {
    let d2 = m.diameter * m.diameter;
    let v = PI * PI * (4.0 / d2 + d2 / (4.0 * m.area * m.area));
    BoundResult::lower(Method::Freitas, v, false)
}

/// `π²(4/(d² + h²) + (d² + h²)/(4A²))` with `h` the shortest altitude.
pub fn rect_bound(m: &TriangleMetrics) -> BoundResult {
    let s = m.diameter * m.diameter + m.h_min * m.h_min;
    let v = PI * PI * (4.0 / s + s / (4.0 * m.area * m.area));
    BoundResult::lower(Method::RectThm, v, false)
}

/// First eigenvalue of the sector with the triangle's area and smallest angle.
pub fn sector_bound(m: &TriangleMetrics) -> Result<BoundResult, BesselError> {
    let j = bessel::zero(PI / m.gamma, 1)?.value;
    Ok(BoundResult::lower(Method::SectorThm, j * j * m.gamma / (2.0 * m.area), false))
}

/// First eigenvalue of the smallest sector containing the triangle, `j²/N²`
/// at the triangle's own scale.
pub fn sector_containing_bound(m: &TriangleMetrics) -> Result<BoundResult, BesselError> {
    let j = bessel::zero(PI / m.gamma, 1)?.value;
    Ok(BoundResult::lower(Method::SectorContaining, j * j / (m.diameter * m.diameter), false))
}

pub fn bound(m: &TriangleMetrics, method: Method) -> Result<BoundResult, BesselError> {
    Ok(match method {
        Method::Polya => polya(m),
        Method::Protter => protter(m),
        Method::Freitas => freitas(m),
        Method::RectThm => rect_bound(m),
        Method::SectorThm => sector_bound(m)?,
        Method::SectorContaining => sector_containing_bound(m)?,
        other => panic!("{other} is not a lower bound for the first eigenvalue"),
    })
}

/// Largest of the requested lower bounds; ties (within `1e-12` relative) go
/// to the earlier method in [`Method::LOWER`].
pub fn best_lower(m: &TriangleMetrics, methods: &[Method]) -> Result<BoundResult, BesselError> {
    let mut ordered: Vec<Method> = Method::LOWER.into_iter().filter(|x| methods.contains(x)).collect();
    ordered.dedup();
    let mut best: Option<BoundResult> = None;
    for method in ordered {
        let b = bound(m, method)?;
        if best.is_none_or(|cur| b.value > cur.value * (1.0 + 1e-12)) {
            best = Some(b);
        }
    }
    Ok(best.expect("at least one method requested"))
}

/// Default method set: the closed-form bounds plus the sector bound.
pub const DEFAULT_METHODS: [Method; 5] = [
    Method::Polya,
    Method::Protter,
    Method::Freitas,
    Method::RectThm,
    Method::SectorThm,
];

/// True when the Freitas bound is at least the Pólya bound, i.e. `d > 2h√3`.
pub fn crossover_predicate(m: &TriangleMetrics) -> bool {
    // With y = d/(2h), Freitas − Pólya ∝ y + 1/y − 4/√3 which is nonnegative
    // outside [1/√3, √3]; y ≥ 1/√3 always holds for the shortest altitude.
    m.diameter > 2.0 * m.h_min * 3f64.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangle::Triangle;

    fn metrics(a: f64, b: f64, c: f64) -> TriangleMetrics {
        Triangle::from_sides(a, b, c).unwrap().metrics()
    }

    fn near(x: f64, want: f64) {
        assert!((x - want).abs() <= 5e-4, "{x} vs {want}");
    }

    #[test]
    fn table_right_isosceles() {
        let m = metrics(1.0, 1.0, 2f64.sqrt());
        near(polya(&m).value, 45.5858);
        near(freitas(&m).value, 39.4784);
        near(protter(&m).value, 29.9958);
        near(rect_bound(&m).value, 40.4654);
        near(sector_bound(&m).unwrap().value, 45.2255);
        assert!((sector_containing_bound(&m).unwrap().value - 28.79).abs() < 5e-3);
        let best = best_lower(&m, &DEFAULT_METHODS).unwrap();
        assert_eq!(best.method, Method::Polya);
    }

    #[test]
    fn table_half_equilateral() {
        let m = metrics(1.0, 3f64.sqrt(), 2.0);
        near(polya(&m).value, 26.3189);
        near(freitas(&m).value, 23.0291);
        near(protter(&m).value, 19.0338);
        near(rect_bound(&m).value, 23.9381);
        near(sector_bound(&m).unwrap().value, 29.8449);
    }

    #[test]
    fn table_tall_isosceles() {
        let m = metrics(1.0, 2.0, 2.0);
        near(polya(&m).value, 23.5404);
        near(freitas(&m).value, 20.3972);
        near(protter(&m).value, 17.0662);
        near(rect_bound(&m).value, 20.9906);
        near(sector_bound(&m).unwrap().value, 27.0781);
        let m = metrics(1.0, 4.0, 4.0);
        near(polya(&m).value, 11.4865);
        near(freitas(&m).value, 12.4937);
        near(protter(&m).value, 12.8437);
        near(rect_bound(&m).value, 12.9675);
        near(sector_bound(&m).unwrap().value, 18.8754);
    }

    #[test]
    fn table_wide_isosceles() {
        let m = metrics(1.95, 1.0, 1.0);
        near(polya(&m).value, 105.206);
        near(freitas(&m).value, 210.273);
        near(protter(&m).value, 205.698);
        near(rect_bound(&m).value, 212.735);
        near(sector_bound(&m).unwrap().value, 185.161);
        assert_eq!(best_lower(&m, &DEFAULT_METHODS).unwrap().method, Method::RectThm);
        assert!(crossover_predicate(&m));
    }

    #[test]
    fn equilateral_cases() {
        let m = Triangle::equilateral().metrics();
        let p = polya(&m);
        assert!(p.tight);
        assert!((p.value / (16.0 * PI * PI / 3.0) - 1.0).abs() < 1e-10);
        let r = rect_bound(&m).value;
        assert!((r - PI * PI * (16.0 / 7.0 + 7.0 / 3.0)).abs() < 1e-9);
        assert!(r < p.value);
        let j3 = 6.380161895923984;
        assert!((sector_containing_bound(&m).unwrap().value - j3 * j3).abs() < 1e-8);
        assert!(!crossover_predicate(&m));
        assert_eq!(best_lower(&m, &DEFAULT_METHODS).unwrap().method, Method::Polya);
    }

    #[test]
    fn crossover_boundary() {
        // isosceles with d = 2h√3 exactly: base 1, apex height chosen so that
        // the shortest altitude h = d/(2√3)
        let d: f64 = 1.0;
        let h = d / (2.0 * 3f64.sqrt());
        let side = (0.25 + h * h).sqrt();
        let m = metrics(side, side, d);
        assert!((freitas(&m).value - polya(&m).value).abs() < 1e-10 * polya(&m).value);
    }

    #[test]
    fn scale_covariance() {
        let m = metrics(1.0, 1.3, 1.7);
        for s in [2.0, 1.0 / 3.0] {
            let ms = metrics(s, 1.3 * s, 1.7 * s);
            for method in Method::LOWER {
                let (a, b) = (bound(&m, method).unwrap().value, bound(&ms, method).unwrap().value);
                assert!((b * s * s / a - 1.0).abs() < 1e-9, "{method}");
            }
        }
    }
}
