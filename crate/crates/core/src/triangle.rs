//! Triangle representation and derived geometry.
//!
//! Triangles are kept as sorted side lengths. The canonical scaled form has
//! shortest side 1, middle side `M` and longest side `N`, and is placed with
//! vertices `(0,0)`, `(1,0)`, `(u,v)` so that `(u,v)` is at distance `M` from
//! the origin and `N` from `(1,0)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack below which `1 + M - N` is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate triangle: sides {0:?}")]
    DegenerateTriangle([f64; 3]),
    #[error("invalid side length {0}")]
    InvalidSide(f64),
    #[error("cannot parse triangle from {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    sides: [f64; 3],
}

/// Result of [`Triangle::normalize`]: the scaled triangle and the factor it
/// was divided by. Eigenvalues of the original are those of `triangle`
/// multiplied by `scale⁻²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalized {
    pub triangle: Triangle,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleMetrics {
    /// Sorted side lengths in the triangle's own units.
    pub sides: [f64; 3],
    pub area: f64,
    pub diameter: f64,
    pub perimeter: f64,
    pub inradius: f64,
    /// Shortest altitude, `2A/d`.
    pub h_min: f64,
    /// Longest altitude, `2A/s₁`.
    pub h_max: f64,
    /// Smallest angle (opposite the shortest side), radians.
    pub gamma: f64,
    pub acute: bool,
    /// Placement of the normalized triangle: apex `(u, v)`.
    pub u: f64,
    pub v: f64,
    /// Chart coordinates of the normalized triangle.
    pub m: f64,
    pub n: f64,
}

impl Triangle {
    pub fn from_sides(a: f64, b: f64, c: f64) -> Result<Self, GeometryError> {
        for s in [a, b, c] {
            if !(s.is_finite() && s > 0.0) {
                return Err(GeometryError::InvalidSide(s));
            }
        }
        let mut sides = [a, b, c];
        sides.sort_by(|x, y| x.total_cmp(y));
        let slack = (sides[0] + sides[1] - sides[2]) / sides[0];
        if slack <= DEGENERACY_TOL {
            return Err(GeometryError::DegenerateTriangle(sides));
        }
        Ok(Triangle { sides })
    }

    pub fn from_vertices(p: [[f64; 2]; 3]) -> Result<Self, GeometryError> {
        let d = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
        Self::from_sides(d(p[0], p[1]), d(p[1], p[2]), d(p[2], p[0]))
    }

    /// Normalized triangle with chart coordinates `U = N - M`, `M`.
    pub fn from_um(u: f64, m: f64) -> Result<Self, GeometryError> {
        if !(0.0..1.0).contains(&u) || !(m >= 1.0) {
            return Err(GeometryError::DegenerateTriangle([1.0, m, m + u]));
        }
        Self::from_sides(1.0, m, m + u)
    }

    pub fn equilateral() -> Self {
        Triangle { sides: [1.0; 3] }
    }

    pub fn sides(&self) -> [f64; 3] {
        self.sides
    }

    pub fn normalize(&self) -> Normalized {
        let s = self.sides[0];
        Normalized {
            triangle: Triangle {
                sides: [1.0, self.sides[1] / s, self.sides[2] / s],
            },
            scale: s,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Triangle {
            sides: self.sides.map(|s| s * factor),
        }
    }

    /// Middle side of the normalized triangle.
    pub fn m(&self) -> f64 {
        self.sides[1] / self.sides[0]
    }

    /// Longest side of the normalized triangle.
    pub fn n(&self) -> f64 {
        self.sides[2] / self.sides[0]
    }

    pub fn u(&self) -> f64 {
        self.n() - self.m()
    }

    /// Apex `(u, v)` of the normalized placement.
    pub fn placement(&self) -> (f64, f64) {
        placement(self.m(), self.n())
    }

    pub fn is_acute(&self) -> bool {
        let (m, n) = (self.m(), self.n());
        n * n < m * m + 1.0
    }

    pub fn metrics(&self) -> TriangleMetrics {
        let s = self.sides[0];
        let (m, n) = (self.m(), self.n());
        let (u, v) = placement(m, n);
        let area = 0.5 * v * s * s;
        let diameter = self.sides[2];
        let perimeter = self.sides.iter().sum::<f64>();
        let cos_g = ((m * m + n * n - 1.0) / (2.0 * m * n)).clamp(-1.0, 1.0);
        TriangleMetrics {
            sides: self.sides,
            area,
            diameter,
            perimeter,
            inradius: 2.0 * area / perimeter,
            h_min: 2.0 * area / diameter,
            h_max: 2.0 * area / s,
            gamma: cos_g.acos(),
            acute: n * n < m * m + 1.0,
            u,
            v,
            m,
            n,
        }
    }

    /// Vertices of the triangle at its own scale, placed with the shortest
    /// side on the x-axis.
    pub fn vertices(&self) -> [[f64; 2]; 3] {
        let s = self.sides[0];
        let (u, v) = self.placement();
        [[0.0, 0.0], [s, 0.0], [u * s, v * s]]
    }

    /// Heron's formula, used to cross-check [`TriangleMetrics::area`].
    pub fn heron_area(&self) -> f64 {
        let [a, b, c] = self.sides;
        // Kahan's stable ordering (a ≤ b ≤ c).
        let t = (c + (b + a)) * (a - (c - b)) * (a + (c - b)) * (c + (b - a));
        0.25 * t.max(0.0).sqrt()
    }
}

/// Apex of the triangle with base `[(0,0),(1,0)]`, left side `left` and right
/// side `right`.
pub fn placement(left: f64, right: f64) -> (f64, f64) {
    let u = 0.5 * (1.0 + left * left - right * right);
    let v2 = (left - u) * (left + u);
    (u, v2.max(0.0).sqrt())
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.sides;
        write!(f, "{a},{b},{c}")
    }
}

impl FromStr for Triangle {
    type Err = GeometryError;

    /// Accepts `"a,b,c"` side lists or `"x1,y1;x2,y2;x3,y3"` vertex lists.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeometryError::Parse(s.to_string());
        let nums = |part: &str| -> Result<Vec<f64>, GeometryError> {
            part.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
                .collect()
        };
        if s.contains(';') {
            let pts: Vec<Vec<f64>> = s.split(';').map(nums).collect::<Result<_, _>>()?;
            if pts.len() != 3 || pts.iter().any(|p| p.len() != 2) {
                return Err(bad());
            }
            Triangle::from_vertices([
                [pts[0][0], pts[0][1]],
                [pts[1][0], pts[1][1]],
                [pts[2][0], pts[2][1]],
            ])
        } else {
            let v = nums(s)?;
            if v.len() != 3 {
                return Err(bad());
            }
            Triangle::from_sides(v[0], v[1], v[2])
        }
    }
}

/// Reference triangles onto which test functions are pulled back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReferenceTriangle {
    /// Equilateral `(0,0), (1,0), (1/2, √3/2)`.
    Equilateral,
    /// Right triangle with angles 30°/60°: `(1/2,0), (1,0), (1/2, √3/2)`.
    HalfEquilateral,
    /// Right isosceles `(0,0), (1,0), (0,1)`.
    RightIsosceles,
}

impl ReferenceTriangle {
    pub fn vertices(self) -> [[f64; 2]; 3] {
        let h = 0.75f64.sqrt();
        match self {
            ReferenceTriangle::Equilateral => [[0.0, 0.0], [1.0, 0.0], [0.5, h]],
            ReferenceTriangle::HalfEquilateral => [[0.5, 0.0], [1.0, 0.0], [0.5, h]],
            ReferenceTriangle::RightIsosceles => [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        }
    }
}

/// Affine map `x ↦ J·x + offset` together with `K = J·Jᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    pub j: [[f64; 2]; 2],
    pub k: [[f64; 2]; 2],
    pub det: f64,
    pub offset: [f64; 2],
}

impl LinearMap {
    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let j = &self.j;
        [
            j[0][0] * p[0] + j[0][1] * p[1] + self.offset[0],
            j[1][0] * p[0] + j[1][1] * p[1] + self.offset[1],
        ]
    }
}

/// Map carrying the placement `(0,0), (1,0), (u,v)` of the normalized
/// triangle onto `reference`, vertex by vertex.
pub fn map_to_reference(t: &Triangle, reference: ReferenceTriangle) -> Result<LinearMap, GeometryError> {
    let (u, v) = t.placement();
    map_from_placement(u, v, reference)
}

pub fn map_from_placement(u: f64, v: f64, reference: ReferenceTriangle) -> Result<LinearMap, GeometryError> {
    if !(v > 0.0) {
        return Err(GeometryError::DegenerateTriangle([1.0, u, v]));
    }
    let [w0, w1, w2] = reference.vertices();
    let e1 = [w1[0] - w0[0], w1[1] - w0[1]];
    let c2 = [
        (w2[0] - w0[0] - u * e1[0]) / v,
        (w2[1] - w0[1] - u * e1[1]) / v,
    ];
    let j = [[e1[0], c2[0]], [e1[1], c2[1]]];
    let k = [
        [j[0][0] * j[0][0] + j[0][1] * j[0][1], j[0][0] * j[1][0] + j[0][1] * j[1][1]],
        [j[1][0] * j[0][0] + j[1][1] * j[0][1], j[1][0] * j[1][0] + j[1][1] * j[1][1]],
    ];
    Ok(LinearMap {
        j,
        k,
        det: j[0][0] * j[1][1] - j[0][1] * j[1][0],
        offset: w0,
    })
}

/// Angle at `b` in the triangle `a b c`.
pub fn angle_at(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let (x1, y1) = (a[0] - b[0], a[1] - b[1]);
    let (x2, y2) = (c[0] - b[0], c[1] - b[1]);
    (x1 * y2 - y1 * x2).abs().atan2(x1 * x2 + y1 * y2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn normalize_examples() {
        let s2 = 2f64.sqrt();
        let n = Triangle::from_sides(2.0, 2.0, 2.0 * s2).unwrap().normalize();
        assert_eq!(n.scale, 2.0);
        assert!(close(n.triangle.n(), s2, 1e-15));
        let e = Triangle::from_sides(1.0, 1.0, 1.0).unwrap().normalize();
        assert_eq!((e.triangle.u(), e.triangle.m()), (0.0, 1.0));
        let h = Triangle::from_sides(3f64.sqrt(), 2.0, 1.0).unwrap().normalize();
        assert!(close(h.triangle.m(), 3f64.sqrt(), 1e-15));
        assert!(close(h.triangle.u(), 2.0 - 3f64.sqrt(), 1e-14));
    }

    #[test]
    fn degenerate_rejected() {
        assert!(matches!(
            Triangle::from_sides(1.0, 1.0, 2.0),
            Err(GeometryError::DegenerateTriangle(_))
        ));
        assert!(Triangle::from_sides(1.0, 1.0, 1.9999).is_ok());
        assert!(Triangle::from_sides(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn metrics_right_isosceles() {
        let m = Triangle::from_sides(1.0, 1.0, 2f64.sqrt()).unwrap().metrics();
        assert!(close(m.area, 0.5, 1e-14));
        assert!(close(m.diameter, 2f64.sqrt(), 1e-15));
        assert!(close(m.h_min, 1.0 / 2f64.sqrt(), 1e-14));
        assert!(close(m.inradius, (2.0 - 2f64.sqrt()) / 2.0, 1e-14));
        assert!(close(m.gamma, PI / 4.0, 1e-12));
        // right angle sits on the acute/obtuse boundary
        assert!(!m.acute);
    }

    #[test]
    fn metrics_half_equilateral() {
        let r3 = 3f64.sqrt();
        let m = Triangle::from_sides(1.0, r3, 2.0).unwrap().metrics();
        assert!(close(m.area, r3 / 2.0, 1e-14));
        assert!(close(m.diameter, 2.0, 1e-15));
        assert!(close(m.h_min, r3 / 2.0, 1e-14));
        assert!(close(m.inradius, (r3 - 1.0) / 2.0, 1e-14));
        assert!(close(m.gamma, PI / 6.0, 1e-12));
    }

    #[test]
    fn metrics_equilateral() {
        let m = Triangle::equilateral().metrics();
        assert!(close(m.area, 3f64.sqrt() / 4.0, 1e-15));
        assert!(close(m.inradius, 1.0 / (2.0 * 3f64.sqrt()), 1e-14));
        assert!(close(m.gamma, PI / 3.0, 1e-7));
        assert!(m.acute);
    }

    #[test]
    fn reference_maps() {
        let e = Triangle::equilateral();
        let l = map_to_reference(&e, ReferenceTriangle::Equilateral).unwrap();
        for (r, c) in l.j.iter().flatten().zip([1.0, 0.0, 0.0, 1.0]) {
            assert!((r - c).abs() < 1e-12);
        }
        let l = map_from_placement(0.5, 0.5, ReferenceTriangle::Equilateral).unwrap();
        assert!((l.j[0][1]).abs() < 1e-15 && (l.j[1][1] - 3f64.sqrt()).abs() < 1e-15);
        let t = Triangle::from_sides(1.0, 1.3, 1.7).unwrap();
        let (_, v) = t.placement();
        let l = map_to_reference(&t, ReferenceTriangle::Equilateral).unwrap();
        assert!((l.det - 0.75f64.sqrt() / v).abs() < 1e-12);
    }

    #[test]
    fn map_carries_vertices() {
        let t = Triangle::from_sides(1.0, 1.2, 1.9).unwrap();
        let (u, v) = t.placement();
        for r in [
            ReferenceTriangle::Equilateral,
            ReferenceTriangle::HalfEquilateral,
            ReferenceTriangle::RightIsosceles,
        ] {
            let l = map_to_reference(&t, r).unwrap();
            for (p, w) in [[0.0, 0.0], [1.0, 0.0], [u, v]].into_iter().zip(r.vertices()) {
                let q = l.apply(p);
                assert!((q[0] - w[0]).abs() < 1e-12 && (q[1] - w[1]).abs() < 1e-12);
            }
            assert!(l.det > 0.0);
        }
    }

    #[test]
    fn parse_forms() {
        let t: Triangle = "1, 1, 1".parse().unwrap();
        assert_eq!(t.sides(), [1.0; 3]);
        let t: Triangle = "0,0;1,0;0,1".parse().unwrap();
        assert!((t.n() - 2f64.sqrt()).abs() < 1e-15);
        assert!("1,2".parse::<Triangle>().is_err());
        assert!("a,b,c".parse::<Triangle>().is_err());
    }
}
