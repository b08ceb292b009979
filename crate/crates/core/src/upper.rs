//! Variational upper bounds for the second Dirichlet eigenvalue and the two
//! spectral-gap inequalities built on them.
//!
//! A trial space `span{f₁∘L, f₂∘L}` is pulled back from a reference triangle
//! by the affine map `L` of the placement `(0,0), (1,0), (u,v)`. Its Rayleigh
//! quotient maximum is a root of a 2×2 pencil whose entries are polynomials
//! in the side lengths, which is what makes the inequalities provable by
//! [`crate::prover`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bessel::{AIRY_A1, AIRY_A2};
use crate::bipoly::{to_pi_poly, BiPoly, PiPoly};
use crate::exact::{format_rational, rat, rat_to_f64, Scalar, Surd};
use crate::lower::{self, BoundResult, Direction, Method};
use crate::prover::{self, Outcome, ProverError, Rect, RectGoal};
use crate::triangle::{map_from_placement, placement, GeometryError, ReferenceTriangle, Triangle};
use crate::trig::{family, gram_constants, GramSet};

/// `λ₂/λ₁ ≤ 7/3` is shown by the analytic bound from this `M` on.
pub const LARGE_M: f64 = 2.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UpperError {
    #[error("Rayleigh pencil denominator is not positive definite")]
    InvalidPencil,
    #[error("large-M bound requires M >= {LARGE_M}, got {0}")]
    OutOfValidity(f64),
    #[error("inequality generation failed: {0}")]
    Generation(String),
    #[error("no case rectangle contains U = {u}, M = {m}")]
    Uncovered { u: f64, m: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// `(λ₂ − λ₁)·R² ≤ 16π²/27` with `λ₁` replaced by its Freitas bound.
    Gap,
    /// `λ₂/λ₁ ≤ 7/3` for acute triangles, with `λ₁` replaced by Pólya's bound.
    Ratio,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::Gap => "gap",
            Theorem::Ratio => "ratio",
        })
    }
}

impl FromStr for Theorem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gap" => Ok(Theorem::Gap),
            "ratio" => Ok(Theorem::Ratio),
            _ => Err(format!("unknown theorem {s:?}")),
        }
    }
}

/// How the triangle is placed before the reference map is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    /// Shortest side as base, left side `M`, right side `N`; prover
    /// variables `(U, M)`.
    Standard,
    /// The similar triangle with the longest side as unit base, left side
    /// `1/N` and right side `M/N`; prover variables `(U′, M′)` with
    /// `M/N = 1 − U′`, `1/N = 2 − U′ − M′`.
    Similar,
    /// Standard placement on the unbounded strip `M ≥ M₀`; with
    /// `M = M₀ + X` every coefficient of `Xᵏ` is proved separately in `U`.
    Strip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub theorem: Theorem,
    pub id: u8,
    pub family: u8,
    pub u: (BigRational, BigRational),
    /// Upper end `None` means unbounded.
    pub m: (BigRational, Option<BigRational>),
    pub transform: Transform,
}

impl CaseSpec {
    pub fn contains(&self, u: f64, m: f64) -> bool {
        let tol = 1e-12;
        let (u0, u1) = (rat_to_f64(&self.u.0), rat_to_f64(&self.u.1));
        let m0 = rat_to_f64(&self.m.0);
        let m1 = self.m.1.as_ref().map_or(f64::INFINITY, rat_to_f64);
        u >= u0 - tol && u <= u1 + tol && m >= m0 - tol && m <= m1 + tol
    }

    pub fn reference(&self) -> ReferenceTriangle {
        family(self.family).reference
    }

    pub fn label(&self) -> String {
        let m1 = self.m.1.as_ref().map_or("inf".to_string(), format_rational);
        format!(
            "{} case {}: family {}, U in [{}, {}], M in [{}, {}]",
            self.theorem,
            self.id,
            self.family,
            format_rational(&self.u.0),
            format_rational(&self.u.1),
            format_rational(&self.m.0),
            m1
        )
    }
}

fn q(n: i64, d: i64) -> BigRational {
    rat(n, d)
}

fn spec(theorem: Theorem, id: u8, family: u8, u: (BigRational, BigRational), m: (BigRational, Option<BigRational>)) -> CaseSpec {
    let transform = match (theorem, id) {
        (Theorem::Gap, 2) => Transform::Similar,
        (_, _) if m.1.is_none() => Transform::Strip,
        _ => Transform::Standard,
    };
    CaseSpec {
        theorem,
        id,
        family,
        u,
        m,
        transform,
    }
}

/// Case rectangles of a theorem in `(U, M)`. The gap rectangles tile
/// `[0,1) × [1,∞)`; the ratio rectangles cover the acute triangles with
/// `M ≤ 2.05`.
pub fn cases(theorem: Theorem) -> Vec<CaseSpec> {
    match theorem {
        Theorem::Gap => vec![
            spec(theorem, 1, 1, (q(0, 1), q(3, 100)), (q(103, 100), Some(q(139, 100)))),
            spec(theorem, 2, 2, (q(0, 1), q(1, 5)), (q(1, 1), Some(q(103, 100)))),
            spec(theorem, 3, 3, (q(0, 1), q(1, 1)), (q(139, 100), None)),
            spec(theorem, 4, 4, (q(1, 5), q(1, 1)), (q(1, 1), Some(q(139, 100)))),
            spec(theorem, 5, 5, (q(3, 100), q(1, 5)), (q(103, 100), Some(q(139, 100)))),
        ],
        // Case 2 is not needed; the family-4 and family-5 trial spaces
        // trade places relative to the gap theorem.
        Theorem::Ratio => vec![
            spec(theorem, 1, 1, (q(0, 1), q(9, 100)), (q(1, 1), Some(q(137, 100)))),
            spec(theorem, 3, 3, (q(0, 1), q(42, 100)), (q(137, 100), Some(q(205, 100)))),
            spec(theorem, 4, 5, (q(9, 100), q(1, 5)), (q(1, 1), Some(q(137, 100)))),
            spec(theorem, 5, 4, (q(1, 5), q(42, 100)), (q(1, 1), Some(q(137, 100)))),
        ],
    }
}

pub fn case(theorem: Theorem, id: u8) -> Option<CaseSpec> {
    cases(theorem).into_iter().find(|c| c.id == id)
}

/// `(U′, M′)` of the similar triangle used by the [`Transform::Similar`] case.
pub fn similar_coordinates(u: f64, m: f64) -> (f64, f64) {
    let n = m + u;
    let up = 1.0 - m / n;
    (up, 2.0 - up - 1.0 / n)
}

/// Numerator `[[a, b/2], [b/2, c]]` and denominator `[[e, g/2], [g/2, f]]`
/// of the Rayleigh quotient of `f₁ + αf₂` (entries for `f₁` first).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayleighPencil {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Copy)]
struct GramF64 {
    mass: f64,
    grad: [[f64; 2]; 2],
}

impl GramF64 {
    fn from(g: &GramSet) -> Self {
        GramF64 {
            mass: g.mass.to_f64(),
            grad: [
                [g.grad[0][0].to_f64(), g.grad[0][1].to_f64()],
                [g.grad[1][0].to_f64(), g.grad[1][1].to_f64()],
            ],
        }
    }

    fn contract(&self, k: &[[f64; 2]; 2]) -> f64 {
        k[0][0] * self.grad[0][0] + k[0][1] * (self.grad[0][1] + self.grad[1][0]) + k[1][1] * self.grad[1][1]
    }
}

static GRAMS_F64: Lazy<BTreeMap<u8, [GramF64; 3]>> = Lazy::new(|| {
    gram_constants()
        .families
        .iter()
        .map(|(&id, g)| (id, [GramF64::from(&g.g11), GramF64::from(&g.g22), GramF64::from(&g.g12)]))
        .collect()
});

/// Pencil of a family on the triangle with base `[(0,0),(1,0)]` and apex
/// `(u, v)`.
pub fn pencil_at(family_id: u8, u: f64, v: f64) -> Result<RayleighPencil, UpperError> {
    let map = map_from_placement(u, v, family(family_id).reference)?;
    let [g11, g22, g12] = GRAMS_F64[&family_id];
    Ok(RayleighPencil {
        a: g11.contract(&map.k),
        b: 2.0 * g12.contract(&map.k),
        c: g22.contract(&map.k),
        e: g11.mass,
        f: g22.mass,
        g: 2.0 * g12.mass,
    })
}

/// Pencil of a case's trial space on `t`, at the scale where the shortest
/// side is 1.
pub fn pencil(t: &Triangle, case: &CaseSpec) -> Result<RayleighPencil, UpperError> {
    let t = t.normalize().triangle;
    let (m, n) = (t.m(), t.n());
    match case.transform {
        Transform::Standard | Transform::Strip => {
            let (u, v) = t.placement();
            pencil_at(case.family, u, v)
        }
        Transform::Similar => {
            // eigenvalues of the copy scaled by 1/N are N² times larger
            let (u, v) = placement(1.0 / n, m / n);
            let p = pencil_at(case.family, u, v)?;
            let s = 1.0 / (n * n);
            Ok(RayleighPencil {
                a: p.a * s,
                b: p.b * s,
                c: p.c * s,
                ..p
            })
        }
    }
}

/// Maximum of the Rayleigh quotient over the trial space: the larger root
/// of `det(Num − λ·Den) = 0`.
pub fn pencil_max(p: &RayleighPencil) -> Result<f64, UpperError> {
    let aq = p.e * p.f - p.g * p.g / 4.0;
    if !(p.e > 0.0 && aq > 0.0) {
        return Err(UpperError::InvalidPencil);
    }
    let bq = p.a * p.f + p.c * p.e - p.b * p.g / 2.0;
    let cq = p.a * p.c - p.b * p.b / 4.0;
    let dq = (bq * bq - 4.0 * aq * cq).max(0.0);
    Ok((bq + dq.sqrt()) / (2.0 * aq))
}

fn min_over(t: &Triangle, cases: &[CaseSpec]) -> Result<f64, UpperError> {
    let nt = t.normalize().triangle;
    let (u, m) = (nt.u(), nt.m());
    let mut best: Option<f64> = None;
    for c in cases.iter().filter(|c| c.contains(u, m)) {
        let v = pencil_max(&pencil(&nt, c)?)?;
        best = Some(best.map_or(v, |b: f64| b.min(v)));
    }
    best.ok_or(UpperError::Uncovered { u, m })
}

/// Upper bound for `λ₂(t)`: the smallest trial-space maximum among the gap
/// cases whose rectangle contains `t`.
pub fn lambda2_upper(t: &Triangle) -> Result<BoundResult, UpperError> {
    let scale = t.normalize().scale;
    let v = min_over(t, &cases(Theorem::Gap))? / (scale * scale);
    Ok(BoundResult {
        method: Method::Variational,
        direction: Direction::Upper,
        value: v,
        tight: false,
    })
}

/// `(λ₂⁺ − λ₁^Freitas)·R²`; the gap theorem asserts this is at most `16π²/27`.
pub fn gap_bound_check(t: &Triangle) -> Result<f64, UpperError> {
    let m = t.metrics();
    let up = lambda2_upper(t)?.value;
    Ok((up - lower::freitas(&m).value) * m.inradius * m.inradius)
}

pub fn gap_constant() -> f64 {
    16.0 * PI * PI / 27.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    /// Upper bound for `λ₂/λ₁`.
    pub value: f64,
    pub method: Method,
    pub acute: bool,
    /// False when the triangle is outside the theorem's hypotheses or the
    /// covered rectangles (the value is then only informative).
    pub valid: bool,
}

/// Bound for `λ₂/λ₁`: trial-space maximum over Pólya's bound below
/// `M = 2.05`, the analytic large-M bound above, the smaller of both at the
/// boundary.
pub fn ratio_bound_check(t: &Triangle) -> Result<RatioCheck, UpperError> {
    let nt = t.normalize().triangle;
    let metrics = nt.metrics();
    let acute = nt.is_acute();
    let polya = lower::polya(&metrics).value;
    let m = nt.m();
    let rect = min_over(&nt, &cases(Theorem::Ratio)).ok().map(|v| v / polya);
    let large = if m >= LARGE_M - 1e-12 {
        Some(large_m_ratio_bound(m.max(LARGE_M))?)
    } else {
        None
    };
    let pick = match (rect, large) {
        (Some(r), Some(l)) if r <= l => Some((r, Method::Variational)),
        (_, Some(l)) => Some((l, Method::LargeM)),
        (Some(r), None) => Some((r, Method::Variational)),
        (None, None) => None,
    };
    Ok(match pick {
        Some((value, method)) => RatioCheck {
            value,
            method,
            acute,
            valid: acute,
        },
        None => RatioCheck {
            value: min_over(&nt, &cases(Theorem::Gap))? / polya,
            method: Method::Variational,
            acute,
            valid: false,
        },
    })
}

/// Constants `c₁..c₄` of the large-M bound, from the first two Airy zeros.
pub fn large_m_constants() -> [f64; 4] {
    let (a1, a2) = (AIRY_A1, AIRY_A2);
    let c2r = 2f64.cbrt();
    [
        (10.0 * a1 - 3.0 * a2) * a2 / (10.0 * a1 * a1),
        -3.0 * a2 * a2 / (10.0 * c2r * a1),
        (10.0 * a1 * a1 - 10.0 * a1 * a2 + 3.0 * a2 * a2) / (10.0 * a1 * a1),
        -a1 / c2r,
    ]
}

/// Bound for `λ₂/λ₁` of an acute triangle whose two longest sides are at
/// least `M`, from sector bounds in the smallest angle.
pub fn large_m_ratio_bound(m: f64) -> Result<f64, UpperError> {
    if !(m >= LARGE_M) {
        return Err(UpperError::OutOfValidity(m));
    }
    let [c1, c2, c3, c4] = large_m_constants();
    let m2 = m * m;
    let z1 = (1.0 + 1.0 / m2).sqrt() / (1.0 - 1.0 / (16.0 * m2));
    let z2 = (1.0 + 1.0 / (2.0 * m2)).sqrt() / (1.0 - 1.0 / (4.0 * m2));
    let y = ((1.0 - 1.0 / (2.0 * m2)).acos() / PI).powf(2.0 / 3.0);
    let w = c1 + c2 * y + c3 / (1.0 + c4 * y);
    Ok(z1.max(z2) * w * w)
}

type SPoly = BiPoly<Scalar>;

fn sconst(s: Scalar) -> SPoly {
    SPoly::constant(s)
}

fn sq(n: i64, d: i64) -> SPoly {
    SPoly::constant(Scalar::from_ratio(n, d))
}

/// Reference vertices with exact coordinates.
fn exact_vertices(r: ReferenceTriangle) -> [[Scalar; 2]; 3] {
    let z = Scalar::zero;
    let f = Scalar::from_ratio;
    let h = Scalar::term(q(1, 2), Surd::Sqrt3, 0);
    match r {
        ReferenceTriangle::Equilateral => [[z(), z()], [f(1, 1), z()], [f(1, 2), h]],
        ReferenceTriangle::HalfEquilateral => [[f(1, 2), z()], [f(1, 1), z()], [f(1, 2), h]],
        ReferenceTriangle::RightIsosceles => [[z(), z()], [f(1, 1), z()], [z(), f(1, 1)]],
    }
}

/// `v²·K` with `K = J·Jᵀ`, `J = [e₁ | (w − u e₁)/v]`, as polynomials.
fn kv2(r: ReferenceTriangle, u: &SPoly, v2: &SPoly) -> [SPoly; 3] {
    let [w0, w1, w2] = exact_vertices(r);
    let e1 = [&w1[0] - &w0[0], &w1[1] - &w0[1]];
    let col = |p: usize| &sconst(&w2[p] - &w0[p]) - &u.scale(&e1[p]);
    let (c0, c1) = (col(0), col(1));
    let e = |p: usize, q: usize| v2.scale(&(&e1[p] * &e1[q]));
    [&e(0, 0) + &(&c0 * &c0), &e(0, 1) + &(&c0 * &c1), &e(1, 1) + &(&c1 * &c1)]
}

fn contract_sym(k: &[SPoly; 3], g: &GramSet) -> SPoly {
    let off = &g.grad[0][1] + &g.grad[1][0];
    &(&k[0].scale(&g.grad[0][0]) + &k[1].scale(&off)) + &k[2].scale(&g.grad[1][1])
}

/// Pencil invariants as polynomials in the side lengths. With `Num` and
/// `Den` multiplied by `v²`, `v²·λ_max = (B + √D)/(2A)`.
#[derive(Debug, Clone)]
pub struct SymbolicPencil {
    pub a: Scalar,
    pub b: SPoly,
    pub d: SPoly,
    pub v2: SPoly,
}

/// Symbolic pencil for placement sides `left`, `right` (polynomials in
/// `(M, N)`).
pub fn symbolic_pencil(family_id: u8, left: &SPoly, right: &SPoly) -> SymbolicPencil {
    let fam = family(family_id);
    let grams = gram_constants().family(family_id);
    let u = &(&(&sq(1, 1) + &(left * left)) - &(right * right)).scale(&Scalar::from_ratio(1, 2)) * &sq(1, 1);
    let v2 = &(left * left) - &(&u * &u);
    let k = kv2(fam.reference, &u, &v2);
    let a = contract_sym(&k, &grams.g11);
    let c = contract_sym(&k, &grams.g22);
    let b = contract_sym(&k, &grams.g12).scale(&Scalar::from_int(2));
    let (e, f) = (&grams.g11.mass, &grams.g22.mass);
    let g = &grams.g12.mass * &Scalar::from_int(2);
    let quarter = Scalar::from_ratio(1, 4);
    let aq = &(e * f) - &(&(&g * &g) * &quarter);
    let bq = &(&a.scale(f) + &c.scale(e)) - &b.scale(&(&g * &Scalar::from_ratio(1, 2)));
    let cq = &(&a * &c) - &(&b * &b).scale(&quarter);
    let dq = &(&bq * &bq) - &cq.scale(&(&aq * &Scalar::from_int(4)));
    SymbolicPencil { a: aq, b: bq, d: dq, v2 }
}

/// `P + Q·√R ≤ 0` in the placement variables `(M, N)` (left and right side).
#[derive(Debug, Clone)]
pub struct CaseInequality {
    pub case: CaseSpec,
    pub p: SPoly,
    pub q: SPoly,
    pub r: SPoly,
    pub goals: Vec<NamedGoal>,
}

#[derive(Debug, Clone)]
pub struct NamedGoal {
    pub name: String,
    pub goal: RectGoal,
}

/// `(P, Q, R)` before the change to prover variables.
pub fn case_polynomials(case: &CaseSpec) -> (SPoly, SPoly, SPoly) {
    let (m, n) = (SPoly::x(), SPoly::y());
    let d = match case.transform {
        Transform::Similar => sq(1, 1),
        _ => n.clone(),
    };
    let sp = symbolic_pencil(case.family, &m, &n);
    let pi2 = Scalar::pi_pow(2);
    let d2 = &d * &d;
    match case.theorem {
        Theorem::Gap => {
            // 2A·v²·(Freitas + 16π²/(27R²)) with R = v/L, L = 1 + M + N
            let l = &(&sq(1, 1) + &m) + &n;
            let freitas = &sp.v2.scale(&Scalar::from_int(4)) + &(&d2 * &d2);
            let extra = (&(&d2 * &l) * &l).scale(&Scalar::from_ratio(16, 27));
            let rhs = (&freitas + &extra).scale(&(&pi2 * &(&sp.a * &Scalar::from_int(2))));
            (&(&d2 * &sp.b) - &rhs, d2, sp.d)
        }
        Theorem::Ratio => {
            // (B + √D) ≤ 2A·v²·(7/3)·Pólya = (112√3π²/9)·A·v
            let t2 = Scalar::from_ratio(112 * 112 * 3, 81);
            let coef = &(&t2 * &Scalar::pi_pow(4)) * &(&sp.a * &sp.a);
            let p = &(&(&sp.b * &sp.b) + &sp.d) - &sp.v2.scale(&coef);
            (p, sp.b.scale(&Scalar::from_int(2)), sp.d)
        }
    }
}

fn substitution(case: &CaseSpec) -> (BiPoly<PiPoly>, BiPoly<PiPoly>) {
    let x = BiPoly::<PiPoly>::x();
    let y = BiPoly::<PiPoly>::y();
    let c = |q: BigRational| BiPoly::<PiPoly>::from_rational(q);
    match case.transform {
        Transform::Standard => (y.clone(), &x + &y),
        Transform::Similar => (&(&c(q(2, 1)) - &x) - &y, &c(q(1, 1)) - &x),
        Transform::Strip => {
            let m = &c(case.m.0.clone()) + &y;
            (m.clone(), &m + &x)
        }
    }
}

fn rect_of(case: &CaseSpec) -> Result<Rect, ProverError> {
    match case.transform {
        Transform::Strip => Rect::new(case.u.0.clone(), case.u.1.clone(), BigRational::zero(), BigRational::one()),
        _ => Rect::new(
            case.u.0.clone(),
            case.u.1.clone(),
            case.m.0.clone(),
            case.m.1.clone().expect("bounded case"),
        ),
    }
}

/// Assembles the case inequality and its prover goals `P ≤ 0`, `−Q ≤ 0`,
/// `Q²R − P² ≤ 0` in the variables `x = U` (or `U′`), `y = M` (or `M′`).
pub fn generate_case_inequality(case: &CaseSpec) -> Result<CaseInequality, UpperError> {
    let (p, qq, r) = case_polynomials(case);
    let named = [
        ("P", p.clone()),
        ("-Q", -&qq),
        ("Q2R-P2", &(&(&qq * &qq) * &r) - &(&p * &p)),
    ];
    let (sx, sy) = substitution(case);
    let rect = rect_of(case)?;
    let mut goals = Vec::new();
    for (name, g) in named {
        let (pp, _) = to_pi_poly(&g).map_err(|e| UpperError::Generation(format!("{name}: {e}")))?;
        let sub = pp.compose(&sx, &sy);
        match case.transform {
            Transform::Strip => {
                for k in 0..=sub.deg_y() {
                    let coef = sub.y_coefficient(k);
                    if coef.is_zero() {
                        continue;
                    }
                    goals.push(NamedGoal {
                        name: format!("{name}[X^{k}]"),
                        goal: RectGoal::new(coef, rect.clone()),
                    });
                }
            }
            _ => goals.push(NamedGoal {
                name: name.to_string(),
                goal: RectGoal::new(sub, rect.clone()),
            }),
        }
    }
    Ok(CaseInequality {
        case: case.clone(),
        p,
        q: qq,
        r,
        goals,
    })
}

#[derive(Debug, Clone)]
pub struct GoalResult {
    pub name: String,
    pub goal: RectGoal,
    pub outcome: Outcome,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct CaseProof {
    pub case: CaseSpec,
    pub results: Vec<GoalResult>,
}

impl CaseProof {
    pub fn proved(&self) -> bool {
        self.results.iter().all(|r| matches!(r.outcome, Outcome::Proved(_)))
    }

    /// Deepest subdivision used by any goal.
    pub fn depth(&self) -> Option<u32> {
        self.results
            .iter()
            .map(|r| match &r.outcome {
                Outcome::Proved(t) => Some(t.depth()),
                _ => None,
            })
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }
}

/// Generates and proves every goal of a case.
pub fn verify_case(case: &CaseSpec, max_depth: u32, pi_digits: u32) -> Result<CaseProof, UpperError> {
    let ineq = generate_case_inequality(case)?;
    let results = ineq
        .goals
        .into_par_iter()
        .map(|mut ng| {
            ng.goal.max_depth = max_depth;
            ng.goal.pi_digits = pi_digits;
            let t0 = Instant::now();
            let outcome = prover::prove(&ng.goal)?;
            Ok(GoalResult {
                name: ng.name,
                goal: ng.goal,
                outcome,
                seconds: t0.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<Vec<_>, UpperError>>()?;
    Ok(CaseProof {
        case: case.clone(),
        results,
    })
}

/// `BigRational` from an integer, for callers assembling custom goals.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
