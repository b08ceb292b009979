//! Known eigenfunctions of the reference triangles, the test-function
//! families built from them, and their Gram matrices.

use std::collections::BTreeMap;

use num_rational::Rational64;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use super::{integrate_triangle, partial, Arg, TrigError, TrigKind, TrigPoly, Var, YScale};
use crate::exact::{ExactError, Scalar};
use crate::triangle::ReferenceTriangle;

/// Lattice frame of a reference triangle: scale and vertices in `(x, s)`.
pub fn reference_frame(r: ReferenceTriangle) -> (YScale, [[Rational64; 2]; 3]) {
    let q = |n: i64, d: i64| Rational64::new(n, d);
    match r {
        ReferenceTriangle::Equilateral => (YScale::Sqrt3, [[q(0, 1), q(0, 1)], [q(1, 1), q(0, 1)], [q(1, 2), q(1, 2)]]),
        ReferenceTriangle::HalfEquilateral => {
            (YScale::Sqrt3, [[q(1, 2), q(0, 1)], [q(1, 1), q(0, 1)], [q(1, 2), q(1, 2)]])
        }
        ReferenceTriangle::RightIsosceles => (YScale::Unit, [[q(0, 1), q(0, 1)], [q(1, 1), q(0, 1)], [q(0, 1), q(1, 1)]]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Eigenfunction {
    /// Ground state of `T_e`.
    S11,
    /// Symmetric member of the second eigenspace of `T_e`.
    S21,
    /// Antisymmetric member of the second eigenspace of `T_e`.
    A21,
    /// Antisymmetric third mode of `T_e`, ground state of its right half.
    A31,
    /// Ground state of the unit right isosceles triangle.
    Phi1,
    /// Second mode of the unit right isosceles triangle.
    Phi2,
    /// `Phi2` pulled back to `T_e` by the affine map fixing the base.
    Phi2OnEquilateral,
}

#[derive(Debug, Clone)]
pub struct CatalogFunction {
    pub name: Eigenfunction,
    pub poly: TrigPoly,
    pub reference: ReferenceTriangle,
    /// Dirichlet eigenvalue on `reference`, when the function is an eigenfunction.
    pub eigenvalue: Option<Scalar>,
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

// z = π(2x − 1)/3 and t = π(1 − 2y/√3) = π(1 − 2s) on the equilateral frame
fn z(k: i64, kind: TrigKind) -> TrigPoly {
    TrigPoly::single(YScale::Sqrt3, kind, Arg::new(r(2 * k, 3), r(0, 1), r(-k, 3)), Scalar::one())
}

fn t(k: i64, kind: TrigKind) -> TrigPoly {
    TrigPoly::single(YScale::Sqrt3, kind, Arg::new(r(0, 1), r(-2 * k, 1), r(k, 1)), Scalar::one())
}

fn sin_sin_unit(k: i64, l: i64) -> TrigPoly {
    &TrigPoly::sin(YScale::Unit, Arg::ints(k, 0, 0)) * &TrigPoly::sin(YScale::Unit, Arg::ints(0, l, 0))
}

pub fn eigenfunction(e: Eigenfunction) -> CatalogFunction {
    use TrigKind::{Cos, Sin};
    let pi2 = |n: i64, d: i64| Scalar::from_ratio(n, d).mul_pi_pow(2);
    let (poly, reference, eigenvalue) = match e {
        Eigenfunction::S11 => (&(&z(3, Cos) - &t(1, Cos)) * &t(1, Sin), ReferenceTriangle::Equilateral, Some(pi2(16, 3))),
        Eigenfunction::S21 => {
            let p = &(&(&z(4, Cos) * &t(2, Sin)) + &(&z(5, Cos) * &t(1, Sin))) - &(&z(1, Cos) * &t(3, Sin));
            (p, ReferenceTriangle::Equilateral, Some(pi2(112, 9)))
        }
        Eigenfunction::A21 => {
            let p = &(&(&z(4, Sin) * &t(2, Sin)) - &(&z(5, Sin) * &t(1, Sin))) - &(&z(1, Sin) * &t(3, Sin));
            (p, ReferenceTriangle::Equilateral, Some(pi2(112, 9)))
        }
        Eigenfunction::A31 => {
            let p = &(&(&z(5, Sin) * &t(3, Sin)) - &(&z(2, Sin) * &t(4, Sin))) - &(&z(7, Sin) * &t(1, Sin));
            (p, ReferenceTriangle::Equilateral, Some(pi2(208, 9)))
        }
        Eigenfunction::Phi1 => (&sin_sin_unit(2, 1) + &sin_sin_unit(1, 2), ReferenceTriangle::RightIsosceles, Some(pi2(5, 1))),
        Eigenfunction::Phi2 => (&sin_sin_unit(3, 1) - &sin_sin_unit(1, 3), ReferenceTriangle::RightIsosceles, Some(pi2(10, 1))),
        Eigenfunction::Phi2OnEquilateral => {
            // (X, Y) = (x − s, 2s) carries T_e onto the right isosceles triangle
            let phi2 = eigenfunction(Eigenfunction::Phi2).poly;
            let m = [[r(1, 1), r(-1, 1)], [r(0, 1), r(2, 1)]];
            (phi2.substitute(m, YScale::Sqrt3), ReferenceTriangle::Equilateral, None)
        }
    };
    CatalogFunction {
        name: e,
        poly,
        reference,
        eigenvalue,
    }
}

/// Mass and gradient Gram entries of a pair `(f, g)`: `∫fg` and `∫∂_p f ∂_q g`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSet {
    pub mass: Scalar,
    pub grad: [[Scalar; 2]; 2],
}

impl GramSet {
    pub fn trace(&self) -> Scalar {
        &self.grad[0][0] + &self.grad[1][1]
    }

    /// `Σ K_pq G_pq`.
    pub fn contract(&self, k: &[[f64; 2]; 2]) -> f64 {
        let mut s = 0.0;
        for p in 0..2 {
            for q in 0..2 {
                s += k[p][q] * self.grad[p][q].to_f64();
            }
        }
        s
    }
}

pub fn gram(f: &TrigPoly, g: &TrigPoly, reference: ReferenceTriangle) -> Result<GramSet, TrigError> {
    let i = |p: &TrigPoly| integrate_triangle(p, reference);
    let df = [partial(f, Var::X), partial(f, Var::Y)];
    let dg = [partial(g, Var::X), partial(g, Var::Y)];
    let mut grad: [[Scalar; 2]; 2] = Default::default();
    for p in 0..2 {
        for q in 0..2 {
            grad[p][q] = i(&(&df[p] * &dg[q]))?;
        }
    }
    Ok(GramSet {
        mass: i(&(f * g))?,
        grad,
    })
}

/// Trial pair `f₁ + α f₂` on a reference triangle.
#[derive(Debug, Clone)]
pub struct Family {
    pub id: u8,
    pub reference: ReferenceTriangle,
    pub f1: TrigPoly,
    pub f2: TrigPoly,
    pub description: &'static str,
}

pub const FAMILY_IDS: [u8; 5] = [1, 2, 3, 4, 5];

pub fn family(id: u8) -> Family {
    let f = |e| eigenfunction(e).poly;
    use Eigenfunction::*;
    let (reference, f1, f2, description) = match id {
        1 => (ReferenceTriangle::Equilateral, f(S21), f(S11), "S21 + a*S11 on the equilateral triangle"),
        2 => (ReferenceTriangle::Equilateral, f(A21), f(S11), "A21 + a*S11 on the equilateral triangle"),
        3 => (ReferenceTriangle::HalfEquilateral, f(A31), f(A21), "A31 + a*A21 on the half-equilateral triangle"),
        4 => (ReferenceTriangle::RightIsosceles, f(Phi2), f(Phi1), "phi2 + a*phi1 on the right isosceles triangle"),
        5 => {
            let mixed = &f(S21) + &f(Phi2OnEquilateral).scaled(&Scalar::from_ratio(1, 2));
            (ReferenceTriangle::Equilateral, mixed, f(S11), "(S21 + phi2/2) + a*S11 on the equilateral triangle")
        }
        _ => panic!("unknown family {id}"),
    };
    Family {
        id,
        reference,
        f1,
        f2,
        description,
    }
}

/// Gram sets of a family: `g11 = (f₁,f₁)`, `g22 = (f₂,f₂)`, `g12 = (f₁,f₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyGrams {
    pub g11: GramSet,
    pub g22: GramSet,
    pub g12: GramSet,
}

impl Family {
    pub fn compute_grams(&self) -> Result<FamilyGrams, TrigError> {
        Ok(FamilyGrams {
            g11: gram(&self.f1, &self.f1, self.reference)?,
            g22: gram(&self.f2, &self.f2, self.reference)?,
            g12: gram(&self.f1, &self.f2, self.reference)?,
        })
    }
}

pub const GRAM_CONSTANTS_JSON: &str = include_str!("../../data/gram_constants.json");
const GRAM_CONSTANTS_VERSION: u32 = 1;

type ScalarJson = BTreeMap<String, String>;

#[derive(Serialize, Deserialize)]
struct GramSetJson {
    mass: ScalarJson,
    grad: [[ScalarJson; 2]; 2],
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    id: u8,
    reference: ReferenceTriangle,
    description: String,
    g11: GramSetJson,
    g22: GramSetJson,
    g12: GramSetJson,
}

#[derive(Serialize, Deserialize)]
struct ConstantsJson {
    version: u32,
    families: Vec<FamilyJson>,
}

impl GramSetJson {
    fn from(g: &GramSet) -> Self {
        GramSetJson {
            mass: g.mass.to_json_map(),
            grad: [
                [g.grad[0][0].to_json_map(), g.grad[0][1].to_json_map()],
                [g.grad[1][0].to_json_map(), g.grad[1][1].to_json_map()],
            ],
        }
    }

    fn to_gram(&self) -> Result<GramSet, ExactError> {
        let s = Scalar::from_json_map;
        Ok(GramSet {
            mass: s(&self.mass)?,
            grad: [
                [s(&self.grad[0][0])?, s(&self.grad[0][1])?],
                [s(&self.grad[1][0])?, s(&self.grad[1][1])?],
            ],
        })
    }
}

/// Frozen Gram matrices of the five families, read from the constants file.
#[derive(Debug, Clone, PartialEq)]
pub struct GramConstants {
    pub version: u32,
    pub families: BTreeMap<u8, FamilyGrams>,
}

impl GramConstants {
    pub fn compute() -> Result<Self, TrigError> {
        let mut families = BTreeMap::new();
        for id in FAMILY_IDS {
            families.insert(id, family(id).compute_grams()?);
        }
        Ok(GramConstants {
            version: GRAM_CONSTANTS_VERSION,
            families,
        })
    }

    pub fn parse(json: &str) -> Result<Self, String> {
        let c: ConstantsJson = serde_json::from_str(json).map_err(|e| e.to_string())?;
        let mut families = BTreeMap::new();
        for f in c.families {
            let g = |x: &GramSetJson| x.to_gram().map_err(|e| e.to_string());
            families.insert(
                f.id,
                FamilyGrams {
                    g11: g(&f.g11)?,
                    g22: g(&f.g22)?,
                    g12: g(&f.g12)?,
                },
            );
        }
        Ok(GramConstants {
            version: c.version,
            families,
        })
    }

    pub fn to_json(&self) -> String {
        let families = self
            .families
            .iter()
            .map(|(&id, g)| {
                let fam = family(id);
                FamilyJson {
                    id,
                    reference: fam.reference,
                    description: fam.description.to_string(),
                    g11: GramSetJson::from(&g.g11),
                    g22: GramSetJson::from(&g.g22),
                    g12: GramSetJson::from(&g.g12),
                }
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&ConstantsJson {
            version: self.version,
            families,
        })
        .expect("serialisable");
        s.push('\n');
        s
    }

    pub fn family(&self, id: u8) -> &FamilyGrams {
        &self.families[&id]
    }
}

static CONSTANTS: Lazy<GramConstants> = Lazy::new(|| {
    let c = GramConstants::parse(GRAM_CONSTANTS_JSON).expect("bundled gram constants are valid");
    if c.families.len() == FAMILY_IDS.len() && c.version == GRAM_CONSTANTS_VERSION {
        c
    } else {
        GramConstants::compute().expect("catalogued families integrate exactly")
    }
});

pub fn gram_constants() -> &'static GramConstants {
    &CONSTANTS
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Surd};
    use crate::trig::integrate_with_fallback;

    fn sqrt3(n: i64, d: i64) -> Scalar {
        Scalar::term(rat(n, d), Surd::Sqrt3, 0)
    }

    fn all() -> Vec<Eigenfunction> {
        use Eigenfunction::*;
        vec![S11, S21, A21, A31, Phi1, Phi2, Phi2OnEquilateral]
    }

    #[test]
    fn dirichlet_boundary_values() {
        for e in all() {
            let f = eigenfunction(e);
            let v = f.reference.vertices();
            for k in 0..3 {
                let (a, b) = (v[k], v[(k + 1) % 3]);
                for i in 0..=10 {
                    let t = i as f64 / 10.0;
                    let (x, y) = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]));
                    assert!(f.poly.eval(x, y).abs() < 1e-12, "{e:?} edge {k} at {t}");
                }
            }
        }
        // A31 also vanishes on the symmetry axis, so it lives on the half triangle
        let a31 = eigenfunction(Eigenfunction::A31).poly;
        for i in 0..=10 {
            assert!(a31.eval(0.5, i as f64 * 0.08).abs() < 1e-12);
        }
    }

    #[test]
    fn rayleigh_quotients_are_eigenvalues() {
        for e in all() {
            let f = eigenfunction(e);
            let Some(lambda) = f.eigenvalue else { continue };
            let g = gram(&f.poly, &f.poly, f.reference).unwrap();
            assert_eq!(g.trace(), &lambda * &g.mass, "{e:?}");
        }
        let f = eigenfunction(Eigenfunction::A31).poly;
        let g = gram(&f, &f, ReferenceTriangle::HalfEquilateral).unwrap();
        assert_eq!(g.trace(), &Scalar::from_ratio(208, 9).mul_pi_pow(2) * &g.mass);
    }

    #[test]
    fn frozen_exact_values() {
        let s11 = eigenfunction(Eigenfunction::S11).poly;
        let g = gram(&s11, &s11, ReferenceTriangle::Equilateral).unwrap();
        assert_eq!(g.mass, sqrt3(3, 32));
        assert_eq!(g.grad[0][0], sqrt3(1, 4).mul_pi_pow(2));
        assert_eq!(g.grad[1][1], sqrt3(1, 4).mul_pi_pow(2));
        assert!(g.grad[0][1].is_zero() && g.grad[1][0].is_zero());

        let s21 = eigenfunction(Eigenfunction::S21).poly;
        let g = gram(&s21, &s21, ReferenceTriangle::Equilateral).unwrap();
        assert_eq!(g.mass, sqrt3(3, 16));
        assert_eq!(g.grad[0][0], &sqrt3(22400, 19200).mul_pi_pow(2) - &sqrt3(59049, 19200));
        assert_eq!(g.grad[1][1], &sqrt3(22400, 19200).mul_pi_pow(2) + &sqrt3(59049, 19200));

        let g = gram(&s21, &s11, ReferenceTriangle::Equilateral).unwrap();
        assert!(g.mass.is_zero());
        assert_eq!(g.grad[0][0], sqrt3(6561, 3584));
        assert_eq!(g.grad[1][1], sqrt3(-6561, 3584));

        let a31 = eigenfunction(Eigenfunction::A31).poly;
        let g = gram(&a31, &a31, ReferenceTriangle::Equilateral).unwrap();
        assert_eq!(g.mass, sqrt3(3, 16));
        assert_eq!(g.grad[0][0], &sqrt3(127400, 58800).mul_pi_pow(2) + &sqrt3(59049, 58800));
    }

    #[test]
    fn orthogonality() {
        use Eigenfunction::*;
        for (a, b) in [(S11, S21), (S11, A21), (S21, A21), (S11, A31), (S21, A31), (A21, A31), (Phi1, Phi2)] {
            let fa = eigenfunction(a);
            let fb = eigenfunction(b);
            let g = gram(&fa.poly, &fb.poly, fa.reference).unwrap();
            assert!(g.mass.is_zero(), "{a:?} {b:?}");
        }
    }

    #[test]
    fn gram_matches_quadrature() {
        use crate::trig::integrate::tests::quadrature;
        for id in FAMILY_IDS {
            let fam = family(id);
            let grams = fam.compute_grams().unwrap();
            let v = fam.reference.vertices();
            let (f1, f2) = (&fam.f1, &fam.f2);
            let dx1 = partial(f1, Var::X);
            let dy2 = partial(f2, Var::Y);
            let m = quadrature(|x, y| f1.eval(x, y) * f2.eval(x, y), v, 60);
            let gxy = quadrature(|x, y| dx1.eval(x, y) * dy2.eval(x, y), v, 60);
            let (em, eg) = (grams.g12.mass.to_f64(), grams.g12.grad[0][1].to_f64());
            assert!((em - m).abs() <= 1e-10 * (1.0 + m.abs()), "family {id}: {em} vs {m}");
            assert!((eg - gxy).abs() <= 1e-10 * (1.0 + gxy.abs()), "family {id}: {eg} vs {gxy}");
            let f1sq = quadrature(|x, y| f1.eval(x, y).powi(2), v, 60);
            assert!((grams.g11.mass.to_f64() - f1sq).abs() <= 1e-10 * f1sq);
        }
    }

    #[test]
    fn right_isosceles_pair() {
        let p1 = eigenfunction(Eigenfunction::Phi1).poly;
        let p2 = eigenfunction(Eigenfunction::Phi2).poly;
        let (_, verts) = reference_frame(ReferenceTriangle::RightIsosceles);
        assert!(integrate_with_fallback(&(&p1 * &p2), verts).to_f64().abs() < 1e-15);
        let g = gram(&p2, &p2, ReferenceTriangle::RightIsosceles).unwrap();
        assert_eq!(g.trace(), &Scalar::from_int(10).mul_pi_pow(2) * &g.mass);
    }

    #[test]
    fn gram_constants_file_is_current() {
        let computed = GramConstants::compute().unwrap();
        if std::env::var_os("TRISPEC_REGEN_CONSTANTS").is_some() {
            let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/gram_constants.json");
            std::fs::write(path, computed.to_json()).unwrap();
            return;
        }
        let frozen = GramConstants::parse(GRAM_CONSTANTS_JSON).unwrap();
        assert_eq!(frozen, computed);
        assert_eq!(GramConstants::parse(&computed.to_json()).unwrap(), computed);
    }
}
