//! Certified check of `P(x, y) ≤ 0` on a rectangle.
//!
//! After shifting the rectangle to `(0, a) × (0, b)`, coefficients are swept
//! from the highest power of `x` down. A negative `c_{i,j}` is absorbed into
//! `c_{i,j+1}` with weight `1/b` (or dropped in the last slot), then the
//! whole row is folded into the next lower power of `x` with weight `a`.
//! Each move replaces the polynomial by a pointwise upper bound on the
//! rectangle, so reaching zero proves the inequality.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bipoly::{BiPoly, PiPoly, PrecisionError, QSqrt3, DEFAULT_PI_DIGITS};
use crate::exact::{format_rational, parse_rational};

pub const DEFAULT_MAX_DEPTH: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProverError {
    #[error("empty rectangle [{0}, {1}] x [{2}, {3}]")]
    InvalidRect(String, String, String, String),
    #[error(transparent)]
    Precision(#[from] PrecisionError),
    #[error("malformed goal: {0}")]
    Parse(String),
}

/// Closed rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x0: BigRational,
    pub x1: BigRational,
    pub y0: BigRational,
    pub y1: BigRational,
}

impl Rect {
    pub fn new(x0: BigRational, x1: BigRational, y0: BigRational, y1: BigRational) -> Result<Self, ProverError> {
        if x0 >= x1 || y0 >= y1 {
            return Err(ProverError::InvalidRect(
                format_rational(&x0),
                format_rational(&x1),
                format_rational(&y0),
                format_rational(&y1),
            ));
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    pub fn width(&self) -> BigRational {
        &self.x1 - &self.x0
    }

    pub fn height(&self) -> BigRational {
        &self.y1 - &self.y0
    }

    pub fn center(&self) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(BigInt::from(2));
        ((&self.x0 + &self.x1) / &two, (&self.y0 + &self.y1) / two)
    }

    /// Quadrants in the order SW, SE, NW, NE.
    pub fn split(&self) -> [Rect; 4] {
        let (xm, ym) = self.center();
        let r = |x0: &BigRational, x1: &BigRational, y0: &BigRational, y1: &BigRational| Rect {
            x0: x0.clone(),
            x1: x1.clone(),
            y0: y0.clone(),
            y1: y1.clone(),
        };
        [
            r(&self.x0, &xm, &self.y0, &ym),
            r(&xm, &self.x1, &self.y0, &ym),
            r(&self.x0, &xm, &ym, &self.y1),
            r(&xm, &self.x1, &ym, &self.y1),
        ]
    }

    fn strings(&self) -> [String; 4] {
        [&self.x0, &self.x1, &self.y0, &self.y1].map(format_rational)
    }

    fn from_strings(s: &[String]) -> Result<Self, ProverError> {
        if s.len() != 4 {
            return Err(ProverError::Parse("rect needs four endpoints".into()));
        }
        let p = |t: &String| parse_rational(t).map_err(|e| ProverError::Parse(e.to_string()));
        Rect::new(p(&s[0])?, p(&s[1])?, p(&s[2])?, p(&s[3])?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RectGoal {
    pub poly: BiPoly<PiPoly>,
    pub rect: Rect,
    pub max_depth: u32,
    pub pi_digits: u32,
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    i: u32,
    j: u32,
    pi_pow: u32,
    q: String,
    /// `3` when the coefficient multiplies `√3`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sqrt: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct GoalJson {
    coeffs: Vec<CoeffJson>,
    rect: Vec<String>,
    #[serde(default = "default_depth")]
    max_depth: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pi_digits: Option<u32>,
}

fn default_depth() -> u32 {
    DEFAULT_MAX_DEPTH
}

impl RectGoal {
    pub fn new(poly: BiPoly<PiPoly>, rect: Rect) -> Self {
        RectGoal {
            poly,
            rect,
            max_depth: DEFAULT_MAX_DEPTH,
            pi_digits: DEFAULT_PI_DIGITS,
        }
    }

    pub fn to_json(&self) -> String {
        let mut coeffs = Vec::new();
        for (i, j, c) in self.poly.terms() {
            for (k, q) in c.coeffs().iter().enumerate() {
                for (part, sqrt) in [(&q.r, None), (&q.s, Some(3))] {
                    if !part.is_zero() {
                        coeffs.push(CoeffJson {
                            i,
                            j,
                            pi_pow: k as u32,
                            q: format_rational(part),
                            sqrt,
                        });
                    }
                }
            }
        }
        let g = GoalJson {
            coeffs,
            rect: self.rect.strings().to_vec(),
            max_depth: self.max_depth,
            pi_digits: (self.pi_digits != DEFAULT_PI_DIGITS).then_some(self.pi_digits),
        };
        serde_json::to_string_pretty(&g).expect("goal serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ProverError> {
        let g: GoalJson = serde_json::from_str(s).map_err(|e| ProverError::Parse(e.to_string()))?;
        let mut poly = BiPoly::zero();
        for c in &g.coeffs {
            let q = parse_rational(&c.q).map_err(|e| ProverError::Parse(e.to_string()))?;
            let coeff = match c.sqrt {
                None | Some(1) => QSqrt3::rational(q),
                Some(3) => QSqrt3 {
                    r: BigRational::zero(),
                    s: q,
                },
                Some(other) => return Err(ProverError::Parse(format!("unsupported sqrt({other})"))),
            };
            poly.add_term(c.i, c.j, PiPoly::term(coeff, c.pi_pow as usize));
        }
        Ok(RectGoal {
            poly,
            rect: Rect::from_strings(&g.rect)?,
            max_depth: g.max_depth,
            pi_digits: g.pi_digits.unwrap_or(DEFAULT_PI_DIGITS),
        })
    }
}

/// The goal moved so that its rectangle is `[0, a] × [0, b]`.
pub fn shift_to_origin(g: &RectGoal) -> RectGoal {
    let zero = BigRational::zero();
    RectGoal {
        poly: g.poly.shift(&g.rect.x0, &g.rect.y0),
        rect: Rect {
            x0: zero.clone(),
            x1: g.rect.width(),
            y0: zero.clone(),
            y1: g.rect.height(),
        },
        max_depth: g.max_depth,
        pi_digits: g.pi_digits,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// Negative `c_{i,j}` moved to `c_{i,j+1}` with weight `1/b`.
    NegUp,
    /// Negative coefficient in the last `y` slot dropped.
    Clamp,
    /// Nonnegative `c_{i,j}` folded into `c_{i-1,j}` with weight `a`.
    PosDown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub rule: Rule,
    pub i: u32,
    pub j: u32,
    pub mult: BigRational,
}

impl Step {
    /// Index of the coefficient receiving the moved mass.
    pub fn into(&self) -> Option<(u32, u32)> {
        match self.rule {
            Rule::NegUp => Some((self.i, self.j + 1)),
            Rule::Clamp => None,
            Rule::PosDown => Some((self.i - 1, self.j)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProofNode {
    Leaf { rect: Rect, steps: Vec<Step> },
    Split { rect: Rect, children: Vec<ProofNode> },
}

impl ProofNode {
    pub fn rect(&self) -> &Rect {
        match self {
            ProofNode::Leaf { rect, .. } | ProofNode::Split { rect, .. } => rect,
        }
    }

    pub fn depth(&self) -> u32 {
        match self {
            ProofNode::Leaf { .. } => 0,
            ProofNode::Split { children, .. } => 1 + children.iter().map(|c| c.depth()).max().unwrap_or(0),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            ProofNode::Leaf { .. } => 1,
            ProofNode::Split { children, .. } => children.iter().map(|c| c.leaves()).sum(),
        }
    }

    fn to_value(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            ProofNode::Leaf { rect, steps } => {
                let steps: Vec<_> = steps
                    .iter()
                    .map(|s| {
                        json!({
                            "rule": s.rule,
                            "i": s.i,
                            "j": s.j,
                            "into": s.into(),
                            "mult": format_rational(&s.mult),
                        })
                    })
                    .collect();
                json!({ "rect": rect.strings(), "steps": steps })
            }
            ProofNode::Split { rect, children } => {
                let ch: Vec<_> = children.iter().map(|c| c.to_value()).collect();
                json!({ "rect": rect.strings(), "children": ch })
            }
        }
    }

    fn from_value(v: &serde_json::Value) -> Result<Self, ProverError> {
        let bad = |m: &str| ProverError::Parse(m.to_string());
        let rect: Vec<String> =
            serde_json::from_value(v.get("rect").cloned().ok_or_else(|| bad("node without rect"))?)
                .map_err(|e| ProverError::Parse(e.to_string()))?;
        let rect = Rect::from_strings(&rect)?;
        if let Some(ch) = v.get("children") {
            let children = ch
                .as_array()
                .ok_or_else(|| bad("children must be a list"))?
                .iter()
                .map(ProofNode::from_value)
                .collect::<Result<_, _>>()?;
            return Ok(ProofNode::Split { rect, children });
        }
        let mut steps = Vec::new();
        for s in v.get("steps").and_then(|s| s.as_array()).ok_or_else(|| bad("leaf without steps"))? {
            let rule: Rule = serde_json::from_value(s["rule"].clone()).map_err(|e| ProverError::Parse(e.to_string()))?;
            let idx = |k: &str| s[k].as_u64().map(|x| x as u32).ok_or_else(|| bad("step index"));
            let mult = parse_rational(s["mult"].as_str().ok_or_else(|| bad("step multiplier"))?)
                .map_err(|e| ProverError::Parse(e.to_string()))?;
            steps.push(Step {
                rule,
                i: idx("i")?,
                j: idx("j")?,
                mult,
            });
        }
        Ok(ProofNode::Leaf { rect, steps })
    }
}

/// Certificate that a goal holds: one step list per leaf of the subdivision.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofTrace {
    pub root: ProofNode,
}

impl ProofTrace {
    pub fn depth(&self) -> u32 {
        self.root.depth()
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::json!({ "depth": self.depth(), "root": self.root.to_value() });
        serde_json::to_string_pretty(&v).expect("trace serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ProverError> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| ProverError::Parse(e.to_string()))?;
        Ok(ProofTrace {
            root: ProofNode::from_value(&v["root"])?,
        })
    }
}

/// Point where the polynomial is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub x: BigRational,
    pub y: BigRational,
    pub value: PiPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reduction {
    Proved(Vec<Step>),
    /// Residual `Σ r_j yʲ` left in the constant-in-`x` row.
    Unknown(Vec<PiPoly>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Proved(ProofTrace),
    Disproved(Witness),
    DepthExceeded(Vec<Rect>),
}

fn dense(p: &BiPoly<PiPoly>, n: usize, m: usize) -> Vec<Vec<PiPoly>> {
    let mut c = vec![vec![PiPoly::zero(); m + 1]; n + 1];
    for (i, j, v) in p.terms() {
        c[i as usize][j as usize] = v.clone();
    }
    c
}

fn sweep(
    c: &mut [Vec<PiPoly>],
    a: &BigRational,
    b: &BigRational,
    digits: u32,
) -> Result<Vec<Step>, PrecisionError> {
    let n = c.len() - 1;
    let m = c[0].len() - 1;
    let binv = b.recip();
    let mut steps = Vec::new();
    for i in (0..=n).rev() {
        for j in 0..=m {
            if c[i][j].is_empty_poly() || c[i][j].sign(digits)? != Ordering::Less {
                continue;
            }
            let v = std::mem::take(&mut c[i][j]);
            if j < m {
                c[i][j + 1] = &c[i][j + 1] + &v.scale(&binv);
                steps.push(Step {
                    rule: Rule::NegUp,
                    i: i as u32,
                    j: j as u32,
                    mult: binv.clone(),
                });
            } else {
                steps.push(Step {
                    rule: Rule::Clamp,
                    i: i as u32,
                    j: j as u32,
                    mult: BigRational::zero(),
                });
            }
        }
        if i == 0 {
            break;
        }
        for j in 0..=m {
            if c[i][j].is_empty_poly() {
                continue;
            }
            let v = std::mem::take(&mut c[i][j]);
            c[i - 1][j] = &c[i - 1][j] + &v.scale(a);
            steps.push(Step {
                rule: Rule::PosDown,
                i: i as u32,
                j: j as u32,
                mult: a.clone(),
            });
        }
    }
    Ok(steps)
}

impl PiPoly {
    fn is_empty_poly(&self) -> bool {
        self.coeffs().is_empty()
    }
}

/// One sweep on a goal whose rectangle has its corner at the origin.
pub fn reduce(g: &RectGoal) -> Result<Reduction, ProverError> {
    if !g.rect.x0.is_zero() || !g.rect.y0.is_zero() {
        return reduce(&shift_to_origin(g));
    }
    let n = g.poly.deg_x() as usize;
    let m = g.poly.deg_y() as usize;
    let mut c = dense(&g.poly, n, m);
    let steps = sweep(&mut c, &g.rect.x1, &g.rect.y1, g.pi_digits)?;
    if c[0].iter().all(|v| v.is_empty_poly()) {
        Ok(Reduction::Proved(steps))
    } else {
        Ok(Reduction::Unknown(std::mem::take(&mut c[0])))
    }
}

enum Node {
    Done(ProofNode),
    Bad(Witness),
    Open(Vec<Rect>),
}

fn positive_at(p: &BiPoly<PiPoly>, x: &BigRational, y: &BigRational, digits: u32) -> Result<Option<Witness>, PrecisionError> {
    let value = p.eval(x, y);
    Ok((value.sign(digits)? == Ordering::Greater).then(|| Witness {
        x: x.clone(),
        y: y.clone(),
        value,
    }))
}

fn prove_rect(g: &RectGoal, rect: &Rect, depth: u32) -> Result<Node, ProverError> {
    let local = RectGoal {
        poly: g.poly.clone(),
        rect: rect.clone(),
        max_depth: g.max_depth,
        pi_digits: g.pi_digits,
    };
    if let Reduction::Proved(steps) = reduce(&local)? {
        return Ok(Node::Done(ProofNode::Leaf {
            rect: rect.clone(),
            steps,
        }));
    }
    let quads = rect.split();
    let (cx, cy) = rect.center();
    if let Some(w) = positive_at(&g.poly, &cx, &cy, g.pi_digits)? {
        return Ok(Node::Bad(w));
    }
    for q in &quads {
        let (x, y) = q.center();
        if let Some(w) = positive_at(&g.poly, &x, &y, g.pi_digits)? {
            return Ok(Node::Bad(w));
        }
    }
    if depth >= g.max_depth {
        return Ok(Node::Open(vec![rect.clone()]));
    }
    let results: Vec<Result<Node, ProverError>> = quads.par_iter().map(|q| prove_rect(g, q, depth + 1)).collect();
    let mut children = Vec::with_capacity(4);
    let mut open = Vec::new();
    for r in results {
        match r? {
            Node::Done(n) => children.push(n),
            Node::Bad(w) => return Ok(Node::Bad(w)),
            Node::Open(rs) => open.extend(rs),
        }
    }
    if open.is_empty() {
        Ok(Node::Done(ProofNode::Split {
            rect: rect.clone(),
            children,
        }))
    } else {
        Ok(Node::Open(open))
    }
}

/// Reduction with recursive subdivision and disproof sampling.
pub fn prove(g: &RectGoal) -> Result<Outcome, ProverError> {
    Ok(match prove_rect(g, &g.rect, 0)? {
        Node::Done(root) => Outcome::Proved(ProofTrace { root }),
        Node::Bad(w) => Outcome::Disproved(w),
        Node::Open(rs) => Outcome::DepthExceeded(rs),
    })
}

/// Independent replay of a trace against the original polynomial.
///
/// Uses its own Taylor shift and a fixed 40-digit enclosure of `π`, and
/// accepts a leaf only if every step is sign-valid, uses the canonical
/// multiplier for its rectangle, and the sweep ends at zero.
pub fn check_trace(p: &BiPoly<PiPoly>, trace: &ProofTrace) -> bool {
    check::node(p, &trace.root)
}

/// [`check_trace`] plus agreement of the trace's root rectangle with the goal's.
pub fn check_goal(g: &RectGoal, trace: &ProofTrace) -> bool {
    trace.root.rect() == &g.rect && check_trace(&g.poly, trace)
}

mod check {
    use super::*;

    const PI_LO: &str = "3.141592653589793238462643383279502884197";
    const PI_HI: &str = "3.141592653589793238462643383279502884198";
    const ROOT3_LO: &str = "1.732050807568877293527446341505872366942";
    const ROOT3_HI: &str = "1.732050807568877293527446341505872366943";

    /// `(r, s)` per power of `π`, value `Σ (r + s√3)πᵏ`.
    type Coef = Vec<(BigRational, BigRational)>;
    type Dense = Vec<Vec<Coef>>;

    fn hull(a: BigRational, b: BigRational) -> (BigRational, BigRational) {
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn sign(v: &Coef) -> Option<Ordering> {
        if v.iter().all(|(r, s)| r.is_zero() && s.is_zero()) {
            return Some(Ordering::Equal);
        }
        let p = |s: &str| parse_rational(s).ok();
        let (lo, hi, rlo, rhi) = (p(PI_LO)?, p(PI_HI)?, p(ROOT3_LO)?, p(ROOT3_HI)?);
        let (mut plo, mut phi) = (BigRational::one(), BigRational::one());
        let (mut s_lo, mut s_hi) = (BigRational::zero(), BigRational::zero());
        for (r, s) in v {
            let (a, b) = hull(s * &rlo, s * &rhi);
            let (cl, ch) = (r + a, r + b);
            // every product endpoint of [cl, ch]·[plo, phi]
            let c = [&cl * &plo, &cl * &phi, &ch * &plo, &ch * &phi];
            s_lo += c.iter().min().unwrap().clone();
            s_hi += c.iter().max().unwrap().clone();
            plo *= &lo;
            phi *= &hi;
        }
        if s_lo.is_positive() {
            Some(Ordering::Greater)
        } else if s_hi.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    fn binom(n: usize) -> Vec<Vec<BigInt>> {
        let mut t = vec![vec![BigInt::zero(); n + 1]; n + 1];
        for i in 0..=n {
            t[i][0] = BigInt::one();
            for k in 1..=i {
                t[i][k] = &t[i - 1][k - 1] + &t[i - 1][k];
            }
        }
        t
    }

    fn pows(x: &BigRational, n: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::one()];
        for k in 1..=n {
            v.push(&v[k - 1] * x);
        }
        v
    }

    /// `c'_{k,l} = Σ_{i≥k, j≥l} C(i,k) C(j,l) x0^{i−k} y0^{j−l} c_{i,j}`.
    fn shifted(p: &BiPoly<PiPoly>, x0: &BigRational, y0: &BigRational) -> Dense {
        let n = p.deg_x() as usize;
        let m = p.deg_y() as usize;
        let kp = p.terms().map(|(_, _, c)| c.coeffs().len()).max().unwrap_or(0);
        let bn = binom(n.max(m));
        let (px, py) = (pows(x0, n), pows(y0, m));
        let z = (BigRational::zero(), BigRational::zero());
        let mut out = vec![vec![vec![z; kp]; m + 1]; n + 1];
        for (i, j, c) in p.terms() {
            let (i, j) = (i as usize, j as usize);
            for k in 0..=i {
                for l in 0..=j {
                    let w = BigRational::from_integer(&bn[i][k] * &bn[j][l]) * &px[i - k] * &py[j - l];
                    for (e, q) in c.coeffs().iter().enumerate() {
                        let slot = &mut out[k][l][e];
                        slot.0 += &q.r * &w;
                        slot.1 += &q.s * &w;
                    }
                }
            }
        }
        out
    }

    fn transfer(c: &mut Dense, from: (usize, usize), to: Option<(usize, usize)>, mult: &BigRational) {
        let v = std::mem::take(&mut c[from.0][from.1]);
        if let Some((ti, tj)) = to {
            for (e, (r, s)) in v.iter().enumerate() {
                c[ti][tj][e].0 += r * mult;
                c[ti][tj][e].1 += s * mult;
            }
        }
        c[from.0][from.1] = vec![(BigRational::zero(), BigRational::zero()); v.len()];
    }

    fn leaf(p: &BiPoly<PiPoly>, rect: &Rect, steps: &[Step]) -> bool {
        let mut c = shifted(p, &rect.x0, &rect.y0);
        let (a, b) = (rect.width(), rect.height());
        let binv = b.recip();
        let n = c.len();
        let m = c[0].len();
        for s in steps {
            let (i, j) = (s.i as usize, s.j as usize);
            if i >= n || j >= m {
                return false;
            }
            let sg = sign(&c[i][j]);
            let ok = match s.rule {
                Rule::NegUp => sg == Some(Ordering::Less) && j + 1 < m && s.mult == binv,
                Rule::Clamp => sg == Some(Ordering::Less) && j + 1 == m && s.mult.is_zero(),
                Rule::PosDown => i > 0 && matches!(sg, Some(Ordering::Greater | Ordering::Equal)) && s.mult == a,
            };
            if !ok {
                return false;
            }
            let to = match s.rule {
                Rule::NegUp => Some((i, j + 1)),
                Rule::Clamp => None,
                Rule::PosDown => Some((i - 1, j)),
            };
            transfer(&mut c, (i, j), to, &s.mult);
        }
        c.iter().flatten().flatten().all(|(r, s)| r.is_zero() && s.is_zero())
    }

    pub(super) fn node(p: &BiPoly<PiPoly>, n: &ProofNode) -> bool {
        match n {
            ProofNode::Leaf { rect, steps } => leaf(p, rect, steps),
            ProofNode::Split { rect, children } => {
                let two = BigRational::from_integer(BigInt::from(2));
                let xm = (&rect.x0 + &rect.x1) / &two;
                let ym = (&rect.y0 + &rect.y1) / &two;
                let want = [
                    (&rect.x0, &xm, &rect.y0, &ym),
                    (&xm, &rect.x1, &rect.y0, &ym),
                    (&rect.x0, &xm, &ym, &rect.y1),
                    (&xm, &rect.x1, &ym, &rect.y1),
                ];
                children.len() == 4
                    && children.iter().zip(want).all(|(ch, (x0, x1, y0, y1))| {
                        let r = ch.rect();
                        (&r.x0, &r.x1, &r.y0, &r.y1) == (x0, x1, y0, y1) && node(p, ch)
                    })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> BigRational {
        rat(n, 1)
    }

    fn poly(terms: &[(u32, u32, i64)]) -> BiPoly<PiPoly> {
        let mut p = BiPoly::zero();
        for &(i, j, c) in terms {
            p.add_term(i, j, PiPoly::from_int(c));
        }
        p
    }

    fn unit() -> Rect {
        Rect::new(q(0), q(1), q(0), q(1)).unwrap()
    }

    fn worked_example() -> BiPoly<PiPoly> {
        poly(&[(2, 2, 1), (2, 1, -1), (1, 2, 2), (2, 0, 1), (1, 1, 1), (0, 2, 1), (1, 0, -3), (0, 1, -2)])
    }

    #[test]
    fn worked_example_proves_without_splitting() {
        let g = RectGoal::new(worked_example(), unit());
        let Outcome::Proved(t) = prove(&g).unwrap() else { panic!("not proved") };
        assert_eq!(t.depth(), 0);
        assert!(check_trace(&g.poly, &t));
        let back = ProofTrace::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn trivial_goals() {
        let g = RectGoal::new(poly(&[(1, 0, 1), (0, 0, -2)]), unit());
        assert!(matches!(reduce(&g).unwrap(), Reduction::Proved(_)));
        let one = RectGoal::new(poly(&[(0, 0, 1)]), unit());
        assert!(matches!(reduce(&one).unwrap(), Reduction::Unknown(_)));
        assert!(matches!(prove(&one).unwrap(), Outcome::Disproved(_)));
        let empty = ProofTrace {
            root: ProofNode::Leaf {
                rect: unit(),
                steps: vec![],
            },
        };
        assert!(check_trace(&BiPoly::zero(), &empty));
        assert!(Rect::new(q(1), q(1), q(0), q(1)).is_err());
    }

    #[test]
    fn shift_moves_rectangle() {
        let g = RectGoal::new(poly(&[(1, 0, 1)]), Rect::new(q(1), q(2), q(0), q(1)).unwrap());
        let s = shift_to_origin(&g);
        assert_eq!(s.poly, poly(&[(1, 0, 1), (0, 0, 1)]));
        assert_eq!(s.rect, unit());
        let c = RectGoal::new(poly(&[(0, 0, -5)]), Rect::new(rat(1, 3), q(2), rat(-7, 2), q(1)).unwrap());
        assert_eq!(shift_to_origin(&c).poly, c.poly);
    }

    #[test]
    fn mutated_traces_are_rejected() {
        let g = RectGoal::new(worked_example(), unit());
        let Outcome::Proved(t) = prove(&g).unwrap() else { panic!() };
        let ProofNode::Leaf { steps, rect } = &t.root else { panic!() };
        let eps = rat(1, 1_000_000_000);
        for k in 0..steps.len() {
            for d in [eps.clone(), -eps.clone()] {
                let mut s = steps.clone();
                s[k].mult += &d;
                let bad = ProofTrace {
                    root: ProofNode::Leaf {
                        rect: rect.clone(),
                        steps: s,
                    },
                };
                assert!(!check_trace(&g.poly, &bad), "step {k}");
            }
        }
        let mut s = steps.clone();
        s.pop();
        let short = ProofTrace {
            root: ProofNode::Leaf { rect: rect.clone(), steps: s },
        };
        assert!(!check_trace(&g.poly, &short));
        // a different polynomial does not replay
        assert!(!check_trace(&poly(&[(0, 0, 1)]), &t));
    }

    #[test]
    fn clamp_multiplier_must_be_zero() {
        let g = RectGoal::new(poly(&[(0, 1, -1), (0, 0, -1)]), unit());
        let Outcome::Proved(t) = prove(&g).unwrap() else { panic!() };
        let ProofNode::Leaf { rect, steps } = &t.root else { panic!() };
        let k = steps.iter().position(|s| s.rule == Rule::Clamp).expect("a clamp step");
        let mut s = steps.clone();
        s[k].mult = rat(1, 3);
        let bad = ProofTrace {
            root: ProofNode::Leaf { rect: rect.clone(), steps: s },
        };
        assert!(check_trace(&g.poly, &t));
        assert!(!check_trace(&g.poly, &bad));
    }

    #[test]
    fn goal_check_pins_the_rectangle() {
        let g = RectGoal::new(poly(&[(1, 0, 1), (0, 0, -5)]), unit());
        let Outcome::Proved(t) = prove(&g).unwrap() else { panic!() };
        assert!(check_goal(&g, &t));
        // the same certificate on a smaller box is valid but proves less
        let small = RectGoal::new(g.poly.clone(), Rect::new(q(0), rat(1, 2), q(0), q(1)).unwrap());
        let Outcome::Proved(ts) = prove(&small).unwrap() else { panic!() };
        assert!(check_trace(&g.poly, &ts));
        assert!(!check_goal(&g, &ts));
    }

    fn eval_q(p: &BiPoly<PiPoly>, x: &BigRational, y: &BigRational) -> BigRational {
        p.eval(x, y).coeff(0).r
    }

    #[test]
    fn soundness_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = RectGoal::new(worked_example(), unit());
        assert!(matches!(prove(&g).unwrap(), Outcome::Proved(_)));
        let den = 1_000_003i64;
        for _ in 0..100_000 {
            let x = rat(rng.gen_range(0..=den), den);
            let y = rat(rng.gen_range(0..=den), den);
            assert!(!eval_q(&g.poly, &x, &y).is_positive());
        }
    }

    #[test]
    fn every_step_is_an_upper_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rect = Rect::new(rat(1, 3), rat(3, 2), rat(-1, 2), rat(1, 4)).unwrap();
        let p = poly(&[(2, 2, 3), (2, 1, -4), (1, 2, -2), (0, 2, 5), (1, 1, 1), (1, 0, -3), (0, 0, -6)]);
        let g = shift_to_origin(&RectGoal::new(p, rect));
        let (n, m) = (g.poly.deg_x() as usize, g.poly.deg_y() as usize);
        let mut c = dense(&g.poly, n, m);
        let steps = sweep(&mut dense(&g.poly, n, m), &g.rect.x1, &g.rect.y1, 30).unwrap();
        let to_poly = |c: &[Vec<PiPoly>]| {
            let mut out = BiPoly::zero();
            for (i, row) in c.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    out.add_term(i as u32, j as u32, v.clone());
                }
            }
            out
        };
        let pts: Vec<(BigRational, BigRational)> = (0..1000)
            .map(|_| {
                let x = &g.rect.x1 * rat(rng.gen_range(0..=997), 997);
                let y = &g.rect.y1 * rat(rng.gen_range(0..=991), 991);
                (x, y)
            })
            .collect();
        for s in &steps {
            let before = to_poly(&c);
            let (i, j) = (s.i as usize, s.j as usize);
            let v = std::mem::take(&mut c[i][j]);
            if let Some((ti, tj)) = s.into() {
                let (ti, tj) = (ti as usize, tj as usize);
                c[ti][tj] = &c[ti][tj] + &v.scale(&s.mult);
            }
            let after = to_poly(&c);
            for (x, y) in &pts {
                assert!(eval_q(&before, x, y) <= eval_q(&after, x, y));
            }
        }
    }

    #[test]
    fn subdivision_reaches_strict_inequalities() {
        // −(x − 1/2)² − (y − 1/2)² − ε needs finer boxes as ε shrinks
        let mut last = 0;
        for e in [10, 100, 1000] {
            let mut p = poly(&[(2, 0, -1), (1, 0, 1), (0, 2, -1), (0, 1, 1)]);
            p.add_term(0, 0, PiPoly::from_rational(rat(-1, 2) - rat(1, e)));
            let g = RectGoal::new(p, unit());
            let Outcome::Proved(t) = prove(&g).unwrap() else { panic!("eps = 1/{e}") };
            assert!(check_trace(&g.poly, &t));
            assert!(t.depth() >= last && t.depth() > 0);
            last = t.depth();
        }
    }

    #[test]
    fn depth_limit_reports_open_boxes() {
        let mut p = poly(&[(2, 0, -1), (1, 0, 1)]);
        p.add_term(0, 0, PiPoly::from_rational(rat(-1, 4) - rat(1, 1_000_000)));
        let mut g = RectGoal::new(p, unit());
        g.max_depth = 2;
        let Outcome::DepthExceeded(open) = prove(&g).unwrap() else { panic!() };
        assert!(!open.is_empty());
    }

    #[test]
    fn pi_coefficients() {
        // π² − 10 < 0 and x·(π − 22/7) ≤ 0 on the unit box
        let mut p = BiPoly::zero();
        p.add_term(0, 0, PiPoly::from_coeffs(vec![q(-10), q(0), q(1)]));
        p.add_term(1, 0, PiPoly::from_coeffs(vec![rat(-22, 7), q(1)]));
        let g = RectGoal::new(p, unit());
        let Outcome::Proved(t) = prove(&g).unwrap() else { panic!() };
        assert!(check_trace(&g.poly, &t));
        let round = RectGoal::from_json(&g.to_json()).unwrap();
        assert_eq!(round, g);
    }
}
