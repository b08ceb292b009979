use std::path::PathBuf;

use clap::Args;
use serde_json::{json, Value};
use trispec::lower::{self, DEFAULT_METHODS};
use trispec::oracle::{self, EigenResult};
use trispec::upper::{self, RatioCheck};
use trispec::{BoundResult, Method, Triangle};

use crate::output::{csv_row, sig};
use crate::{emit, CliError, Format, TriangleArgs};

#[derive(Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    tri: TriangleArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also solve the raster eigenproblem.
    #[arg(long)]
    oracle: bool,
    /// Oracle cells across the bounding box.
    #[arg(long, default_value_t = oracle::COARSE_RESOLUTION)]
    resolution: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub struct Report {
    pub triangle: Triangle,
    pub lower: Vec<Result<BoundResult, String>>,
    pub best: BoundResult,
    pub upper: Result<BoundResult, String>,
    pub gap: Result<f64, String>,
    pub ratio: Result<RatioCheck, String>,
    pub crossover: bool,
    pub oracle: Option<EigenResult>,
}

/// Largest available bound among `methods`, ties to the earlier method.
pub fn best_available(m: &trispec::TriangleMetrics, methods: &[Method]) -> BoundResult {
    let ok: Vec<Method> = methods.iter().copied().filter(|&x| lower::bound(m, x).is_ok()).collect();
    lower::best_lower(m, &ok).expect("closed-form bounds never fail")
}

pub fn oracle_eigs(t: &Triangle, cells: f64, k: usize) -> Result<EigenResult, CliError> {
    let poly = t.vertices();
    let d = oracle::rasterize(&poly, oracle::resolution_across(&poly, cells)).map_err(|e| CliError::Resource(e.to_string()))?;
    oracle::eigs(&d, k).map_err(|e| CliError::Resource(e.to_string()))
}

pub fn report(t: &Triangle, with_oracle: bool, cells: f64) -> Result<Report, CliError> {
    let m = t.metrics();
    let lower = Method::LOWER.iter().map(|&x| lower::bound(&m, x).map_err(|e| e.to_string())).collect();
    Ok(Report {
        triangle: *t,
        lower,
        best: best_available(&m, &DEFAULT_METHODS),
        upper: upper::lambda2_upper(t).map_err(|e| e.to_string()),
        gap: upper::gap_bound_check(t).map_err(|e| e.to_string()),
        ratio: upper::ratio_bound_check(t).map_err(|e| e.to_string()),
        crossover: lower::crossover_predicate(&m),
        oracle: if with_oracle { Some(oracle_eigs(t, cells, 2)?) } else { None },
    })
}

fn text(r: &Report) -> String {
    let m = r.triangle.metrics();
    let [a, b, c] = m.sides;
    let mut s = format!(
        "triangle  sides {}, {}, {}  (M = {}, U = {})\narea {}  diameter {}  inradius {}  {}\n\nlower bounds for lambda1\n",
        sig(a),
        sig(b),
        sig(c),
        sig(m.m),
        sig(m.n - m.m),
        sig(m.area),
        sig(m.diameter),
        sig(m.inradius),
        if m.acute { "acute" } else { "not acute" }
    );
    for (method, b) in Method::LOWER.iter().zip(&r.lower) {
        let line = match b {
            Ok(b) => {
                let mut tags = Vec::new();
                if b.method == r.best.method {
                    tags.push("best");
                }
                if b.tight {
                    tags.push("tight");
                }
                format!("  {:<18}{:>12}  {}", method.name(), sig(b.value), tags.join(" "))
            }
            Err(e) => format!("  {:<18}{:>12}  ({e})", method.name(), "-"),
        };
        s.push_str(line.trim_end());
        s.push('\n');
    }
    s.push_str(&format!("  Freitas >= Polya: {}\n\n", r.crossover));
    match &r.upper {
        Ok(u) => s.push_str(&format!("upper bound for lambda2  {}\n", sig(u.value))),
        Err(e) => s.push_str(&format!("upper bound for lambda2  unavailable ({e})\n")),
    }
    match &r.gap {
        Ok(g) => {
            let limit = upper::gap_constant();
            let verdict = if *g <= limit * (1.0 + 1e-9) { "holds" } else { "exceeds" };
            s.push_str(&format!("gap    (lambda2+ - Freitas)*R^2 = {} vs 16pi^2/27 = {}  {verdict}\n", sig(*g), sig(limit)));
        }
        Err(e) => s.push_str(&format!("gap    unavailable ({e})\n")),
    }
    match &r.ratio {
        Ok(q) => s.push_str(&format!(
            "ratio  lambda2/lambda1 <= {} ({}{})  limit 7/3\n",
            sig(q.value),
            q.method,
            if q.valid { "" } else { ", outside the theorem's range" }
        )),
        Err(e) => s.push_str(&format!("ratio  unavailable ({e})\n")),
    }
    if let Some(e) = &r.oracle {
        s.push_str(&format!(
            "\noracle lambda1 = {} +- {}, lambda2 = {} +- {}  (grids {})\n",
            sig(e.lambda1()),
            sig(e.error[0]),
            sig(e.lambda2().unwrap_or(f64::NAN)),
            sig(e.error.get(1).copied().unwrap_or(f64::NAN)),
            e.resolutions.iter().map(|x| sig(*x)).collect::<Vec<_>>().join("/")
        ));
    }
    s
}

fn csv(r: &Report) -> String {
    let mut s = csv_row(&["quantity".into(), "method".into(), "value".into(), "tight".into()]);
    for b in r.lower.iter().flatten() {
        s += &csv_row(&["lower".into(), b.method.name().into(), sig(b.value), b.tight.to_string()]);
    }
    s += &csv_row(&["best_lower".into(), r.best.method.name().into(), sig(r.best.value), r.best.tight.to_string()]);
    if let Ok(u) = &r.upper {
        s += &csv_row(&["upper_lambda2".into(), u.method.name().into(), sig(u.value), "false".into()]);
    }
    if let Ok(g) = &r.gap {
        s += &csv_row(&["gap".into(), "Variational".into(), sig(*g), "false".into()]);
    }
    if let Ok(q) = &r.ratio {
        s += &csv_row(&["ratio".into(), q.method.name().into(), sig(q.value), "false".into()]);
    }
    if let Some(e) = &r.oracle {
        for (k, v) in e.extrapolated.iter().enumerate() {
            s += &csv_row(&[format!("oracle_lambda{}", k + 1), "raster".into(), sig(*v), "false".into()]);
        }
    }
    s
}

pub fn json(r: &Report) -> Value {
    let m = r.triangle.metrics();
    let lower: Vec<Value> = Method::LOWER
        .iter()
        .zip(&r.lower)
        .map(|(method, b)| match b {
            Ok(b) => json!(b),
            Err(e) => json!({"method": method, "error": e}),
        })
        .collect();
    let err = |e: &String| json!({ "error": e });
    json!({
        "triangle": {"sides": m.sides, "m": m.m, "u": m.n - m.m, "area": m.area, "inradius": m.inradius, "acute": m.acute},
        "lower": lower,
        "best": r.best,
        "crossover": r.crossover,
        "upper": r.upper.as_ref().map(|u| json!(u)).unwrap_or_else(err),
        "gap": r.gap.as_ref().map(|g| json!({"value": g, "limit": upper::gap_constant()})).unwrap_or_else(err),
        "ratio": r.ratio.as_ref().map(|q| json!({"value": q.value, "method": q.method, "acute": q.acute, "valid": q.valid, "limit": 7.0 / 3.0})).unwrap_or_else(err),
        "oracle": r.oracle,
    })
}

pub fn run(a: &BoundsArgs) -> Result<(), CliError> {
    let t = a.tri.triangle()?;
    let r = report(&t, a.oracle, a.resolution)?;
    let body = match a.format {
        Format::Text => text(&r),
        Format::Csv => csv(&r),
        Format::Json => serde_json::to_string_pretty(&json(&r)).expect("serialisable") + "\n",
        Format::Svg => return Err(CliError::Usage("bounds supports text, json and csv".into())),
    };
    emit(&body, a.out.as_ref())
}
