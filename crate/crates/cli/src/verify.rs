use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use trispec::bipoly::DEFAULT_PI_DIGITS;
use trispec::exact::format_rational;
use trispec::prover::{self, Outcome, ProverError, Rect, RectGoal, DEFAULT_MAX_DEPTH};
use trispec::upper::{self, CaseProof, Theorem, LARGE_M};

use crate::CliError;

#[derive(Args)]
pub struct ProveArgs {
    /// Goal JSON file.
    #[arg(long)]
    file: PathBuf,
    /// Overrides the goal's subdivision limit.
    #[arg(long)]
    max_depth: Option<u32>,
    /// Overrides the starting digits of the π enclosure.
    #[arg(long)]
    pi_digits: Option<u32>,
    /// Where to write the proof trace.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    theorem: String,
    /// Case number or "all".
    #[arg(long, default_value = "all")]
    case: String,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: u32,
    #[arg(long, default_value_t = DEFAULT_PI_DIGITS)]
    pi_digits: u32,
    /// Directory receiving goal and trace files.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn prover_error(e: ProverError) -> CliError {
    match e {
        ProverError::Precision(p) => CliError::Resource(p.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

fn rect_text(r: &Rect) -> String {
    format!(
        "[{}, {}] x [{}, {}]",
        format_rational(&r.x0),
        format_rational(&r.x1),
        format_rational(&r.y0),
        format_rational(&r.y1)
    )
}

pub fn run_prove(a: &ProveArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.file).map_err(|e| CliError::Usage(format!("{}: {e}", a.file.display())))?;
    let mut goal = RectGoal::from_json(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(d) = a.max_depth {
        goal.max_depth = d;
    }
    if let Some(p) = a.pi_digits {
        goal.pi_digits = p;
    }
    let t0 = Instant::now();
    let outcome = prover::prove(&goal).map_err(prover_error)?;
    let secs = t0.elapsed().as_secs_f64();
    match outcome {
        Outcome::Proved(trace) => {
            if !prover::check_goal(&goal, &trace) {
                return Err(CliError::Inconsistent("the prover's trace was rejected by the checker".into()));
            }
            println!(
                "Proved on {}: depth {}, {} leaves, {secs:.3} s",
                rect_text(&goal.rect),
                trace.depth(),
                trace.root.leaves()
            );
            if let Some(p) = &a.out {
                std::fs::write(p, trace.to_json())?;
            }
            Ok(())
        }
        Outcome::Disproved(w) => Err(CliError::Inconsistent(format!(
            "Disproved: value {} > 0 at x = {}, y = {}",
            w.value,
            format_rational(&w.x),
            format_rational(&w.y)
        ))),
        Outcome::DepthExceeded(rects) => Err(CliError::Resource(format!(
            "depth limit {} reached with {} undecided rectangles, first {}",
            goal.max_depth,
            rects.len(),
            rects.first().map(rect_text).unwrap_or_default()
        ))),
    }
}

fn file_stem(theorem: Theorem, id: u8, goal: &str) -> String {
    let name: String = goal
        .replace('-', "neg")
        .chars()
        .filter_map(|c| match c {
            '[' => Some('_'),
            ']' | '^' => None,
            c => Some(c),
        })
        .collect();
    format!("{theorem}-case{id}-{name}")
}

fn write_case(dir: &Path, proof: &CaseProof) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    for r in &proof.results {
        let stem = file_stem(proof.case.theorem, proof.case.id, &r.name);
        std::fs::write(dir.join(format!("{stem}.goal.json")), r.goal.to_json())?;
        if let Outcome::Proved(trace) = &r.outcome {
            std::fs::write(dir.join(format!("{stem}.trace.json")), trace.to_json())?;
        }
    }
    Ok(())
}

/// One summary line per case, plus the failure that decides the exit code.
fn summarize(proof: &CaseProof, secs: f64) -> (String, Option<CliError>) {
    let mut failure = None;
    for r in &proof.results {
        match &r.outcome {
            Outcome::Proved(trace) if !prover::check_goal(&r.goal, trace) => {
                failure = Some(CliError::Inconsistent(format!("{}: trace of goal {} rejected", proof.case.label(), r.name)));
            }
            Outcome::Proved(_) => {}
            Outcome::Disproved(w) => {
                failure = Some(CliError::Inconsistent(format!(
                    "{}: goal {} disproved, value {} > 0 at U = {}, M = {}",
                    proof.case.label(),
                    r.name,
                    w.value,
                    format_rational(&w.x),
                    format_rational(&w.y)
                )));
            }
            Outcome::DepthExceeded(rects) if failure.is_none() => {
                failure = Some(CliError::Resource(format!(
                    "{}: goal {} left {} rectangles undecided",
                    proof.case.label(),
                    r.name,
                    rects.len()
                )));
            }
            Outcome::DepthExceeded(_) => {}
        }
    }
    let status = match (&failure, proof.depth()) {
        (None, Some(d)) => format!("Proved, depth {d}"),
        (Some(CliError::Inconsistent(_)), _) => "Disproved".to_string(),
        _ => "Undecided".to_string(),
    };
    let line = format!("{}: {status}, {} goals, {secs:.2} s", proof.case.label(), proof.results.len());
    (line, failure)
}

pub fn run_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let theorem: Theorem = a.theorem.parse().map_err(CliError::Usage)?;
    let all = upper::cases(theorem);
    let selected = if a.case.trim().eq_ignore_ascii_case("all") {
        all
    } else {
        let id: u8 = a.case.trim().parse().map_err(|_| CliError::Usage(format!("case must be a number or \"all\", got {:?}", a.case)))?;
        let ids: Vec<String> = all.iter().map(|c| c.id.to_string()).collect();
        let c = upper::case(theorem, id)
            .ok_or_else(|| CliError::Usage(format!("the {theorem} theorem has no case {id} (cases {})", ids.join(", "))))?;
        vec![c]
    };
    let results: Vec<Result<(CaseProof, f64), CliError>> = selected
        .par_iter()
        .map(|c| {
            let t0 = Instant::now();
            let proof = upper::verify_case(c, a.max_depth, a.pi_digits).map_err(|e| match e {
                upper::UpperError::Prover(p) => prover_error(p),
                other => CliError::Resource(other.to_string()),
            })?;
            Ok((proof, t0.elapsed().as_secs_f64()))
        })
        .collect();
    let mut failure: Option<CliError> = None;
    for r in results {
        let (proof, secs) = r?;
        if let Some(dir) = &a.out {
            write_case(dir, &proof)?;
        }
        let (line, f) = summarize(&proof, secs);
        println!("{line}");
        if let Some(f) = f {
            eprintln!("{}", f.message());
            // a disproof outranks an undecided goal
            if !matches!(failure, Some(CliError::Inconsistent(_))) {
                failure = Some(f);
            }
        }
    }
    if theorem == Theorem::Ratio {
        let v = upper::large_m_ratio_bound(LARGE_M).map_err(|e| CliError::Resource(e.to_string()))?;
        let holds = v < 7.0 / 3.0;
        println!("large-M bound at M = {LARGE_M}: {v:.4} < 7/3 {}", if holds { "holds" } else { "FAILS" });
        if !holds {
            failure = Some(CliError::Inconsistent(format!("large-M bound {v} is not below 7/3")));
        }
    }
    failure.map_or(Ok(()), Err)
}
