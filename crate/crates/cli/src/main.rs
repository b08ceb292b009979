mod bounds;
mod lab;
mod output;
mod regions;
mod tables;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trispec::Triangle;

#[derive(Parser)]
#[command(name = "trispec", version, about = "Eigenvalue bounds for Dirichlet triangles")]
struct Cli {
    /// Worker threads for scans and case dispatch.
    #[arg(long, global = true, env = "TRISPEC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower and upper bounds for one triangle.
    Bounds(bounds::BoundsArgs),
    /// Map of the best lower bound over the (M, U) chart.
    Regions(regions::RegionsArgs),
    /// Regenerate the reference tables as CSV.
    Tables(tables::TablesArgs),
    /// Run the rectangle prover on a goal file.
    Prove(verify::ProveArgs),
    /// Generate and prove the case inequalities of a theorem.
    Verify(verify::VerifyArgs),
    /// Raster eigenvalues of a triangle or bitmap.
    Oracle(lab::OracleArgs),
    /// Apply a symmetrisation and track the first eigenvalue.
    Symlab(lab::SymlabArgs),
}

#[derive(Args, Clone)]
pub struct TriangleArgs {
    /// Side lengths "a,b,c".
    #[arg(long, conflicts_with = "vertices")]
    sides: Option<String>,
    /// Vertices "x1,y1;x2,y2;x3,y3".
    #[arg(long)]
    vertices: Option<String>,
}

impl TriangleArgs {
    pub fn triangle(&self) -> Result<Triangle, CliError> {
        let text = match (&self.sides, &self.vertices) {
            (Some(s), None) => s.clone(),
            (None, Some(v)) => {
                if !v.contains(';') {
                    return Err(CliError::Usage(format!("vertices must be \"x1,y1;x2,y2;x3,y3\", got {v:?}")));
                }
                v.clone()
            }
            _ => return Err(CliError::Usage("one of --sides or --vertices is required".into())),
        };
        text.parse::<Triangle>().map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn given(&self) -> bool {
        self.sides.is_some() || self.vertices.is_some()
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed input; exit 2.
    Usage(String),
    /// A disproof or a result contradicting a proved statement; exit 3.
    Inconsistent(String),
    /// Precision, depth, convergence or I/O failure; exit 4.
    Resource(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Inconsistent(_) => 3,
            CliError::Resource(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Inconsistent(m) | CliError::Resource(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Resource(e.to_string())
    }
}

/// Writes to `path`, or stdout when absent.
pub fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Resource(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not configure {n} threads: {e}");
        }
    }
    let result = match &cli.command {
        Command::Bounds(a) => bounds::run(a),
        Command::Regions(a) => regions::run(a),
        Command::Tables(a) => tables::run(a),
        Command::Prove(a) => verify::run_prove(a),
        Command::Verify(a) => verify::run_verify(a),
        Command::Oracle(a) => lab::run_oracle(a),
        Command::Symlab(a) => lab::run_symlab(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
