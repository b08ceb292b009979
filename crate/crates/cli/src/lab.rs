use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde_json::json;
use trispec::oracle::{
    self, align_line, continuous_steiner, polarize, rasterize, rasterize_anchored, resolution_across, steiner_symmetrize,
    EigenResult, Line, OracleError, OrientedLine, RasterDomain, RasterHeader,
};

use crate::output::{csv_row, sig};
use crate::{emit, CliError, Format, TriangleArgs};

#[derive(Args)]
pub struct OracleArgs {
    #[command(flatten)]
    tri: TriangleArgs,
    /// PGM bitmap to solve instead of a triangle.
    #[arg(long, requires = "header", conflicts_with_all = ["sides", "vertices"])]
    pgm: Option<PathBuf>,
    /// JSON header (spacing, offset) for --pgm.
    #[arg(long)]
    header: Option<PathBuf>,
    /// Cells across the bounding box of the finest grid.
    #[arg(long, default_value_t = oracle::COARSE_RESOLUTION)]
    resolution: f64,
    /// Number of eigenvalues, 1 or 2.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    k: u8,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the raster as PREFIX.pgm and PREFIX.json.
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
pub enum Transform {
    Steiner,
    Continuous,
    Polarize,
}

#[derive(Args)]
pub struct SymlabArgs {
    #[command(flatten)]
    tri: TriangleArgs,
    #[arg(long, value_enum, default_value = "steiner")]
    transform: Transform,
    /// Axis or polarisation line "px,py;dx,dy"; defaults to the vertical
    /// line through the centroid. H₁ lies to the left of the direction.
    #[arg(long)]
    line: Option<String>,
    /// Interpolation parameters for the continuous transform.
    #[arg(long, default_value = "0,0.25,0.5,0.75,1")]
    alpha: String,
    /// Use the right-hand side of the line as H₁.
    #[arg(long)]
    flip: bool,
    /// Cells across the bounding box.
    #[arg(long, default_value_t = 128.0)]
    resolution: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write each raster as PREFIX-<n>.pgm and PREFIX-<n>.json.
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn oracle_error(e: OracleError) -> CliError {
    match e {
        OracleError::Format(_) | OracleError::InvalidResolution(_) => CliError::Usage(e.to_string()),
        _ => CliError::Resource(e.to_string()),
    }
}

fn export(d: &RasterDomain, prefix: &Path) -> Result<(), CliError> {
    std::fs::write(prefix.with_extension("pgm"), d.to_pgm())?;
    let header = serde_json::to_string_pretty(&d.header()).expect("serialisable");
    std::fs::write(prefix.with_extension("json"), header + "\n")?;
    Ok(())
}

fn load(a: &OracleArgs) -> Result<RasterDomain, CliError> {
    if let Some(pgm) = &a.pgm {
        let header_path = a.header.as_ref().expect("clap enforces --header");
        let bytes = std::fs::read(pgm).map_err(|e| CliError::Usage(format!("{}: {e}", pgm.display())))?;
        let text = std::fs::read_to_string(header_path).map_err(|e| CliError::Usage(format!("{}: {e}", header_path.display())))?;
        let header: RasterHeader = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("header: {e}")))?;
        return RasterDomain::from_pgm(&bytes, &header).map_err(oracle_error);
    }
    let poly = a.tri.triangle()?.vertices();
    rasterize(&poly, resolution_across(&poly, a.resolution)).map_err(oracle_error)
}

fn eigen_text(e: &EigenResult) -> String {
    let mut s = String::new();
    for (k, v) in e.extrapolated.iter().enumerate() {
        s += &format!("lambda{} = {} +- {}  (order {})\n", k + 1, sig(*v), sig(e.error[k]), sig(e.orders[k]));
    }
    for (r, vals) in e.resolutions.iter().zip(&e.levels) {
        let vals: Vec<String> = vals.iter().map(|v| sig(*v)).collect();
        s += &format!("  grid {} cells/unit: {}\n", sig(*r), vals.join(", "));
    }
    s
}

pub fn run_oracle(a: &OracleArgs) -> Result<(), CliError> {
    if !a.tri.given() && a.pgm.is_none() {
        return Err(CliError::Usage("one of --sides, --vertices or --pgm is required".into()));
    }
    let d = load(a)?;
    if let Some(prefix) = &a.export {
        export(&d, prefix)?;
    }
    let e = oracle::eigs(&d, a.k as usize).map_err(oracle_error)?;
    let body = match a.format {
        Format::Text => format!("cells {}  spacing {}\n{}", d.count(), sig(d.h()), eigen_text(&e)),
        Format::Json => serde_json::to_string_pretty(&json!({"cells": d.count(), "spacing": d.h(), "result": e})).expect("serialisable") + "\n",
        _ => return Err(CliError::Usage("oracle supports text and json".into())),
    };
    emit(&body, a.out.as_ref())
}

fn parse_line(s: &str) -> Result<([f64; 2], [f64; 2]), CliError> {
    let bad = || CliError::Usage(format!("line must be \"px,py;dx,dy\", got {s:?}"));
    let pair = |t: &str| -> Result<[f64; 2], CliError> {
        let (x, y) = t.split_once(',').ok_or_else(bad)?;
        Ok([x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?])
    };
    let (p, d) = s.split_once(';').ok_or_else(bad)?;
    let (p, d) = (pair(p)?, pair(d)?);
    if d[0] == 0.0 && d[1] == 0.0 {
        return Err(bad());
    }
    Ok((p, d))
}

fn parse_alphas(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| match t.trim().parse::<f64>() {
            Ok(a) if (0.0..=1.0).contains(&a) => Ok(a),
            _ => Err(CliError::Usage(format!("alpha values must lie in [0, 1], got {t:?}"))),
        })
        .collect()
}

pub fn run_symlab(a: &SymlabArgs) -> Result<(), CliError> {
    let poly = a.tri.triangle()?.vertices();
    let (p, dir) = match &a.line {
        Some(s) => parse_line(s)?,
        None => {
            let c = [(poly[0][0] + poly[1][0] + poly[2][0]) / 3.0, (poly[0][1] + poly[1][1] + poly[2][1]) / 3.0];
            (c, [0.0, 1.0])
        }
    };
    let alphas = parse_alphas(&a.alpha)?;
    let rotated = align_line(&poly, p, dir);
    let d = rasterize_anchored(&rotated, resolution_across(&rotated, a.resolution), p).map_err(oracle_error)?;
    let axis = Line::horizontal(p[1]);
    let mut runs: Vec<(String, String, RasterDomain)> = vec![("original".into(), String::new(), d.clone())];
    match a.transform {
        Transform::Steiner => runs.push(("steiner".into(), String::new(), steiner_symmetrize(&d, axis).map_err(oracle_error)?)),
        Transform::Continuous => {
            for &alpha in &alphas {
                runs.push(("continuous".into(), sig(alpha), continuous_steiner(&d, axis, alpha).map_err(oracle_error)?));
            }
        }
        Transform::Polarize => {
            let line = OrientedLine::new(axis, !a.flip);
            runs.push(("polarize".into(), if a.flip { "right" } else { "left" }.into(), polarize(&d, line).map_err(oracle_error)?));
        }
    }
    let mut rows = Vec::new();
    for (n, (name, param, dom)) in runs.iter().enumerate() {
        if let Some(prefix) = &a.export {
            let stem = prefix.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
            export(dom, &prefix.with_file_name(format!("{stem}-{n}")))?;
        }
        let eig = oracle::eigs(dom, 1).map_err(oracle_error)?;
        rows.push((name.clone(), param.clone(), dom.count(), eig));
    }
    let body = match a.format {
        Format::Csv | Format::Text => {
            let mut s = csv_row(&["transform".into(), "parameter".into(), "cells".into(), "lambda1".into(), "tolerance".into(), "components".into()]);
            for (name, param, cells, eig) in &rows {
                s += &csv_row(&[name.clone(), param.clone(), cells.to_string(), sig(eig.lambda1()), sig(eig.error[0]), eig.components.to_string()]);
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(name, param, cells, eig)| json!({"transform": name, "parameter": param, "cells": cells, "result": eig}))
                .collect();
            serde_json::to_string_pretty(&v).expect("serialisable") + "\n"
        }
        Format::Svg => return Err(CliError::Usage("symlab supports csv and json".into())),
    };
    emit(&body, a.out.as_ref())
}
