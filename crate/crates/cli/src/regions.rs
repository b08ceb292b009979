use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use trispec::{Method, Triangle};

use crate::bounds::best_available;
use crate::output::{csv_row, region_svg, sig};
use crate::{emit, CliError, Format};

#[derive(Args)]
pub struct RegionsArgs {
    /// Lower bounds to compare, comma separated.
    #[arg(long, default_value = "polya,protter,freitas,rectthm")]
    bounds: String,
    /// Cells along M and U, "WxH".
    #[arg(long, default_value = "200x200")]
    grid: String,
    #[arg(long, default_value_t = 7.0)]
    m_max: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn parse_methods(list: &str) -> Result<Vec<Method>, CliError> {
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let m = match name.to_ascii_lowercase().as_str() {
            "rect" => Method::RectThm,
            "sector" => Method::SectorThm,
            _ => name.parse::<Method>().map_err(CliError::Usage)?,
        };
        if !Method::LOWER.contains(&m) {
            return Err(CliError::Usage(format!("{m} is not a lower bound")));
        }
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no bounds selected".into()));
    }
    out.sort();
    Ok(out)
}

pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("grid must be WxH with positive integers, got {s:?}"));
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let w: usize = w.trim().parse().map_err(|_| bad())?;
    let h: usize = h.trim().parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

/// Cell centre `(M, U)` of cell `(i, j)`.
pub fn cell_center(i: usize, j: usize, w: usize, h: usize, m_max: f64) -> (f64, f64) {
    (1.0 + (i as f64 + 0.5) * (m_max - 1.0) / w as f64, (j as f64 + 0.5) / h as f64)
}

/// Winner per cell, row-major with `U` rows.
pub fn region_map(methods: &[Method], w: usize, h: usize, m_max: f64) -> Result<Vec<Method>, CliError> {
    (0..w * h)
        .into_par_iter()
        .map(|k| {
            let (m, u) = cell_center(k % w, k / w, w, h, m_max);
            let t = Triangle::from_um(u, m).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(best_available(&t.metrics(), methods).method)
        })
        .collect()
}

pub fn run(a: &RegionsArgs) -> Result<(), CliError> {
    let methods = parse_methods(&a.bounds)?;
    let (w, h) = parse_grid(&a.grid)?;
    if !(a.m_max > 1.0 && a.m_max.is_finite()) {
        return Err(CliError::Usage(format!("--m-max must exceed 1, got {}", a.m_max)));
    }
    let winners = region_map(&methods, w, h, a.m_max)?;
    let body = match a.format {
        Format::Csv => {
            let mut s = csv_row(&["M".into(), "U".into(), "winner".into()]);
            for (k, m) in winners.iter().enumerate() {
                let (mm, u) = cell_center(k % w, k / w, w, h, a.m_max);
                s += &csv_row(&[sig(mm), sig(u), m.name().into()]);
            }
            s
        }
        Format::Svg => region_svg(&winners, w, h, a.m_max, &methods),
        _ => return Err(CliError::Usage("regions supports csv and svg".into())),
    };
    emit(&body, a.out.as_ref())
}
