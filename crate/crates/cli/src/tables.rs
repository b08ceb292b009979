use std::f64::consts::PI;
use std::path::PathBuf;

use clap::Args;
use trispec::lower;
use trispec::oracle;
use trispec::{Method, Triangle};

use crate::bounds::oracle_eigs;
use crate::output::{csv_row, sig};
use crate::{emit, CliError};

#[derive(Args)]
pub struct TablesArgs {
    /// Tables to emit, comma separated subset of 1,2,3,4.
    #[arg(long, default_value = "1,2,3,4")]
    which: String,
    /// Add raster eigenvalue rows.
    #[arg(long)]
    oracle: bool,
    /// Oracle cells across the bounding box.
    #[arg(long, default_value_t = oracle::COARSE_RESOLUTION)]
    resolution: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub table: u8,
    pub row: String,
    pub column: String,
    pub value: f64,
    pub source: &'static str,
}

/// Row order of the bound tables.
const ORDER: [Method; 5] = [Method::Polya, Method::Freitas, Method::Protter, Method::RectThm, Method::SectorThm];

struct Column {
    name: &'static str,
    triangle: Triangle,
    exact: Option<f64>,
    cited: &'static [(&'static str, f64)],
}

fn columns(table: u8) -> Vec<Column> {
    let t = |a: f64, b: f64, c: f64| Triangle::from_sides(a, b, c).expect("valid table triangle");
    match table {
        1 => vec![Column {
            name: "value",
            triangle: t(1.0, 1.0, 2f64.sqrt()),
            exact: Some(5.0 * PI * PI),
            cited: &[],
        }],
        // the 30-60-90 triangle is half of the equilateral triangle of side 2
        2 => vec![Column {
            name: "value",
            triangle: t(1.0, 3f64.sqrt(), 2.0),
            exact: Some(28.0 * PI * PI / 9.0),
            cited: &[],
        }],
        3 => vec![
            Column {
                name: "arm 2",
                triangle: t(1.0, 2.0, 2.0),
                exact: None,
                cited: &[("cited upper bound", 27.6695)],
            },
            Column {
                name: "arm 4",
                triangle: t(1.0, 4.0, 4.0),
                exact: None,
                cited: &[("cited upper bound", 18.9749)],
            },
        ],
        4 => vec![Column {
            name: "value",
            triangle: t(1.95, 1.0, 1.0),
            exact: None,
            cited: &[("cited conjecture lower", 251.077), ("cited conjecture upper", 299.7)],
        }],
        _ => unreachable!("validated table id"),
    }
}

pub fn parse_which(s: &str) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.parse::<u8>() {
            Ok(k @ 1..=4) if !out.contains(&k) => out.push(k),
            Ok(1..=4) => {}
            _ => return Err(CliError::Usage(format!("unknown table {part:?}; choose from 1,2,3,4"))),
        }
    }
    Ok(out)
}

pub fn table_rows(table: u8, with_oracle: bool, cells: f64) -> Result<Vec<Row>, CliError> {
    let cols = columns(table);
    let mut rows = Vec::new();
    let mut push = |row: &str, column: &str, value: f64, source: &'static str| {
        rows.push(Row {
            table,
            row: row.to_string(),
            column: column.to_string(),
            value,
            source,
        })
    };
    for c in &cols {
        if let Some(x) = c.exact {
            push("exact", c.name, x, "exact");
        }
    }
    for method in ORDER {
        for c in &cols {
            let b = lower::bound(&c.triangle.metrics(), method).map_err(|e| CliError::Resource(e.to_string()))?;
            push(method.name(), c.name, b.value, "lower_bounds");
        }
    }
    if with_oracle {
        for c in &cols {
            let e = oracle_eigs(&c.triangle, cells, 1)?;
            push("oracle", c.name, e.lambda1(), "spectral_oracle");
        }
    }
    let n_cited = cols.iter().map(|c| c.cited.len()).max().unwrap_or(0);
    for k in 0..n_cited {
        for c in &cols {
            if let Some(&(name, v)) = c.cited.get(k) {
                push(name, c.name, v, "cited");
            }
        }
    }
    Ok(rows)
}

pub fn render(rows: &[Row]) -> String {
    let mut s = csv_row(&["table".into(), "row".into(), "column".into(), "value".into(), "source".into()]);
    for r in rows {
        s += &csv_row(&[r.table.to_string(), r.row.clone(), r.column.clone(), sig(r.value), r.source.into()]);
    }
    s
}

pub fn run(a: &TablesArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for t in parse_which(&a.which)? {
        rows.extend(table_rows(t, a.oracle, a.resolution)?);
    }
    emit(&render(&rows), a.out.as_ref())
}
