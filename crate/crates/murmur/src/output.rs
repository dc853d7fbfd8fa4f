//! Sweep CSV and its JSON sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};

use murmur_core::murmur::ComparisonRow;
use murmur_core::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

pub const CSV_HEADER: [&str; 7] = ["x", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "res_re", "res_im"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub x: f64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub res_re: f64,
    pub res_im: f64,
}

impl From<&ComparisonRow> for CsvRow {
    fn from(r: &ComparisonRow) -> Self {
        CsvRow {
            x: r.x,
            lhs_re: r.lhs.re,
            lhs_im: r.lhs.im,
            rhs_re: r.rhs.re,
            rhs_im: r.rhs.im,
            res_re: r.residual.re,
            res_im: r.residual.im,
        }
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[ComparisonRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    for r in rows {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>, CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(CliError::config("csv", format!("unexpected header {header:?}")));
    }
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// `run.csv` → `run.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// The summary written next to every sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub config: RunConfig,
    pub l2_residual_ratio: f64,
    pub runtime_seconds: f64,
    pub family_size: usize,
    pub qd_over_pi: f64,
    pub omega_family: Value,
    pub product_tail: f64,
}

pub fn complex(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

pub fn write_json<W: Write>(mut out: W, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
