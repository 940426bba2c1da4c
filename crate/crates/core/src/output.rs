//! Sweep tables on disk: CSV, JSON and gnuplot data.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing
//! a written CSV gives back the identical table. Undefined estimates are
//! empty CSV fields and JSON `null`s.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::experiments::sweep::{ExperimentConfig, SweepRow, SweepTable};

pub(crate) fn ser_ratio<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn ser_biguint<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub const CSV_HEADER: &str = "r,found,exhausted,timeout,p_hat,ci_lo,ci_hi,r_star,r_lower,r_upper";

/// JSON Schema for [`to_json`] output.
pub const SWEEP_SCHEMA: &str = include_str!("../schemas/sweep.schema.json");

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn to_csv(table: &SweepTable) -> String {
    let mut s = String::new();
    s.push_str(CSV_HEADER);
    s.push('\n');
    for row in &table.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            row.r,
            row.found,
            row.exhausted,
            row.timeout,
            opt(row.p_hat),
            opt(row.ci_lo),
            opt(row.ci_hi),
            row.r_star,
            row.r_lower,
            row.r_upper
        );
    }
    s
}

pub fn parse_csv(text: &str) -> Result<SweepTable> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((i, _)) => return Err(Error::parse(i + 1, format!("expected header {CSV_HEADER:?}"))),
        None => return Err(Error::parse(1, "empty CSV")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 10 {
            return Err(Error::parse(lineno, format!("expected 10 fields, found {}", f.len())));
        }
        let int = |s: &str| s.parse::<u64>().map_err(|e| Error::parse(lineno, format!("{s:?}: {e}")));
        let float = |s: &str| s.parse::<f64>().map_err(|e| Error::parse(lineno, format!("{s:?}: {e}")));
        let maybe = |s: &str| if s.is_empty() { Ok(None) } else { float(s).map(Some) };
        rows.push(SweepRow {
            r: f[0].parse().map_err(|e| Error::parse(lineno, format!("{:?}: {e}", f[0])))?,
            found: int(f[1])?,
            exhausted: int(f[2])?,
            timeout: int(f[3])?,
            p_hat: maybe(f[4])?,
            ci_lo: maybe(f[5])?,
            ci_hi: maybe(f[6])?,
            r_star: float(f[7])?,
            r_lower: float(f[8])?,
            r_upper: float(f[9])?,
        });
    }
    Ok(SweepTable { rows })
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    n: usize,
    m: usize,
    trials_per_r: u64,
    master_seed: u64,
    omega: f64,
    max_nodes: Option<u64>,
    max_millis: Option<u64>,
    rows: &'a [SweepRow],
}

pub fn to_json(table: &SweepTable, config: &ExperimentConfig) -> String {
    let doc = SweepDocument {
        n: config.n,
        m: config.m,
        trials_per_r: config.trials_per_r,
        master_seed: config.master_seed,
        omega: config.omega,
        max_nodes: config.budget.max_nodes,
        max_millis: config.budget.max_millis,
        rows: &table.rows,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

/// Two columns `r p_hat` (rows without an estimate are skipped) followed by
/// `# marker` comment lines for the thresholds.
pub fn to_plot_data(table: &SweepTable) -> String {
    let mut s = String::from("# r p_hat\n");
    for row in &table.rows {
        if let Some(p) = row.p_hat {
            let _ = writeln!(s, "{} {}", row.r, p);
        }
    }
    if let Some(first) = table.rows.first() {
        let _ = writeln!(s, "# marker r_star {}", first.r_star);
        let _ = writeln!(s, "# marker r_lower {}", first.r_lower);
        let _ = writeln!(s, "# marker r_upper {}", first.r_upper);
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

/// Writes the table as `<stem>.csv` and/or `<stem>.json`, plus
/// `<stem>.dat` plot data, and returns the written paths.
pub fn emit_outputs(table: &SweepTable, config: &ExperimentConfig, format: OutputFormat, stem: &Path) -> Result<Vec<PathBuf>> {
    if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut written = Vec::new();
    let mut put = |ext: &str, body: String| -> Result<()> {
        let path = stem.with_extension(ext);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        written.push(path);
        Ok(())
    };
    if matches!(format, OutputFormat::Csv | OutputFormat::Both) {
        put("csv", to_csv(table))?;
    }
    if matches!(format, OutputFormat::Json | OutputFormat::Both) {
        put("json", to_json(table, config))?;
    }
    put("dat", to_plot_data(table))?;
    Ok(written)
}
