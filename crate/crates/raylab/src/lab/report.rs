//! Run reports with deterministic, byte-stable emission.
//!
//! Every check records its stable identifier, the measured value, and the
//! tolerance it was held to. Floats are formatted at 17 significant digits
//! (round-trip safe) in every emitted file, and key order is fixed, so a
//! rerun with the same config and seed reproduces the files byte for byte.
//! Wall-clock timings are kept out of the emitted artifacts for the same
//! reason; the CLI prints them to stderr instead.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{Error, Result};

use super::config::ExperimentConfig;

/// Formats a float with 17 significant digits, round-trip safe.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// One named assertion with its measured value and tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    /// Stable identifier, `module/property`.
    pub id: String,
    pub pass: bool,
    pub measured: String,
    pub tolerance: String,
    pub detail: String,
}

impl Check {
    /// A check that passes when `measured` stays within `tolerance`.
    pub fn bounded(id: &str, measured: f64, tolerance: f64, detail: &str) -> Self {
        Self {
            id: id.to_string(),
            pass: measured <= tolerance,
            measured: fmt_f64(measured),
            tolerance: fmt_f64(tolerance),
            detail: detail.to_string(),
        }
    }

    /// A check that passes when `measured` is at least `threshold`.
    pub fn at_least(id: &str, measured: f64, threshold: f64, detail: &str) -> Self {
        Self {
            id: id.to_string(),
            pass: measured >= threshold,
            measured: fmt_f64(measured),
            tolerance: fmt_f64(threshold),
            detail: detail.to_string(),
        }
    }

    /// An exact yes/no check; `measured` records the witnessing value.
    pub fn flag(id: &str, pass: bool, measured: f64, detail: &str) -> Self {
        Self {
            id: id.to_string(),
            pass,
            measured: fmt_f64(measured),
            tolerance: fmt_f64(0.0),
            detail: detail.to_string(),
        }
    }
}

/// A rectangular data table destined for CSV/JSON emission.
#[derive(Debug, Clone, Serialize)]
pub struct DataTable {
    pub name: String,
    pub columns: Vec<String>,
    /// Rows pre-formatted at 17 significant digits.
    pub rows: Vec<Vec<String>>,
}

impl DataTable {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.columns.len(), "row width mismatch");
        self.rows.push(values.iter().map(|v| fmt_f64(*v)).collect());
    }
}

/// The full result of one experiment run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub experiment: String,
    /// The configuration that produced this report, echoed canonically.
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    pub tables: Vec<DataTable>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(config: &ExperimentConfig) -> Self {
        let echo = serde_json::to_value(config).expect("config serializes");
        Self {
            experiment: config.experiment.name().to_string(),
            config: echo,
            checks: Vec::new(),
            tables: Vec::new(),
            passed: true,
        }
    }

    pub fn push_check(&mut self, check: Check) {
        self.passed &= check.pass;
        self.checks.push(check);
    }

    pub fn push_table(&mut self, table: DataTable) {
        self.tables.push(table);
    }

    /// One `[PASS]`/`[FAIL]` line per check, for the console.
    pub fn summary_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "[{}] {}: measured {} (tolerance {}) — {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.id,
                    c.measured,
                    c.tolerance,
                    c.detail
                )
            })
            .collect()
    }
}

/// Output format of [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Json,
    Csv,
}

impl EmitFormat {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::Config(format!("unknown format '{other}'"))),
        }
    }
}

/// Writes the report under `out_dir` and returns the created paths.
///
/// JSON yields a single `<experiment>.report.json`; CSV yields
/// `<experiment>.checks.csv` plus one `<experiment>.<table>.csv` per data
/// table. Identical reports produce byte-identical files.
pub fn emit(report: &RunReport, format: EmitFormat, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    match format {
        EmitFormat::Json => {
            let path = out_dir.join(format!("{}.report.json", report.experiment));
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            std::fs::write(&path, text)?;
            written.push(path);
        }
        EmitFormat::Csv => {
            let checks_path = out_dir.join(format!("{}.checks.csv", report.experiment));
            let mut text = String::from("id,pass,measured,tolerance,detail\n");
            for c in &report.checks {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{}",
                    c.id,
                    c.pass,
                    c.measured,
                    c.tolerance,
                    c.detail.replace(',', ";")
                );
            }
            std::fs::write(&checks_path, text)?;
            written.push(checks_path);
            for table in &report.tables {
                let path =
                    out_dir.join(format!("{}.{}.csv", report.experiment, table.name));
                let mut text = table.columns.join(",");
                text.push('\n');
                for row in &table.rows {
                    text.push_str(&row.join(","));
                    text.push('\n');
                }
                std::fs::write(&path, text)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}
