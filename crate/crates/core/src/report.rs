//! Run artifacts: per-case records, convergence tables, and the summary
//! document. The summary serialization is byte-deterministic for a fixed
//! configuration and seed, so wall-clock timings live only in the CSV
//! emission, never in `summary.json`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::{Error, Result};

/// One comparison: a left-hand value, a right-hand reference, and the
/// verdict. `tolerance: None` marks a diagnostic row that is reported but
/// never gates the exit code.
#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
    #[serde(skip)]
    pub wall_ms: f64,
}

impl CaseRecord {
    /// Hard pass/fail case.
    pub fn checked(label: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let diff = (lhs - rhs).abs();
        Self {
            label: label.into(),
            lhs,
            rhs,
            diff,
            tolerance: Some(tolerance),
            pass: Some(diff.is_finite() && diff <= tolerance),
            wall_ms: 0.0,
        }
    }

    /// Reported value with no reference and no verdict.
    pub fn diagnostic(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            label: label.into(),
            lhs,
            rhs,
            diff: (lhs - rhs).abs(),
            tolerance: None,
            pass: None,
            wall_ms: 0.0,
        }
    }

    /// Boolean condition reported as a case; `lhs` carries the measured
    /// quantity for the record.
    pub fn condition(label: impl Into<String>, measured: f64, ok: bool) -> Self {
        Self {
            label: label.into(),
            lhs: measured,
            rhs: f64::NAN,
            diff: f64::NAN,
            tolerance: None,
            pass: Some(ok),
            wall_ms: 0.0,
        }
    }

    pub fn with_wall(mut self, wall_ms: f64) -> Self {
        self.wall_ms = wall_ms;
        self
    }
}

/// A named rectangular table destined for one CSV file; numeric columns
/// only, with string row labels.
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub row_labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self { name: name.into(), columns, row_labels: Vec::new(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, label: impl Into<String>, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.row_labels.push(label.into());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub case_count: usize,
    pub checked_count: usize,
    pub failure_count: usize,
    pub max_checked_diff: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub model: String,
    pub ambient_dim: usize,
    pub corner_dim: usize,
    pub seed: u64,
    pub cases: Vec<CaseRecord>,
    pub tables: Vec<Table>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(experiment: &str, model: &str, ambient_dim: usize, corner_dim: usize, seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            model: model.into(),
            ambient_dim,
            corner_dim,
            seed,
            cases: Vec::new(),
            tables: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push_case(&mut self, case: CaseRecord) {
        self.cases.push(case);
    }

    pub fn push_table(&mut self, table: Table) {
        self.tables.push(table);
    }

    /// Recomputes the summary block from the recorded cases.
    pub fn finalize(&mut self) {
        let mut summary = Summary { case_count: self.cases.len(), ..Summary::default() };
        for case in &self.cases {
            if let Some(pass) = case.pass {
                summary.checked_count += 1;
                if !pass {
                    summary.failure_count += 1;
                }
                if case.diff.is_finite() {
                    summary.max_checked_diff = summary.max_checked_diff.max(case.diff);
                }
            }
        }
        self.summary = summary;
    }

    pub fn failed(&self) -> bool {
        self.summary.failure_count > 0
    }

    /// Deterministic summary document. Serde's shortest-round-trip float
    /// formatting is value-determined, and every container here is a `Vec`,
    /// so equal runs produce equal bytes.
    pub fn summary_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }

    /// Writes `summary.json`, `cases.csv`, and one `<table>.csv` per table
    /// into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        let io_err = |e: std::io::Error| Error::Io { context: format!("{}: {e}", dir.display()) };
        std::fs::create_dir_all(dir).map_err(io_err)?;
        std::fs::write(dir.join("summary.json"), self.summary_json()).map_err(io_err)?;

        let mut csv = String::from("label,lhs,rhs,diff,tolerance,pass,wall_ms\n");
        for case in &self.cases {
            let tol = case.tolerance.map_or(String::new(), fmt_float);
            let pass = case.pass.map_or(String::new(), |p| p.to_string());
            let _ = writeln!(
                csv,
                "{},{},{},{},{tol},{pass},{:.3}",
                csv_field(&case.label),
                fmt_float(case.lhs),
                fmt_float(case.rhs),
                fmt_float(case.diff),
                case.wall_ms
            );
        }
        std::fs::write(dir.join("cases.csv"), csv).map_err(io_err)?;

        for table in &self.tables {
            let mut out = String::from("label");
            for col in &table.columns {
                out.push(',');
                out.push_str(&csv_field(col));
            }
            out.push('\n');
            for (label, row) in table.row_labels.iter().zip(&table.rows) {
                out.push_str(&csv_field(label));
                for value in row {
                    out.push(',');
                    out.push_str(&fmt_float(*value));
                }
                out.push('\n');
            }
            std::fs::write(dir.join(format!("{}.csv", table.name)), out).map_err(io_err)?;
        }
        Ok(())
    }

    /// One terminal line per case plus a summary line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} [model={} M={} N={} seed={}]",
            self.experiment, self.model, self.ambient_dim, self.corner_dim, self.seed
        );
        for case in &self.cases {
            let verdict = match case.pass {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "info",
            };
            let _ = writeln!(
                out,
                "  [{verdict}] {:<44} lhs={:<23.16e} rhs={:<23.16e} diff={:.3e}",
                case.label, case.lhs, case.rhs, case.diff
            );
        }
        let _ = writeln!(
            out,
            "  {} cases, {} checked, {} failed, max checked diff {:.3e}",
            self.summary.case_count,
            self.summary.checked_count,
            self.summary.failure_count,
            self.summary.max_checked_diff
        );
        out
    }
}

/// 17 significant digits: enough to round-trip any f64 exactly.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts_checked_cases_only() {
        let mut report = RunReport::new("demo", "shift", 64, 8, 1);
        report.push_case(CaseRecord::checked("a", 1.0, 1.0 + 1e-12, 1e-9));
        report.push_case(CaseRecord::checked("b", 1.0, 2.0, 1e-9));
        report.push_case(CaseRecord::diagnostic("c", 3.0, 0.0));
        report.finalize();
        assert_eq!(report.summary.case_count, 3);
        assert_eq!(report.summary.checked_count, 2);
        assert_eq!(report.summary.failure_count, 1);
        assert!((report.summary.max_checked_diff - 1.0).abs() < 1e-15);
        assert!(report.failed());
    }

    #[test]
    fn nan_diff_fails_closed() {
        let case = CaseRecord::checked("nan", f64::NAN, 1.0, 1e-9);
        assert_eq!(case.pass, Some(false));
    }

    #[test]
    fn summary_json_is_stable_and_wall_free() {
        let build = || {
            let mut r = RunReport::new("demo", "shift", 64, 8, 1);
            r.push_case(CaseRecord::checked("a", 0.1, 0.1, 1e-9).with_wall(12.5));
            let mut t = Table::new("trend", vec!["value".into()]);
            t.push_row("row", vec![0.25]);
            r.push_table(t);
            r.finalize();
            r.summary_json()
        };
        let first = build();
        let second = {
            let mut r = RunReport::new("demo", "shift", 64, 8, 1);
            r.push_case(CaseRecord::checked("a", 0.1, 0.1, 1e-9).with_wall(99.0));
            let mut t = Table::new("trend", vec!["value".into()]);
            t.push_row("row", vec![0.25]);
            r.finalize();
            r.push_table(t);
            r.summary_json()
        };
        assert_eq!(first, second);
        assert!(!first.contains("wall"));
    }

    #[test]
    fn csv_emission_round_trips_floats() {
        let dir = std::env::temp_dir().join(format!("report-test-{}", std::process::id()));
        let mut report = RunReport::new("demo", "shift", 64, 8, 1);
        let value = 0.1 + 0.2;
        report.push_case(CaseRecord::checked("x", value, 0.3, 1.0));
        report.finalize();
        report.write_to(&dir).unwrap();
        let cases = std::fs::read_to_string(dir.join("cases.csv")).unwrap();
        let field = cases.lines().nth(1).unwrap().split(',').nth(1).unwrap();
        assert_eq!(field.parse::<f64>().unwrap(), value);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn csv_fields_with_commas_are_quoted() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}
