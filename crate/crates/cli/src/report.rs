//! CSV and JSON report emission.
//!
//! The record CSV schema is fixed: one header line, comma-separated,
//! columns `manifold,family,index,lambda,kappa,p,hormander_ratio,
//! restriction_ratio,equiv_ratio,half_bound_margin`, floats printed with 17
//! significant digits. Identical configurations produce byte-identical
//! output.

use crate::config::SuiteConfig;
use crate::experiments::ExperimentRecord;
use serde::Serialize;

pub const CSV_HEADER: &str =
    "manifold,family,index,lambda,kappa,p,hormander_ratio,restriction_ratio,equiv_ratio,half_bound_margin";

/// 17 significant digits, scientific; stable across runs.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.manifold);
        out.push(',');
        out.push_str(&r.family);
        out.push(',');
        out.push_str(&r.index);
        out.push(',');
        out.push_str(&fmt_float(r.lambda));
        out.push(',');
        out.push_str(&fmt_float(r.kappa));
        out.push(',');
        out.push_str(&fmt_float(r.p));
        out.push(',');
        out.push_str(&fmt_float(r.hormander_ratio));
        out.push(',');
        out.push_str(&fmt_float(r.restriction_ratio));
        out.push(',');
        out.push_str(&fmt_float(r.equiv_ratio));
        out.push(',');
        out.push_str(&fmt_float(r.half_bound_margin));
        out.push('\n');
    }
    out
}

/// One verification check with its margin against the pinned tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Signed slack: how far inside (positive) or outside (negative) the
    /// tolerance the measurement landed.
    pub margin: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: &str, pass: bool, margin: f64, tolerance: f64, detail: String) -> Self {
        CheckResult {
            name: name.to_string(),
            pass,
            margin,
            tolerance,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{}: {} (margin {:+.3e}, tolerance {:.3e}) {}",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.margin,
            self.tolerance,
            self.detail
        )
    }
}

/// Whole-suite report: configuration, checks, records.
#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
    pub records: Vec<ExperimentRecord>,
    pub skipped: Vec<String>,
    pub runtime_seconds: f64,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite report serializes")
    }
}

/// Records wrapped for single-experiment JSON output.
#[derive(Debug, Serialize)]
pub struct RecordsReport<'a, C: Serialize> {
    pub config: C,
    pub records: &'a [ExperimentRecord],
    pub skipped: &'a [String],
}

pub fn records_to_json<C: Serialize>(report: &RecordsReport<'_, C>) -> String {
    serde_json::to_string_pretty(report).expect("records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_17_significant_digits() {
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        // round-trips exactly
        let x = 0.12345678901234567;
        let s = fmt_float(x);
        assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn empty_record_set_yields_header_only() {
        let csv = records_to_csv(&[]);
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
    }
}
