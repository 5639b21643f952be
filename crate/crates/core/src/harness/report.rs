//! Machine-readable experiment reports.
//!
//! A report body is deterministic: comment lines carrying the resolved
//! configuration, a `scale,value,bound,ratio` CSV table, and one summary
//! line `verdict,fitted_exponent,residual,constant`. All floats are emitted
//! with 17 significant digits.

use std::fmt::Write as _;

/// Experiment outcome, ordered from best to worst for aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One row of the rate table.
#[derive(Debug, Clone, Copy)]
pub struct RateRow {
    pub scale: f64,
    pub value: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// A complete experiment report.
#[derive(Debug, Clone)]
pub struct RateReport {
    pub rows: Vec<RateRow>,
    pub fitted_exponent: f64,
    pub fit_residual: f64,
    pub measured_constant: f64,
    pub verdict: Verdict,
    /// Free-form context lines embedded as comments (resolved config,
    /// experiment identity, notes). No timestamps: bodies must be
    /// byte-identical across reruns.
    pub context: Vec<String>,
}

/// 17 significant digits, enough to round-trip an f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl RateReport {
    /// The report body.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.context {
            writeln!(out, "# {line}").unwrap();
        }
        writeln!(out, "scale,value,bound,ratio").unwrap();
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                fmt_float(row.scale),
                fmt_float(row.value),
                fmt_float(row.bound),
                fmt_float(row.ratio)
            )
            .unwrap();
        }
        writeln!(
            out,
            "{},{},{},{}",
            self.verdict.as_str(),
            fmt_float(self.fitted_exponent),
            fmt_float(self.fit_residual),
            fmt_float(self.measured_constant)
        )
        .unwrap();
        out
    }

    /// Plot-ready two-column (scale, value) data.
    pub fn render_curve(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            writeln!(out, "{} {}", fmt_float(row.scale), fmt_float(row.value)).unwrap();
        }
        out
    }
}

/// Max-over-min spread of the ratios at rows whose value is above the fit
/// floor; `None` when every value is (numerically) zero.
pub fn ratio_spread(rows: &[RateRow]) -> Option<(f64, f64)> {
    let live: Vec<f64> = rows
        .iter()
        .filter(|r| r.value > super::fit::FIT_FLOOR && r.ratio.is_finite())
        .map(|r| r.ratio)
        .collect();
    if live.is_empty() {
        return None;
    }
    let hi = live.iter().cloned().fold(f64::MIN, f64::max);
    let lo = live.iter().cloned().fold(f64::MAX, f64::min);
    Some((lo, hi))
}
