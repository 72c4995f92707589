//! CSV tables and number formatting.

use std::fmt::Write as _;

use lsredist::{IterationRecord, RedistanceReport64};

/// `x` with six significant digits, fixed or scientific like `%g`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let s = format!("{:.*}", (5 - exp).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

/// Shortest round-trip representation in scientific notation.
pub fn full(x: f64) -> String {
    format!("{x:e}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(full).unwrap_or_default()
}

/// `iter,eikonal_error,l2_error,interface_error`, one row per iterate
/// starting from the initial field. Missing norms are left empty.
pub fn history_csv(report: &RedistanceReport64) -> String {
    let mut s = String::from("iter,eikonal_error,l2_error,interface_error\n");
    let rows: Vec<&IterationRecord<f64>> = std::iter::once(&report.initial).chain(&report.history).collect();
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.iter, full(r.eikonal_error), opt(r.l2_error), opt(r.interface_error));
    }
    s
}

pub struct Summary<'a> {
    pub label: &'a str,
    pub report: &'a RedistanceReport64,
}

impl Summary<'_> {
    pub fn line(&self) -> String {
        let r = self.report;
        let last = r.last();
        let show = |v: Option<f64>| v.map(sig6).unwrap_or_else(|| "n/a".into());
        format!(
            "{}: iterations {} converged {} eikonal {} l2 {} interface {} sign mismatches {} time {} s",
            self.label,
            r.iterations,
            r.converged,
            sig6(last.eikonal_error),
            show(last.l2_error),
            show(last.interface_error),
            last.sign_mismatches,
            sig6(r.wall_time.as_secs_f64()),
        )
    }
}
