//! Merge run outputs into one summary table, FAIL rows first.

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::experiments::RunError;
use super::scenario::{Check, Verdict};

/// Format with a fixed number of significant digits; deterministic.
pub fn format_sig(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0.000".into();
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let exponent = value.abs().log10().floor() as i32;
    let precision = (digits as i32 - 1 - exponent).max(0) as usize;
    if (-3..=5).contains(&exponent) {
        format!("{value:.precision$}")
    } else {
        format!("{value:.*e}", digits - 1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub name: String,
    pub predicted: String,
    pub measured: String,
    pub tolerance: String,
    pub verdict: Verdict,
}

/// Read each `<dir>/checks.json`, merge, print, optionally write files.
/// Returns whether everything passed.
pub fn merge_reports(dirs: &[impl AsRef<Path>], out: Option<&Path>) -> Result<bool, RunError> {
    let mut rows = Vec::new();
    for dir in dirs {
        let dir = dir.as_ref();
        let path = dir.join("checks.json");
        let text = fs::read_to_string(&path).map_err(|e| {
            RunError::Message(format!("missing or unreadable {}: {e}", path.display()))
        })?;
        let checks: Vec<Check> = serde_json::from_str(&text).map_err(|e| {
            RunError::Message(format!("corrupt {}: {e}", path.display()))
        })?;
        let label = dir
            .file_name()
            .map(|n| n.to_string_lossy().to_string())
            .unwrap_or_else(|| dir.display().to_string());
        for c in checks {
            rows.push(ReportRow {
                experiment: label.clone(),
                name: c.name,
                predicted: c.predicted,
                measured: c.measured,
                tolerance: c.tolerance,
                verdict: c.verdict,
            });
        }
    }
    // FAIL rows first, then stable by (experiment, name).
    rows.sort_by(|a, b| {
        let rank = |v: Verdict| if v == Verdict::Fail { 0 } else { 1 };
        rank(a.verdict)
            .cmp(&rank(b.verdict))
            .then_with(|| a.experiment.cmp(&b.experiment))
            .then_with(|| a.name.cmp(&b.name))
    });

    let mut table = String::new();
    table.push_str(&format!(
        "{:<24} {:<36} {:<22} {:<22} {:<26} {:<6}\n",
        "experiment", "check", "predicted", "measured", "tolerance", "verdict"
    ));
    for r in &rows {
        let verdict = match r.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        table.push_str(&format!(
            "{:<24} {:<36} {:<22} {:<22} {:<26} {:<6}\n",
            r.experiment, r.name, r.predicted, r.measured, r.tolerance, verdict
        ));
    }
    print!("{table}");

    if let Some(out) = out {
        fs::create_dir_all(out)?;
        fs::write(out.join("report.txt"), &table)?;
        let mut json = serde_json::to_string_pretty(&rows)?;
        json.push('\n');
        fs::write(out.join("report.json"), json)?;
    }
    Ok(rows.iter().all(|r| r.verdict == Verdict::Pass))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_significant_digits() {
        assert_eq!(format_sig(2.5, 4), "2.500");
        assert_eq!(format_sig(0.25, 4), "0.2500");
        assert_eq!(format_sig(2.4999999, 4), "2.500");
        assert_eq!(format_sig(123456.0, 4), "123456");
        assert_eq!(format_sig(1.23456e-7, 4), "1.235e-7");
        assert_eq!(format_sig(0.0, 4), "0.000");
    }
}
