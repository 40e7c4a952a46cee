//! Offline re-verification of a run directory from its persisted files.

use std::fmt;
use std::path::Path;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::generate::{generate_nodes, validate_compatibility};
use crate::output::{list_snapshots, read_diagnostics, read_snapshot, CONFIG_ECHO_FILE, DIAGNOSTICS_FILE};

/// Relative length tolerance when the run used length projection.
pub const PROJECTED_LENGTH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "ok  " } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

/// Steps violating `pred`, summarized as "count (first at record k)".
fn summarize(bad: &[usize], total: usize) -> String {
    match bad.first() {
        None => format!("{total} records"),
        Some(k) => format!("{} of {total} records violate, first at record {k}", bad.len()),
    }
}

pub fn diagnose(dir: &Path) -> Result<Report> {
    let cfg = RunConfig::load(&dir.join(CONFIG_ECHO_FILE))?;
    let records = read_diagnostics(&dir.join(DIAGNOSTICS_FILE))?;
    let f = &cfg.flow;
    let mut report = Report::default();
    if records.is_empty() {
        return Err(CliError::Format {
            path: dir.join(DIAGNOSTICS_FILE),
            msg: "no records".into(),
        });
    }

    let bad: Vec<usize> = (1..records.len()).filter(|&k| !(records[k].t > records[k - 1].t)).collect();
    report.push("time increasing", bad.is_empty(), summarize(&bad, records.len()));

    let bad: Vec<usize> = (1..records.len())
        .filter(|&k| records[k].energy - records[k - 1].energy > f.diag_slack * records[k].dt_used)
        .collect();
    let rise = (1..records.len()).map(|k| records[k].energy - records[k - 1].energy).fold(f64::NEG_INFINITY, f64::max);
    report.push(
        "energy steps",
        bad.is_empty(),
        format!("largest step change {rise:e}; {}", summarize(&bad, records.len())),
    );

    let bad: Vec<usize> = (0..records.len()).filter(|&k| !records[k].bounds_hold(f.diag_slack, f.velocity_allowance).0).collect();
    report.push("multiplier bound", bad.is_empty(), summarize(&bad, records.len()));
    let bad: Vec<usize> = (1..records.len()).filter(|&k| !records[k].bounds_hold(f.diag_slack, f.velocity_allowance).1).collect();
    report.push("reparametrized velocity bound", bad.is_empty(), summarize(&bad, records.len()));

    let (_, boundary) = generate_nodes(&cfg)?;
    let l0 = records[0].length;
    let drift = records.iter().map(|r| (r.length - l0).abs() / l0).fold(0.0, f64::max);
    if f.length_projection {
        let dev = records[1..].iter().map(|r| (r.length - boundary.ell).abs() / boundary.ell).fold(0.0, f64::max);
        report.push("projected length", dev <= PROJECTED_LENGTH_TOL, format!("max relative deviation {dev:e}"));
    } else {
        report.push("length drift", true, format!("max relative drift {drift:e} (informational)"));
    }

    let snapshots = list_snapshots(dir)?;
    report.push("snapshots present", !snapshots.is_empty(), format!("{} files", snapshots.len()));
    let mut bad = Vec::new();
    for (step, path) in &snapshots {
        let snap = read_snapshot(path)?;
        let v = validate_compatibility(&snap.nodes, &boundary, cfg.margin);
        if !v.is_empty() {
            bad.push(format!("step {step}: {}", v[0]));
        }
    }
    report.push(
        "snapshot boundary data",
        bad.is_empty(),
        if bad.is_empty() { "all snapshots clamped and admissible".into() } else { bad.join("; ") },
    );
    Ok(report)
}
