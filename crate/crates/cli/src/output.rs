//! Trajectory files: `diagnostics.csv`, `snapshot_<step>.csv`, `config.echo`.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64` exactly.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use elastica_core::{Record, Trajectory};

use crate::error::{CliError, Result};

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const CONFIG_ECHO_FILE: &str = "config.echo";

pub fn snapshot_file(step: usize) -> String {
    format!("snapshot_{step}.csv")
}

/// Nodes read back from a snapshot file.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFile {
    pub dim: usize,
    pub nodes: Vec<f64>,
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(path).map_err(CliError::io(path))?))
}

pub fn write_diagnostics(records: &[Record], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = CliError::io(path);
    let mut text = Record::FIELDS.join(",");
    text.push('\n');
    for r in records {
        let row: Vec<String> = r.values().iter().map(|v| fmt(*v)).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(io)
}

pub fn write_snapshot(nodes: &[f64], dim: usize, path: &Path) -> Result<()> {
    let n = nodes.len() / dim;
    let mut text = String::from("x");
    for c in 0..dim {
        text.push_str(&format!(",coord_{c}"));
    }
    text.push('\n');
    for i in 0..n {
        text.push_str(&fmt(i as f64 / (n - 1) as f64));
        for v in &nodes[i * dim..(i + 1) * dim] {
            text.push(',');
            text.push_str(&fmt(*v));
        }
        text.push('\n');
    }
    let mut w = create(path)?;
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(CliError::io(path))
}

/// Writes the diagnostics and every snapshot into `dir`, creating it if needed.
/// Returns the snapshot paths in order.
pub fn write_trajectory(traj: &Trajectory, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    write_diagnostics(&traj.records, &dir.join(DIAGNOSTICS_FILE))?;
    traj.snapshots
        .iter()
        .map(|s| {
            let path = dir.join(snapshot_file(s.step));
            write_snapshot(&s.nodes, traj.dim, &path)?;
            Ok(path)
        })
        .collect()
}

fn format_err(path: &Path, msg: impl Into<String>) -> CliError {
    CliError::Format { path: path.to_path_buf(), msg: msg.into() }
}

/// Header and numeric rows of a CSV file.
fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| format_err(path, "empty file"))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| format_err(path, format!("line {}: {e}", k + 2)))?;
        if row.len() != header.len() {
            return Err(format_err(path, format!("line {}: {} fields, header has {}", k + 2, row.len(), header.len())));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn read_diagnostics(path: &Path) -> Result<Vec<Record>> {
    let (header, rows) = read_table(path)?;
    if header != Record::FIELDS {
        return Err(format_err(path, format!("unexpected header {header:?}")));
    }
    Ok(rows
        .into_iter()
        .map(|r| Record::from_values(r.try_into().expect("row width checked against header")))
        .collect())
}

pub fn read_snapshot(path: &Path) -> Result<SnapshotFile> {
    let (header, rows) = read_table(path)?;
    let dim = header.len().saturating_sub(1);
    let expected: Vec<String> = std::iter::once("x".to_string()).chain((0..dim).map(|c| format!("coord_{c}"))).collect();
    if dim == 0 || header != expected {
        return Err(format_err(path, format!("unexpected header {header:?}")));
    }
    let nodes = rows.iter().flat_map(|r| r[1..].iter().copied()).collect();
    Ok(SnapshotFile { dim, nodes })
}

/// Snapshot files of a run directory, sorted by step.
pub fn list_snapshots(dir: &Path) -> Result<Vec<(usize, PathBuf)>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(CliError::io(dir))? {
        let path = entry.map_err(CliError::io(dir))?.path();
        let step = path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.strip_prefix("snapshot_")?.strip_suffix(".csv")?.parse().ok());
        if let Some(step) = step {
            out.push((step, path));
        }
    }
    out.sort();
    Ok(out)
}
