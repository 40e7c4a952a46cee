//! Initial curves and the admissibility checks they must pass before a run.

use std::f64::consts::PI;
use std::fmt;

use elastica_core::curve::{quad_with_gamma, BoundaryData, DiscreteCurve, MIN_NODES};
use elastica_core::shapes::{perturbed_arc, Arc};
use elastica_core::stencil;

use crate::config::{InitialKind, RunConfig};
use crate::error::{CliError, Result};
use crate::output::read_snapshot;

/// Endpoint positions must match to this distance.
pub const ENDPOINT_TOL: f64 = 1e-10;
/// Discrete end tangents must match within `TANGENT_FACTOR * h`.
pub const TANGENT_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Node array unusable (wrong dimension, too few or non-finite nodes).
    Malformed(String),
    Endpoint { end: usize, distance: f64 },
    /// Degenerate end: no discrete tangent.
    NoTangent { end: usize },
    Tangent { end: usize, deviation: f64, tolerance: f64 },
    /// `|p1 - p0| < L (1 - margin)` fails.
    Admissibility { chord: f64, length: f64, margin: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Malformed(msg) => write!(f, "malformed curve: {msg}"),
            Violation::Endpoint { end, distance } => {
                write!(f, "endpoint {end} is {distance:e} away from its clamped position")
            }
            Violation::NoTangent { end } => write!(f, "no tangent at endpoint {end}"),
            Violation::Tangent { end, deviation, tolerance } => write!(
                f,
                "tangent at endpoint {end} deviates by {deviation:e} (tolerance {tolerance:e})"
            ),
            Violation::Admissibility { chord, length, margin } => write!(
                f,
                "endpoint distance {chord} not below length {length} reduced by margin {margin}"
            ),
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Checks node-major coordinates against clamped data. Empty means admissible.
pub fn validate_compatibility(nodes: &[f64], boundary: &BoundaryData, margin: f64) -> Vec<Violation> {
    let d = boundary.dim();
    if nodes.len() % d != 0 {
        return vec![Violation::Malformed(format!("{} coordinates do not split into {d}-vectors", nodes.len()))];
    }
    let n = nodes.len() / d;
    if n < MIN_NODES {
        return vec![Violation::Malformed(format!("{n} nodes, at least {MIN_NODES} needed"))];
    }
    if nodes.iter().any(|v| !v.is_finite()) {
        return vec![Violation::Malformed("non-finite coordinate".into())];
    }
    let mut out = Vec::new();
    let ends = [(0, &boundary.p0, &boundary.tau0), (n - 1, &boundary.p1, &boundary.tau1)];
    for (end, (node, p, _)) in ends.iter().enumerate() {
        let dist = distance(&nodes[node * d..(node + 1) * d], p);
        if !(dist <= ENDPOINT_TOL) {
            out.push(Violation::Endpoint { end, distance: dist });
        }
    }
    let h = 1.0 / (n - 1) as f64;
    let d1 = stencil::derivative(nodes, d, 1, h).expect("first-order stencil exists");
    let gamma: Vec<f64> = (0..n).map(|i| d1[i * d..(i + 1) * d].iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    let tolerance = TANGENT_FACTOR * h;
    for (end, (node, _, tau)) in ends.iter().enumerate() {
        let g = gamma[*node];
        if !(g > 0.0) {
            out.push(Violation::NoTangent { end });
            continue;
        }
        let t: Vec<f64> = d1[node * d..(node + 1) * d].iter().map(|v| v / g).collect();
        let deviation = distance(&t, tau);
        if !(deviation <= tolerance) {
            out.push(Violation::Tangent { end, deviation, tolerance });
        }
    }
    let length = quad_with_gamma(&vec![1.0; n], &gamma, h);
    let chord = distance(&boundary.p0, &boundary.p1);
    if !(chord < length * (1.0 - margin)) {
        out.push(Violation::Admissibility { chord, length, margin });
    }
    out
}

/// [`validate_compatibility`] for a curve with the default margin.
pub fn validate_curve(curve: &DiscreteCurve) -> Vec<Violation> {
    validate_compatibility(curve.nodes(), curve.boundary(), RunConfig::default().margin)
}

fn from_arc(
    radius: f64,
    angle: f64,
    sample: impl FnOnce(&Arc) -> elastica_core::Result<DiscreteCurve>,
) -> Result<(Vec<f64>, BoundaryData)> {
    let arc = Arc::new(radius, angle).map_err(CliError::Generation)?;
    let c = sample(&arc).map_err(CliError::Generation)?;
    let b = c.boundary().clone();
    Ok((c.into_nodes(), b))
}

/// Initial nodes and boundary data, before any validation. Boundary keys in
/// the configuration replace the values implied by the initial kind.
pub fn generate_nodes(cfg: &RunConfig) -> Result<(Vec<f64>, BoundaryData)> {
    let n = cfg.flow.n_nodes;
    let (nodes, implied) = match &cfg.initial {
        InitialKind::Semicircle { radius } => from_arc(*radius, PI, |a| a.sample(n))?,
        InitialKind::Arc { radius, angle } => from_arc(*radius, *angle, |a| a.sample(n))?,
        InitialKind::PerturbedArc { radius, amp, mode } => {
            from_arc(*radius, PI, |a| perturbed_arc(a, *amp, *mode, n))?
        }
        InitialKind::FromFile(path) => {
            let snap = read_snapshot(path)?;
            let o = &cfg.boundary;
            let need = |v: &Option<Vec<f64>>, key: &str| {
                v.clone().ok_or_else(|| CliError::Config(format!("`{key}` is required for initial.kind = from_file")))
            };
            let b = BoundaryData::new(
                need(&o.p0, "boundary.p0")?,
                need(&o.p1, "boundary.p1")?,
                need(&o.tau0, "boundary.tau0")?,
                need(&o.tau1, "boundary.tau1")?,
                o.ell.ok_or_else(|| CliError::Config("`boundary.ell` is required for initial.kind = from_file".into()))?,
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
            if snap.dim != b.dim() {
                return Err(CliError::Config(format!(
                    "{} has {} coordinates per node, boundary data {}",
                    path.display(),
                    snap.dim,
                    b.dim()
                )));
            }
            return Ok((snap.nodes, b));
        }
    };
    let o = &cfg.boundary;
    let boundary = BoundaryData::new(
        o.p0.clone().unwrap_or(implied.p0),
        o.p1.clone().unwrap_or(implied.p1),
        o.tau0.clone().unwrap_or(implied.tau0),
        o.tau1.clone().unwrap_or(implied.tau1),
        o.ell.unwrap_or(implied.ell),
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    Ok((nodes, boundary))
}

/// Generates and validates the initial curve of a run.
pub fn generate_initial(cfg: &RunConfig) -> Result<DiscreteCurve> {
    let (nodes, boundary) = generate_nodes(cfg)?;
    let violations = validate_compatibility(&nodes, &boundary, cfg.margin);
    if !violations.is_empty() {
        return Err(CliError::Validation(violations));
    }
    Ok(DiscreteCurve::new(nodes, boundary)?)
}
