//! `key = value` run configuration with dotted section names.
//!
//! ```text
//! # unit semicircle, bumped
//! initial.kind = perturbed_arc
//! initial.amp = 0.1
//! flow.dt = 1e-5
//! flow.length_projection = off
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use elastica_core::{FlowConfig, MultiplierForm};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialKind {
    Semicircle { radius: f64 },
    Arc { radius: f64, angle: f64 },
    PerturbedArc { radius: f64, amp: f64, mode: u32 },
    /// Snapshot-format CSV; boundary data must be given explicitly.
    FromFile(PathBuf),
}

/// Explicit boundary keys; each one overrides the value the initial kind implies.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryOverrides {
    pub p0: Option<Vec<f64>>,
    pub p1: Option<Vec<f64>>,
    pub tau0: Option<Vec<f64>>,
    pub tau1: Option<Vec<f64>>,
    pub ell: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub initial: InitialKind,
    pub boundary: BoundaryOverrides,
    pub flow: FlowConfig,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Relative admissibility margin: `|p1 - p0| < L (1 - margin)`.
    pub margin: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            initial: InitialKind::Semicircle { radius: 1.0 },
            boundary: BoundaryOverrides::default(),
            flow: FlowConfig::default(),
            output_dir: PathBuf::from("elastica-run"),
            seed: 0,
            margin: 1e-3,
        }
    }
}

struct Entry {
    value: String,
    line: usize,
}

/// Splits the text into `key -> value`, rejecting malformed and repeated keys.
fn parse_lines(text: &str, path: &Path) -> Result<BTreeMap<String, Entry>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Parse { path: path.to_path_buf(), line, msg };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err("expected `key = value`".into()))?;
        let key = key.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.') {
            return Err(err(format!("invalid key `{key}`")));
        }
        let entry = Entry { value: value.trim().to_string(), line };
        if map.insert(key.to_string(), entry).is_some() {
            return Err(err(format!("key `{key}` given twice")));
        }
    }
    Ok(map)
}

struct Reader<'a> {
    map: BTreeMap<String, Entry>,
    path: &'a Path,
}

impl Reader<'_> {
    fn take<T>(&mut self, key: &str, parse: impl Fn(&str) -> Option<T>, what: &str) -> Result<Option<T>> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(e) => parse(&e.value).map(Some).ok_or_else(|| CliError::Parse {
                path: self.path.to_path_buf(),
                line: e.line,
                msg: format!("`{key}` expects {what}, got `{}`", e.value),
            }),
        }
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key, |s| s.parse().ok(), "a number")
    }

    fn usize(&mut self, key: &str) -> Result<Option<usize>> {
        self.take(key, |s| s.parse().ok(), "a nonnegative integer")
    }

    fn vector(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.take(key, parse_vector, "comma-separated numbers")
    }

    fn string(&mut self, key: &str) -> Option<String> {
        self.map.remove(key).map(|e| e.value)
    }
}

pub fn parse_switch(s: &str) -> Option<bool> {
    match s {
        "on" | "true" | "yes" => Some(true),
        "off" | "false" | "no" => Some(false),
        _ => None,
    }
}

fn parse_vector(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|p| p.trim().parse().ok()).collect()
}

fn parse_multiplier(s: &str) -> Option<MultiplierForm> {
    match s {
        "direct" => Some(MultiplierForm::Direct),
        "ibp" => Some(MultiplierForm::Ibp),
        "discrete" => Some(MultiplierForm::Discrete),
        _ => None,
    }
}

fn multiplier_name(m: MultiplierForm) -> &'static str {
    match m {
        MultiplierForm::Direct => "direct",
        MultiplierForm::Ibp => "ibp",
        MultiplierForm::Discrete => "discrete",
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text, path)
    }

    /// Parses configuration text; `path` is used for messages and to resolve
    /// a relative `initial.path`.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut r = Reader { map: parse_lines(text, path)?, path };
        let mut cfg = RunConfig::default();
        let d = &mut cfg.flow;
        macro_rules! set {
            ($field:expr, $value:expr) => {
                if let Some(v) = $value {
                    $field = v;
                }
            };
        }
        set!(d.n_nodes, r.usize("flow.n_nodes")?);
        set!(d.dt, r.f64("flow.dt")?);
        set!(d.t_end, r.f64("flow.t_end")?);
        set!(d.max_steps, r.usize("flow.max_steps")?);
        set!(d.gamma_refreeze_every, r.usize("flow.gamma_refreeze_every")?);
        set!(d.save_every, r.usize("flow.save_every")?);
        set!(d.length_projection, r.take("flow.length_projection", parse_switch, "on or off")?);
        set!(d.stop_residual, r.f64("flow.stop_residual")?);
        set!(d.gamma_min, r.f64("flow.gamma_min")?);
        set!(d.eps_energy, r.f64("flow.eps_energy")?);
        set!(d.diag_slack, r.f64("flow.diag_slack")?);
        set!(d.max_retries, r.usize("flow.max_retries")?);
        set!(d.velocity_allowance, r.f64("flow.velocity_allowance")?);
        set!(d.multiplier, r.take("flow.multiplier", parse_multiplier, "direct, ibp or discrete")?);

        let b = &mut cfg.boundary;
        b.p0 = r.vector("boundary.p0")?;
        b.p1 = r.vector("boundary.p1")?;
        b.tau0 = r.vector("boundary.tau0")?;
        b.tau1 = r.vector("boundary.tau1")?;
        b.ell = r.f64("boundary.ell")?;

        let kind = r.string("initial.kind").unwrap_or_else(|| "semicircle".into());
        let radius = r.f64("initial.radius")?.unwrap_or(1.0);
        cfg.initial = match kind.as_str() {
            "semicircle" => InitialKind::Semicircle { radius },
            "arc" => InitialKind::Arc {
                radius,
                angle: r.f64("initial.angle")?.ok_or_else(|| missing("initial.angle"))?,
            },
            "perturbed_arc" => InitialKind::PerturbedArc {
                radius,
                amp: r.f64("initial.amp")?.unwrap_or(0.1),
                mode: r.take("initial.mode", |s| s.parse().ok(), "a positive integer")?.unwrap_or(1),
            },
            "from_file" => {
                let file = r.string("initial.path").ok_or_else(|| missing("initial.path"))?;
                let base = path.parent().unwrap_or(Path::new(""));
                let joined = base.join(file);
                InitialKind::FromFile(std::path::absolute(&joined).unwrap_or(joined))
            }
            other => return Err(CliError::Config(format!("unknown initial.kind `{other}`"))),
        };
        set!(cfg.output_dir, r.string("output.dir").map(PathBuf::from));
        set!(cfg.seed, r.take("seed", |s| s.parse().ok(), "a nonnegative integer")?);
        set!(cfg.margin, r.f64("validation.margin")?);

        if let Some((key, e)) = r.map.iter().next() {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line: e.line,
                msg: format!("unknown key `{key}`"),
            });
        }
        cfg.flow.validate()?;
        Ok(cfg)
    }

    /// Every key with its effective value, in a form [`RunConfig::parse`] reads back.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| writeln!(s, "{k} = {v}").unwrap();
        match &self.initial {
            InitialKind::Semicircle { radius } => {
                kv("initial.kind", "semicircle".into());
                kv("initial.radius", num(*radius));
            }
            InitialKind::Arc { radius, angle } => {
                kv("initial.kind", "arc".into());
                kv("initial.radius", num(*radius));
                kv("initial.angle", num(*angle));
            }
            InitialKind::PerturbedArc { radius, amp, mode } => {
                kv("initial.kind", "perturbed_arc".into());
                kv("initial.radius", num(*radius));
                kv("initial.amp", num(*amp));
                kv("initial.mode", mode.to_string());
            }
            InitialKind::FromFile(p) => {
                kv("initial.kind", "from_file".into());
                kv("initial.path", p.display().to_string());
            }
        }
        let b = &self.boundary;
        for (k, v) in [("boundary.p0", &b.p0), ("boundary.p1", &b.p1), ("boundary.tau0", &b.tau0), ("boundary.tau1", &b.tau1)] {
            if let Some(v) = v {
                kv(k, v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", "));
            }
        }
        if let Some(ell) = b.ell {
            kv("boundary.ell", num(ell));
        }
        let f = &self.flow;
        kv("flow.n_nodes", f.n_nodes.to_string());
        kv("flow.dt", num(f.dt));
        kv("flow.t_end", num(f.t_end));
        kv("flow.max_steps", f.max_steps.to_string());
        kv("flow.gamma_refreeze_every", f.gamma_refreeze_every.to_string());
        kv("flow.save_every", f.save_every.to_string());
        kv("flow.length_projection", if f.length_projection { "on" } else { "off" }.into());
        kv("flow.stop_residual", num(f.stop_residual));
        kv("flow.gamma_min", num(f.gamma_min));
        kv("flow.eps_energy", num(f.eps_energy));
        kv("flow.diag_slack", num(f.diag_slack));
        kv("flow.max_retries", f.max_retries.to_string());
        kv("flow.velocity_allowance", num(f.velocity_allowance));
        kv("flow.multiplier", multiplier_name(f.multiplier).into());
        kv("output.dir", self.output_dir.display().to_string());
        kv("seed", self.seed.to_string());
        kv("validation.margin", num(self.margin));
        s
    }
}

fn missing(key: &str) -> CliError {
    CliError::Config(format!("`{key}` is required for this initial.kind"))
}

/// Shortest representation that parses back to the same value.
fn num(x: f64) -> String {
    format!("{x:?}")
}
