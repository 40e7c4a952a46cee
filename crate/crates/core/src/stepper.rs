//! Semi-implicit time stepping of the flow with prescribed tangential motion.
//!
//! The velocity is `-A(f) + lambda kappa`, whose normal part is the geometric
//! flow and whose tangential part is `mu df/ds` with `mu = -<A(f), df/ds>`.
//! The fourth-order term `f'''' / gamma^4` is split as
//! `f'''' / gamma_frozen^4 + (gamma^-4 - gamma_frozen^-4) f''''`; the first part
//! is implicit, everything else is evaluated at the old state. Boundary rows
//! impose `f = p` and `f'(y) = tau_y gamma_frozen(y)` with the one-sided
//! first-derivative stencil.

use alloc::vec;
use alloc::vec::Vec;

use crate::banded::BandedMatrix;
use crate::curve::{
    deriv, project_with_tangent, quad_with_gamma, trapezoid_weight, DiscreteCurve, ScalarField, VectorField,
    DEFAULT_GAMMA_MIN,
};
use crate::elastica::residual_from;
use crate::error::{Error, Result};
use crate::geometry::GeometricFields;
use crate::multiplier::{lambda_bound_from, lambda_direct_from, lambda_ibp_from, DEFAULT_EPS_ENERGY};
use crate::reparam::{constant_speed, velocity_bound_constant, velocity_bound_pair};
use crate::stencil::Stencil;

/// Parameters of a flow run.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    /// Grid size used when generating initial curves.
    pub n_nodes: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Zero means no limit.
    pub max_steps: usize,
    pub gamma_refreeze_every: usize,
    pub save_every: usize,
    pub length_projection: bool,
    pub stop_residual: f64,
    pub gamma_min: f64,
    pub eps_energy: f64,
    /// Multiplicative slack for the a-priori bounds; a step raising the energy
    /// by more than `diag_slack * dt` is rejected.
    pub diag_slack: f64,
    /// Halvings of `dt` attempted after a rejected step.
    pub max_retries: usize,
    /// Coefficient of the `O(dt)` allowance in the reparametrized velocity bound.
    pub velocity_allowance: f64,
    /// Which form of the multiplier drives the flow.
    pub multiplier: MultiplierForm,
}

/// Form of the multiplier used in the velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplierForm {
    /// `int <grad E, kappa> ds / int |kappa|^2 ds`, the discrete L2(ds)
    /// projection coefficient. Its fixed points are discrete elasticas.
    Direct,
    /// Integrated-by-parts form without fourth derivatives.
    Ibp,
    /// Chosen at each step so that the discrete length is stationary to
    /// first order along the actual update; the state records `Direct`.
    Discrete,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            n_nodes: 201,
            dt: 1e-5,
            t_end: 1.0,
            max_steps: 0,
            gamma_refreeze_every: 10,
            save_every: 1000,
            length_projection: false,
            stop_residual: 1e-4,
            gamma_min: DEFAULT_GAMMA_MIN,
            eps_energy: DEFAULT_EPS_ENERGY,
            diag_slack: 1.05,
            max_retries: 5,
            velocity_allowance: 1.0,
            multiplier: MultiplierForm::Discrete,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter("dt must be positive"));
        }
        if self.n_nodes < crate::curve::MIN_NODES {
            return Err(Error::InvalidParameter("n_nodes must be at least 7"));
        }
        if !(self.stop_residual > 0.0) {
            return Err(Error::InvalidParameter("stop_residual must be positive"));
        }
        if !(self.t_end >= 0.0) {
            return Err(Error::InvalidParameter("t_end must be nonnegative"));
        }
        if self.gamma_refreeze_every == 0 || self.save_every == 0 {
            return Err(Error::InvalidParameter("step intervals must be positive"));
        }
        Ok(())
    }
}

/// Curve at one time together with its cached diagnostics.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub curve: DiscreteCurve,
    pub t: f64,
    /// Multiplier of this curve in the configured form (`Direct` for `Discrete`,
    /// whose actual step value depends on the update and is not stored).
    pub lambda: f64,
    pub energy: f64,
    pub length: f64,
    /// `(f_k - f_{k-1}) / dt` of the step that produced this state; the
    /// continuous velocity `-A(f) + lambda kappa` for an initial state.
    pub velocity: VectorField,
    /// Normal part of `velocity` on this curve.
    pub dt_perp: VectorField,
    /// Step size that produced this state.
    pub dt_used: f64,
    pub steps: usize,
    pub gamma_frozen: ScalarField,
    pub steps_since_freeze: usize,
    pub geometry: GeometricFields,
}

impl FlowState {
    /// Starts a flow; the curve is first passed through [`clamp_discretely`]
    /// and, with length projection on, [`project_length`].
    pub fn new(curve: DiscreteCurve, config: &FlowConfig) -> Result<Self> {
        let mut curve = clamp_discretely(&curve)?;
        if config.length_projection {
            curve = project_length(&curve)?;
        }
        let geometry = GeometricFields::compute_with(&curve, config.gamma_min)?;
        let lambda = flow_multiplier(&geometry, config)?;
        let velocity = geometry
            .a_of_f
            .scaled(-1.0)
            .axpy(lambda, &geometry.kappa);
        let dt_perp = project_with_tangent(&velocity, &geometry.tangent);
        Ok(FlowState {
            t: 0.0,
            lambda,
            energy: geometry.energy,
            length: geometry.length,
            velocity,
            dt_perp,
            dt_used: config.dt,
            steps: 0,
            gamma_frozen: geometry.gamma.clone(),
            steps_since_freeze: 0,
            geometry,
            curve,
        })
    }
}

/// Adds smooth corrections `v0 x (1-x)^4 + v1 (1-x) x^4` so that the
/// one-sided first difference at each end is exactly parallel to the
/// prescribed tangent, keeping its component along the tangent.
///
/// The stepper imposes these rows at every step. Sampled initial data meet
/// them only up to `O(h^2)`; correcting a single node instead would disturb
/// fourth differences by `O(1/h)` and the energy by far more than any step
/// could absorb.
pub fn clamp_discretely(curve: &DiscreteCurve) -> Result<DiscreteCurve> {
    let n = curve.len();
    let dim = curve.dim();
    let h = curve.h();
    let d1 = Stencil::new(1)?;
    let b = curve.boundary();
    let slope_at = |end: usize, values: &dyn Fn(usize) -> f64| -> f64 {
        let (start, w) = d1.weights_at(end, n);
        w.iter().enumerate().map(|(j, wj)| wj * values(start + j)).sum::<f64>() / h
    };
    let rho0 = |i: usize| {
        let x = curve.x(i);
        let y = 1.0 - x;
        x * y * y * y * y
    };
    let rho1 = |i: usize| rho0(n - 1 - i);
    let (a, bb) = (slope_at(0, &rho0), slope_at(0, &rho1));
    let (c, d) = (slope_at(n - 1, &rho0), slope_at(n - 1, &rho1));
    let det = a * d - bb * c;

    let mut nodes = curve.nodes().to_vec();
    let mut err = [vec![0.0; dim], vec![0.0; dim]];
    for (k, (end, tau)) in [(0usize, &b.tau0), (n - 1, &b.tau1)].into_iter().enumerate() {
        let slope: Vec<f64> = (0..dim)
            .map(|comp| slope_at(end, &|i| nodes[i * dim + comp]))
            .collect();
        let along: f64 = slope.iter().zip(tau.iter()).map(|(s, t)| s * t).sum();
        if !(along > 0.0) {
            return Err(Error::InvalidBoundary("curve leaves against the prescribed tangent"));
        }
        for comp in 0..dim {
            err[k][comp] = along * tau[comp] - slope[comp];
        }
    }
    for comp in 0..dim {
        let v0 = (d * err[0][comp] - bb * err[1][comp]) / det;
        let v1 = (a * err[1][comp] - c * err[0][comp]) / det;
        for i in 1..n - 1 {
            nodes[i * dim + comp] += v0 * rho0(i) + v1 * rho1(i);
        }
    }
    DiscreteCurve::new(nodes, b.clone())
}

fn flow_multiplier(geo: &GeometricFields, config: &FlowConfig) -> Result<f64> {
    match config.multiplier {
        MultiplierForm::Direct | MultiplierForm::Discrete => lambda_direct_from(geo, config.eps_energy),
        MultiplierForm::Ibp => lambda_ibp_from(geo, config.eps_energy),
    }
}

/// Gradient of the discrete length with respect to the nodes.
pub fn length_gradient(curve: &DiscreteCurve, tangent: &VectorField) -> VectorField {
    let n = curve.len();
    let h = curve.h();
    let d1 = Stencil::new(1).expect("first-order stencil exists");
    let mut g = VectorField::zeros(n, curve.dim());
    for i in 0..n {
        let (start, w) = d1.weights_at(i, n);
        let wi = trapezoid_weight(i, n, h) / h;
        for (j, wj) in w.iter().enumerate() {
            for (o, t) in g.at_mut(start + j).iter_mut().zip(tangent.at(i)) {
                *o += wi * wj * t;
            }
        }
    }
    g
}

/// `mu = -<A(f), df/ds>`.
pub fn mu_tangential(curve: &DiscreteCurve) -> Result<ScalarField> {
    Ok(GeometricFields::compute(curve)?.mu())
}

/// System matrix `I + dt diag(gamma_frozen^-4) D4` with clamped boundary rows.
///
/// Rows `0` and `n-1` are Dirichlet rows; rows `1` and `n-2` carry the
/// one-sided first-derivative stencil at the corresponding endpoint.
pub fn assemble_system(curve: &DiscreteCurve, gamma_frozen: &[f64], dt: f64) -> Result<BandedMatrix> {
    let n = curve.len();
    if gamma_frozen.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: gamma_frozen.len(),
        });
    }
    if let Some((node, &g)) = gamma_frozen.iter().enumerate().find(|(_, g)| !(**g > 0.0)) {
        return Err(Error::DegenerateCurve { node, gamma: g });
    }
    let h = curve.h();
    let d4 = Stencil::new(4)?;
    let d1 = Stencil::new(1)?;
    let mut m = BandedMatrix::zeros(n, 2, 2);
    let h4 = h * h * h * h;
    for i in 2..n - 2 {
        let g = gamma_frozen[i];
        let coef = dt / (g * g * g * g * h4);
        for (j, w) in d4.central.iter().enumerate() {
            let col = i + j - 2;
            let identity = if col == i { 1.0 } else { 0.0 };
            m.set(i, col, identity + coef * w);
        }
    }
    m.set(0, 0, 1.0);
    m.set(n - 1, n - 1, 1.0);
    let (start, w) = d1.weights_at(0, n);
    for (j, wj) in w.iter().enumerate() {
        m.set(1, start + j, wj / h);
    }
    let (start, w) = d1.weights_at(n - 1, n);
    for (j, wj) in w.iter().enumerate() {
        m.set(n - 2, start + j, wj / h);
    }
    Ok(m)
}

/// Right-hand sides of the boundary rows for component `c`.
fn boundary_rhs(curve: &DiscreteCurve, gamma_frozen: &[f64], c: usize, rhs: &mut [f64]) {
    let n = rhs.len();
    let b = curve.boundary();
    rhs[0] = b.p0[c];
    rhs[1] = b.tau0[c] * gamma_frozen[0];
    rhs[n - 2] = b.tau1[c] * gamma_frozen[n - 1];
    rhs[n - 1] = b.p1[c];
}

/// Bump `sin^2(pi x)` times the curvature, zero on the three outermost nodes at each end.
///
/// Moving along it leaves both the Dirichlet rows and the discrete endpoint
/// tangents untouched.
fn length_direction(curve: &DiscreteCurve, kappa: &VectorField) -> VectorField {
    let n = curve.len();
    let mut w = VectorField::zeros(n, curve.dim());
    for i in 3..n.saturating_sub(3) {
        let s = libm::sin(core::f64::consts::PI * curve.x(i));
        let rho = s * s;
        for (o, k) in w.at_mut(i).iter_mut().zip(kappa.at(i)) {
            *o = rho * k;
        }
    }
    w
}

fn discrete_length(nodes: &[f64], curve: &DiscreteCurve) -> Result<f64> {
    let c = DiscreteCurve::new(nodes.to_vec(), curve.boundary().clone())?;
    let gamma = deriv(&c, 1)?.norms();
    Ok(quad_with_gamma(&vec![1.0; gamma.len()], &gamma, c.h()))
}

/// Moves the interior nodes along [`length_direction`] by the bisection root
/// of `L = ell`.
pub fn project_length(curve: &DiscreteCurve) -> Result<DiscreteCurve> {
    let geo = GeometricFields::compute(curve)?;
    let ell = curve.boundary().ell;
    let w = length_direction(curve, &geo.kappa);
    let rate = geo.quad(&w.dots(&geo.kappa));
    if !(rate > 0.0) {
        return Ok(curve.clone());
    }
    let base = curve.as_field();
    let at = |s: f64| -> Vec<f64> { base.axpy(s, &w).values };
    let defect = |s: f64| -> Result<f64> { Ok(discrete_length(&at(s), curve)? - ell) };

    let d0 = defect(0.0)?;
    if d0 == 0.0 {
        return Ok(curve.clone());
    }
    // first-order guess: dL/ds = -int <w, kappa> ds
    let guess = d0 / rate;
    let (mut lo, mut hi) = (0.0, 2.0 * guess);
    let mut d_hi = defect(hi)?;
    let mut expansions = 0;
    while d_hi.signum() == d0.signum() {
        hi *= 2.0;
        d_hi = defect(hi)?;
        expansions += 1;
        if expansions > 40 {
            return Err(Error::InvalidParameter("length projection bracket not found"));
        }
    }
    let mut d_lo = d0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let d_mid = defect(mid)?;
        if d_mid == 0.0 {
            lo = mid;
            d_lo = 0.0;
            break;
        }
        if d_mid.signum() == d_lo.signum() {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
            d_hi = d_mid;
        }
    }
    let s = if d_lo.abs() <= d_hi.abs() { lo } else { hi };
    DiscreteCurve::new(at(s), curve.boundary().clone())
}

/// One semi-implicit step of size `dt`; rejects energy increases beyond `diag_slack * dt`.
pub fn advance(state: &FlowState, dt: f64, config: &FlowConfig) -> Result<FlowState> {
    let geo = &state.geometry;
    let curve = &state.curve;
    let n = curve.len();
    let dim = curve.dim();

    let refreeze = state.steps_since_freeze >= config.gamma_refreeze_every;
    let gamma_frozen = if refreeze {
        geo.gamma.clone()
    } else {
        state.gamma_frozen.clone()
    };
    let lu = assemble_system(curve, &gamma_frozen, dt)?.factor()?;

    // The step is affine in the multiplier: f_next = base + lambda * response.
    let mut base = vec![0.0; n * dim];
    let mut response = vec![0.0; n * dim];
    let mut rhs = vec![0.0; n];
    for c in 0..dim {
        for i in 2..n - 2 {
            let g = gamma_frozen[i];
            let implicit_part = geo.jet.d4.at(i)[c] / (g * g * g * g);
            rhs[i] = curve.node(i)[c] + dt * (-geo.a_of_f.at(i)[c] + implicit_part);
        }
        boundary_rhs(curve, &gamma_frozen, c, &mut rhs);
        lu.solve_in_place(&mut rhs);
        for i in 0..n {
            base[i * dim + c] = rhs[i];
        }
        rhs.iter_mut().for_each(|v| *v = 0.0);
        for i in 2..n - 2 {
            rhs[i] = dt * geo.kappa.at(i)[c];
        }
        lu.solve_in_place(&mut rhs);
        for i in 0..n {
            response[i * dim + c] = rhs[i];
        }
    }
    let lambda_used = match config.multiplier {
        MultiplierForm::Discrete => {
            let grad = length_gradient(curve, &geo.tangent);
            let drift: f64 = (0..n * dim)
                .map(|k| grad.values[k] * (base[k] - curve.nodes()[k]))
                .sum();
            let rate: f64 = (0..n * dim).map(|k| grad.values[k] * response[k]).sum();
            if !(rate.abs() > 0.0) {
                return Err(Error::ZeroEnergy { energy: geo.energy });
            }
            -drift / rate
        }
        _ => state.lambda,
    };
    let new_nodes: Vec<f64> = base
        .iter()
        .zip(&response)
        .map(|(b, r)| b + lambda_used * r)
        .collect();
    if new_nodes.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut next = DiscreteCurve::with_clamped_ends(new_nodes, curve.boundary().clone())?;
    if config.length_projection {
        next = project_length(&next)?;
    }
    let geometry = GeometricFields::compute_with(&next, config.gamma_min)?;
    if geometry.energy > state.energy + config.diag_slack * dt {
        return Err(Error::EnergyIncrease {
            before: state.energy,
            after: geometry.energy,
        });
    }
    let lambda = flow_multiplier(&geometry, config)?;
    let mut velocity = next.as_field().axpy(-1.0, &curve.as_field());
    velocity = velocity.scaled(1.0 / dt);
    let dt_perp = project_with_tangent(&velocity, &geometry.tangent);
    Ok(FlowState {
        t: state.t + dt,
        lambda,
        energy: geometry.energy,
        length: geometry.length,
        velocity,
        dt_perp,
        dt_used: dt,
        steps: state.steps + 1,
        gamma_frozen,
        steps_since_freeze: if refreeze { 1 } else { state.steps_since_freeze + 1 },
        geometry,
        curve: next,
    })
}

/// Advances by `config.dt`, halving the step after each rejected attempt.
pub fn step(state: &FlowState, config: &FlowConfig) -> Result<FlowState> {
    step_with_dt(state, config.dt, config)
}

pub fn step_with_dt(state: &FlowState, dt: f64, config: &FlowConfig) -> Result<FlowState> {
    let mut dt = dt;
    for _ in 0..=config.max_retries {
        match advance(state, dt, config) {
            Err(Error::EnergyIncrease { .. }) => dt *= 0.5,
            other => return other,
        }
    }
    Err(Error::MaxRetries {
        attempts: config.max_retries + 1,
        last_dt: dt * 2.0,
    })
}

/// One row of scalar diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub t: f64,
    pub energy: f64,
    pub length: f64,
    pub lambda_direct: f64,
    pub lambda_ibp: f64,
    pub residual_l2: f64,
    pub lambda_bound_lhs: f64,
    pub lambda_bound_rhs: f64,
    pub velocity_bound_lhs: f64,
    pub velocity_bound_rhs: f64,
    pub dt_used: f64,
}

impl Record {
    pub const FIELDS: [&'static str; 11] = [
        "t",
        "energy",
        "length",
        "lambda_direct",
        "lambda_ibp",
        "residual_l2",
        "lambda_bound_lhs",
        "lambda_bound_rhs",
        "velocity_bound_lhs",
        "velocity_bound_rhs",
        "dt_used",
    ];

    pub fn values(&self) -> [f64; 11] {
        [
            self.t,
            self.energy,
            self.length,
            self.lambda_direct,
            self.lambda_ibp,
            self.residual_l2,
            self.lambda_bound_lhs,
            self.lambda_bound_rhs,
            self.velocity_bound_lhs,
            self.velocity_bound_rhs,
            self.dt_used,
        ]
    }

    pub fn from_values(v: [f64; 11]) -> Self {
        Record {
            t: v[0],
            energy: v[1],
            length: v[2],
            lambda_direct: v[3],
            lambda_ibp: v[4],
            residual_l2: v[5],
            lambda_bound_lhs: v[6],
            lambda_bound_rhs: v[7],
            velocity_bound_lhs: v[8],
            velocity_bound_rhs: v[9],
            dt_used: v[10],
        }
    }

    /// Whether both bounds hold with multiplicative `slack` and, for the
    /// reparametrized velocity, an additive `allowance * dt_used`.
    pub fn bounds_hold(&self, slack: f64, allowance: f64) -> (bool, bool) {
        (
            self.lambda_bound_lhs <= slack * self.lambda_bound_rhs,
            self.velocity_bound_lhs <= slack * self.velocity_bound_rhs + allowance * self.dt_used,
        )
    }
}

/// Curve nodes saved at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub nodes: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    TimeReached,
    Stationary,
    MaxSteps,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dim: usize,
    pub records: Vec<Record>,
    pub snapshots: Vec<Snapshot>,
    pub stop: StopReason,
    /// Energy of the initial curve.
    pub e0: f64,
    pub final_state: FlowState,
}

impl Trajectory {
    /// Indices of records violating either bound.
    pub fn bound_violations(&self, slack: f64, allowance: f64) -> Vec<usize> {
        self.records
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                let (a, b) = r.bounds_hold(slack, allowance);
                !(a && b)
            })
            .map(|(i, _)| i)
            .collect()
    }
}

fn record_for(
    state: &FlowState,
    config: &FlowConfig,
    velocity_bound: (f64, f64),
) -> Result<(Record, f64)> {
    let report = residual_from(&state.geometry, config.eps_energy)?;
    let lambda_ibp = lambda_ibp_from(&state.geometry, config.eps_energy)?;
    let (lam_lhs, lam_rhs) = lambda_bound_from(&state.geometry, &state.curve, state.lambda, &state.dt_perp);
    Ok((
        Record {
            t: state.t,
            energy: state.energy,
            length: state.length,
            lambda_direct: report.lambda_star,
            lambda_ibp,
            residual_l2: report.residual_l2,
            lambda_bound_lhs: lam_lhs,
            lambda_bound_rhs: lam_rhs,
            velocity_bound_lhs: velocity_bound.0,
            velocity_bound_rhs: velocity_bound.1,
            dt_used: state.dt_used,
        },
        report.residual_l2,
    ))
}

/// Runs the flow until `t_end`, `max_steps`, or `residual_l2 <= stop_residual`.
pub fn run(initial: DiscreteCurve, config: &FlowConfig) -> Result<Trajectory> {
    run_observed(initial, config, |_, _, _| {})
}

/// As [`run`], calling `observer(prev, next, record)` after each accepted step.
pub fn run_observed(
    initial: DiscreteCurve,
    config: &FlowConfig,
    mut observer: impl FnMut(&FlowState, &FlowState, &Record),
) -> Result<Trajectory> {
    config.validate()?;
    if !initial.boundary().is_admissible() {
        return Err(Error::InvalidBoundary("endpoint distance must be below the prescribed length"));
    }
    let dim = initial.dim();
    let mut state = FlowState::new(initial, config)?;
    let e0 = state.energy;
    let constant = velocity_bound_constant(state.curve.boundary().ell, e0)?;

    let (first, mut residual) = record_for(&state, config, (0.0, 0.0))?;
    let mut records = vec![first];
    let mut snapshots = vec![Snapshot {
        step: 0,
        t: 0.0,
        nodes: state.curve.nodes().to_vec(),
    }];
    let mut tilde_prev = constant_speed(&state.curve)?;
    let time_eps = 1e-12 * config.dt;

    let stop = loop {
        if residual <= config.stop_residual {
            break StopReason::Stationary;
        }
        if state.t >= config.t_end - time_eps {
            break StopReason::TimeReached;
        }
        if config.max_steps > 0 && state.steps >= config.max_steps {
            break StopReason::MaxSteps;
        }
        let dt = config.dt.min(config.t_end - state.t);
        let next = step_with_dt(&state, dt, config)?;
        let tilde_next = constant_speed(&next.curve)?;
        let vel_bound = velocity_bound_pair(
            &tilde_prev,
            &tilde_next,
            &next.curve,
            &next.velocity,
            next.dt_used,
            constant,
        )?;
        let (rec, res) = record_for(&next, config, vel_bound)?;
        observer(&state, &next, &rec);
        records.push(rec);
        residual = res;
        if next.steps % config.save_every == 0 {
            snapshots.push(Snapshot {
                step: next.steps,
                t: next.t,
                nodes: next.curve.nodes().to_vec(),
            });
        }
        tilde_prev = tilde_next;
        state = next;
    };
    if snapshots.last().map(|s| s.step) != Some(state.steps) {
        snapshots.push(Snapshot {
            step: state.steps,
            t: state.t,
            nodes: state.curve.nodes().to_vec(),
        });
    }
    Ok(Trajectory {
        dim,
        records,
        snapshots,
        stop,
        e0,
        final_state: state,
    })
}
