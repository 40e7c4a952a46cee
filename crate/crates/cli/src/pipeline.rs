//! A complete run: generate, validate, flow, persist.

use std::fs;
use std::path::PathBuf;

use elastica_core::stepper::run_observed;
use elastica_core::{DiscreteCurve, StopReason, Trajectory};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::generate::generate_initial;
use crate::output::{write_trajectory, CONFIG_ECHO_FILE};
use crate::svg::render_snapshot;

#[derive(Debug)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub trajectory: Trajectory,
}

impl RunSummary {
    pub fn describe(&self) -> String {
        let t = &self.trajectory;
        let last = t.records.last().expect("a trajectory has its initial record");
        let why = match t.stop {
            StopReason::TimeReached => "end time reached",
            StopReason::Stationary => "residual below threshold",
            StopReason::MaxSteps => "step limit reached",
        };
        format!(
            "{why} after {} steps at t = {:.6e}\n  energy {:.12e} (initial {:.12e})\n  length {:.12e}\n  lambda {:.12e}\n  residual {:.6e}\n  output {}",
            t.final_state.steps,
            last.t,
            last.energy,
            t.e0,
            last.length,
            last.lambda_direct,
            last.residual_l2,
            self.dir.display()
        )
    }
}

/// Runs the flow described by `cfg` and writes the run directory.
pub fn execute(cfg: &RunConfig) -> Result<RunSummary> {
    let initial: DiscreteCurve = generate_initial(cfg)?;
    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
    let echo = dir.join(CONFIG_ECHO_FILE);
    fs::write(&echo, cfg.echo()).map_err(CliError::io(&echo))?;
    render_snapshot(&initial, &dir.join("initial.svg"))?;

    let every = cfg.flow.save_every;
    let trajectory = run_observed(initial, &cfg.flow, |_, next, rec| {
        if next.steps % every == 0 {
            log::info!(
                "step {} t={:.4e} E={:.10e} L={:.10e} residual={:.3e} dt={:.1e}",
                next.steps,
                rec.t,
                rec.energy,
                rec.length,
                rec.residual_l2,
                rec.dt_used
            );
        }
        if rec.dt_used < cfg.flow.dt {
            log::debug!("step {} accepted with reduced dt {:e}", next.steps, rec.dt_used);
        }
    })?;
    let violations = trajectory.bound_violations(cfg.flow.diag_slack, cfg.flow.velocity_allowance);
    if !violations.is_empty() {
        log::warn!("{} records violate an a-priori bound, first at record {}", violations.len(), violations[0]);
    }
    write_trajectory(&trajectory, &dir)?;
    render_snapshot(&trajectory.final_state.curve, &dir.join("final.svg"))?;
    Ok(RunSummary { dir, trajectory })
}
