use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use elastica_cli::config::parse_switch;
use elastica_cli::diagnose::diagnose;
use elastica_cli::generate::{generate_nodes, validate_compatibility};
use elastica_cli::pipeline::execute;
use elastica_cli::{CliError, Result, RunConfig};

/// Length-preserving elastic flow of clamped open curves.
#[derive(Parser)]
#[command(name = "elastica", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the initial curve, run the flow and write the run directory.
    Run(ConfigArgs),
    /// Validate the initial curve of a configuration without running.
    Check(ConfigArgs),
    /// Re-verify the inequalities recorded in a run directory.
    Diagnose {
        run_dir: PathBuf,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// Configuration file (`key = value` lines).
    config_file: Option<PathBuf>,
    #[arg(long = "config", value_name = "PATH", conflicts_with = "config_file")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    output: Option<PathBuf>,
    #[arg(long)]
    n_nodes: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long, value_name = "on|off", value_parser = switch)]
    length_projection: Option<bool>,
}

fn switch(s: &str) -> std::result::Result<bool, String> {
    parse_switch(s).ok_or_else(|| format!("expected on or off, got `{s}`"))
}

impl ConfigArgs {
    fn load(&self) -> Result<RunConfig> {
        let mut cfg = match self.config_file.as_ref().or(self.config.as_ref()) {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(dir) = &self.output {
            cfg.output_dir = dir.clone();
        }
        if let Some(n) = self.n_nodes {
            cfg.flow.n_nodes = n;
        }
        if let Some(dt) = self.dt {
            cfg.flow.dt = dt;
        }
        if let Some(t) = self.t_end {
            cfg.flow.t_end = t;
        }
        if let Some(p) = self.length_projection {
            cfg.flow.length_projection = p;
        }
        cfg.flow.validate()?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ELASTICA_LOG", "warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => {
            let summary = execute(&args.load()?)?;
            println!("{}", summary.describe());
            Ok(())
        }
        Command::Check(args) => {
            let cfg = args.load()?;
            let (nodes, boundary) = generate_nodes(&cfg)?;
            let violations = validate_compatibility(&nodes, &boundary, cfg.margin);
            if violations.is_empty() {
                println!("initial curve admissible ({} nodes)", nodes.len() / boundary.dim());
                Ok(())
            } else {
                for v in &violations {
                    println!("violation: {v}");
                }
                Err(CliError::Validation(violations))
            }
        }
        Command::Diagnose { run_dir } => {
            let report = diagnose(&run_dir)?;
            for c in &report.checks {
                println!("{c}");
            }
            match report.failures() {
                0 => Ok(()),
                k => Err(CliError::Diagnostics(k)),
            }
        }
    }
}
