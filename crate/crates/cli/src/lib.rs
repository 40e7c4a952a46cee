//! Command-line shell around `elastica-core`: run configuration, initial
//! curves and their admissibility checks, trajectory files, SVG snapshots and
//! offline diagnosis of finished runs.

pub mod config;
pub mod diagnose;
mod error;
pub mod generate;
pub mod output;
pub mod pipeline;
pub mod svg;

pub use config::{InitialKind, RunConfig};
pub use error::{CliError, Result};
pub use generate::{generate_initial, validate_compatibility, Violation};
