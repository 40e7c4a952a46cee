//! Length-preserving elastic flow of clamped open curves.
//!
//! Curves are sampled on a uniform grid of `[0, 1]`; derivatives use
//! second-order finite differences and integrals the trapezoid rule in
//! arc length. On top of that substrate the crate evaluates curvature and
//! the elastic gradient, the length-preserving multiplier, the residual of
//! the clamped elastica equation, constant-speed reparametrization, and a
//! semi-implicit stepper for the flow itself.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod banded;
pub mod compose;
pub mod curve;
pub mod elastica;
mod error;
pub mod geometry;
pub mod multiplier;
pub mod refine;
pub mod reparam;
pub mod shapes;
pub mod stencil;
pub mod stepper;

pub use curve::{BoundaryData, DiscreteCurve, ScalarField, VectorField};
pub use elastica::ElasticaReport;
pub use error::{Error, Result};
pub use geometry::GeometricFields;
pub use multiplier::LambdaReport;
pub use reparam::ReparamMap;
pub use stepper::{FlowConfig, FlowState, MultiplierForm, Record, Snapshot, StopReason, Trajectory};
