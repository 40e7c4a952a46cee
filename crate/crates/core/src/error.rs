use core::fmt;

/// Failures raised by the discrete geometry and the flow.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Derivative order outside `1..=4`.
    InvalidOrder(usize),
    /// Fewer nodes than the widest one-sided stencil needs.
    TooFewNodes { nodes: usize, required: usize },
    /// Ambient dimension below two.
    InvalidDimension(usize),
    /// Field length does not match the curve grid.
    LengthMismatch { expected: usize, found: usize },
    /// Boundary data inconsistent (non-unit tangent, bad length, wrong dimension).
    InvalidBoundary(&'static str),
    /// Endpoint nodes differ from the clamped positions.
    EndpointMismatch { end: usize },
    /// Arc element at or below the immersion threshold.
    DegenerateCurve { node: usize, gamma: f64 },
    /// Elastic energy too small for the multiplier to be defined.
    ZeroEnergy { energy: f64 },
    /// A step raised the energy beyond tolerance.
    EnergyIncrease { before: f64, after: f64 },
    /// Repeated step halving failed to produce an accepted step.
    MaxRetries { attempts: usize, last_dt: f64 },
    /// Zero pivot during banded factorization.
    SingularSystem { row: usize },
    /// Test field does not vanish to first order at the endpoints.
    BoundaryViolation { end: usize, value: f64 },
    /// Initial curve generation could not meet the prescribed length.
    GenerationFailure(&'static str),
    /// Invalid scalar parameter.
    InvalidParameter(&'static str),
    /// NaN or infinity appeared in the state.
    NonFinite,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidOrder(k) => write!(f, "derivative order {k} not in 1..=4"),
            Error::TooFewNodes { nodes, required } => {
                write!(f, "curve has {nodes} nodes, at least {required} required")
            }
            Error::InvalidDimension(d) => write!(f, "ambient dimension {d} < 2"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "field has {found} entries, expected {expected}")
            }
            Error::InvalidBoundary(msg) => write!(f, "invalid boundary data: {msg}"),
            Error::EndpointMismatch { end } => {
                write!(f, "endpoint {end} does not match the clamped position")
            }
            Error::DegenerateCurve { node, gamma } => {
                write!(f, "degenerate curve: arc element {gamma:e} at node {node}")
            }
            Error::ZeroEnergy { energy } => {
                write!(f, "elastic energy {energy:e} too small, multiplier undefined")
            }
            Error::EnergyIncrease { before, after } => {
                write!(f, "energy increased from {before:.17e} to {after:.17e}")
            }
            Error::MaxRetries { attempts, last_dt } => {
                write!(f, "step rejected {attempts} times, last dt {last_dt:e}")
            }
            Error::SingularSystem { row } => write!(f, "singular linear system at row {row}"),
            Error::BoundaryViolation { end, value } => {
                write!(f, "field does not vanish at endpoint {end} (|value| = {value:e})")
            }
            Error::GenerationFailure(msg) => write!(f, "initial curve generation failed: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NonFinite => write!(f, "non-finite value in state"),
        }
    }
}

impl core::error::Error for Error {}
