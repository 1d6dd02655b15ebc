use thiserror::Error;

use crate::newton::RegionLabel;

/// Errors raised by the mapping and geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZipError {
    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("arc through 0 is tangent to the real axis")]
    TangentArc,

    #[error("data point {index} is out of order (image not in the upper half-plane, Im = {imag:e})")]
    OutOfOrder { index: usize, imag: f64 },

    #[error("even point count required (got {0})")]
    OddPointCount(usize),

    #[error("at least {need} points required (got {got})")]
    TooFewPoints { need: usize, got: usize },

    #[error("Newton iteration did not converge in region {region:?} (residual {residual:e} after {iterations} iterations)")]
    NonConvergence {
        region: RegionLabel,
        residual: f64,
        iterations: usize,
    },

    #[error("slit inversion failed at map step {step}: {source}")]
    StepFailure {
        step: usize,
        #[source]
        source: Box<ZipError>,
    },

    #[error("ambiguous branch: {0}")]
    AmbiguousBranch(String),

    #[error("cannot build chain: {0}")]
    InfeasibleChain(String),

    #[error("pipeline is not normalized to the disc; run normalize first")]
    NotNormalized,

    #[error("invalid welding data: {0}")]
    InvalidWelding(String),

    #[error("malformed pipeline document: {0}")]
    Format(String),
}

pub type Result<T, E = ZipError> = std::result::Result<T, E>;
