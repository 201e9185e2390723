//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by path construction, classification and deformation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested winding class was not reached within the loop cap;
    /// callers may retry with a larger cap.
    #[error("winding class {n} unreachable within {cap} extra loops")]
    ClassUnreachableAtCap { n: i64, cap: u32 },

    /// A sample coincided with the projection center of a radial step.
    #[error("singular projection: sample at the projection center")]
    SingularProjection,

    /// A fragment endpoint pair admitted no replacement path; the input was
    /// not a genuine fragment.
    #[error("fragment invalid: {0}")]
    FragmentInvalid(String),

    /// A deformation frame exceeded the curvature tolerance after all
    /// refinement retries.
    #[error("curvature violation in deformation frame {frame}: max |kappa| = {max_kappa}")]
    CurvatureViolation { frame: usize, max_kappa: f64 },

    #[error("invalid rotation axis: {0}")]
    InvalidAxis(String),

    #[error("segment push infeasible: {0}")]
    PushInfeasible(String),

    #[error("skew deformation infeasible: {0}")]
    SkewInfeasible(String),

    /// A winding number failed the integrality check, indicating a broken
    /// G1 lift somewhere upstream.
    #[error("corrupted turning lift: winding residual {residual} exceeds tolerance")]
    CorruptedLift { residual: f64 },

    #[error("goal unreachable at this lattice resolution")]
    OracleUnreachable,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
