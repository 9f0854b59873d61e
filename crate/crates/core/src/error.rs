use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("value {0} outside [0, 1]")]
    Domain(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("spectrum trace {trace} deviates from 1 by more than {tol}")]
    TraceDeviation { trace: f64, tol: f64 },

    #[error("eigenvalue {0} below the clamp tolerance")]
    NegativeEigenvalue(f64),

    #[error("matrix is not special-unitary (residual {0:.3e})")]
    NotSpecialUnitary(f64),

    #[error("closed form requires r00 = 1/2, got {0}")]
    NotBalanced(f64),

    #[error("environment qubit is not pure")]
    NotPure,

    #[error("degenerate system state: no classical information to record")]
    DegenerateSystem,

    #[error("scaling law undefined: {0}")]
    ScalingDomain(String),

    #[error("environment size {0} exceeds the dense-oracle cap {1}")]
    OracleCap(u32, u32),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
