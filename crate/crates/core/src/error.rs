use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole: {0}")]
    PoleError(String),
    #[error("dimension mismatch: {0}")]
    DimensionError(String),
    #[error("operator not in canonical form: {0}")]
    NotCanonicalForm(String),
    #[error("unsupported order: {0}")]
    OrderError(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("irregular singular point: {0}")]
    IrregularPoint(String),
    #[error("series did not converge: {0}")]
    ConvergenceError(String),
    #[error("parameter hits a pole: {0}")]
    ParameterPole(String),
    #[error("continuation step too close to a singularity: {0}")]
    StepTooClose(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("reducible parameters: {0}")]
    ReducibleParameters(String),
    #[error("inadmissible delta: {0}")]
    InadmissibleDelta(String),
    #[error("outside domain: {0}")]
    DomainError(String),
    #[error("truncation too short: {0}")]
    TruncationError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
