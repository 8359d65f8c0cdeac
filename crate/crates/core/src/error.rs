use thiserror::Error;

/// Error type shared by the simulation, feature, network and diagnosis modules.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Simulation state became non-finite (step too large or unstable gains).
    #[error("non-finite state at t = {t} s: {what}")]
    NonFinite { t: f64, what: &'static str },

    /// Training loss became non-finite.
    #[error("training diverged at epoch {epoch}")]
    Diverged { epoch: usize },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("trace too short: {len} records, need at least {needed}")]
    TraceTooShort { len: usize, needed: usize },

    /// The scenario's faulted switch set (or an observable subset) has no code.
    #[error("fault set has no code: {0}")]
    UncodableFaultSet(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Operation needs an instantaneous-feature model, got a windowed one.
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("malformed file: {0}")]
    MalformedFile(String),

    #[error("unsupported format version: {0}")]
    VersionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
