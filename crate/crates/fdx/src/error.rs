use thiserror::Error;
use vsr_core::CoreError;

#[derive(Debug, Error)]
pub enum FdxError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("config error: {0}")]
    Config(String),

    #[error("connection error: {0}")]
    Connection(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FdxError>;

impl FdxError {
    /// Process exit code: 1 config, 2 runtime/numeric, 3 I/O or connection.
    pub fn exit_code(&self) -> i32 {
        match self {
            FdxError::Config(_) => 1,
            FdxError::Core(core) => match core {
                CoreError::NonFinite { .. } | CoreError::Diverged { .. } => 2,
                CoreError::Io(_) => 3,
                _ => 1,
            },
            FdxError::Connection(_) | FdxError::Io(_) => 3,
        }
    }
}
