use pumprecoil_core::mapping::MappingError;
use pumprecoil_core::moments::MomentError;
use pumprecoil_core::{ConfigError, TrajectoryError};

/// Failure of a command, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    /// Monte Carlo disagrees with the closed forms.
    #[error("{0}")]
    Verification(String),
}

impl AppError {
    /// 2 config or usage, 3 runtime, 4 verification mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) | AppError::Usage(_) => 2,
            AppError::Runtime(_) | AppError::Io(_) => 3,
            AppError::Verification(_) => 4,
        }
    }
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<TrajectoryError> for AppError {
    fn from(e: TrajectoryError) -> Self {
        AppError::Runtime(e.to_string())
    }
}

impl From<MomentError> for AppError {
    fn from(e: MomentError) -> Self {
        match e {
            MomentError::EmptyGrid | MomentError::BadGridValue(_) => AppError::Usage(e.to_string()),
            _ => AppError::Config(e.to_string()),
        }
    }
}

impl From<MappingError> for AppError {
    fn from(e: MappingError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<serde_json::Error> for AppError {
    fn from(e: serde_json::Error) -> Self {
        AppError::Config(format!("json: {e}"))
    }
}
