use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("unknown system \"{0}\" (see `loclab list`)")]
    UnknownSystem(String),
    #[error("infeasible lattice size {size} for {system}: {reason}")]
    InfeasibleSize {
        system: String,
        size: usize,
        reason: String,
    },
    #[error("invalid region for {system}: {reason}")]
    InvalidRegion { system: String, reason: String },
    #[error("invalid parameter for {system}: {reason}")]
    InvalidParameter { system: String, reason: String },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("unsupported format \"{0}\"")]
    UnsupportedFormat(String),
    #[error("report schema mismatch: expected {expected}, found {found}")]
    SchemaMismatch { expected: String, found: String },
    #[error("experiment {experiment} failed: {reason}")]
    Experiment { experiment: String, reason: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// Process exit code: 1 for bad input, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Experiment { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, RunError>;
