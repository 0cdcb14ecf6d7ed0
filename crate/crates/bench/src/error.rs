use nrp_core::NrpError;

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] NrpError),
    #[error("{algorithm} failed on {instance} with seed {seed}: {source}")]
    Run {
        instance: String,
        algorithm: String,
        seed: u64,
        #[source]
        source: NrpError,
    },
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Undefined(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl BenchError {
    /// Process exit status: 3 for integrity failures, 2 for everything
    /// caused by the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Core(e) | BenchError::Run { source: e, .. } if e.is_integrity() => 3,
            _ => 2,
        }
    }
}
