use thiserror::Error;

pub type Result<T, E = NrpError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum NrpError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Inconsistent ids, missing requests and other violations of the
    /// instance invariants.
    #[error("model error: {0}")]
    Model(String),

    #[error("dependency graph contains a cycle through requirement {0}")]
    Cycle(u32),

    #[error("backbone cost {cost} exceeds the budget bound {bound}")]
    InfeasibleBackbone { cost: u64, bound: u64 },

    #[error("instance has {customers} customers, the exhaustive oracle is capped at {cap}")]
    Scale { customers: usize, cap: usize },

    #[error("integrity violation: {0}")]
    Integrity(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl NrpError {
    /// `true` for errors that indicate a broken invariant inside the solver
    /// rather than bad input.
    pub fn is_integrity(&self) -> bool {
        matches!(self, NrpError::Integrity(_) | NrpError::InfeasibleBackbone { .. })
    }
}
