use thiserror::Error;

/// Errors raised by the simulator and the estimators built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QampError {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("control and target qubits overlap at qubit {0}")]
    OverlappingQubits(usize),

    #[error("map is not a bijection on basis indices: {0}")]
    NotBijective(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("statevector norm drifted to {norm_sq:.3e} (tolerance {tolerance:.1e})")]
    NormDrift { norm_sq: f64, tolerance: f64 },

    #[error("degenerate search: {0}")]
    DegenerateSearch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("payoff out of range: {0}")]
    PayoffRange(String),

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("model assumption violated: {0}")]
    ModelAssumption(String),
}

impl QampError {
    /// True for errors caused by a violated model assumption rather than by
    /// malformed input.
    pub fn is_model_error(&self) -> bool {
        matches!(
            self,
            QampError::ModelAssumption(_)
                | QampError::DegenerateSearch(_)
                | QampError::PayoffRange(_)
                | QampError::Distribution(_)
                | QampError::NormDrift { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, QampError>;
