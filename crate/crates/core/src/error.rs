use thiserror::Error;

/// Errors raised by the geometry engine and the square-graph model.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QrgError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("regime mismatch: cannot compare {left} scalar with {right} scalar")]
    RegimeMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    #[error("not a bimodule connection: {0}")]
    NotBimoduleConnection(String),

    #[error("metric is not edge-symmetric (requires d1 a = d2 b = 0): {0}")]
    NonSymmetricMetric(String),

    #[error("solver failed after {seeds} seeds, best residual {best_residual:e}")]
    SolverFailure { seeds: usize, best_residual: f64 },

    #[error("signature error: {0}")]
    Signature(String),

    #[error("inadmissible momentum parameters: {0}")]
    Admissibility(String),

    #[error("quadrature did not converge: {0}")]
    Convergence(String),

    #[error("ill-conditioned normalization: |Z| = {0:e}")]
    IllConditionedNormalization(f64),

    #[error("exact arithmetic unavailable: {0}")]
    ExactUnavailable(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, QrgError>;

impl From<std::io::Error> for QrgError {
    fn from(e: std::io::Error) -> Self {
        QrgError::Io(e.to_string())
    }
}

impl From<csv::Error> for QrgError {
    fn from(e: csv::Error) -> Self {
        QrgError::Io(e.to_string())
    }
}
