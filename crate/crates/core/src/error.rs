use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite evaluation at coordinate {coordinate} (value {value})")]
    NonFiniteCoordinate { coordinate: usize, value: f64 },

    #[error("non-finite evaluation at {point:?}")]
    NonFinite { point: Vec<f64> },

    #[error("evaluation failed at {points:?}: {reason}")]
    Evaluation { points: Vec<Vec<f64>>, reason: String },

    #[error("objective has no gradient")]
    NoGradient,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("simplex pivot limit exceeded; last basis {basis:?}")]
    LpCycling { basis: Vec<usize> },

    #[error("projection did not converge, residual {residual:e}")]
    ProjectionNotConverged { residual: f64 },

    #[error("hit-and-run: no non-degenerate chord after {retries} directions")]
    DegenerateChord { retries: usize },

    #[error("1-D maximization failed on coordinate {coordinate}: {reason}")]
    OneDim { coordinate: usize, reason: String },

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
