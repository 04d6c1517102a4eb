use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes are incompatible with the requested operation.
    #[error("shape error: {0}")]
    Shape(String),

    /// A tensor product would exceed the configured total dimension.
    #[error("dimension {dim} exceeds the configured limit {max_dim}")]
    DimensionLimit { dim: usize, max_dim: usize },

    /// Input violates a structural invariant (Hermiticity, normalization, unitarity, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Parameter outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A Choi matrix with an eigenvalue below the negative tolerance.
    #[error("map is not completely positive: Choi eigenvalue {0:e}")]
    NotCompletelyPositive(f64),

    /// Two dilations passed to the witness solver describe different channels.
    #[error("dilations describe different channels (Choi residual {0:e})")]
    NotSameChannel(f64),

    #[error("malformed channel file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
