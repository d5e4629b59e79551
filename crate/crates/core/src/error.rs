use thiserror::Error;

/// Errors produced by ring arithmetic, sampling, the protocol roles and the
/// simulation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} coefficients")]
    Dimension { left: usize, right: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid ternary spec: {num_plus} (+1) and {num_minus} (-1) coefficients do not fit in N = {n}")]
    InvalidSpec {
        num_plus: usize,
        num_minus: usize,
        n: usize,
    },

    #[error("no invertible polynomial found after {attempts} draws")]
    SamplingFailure { attempts: usize },

    #[error("private polynomial is not invertible mod {0}")]
    NotInvertible(i64),

    #[error("modulus {0} is neither prime nor a prime power")]
    UnsupportedModulus(i64),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("state error: {0}")]
    State(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
