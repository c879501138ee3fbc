use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("numeric underflow: {0}")]
    NumericUnderflow(String),

    #[error("{count} candidate subsets exceed the enumeration limit of {limit}; use the variational bound instead")]
    TooLarge { count: u128, limit: u128 },

    #[error("quadrature did not converge on [{lo}, {hi}]: estimated error {error:e}")]
    Quadrature { lo: f64, hi: f64, error: f64 },

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than I/O or numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_) | Error::InvalidSubset(_) | Error::Config(_) | Error::Json(_)
        )
    }
}
