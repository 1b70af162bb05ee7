use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An operation was called outside its admissible parameter range.
    /// The message names the violated inequality.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("derivative of order {order} is not available for {family}")]
    UnsupportedDerivative { family: String, order: usize },

    #[error("point {0:?} lies outside the sampled domain")]
    OutOfDomain(Vec<f64>),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
