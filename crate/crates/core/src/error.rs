use alloc::boxed::Box;
use alloc::string::String;

use crate::opt::Solution;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported size: n = {n} exceeds the limit of {limit}")]
    UnsupportedSize { n: usize, limit: usize },

    /// The objective returned NaN or an infinity. `partial` is the best
    /// point seen before the failure.
    #[error("optimization failed after {} evaluations: objective returned {value}", partial.nfev)]
    OptimizationFailure { value: f64, partial: Box<Solution> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
