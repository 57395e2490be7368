use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid arguments or malformed input data.
    #[error("input error: {0}")]
    Input(String),

    /// The brute-force oracle was asked to enumerate more center sets than allowed.
    #[error("enumeration budget exceeded: {required} center sets needed, budget is {budget}")]
    Budget { required: u128, budget: u128 },

    /// A postcondition the algorithms guarantee did not hold.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
