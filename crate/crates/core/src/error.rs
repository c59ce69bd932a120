use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad input: malformed expressions, JSON, or arguments outside a stated range.
    #[error("{0}")]
    Input(String),
    /// A theorem hypothesis the caller is responsible for does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    /// Something the pipeline should guarantee did not happen.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Hypothesis(_) => 2,
            Error::Consistency(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn consistency<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Consistency(msg.into()))
}
