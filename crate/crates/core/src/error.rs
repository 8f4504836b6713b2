use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure did not reach the requested accuracy.
    #[error("accuracy failure: {0}")]
    Accuracy(String),

    /// A shell table does not reach far enough for the requested tolerance.
    #[error("insufficient cutoff: {0}")]
    Cutoff(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),

    /// The sign pattern required by a formula does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    /// The sampling grid is too coarse for exact quadrature.
    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("cache file: {0}")]
    Cache(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn accuracy(msg: impl Into<String>) -> Self {
        Error::Accuracy(msg.into())
    }
}
