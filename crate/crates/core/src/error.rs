use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max |h - h^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// The requested bound does not apply to the given state (party count, N >= 5 rule, ...).
    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("failed to load state: {0}")]
    Load(String),
}
