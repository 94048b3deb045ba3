//! Shared error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain: {0}")]
    Domain(String),

    /// Requested order, dimension or manifold is not in the catalog.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A computation failed numerically (blow-up, no admissible parameter).
    #[error("numerical: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
