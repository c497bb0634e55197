use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its admissible range (simplex, box, `[0, 1]`).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The operation is undefined for this input (e.g. roots of the zero polynomial).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method failed to meet its accuracy contract.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A combinatorial object is too large to materialize under the configured cap.
    #[error("capacity error: {what} has {count} elements, limit is {limit}")]
    Capacity {
        what: String,
        count: u128,
        limit: u128,
    },

    /// Malformed family description.
    #[error("invalid family: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
