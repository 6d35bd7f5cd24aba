use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series did not reach its truncation criterion within the hard term cap.
    #[error("{what} did not converge within {terms} terms (partial log-sum {partial_log_sum})")]
    Convergence {
        what: &'static str,
        terms: usize,
        partial_log_sum: f64,
    },

    /// The risk integrand is not integrable against the law of ‖X‖².
    #[error("risk integrand not integrable: {0}")]
    NonIntegrable(String),

    /// The factor's tail near its support end matches neither Case 1 nor Case 2.
    #[error("classification failed: {0}")]
    Classification(String),

    /// No evaluated noncentrality produced a positive risk excess, or a
    /// tail bound was falsified on a refined grid.
    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
