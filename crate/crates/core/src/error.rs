use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or quadrature ran out of budget before meeting its tolerance.
    #[error("{what} did not converge (partial estimate {estimate:e})")]
    NonConvergence { what: String, estimate: f64 },

    /// Inconsistent simulator or run configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn no_convergence(what: impl Into<String>, estimate: f64) -> Self {
        Error::NonConvergence {
            what: what.into(),
            estimate,
        }
    }

    /// True for errors caused by numerics rather than by the caller's input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
