use thiserror::Error;

/// Errors produced by the numerical kernels and the experiment layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },
    /// A quadrature or contour integral failed its own accuracy check.
    #[error("{what} did not converge: {detail}")]
    Convergence { what: &'static str, detail: String },
    /// An invalid parameter set or experiment description.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}

pub(crate) fn convergence(what: &'static str, detail: impl Into<String>) -> Error {
    Error::Convergence {
        what,
        detail: detail.into(),
    }
}
