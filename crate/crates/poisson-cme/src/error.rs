use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested moment does not exist for the given distribution.
    #[error("moment does not exist: {0}")]
    MomentUndefined(String),

    /// An expectation diverges (e.g. E[log X] with an atom at zero and no
    /// dark current).
    #[error("divergent expectation: {0}")]
    Divergent(String),

    /// Derivative order beyond the documented stability limit of a family.
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    /// Requested computation route is not defined for this configuration.
    #[error("unsupported route: {0}")]
    UnsupportedRoute(String),

    /// Closed form is not available for this prior family.
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    /// Intermediate value exceeded the representable range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Requested index lies beyond the truncated support of a pmf.
    #[error("truncation: {0}")]
    Truncation(String),

    /// Division guard: the conditioning event has (numerically) zero mass.
    #[error("zero probability: {0}")]
    ZeroProbability(String),

    /// Empirical estimator asked at an output value with no observations.
    #[error("no observations at y = {0}")]
    NoObservations(u64),

    /// Least-squares fit left the region where a gamma surrogate exists.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// Linearity precondition violated: the fit deviation is too large for a
    /// surrogate to be meaningful (always the case with nonzero dark current).
    #[error("linearity violated: fit deviation {eps:.3e} with dark current {lambda}")]
    LinearityViolation { eps: f64, lambda: f64 },

    /// Invalid run configuration (CLI / JSON input).
    #[error("config error: {0}")]
    Config(String),

    /// Numerical failure (quadrature did not converge, excessive cancellation).
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
