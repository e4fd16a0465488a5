use alloc::string::String;

/// Errors raised by the numerics and estimators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quantile window holds {count} order statistics, need at least 2")]
    WindowTooSmall { count: usize },

    #[error("sample of size {got} is too small, need at least {need}")]
    SampleTooSmall { got: usize, need: usize },

    #[error("degenerate denominator in {what}")]
    ZeroDenominator { what: &'static str },

    #[error("ratio table is not strictly monotone near alpha = {alpha}")]
    NonMonotone { alpha: f64 },

    #[error("could not bracket the root of {what}")]
    Bracketing { what: &'static str },

    #[error("numerical integration did not converge: {0}")]
    Quadrature(&'static str),

    #[error("no usable characteristic-function points remain")]
    NoRegressionPoints,

    #[error("log-likelihood is not finite on the whole search bracket")]
    NonFiniteLikelihood,

    #[error("non-finite value in the sample")]
    NonFiniteData,

    #[error("estimator `{0}` requires a table that was not built")]
    MissingTable(String),

    #[error("bootstrap excluded {failed} of {total} resamples")]
    BootstrapFailures { failed: usize, total: usize },

    #[error("required beta = 0 column is missing from the grid")]
    MissingColumn,
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
