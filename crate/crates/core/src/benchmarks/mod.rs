//! Comparison estimators: McCulloch quantile ratio, characteristic-function
//! regression, maximum likelihood, and the averaged ensembles.

pub(crate) mod ensemble;
pub(crate) mod mcculloch;
mod mle;
mod regression;

pub use ensemble::{ensemble_estimate, Ensemble};
pub use mcculloch::{mcculloch_estimate, mcculloch_nu, sample_quantile, NuTable};
pub use mle::{mle_estimate, DensitySurface, MleConfig, MleEstimator};
pub use regression::{reg_estimate, reg_fit, sample_char_function, RegConfig};

use crate::error::{Error, Result};

/// Median and interquartile range of sorted data.
pub(crate) fn median_iqr(sorted: &[f64]) -> Result<(f64, f64)> {
    let med = sample_quantile(sorted, 0.5);
    let iqr = sample_quantile(sorted, 0.75) - sample_quantile(sorted, 0.25);
    if !(iqr > 0.0) {
        return Err(Error::ZeroDenominator { what: "interquartile range" });
    }
    Ok((med, iqr))
}
