use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimate::{EstimateResult, Method};
use crate::math;
use crate::stable::{IntegrationConfig, SymmetricStable};
use crate::table::{alpha_grid, Direction, MonotoneTable};

/// Smallest sample accepted by the McCulloch estimator.
pub const MIN_SAMPLE: usize = 20;

/// `ν(α) = (Q(0.95) - Q(0.05)) / (Q(0.75) - Q(0.25))`.
pub fn mcculloch_nu(alpha: f64, cfg: &IntegrationConfig) -> Result<f64> {
    let dist = SymmetricStable::new(alpha, cfg)?;
    // symmetric law: both spreads are twice the upper quantile
    Ok(dist.quantile(0.95)? / dist.quantile(0.75)?)
}

/// Sample quantile by linear interpolation between order statistics at
/// position `1 + (n-1)p` (1-based). `sorted` must be ascending and nonempty.
pub fn sample_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * p;
    let lo = math::floor(h) as usize;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

/// Tabulated `α ↦ ν(α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NuTable {
    table: MonotoneTable,
}

impl NuTable {
    pub fn build(alpha_lo: f64, alpha_hi: f64, step: f64, cfg: &IntegrationConfig) -> Result<Self> {
        let alphas = alpha_grid(alpha_lo, alpha_hi, step)?;
        let values = alphas
            .iter()
            .map(|&a| mcculloch_nu(a, cfg))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(alphas, values)
    }

    pub fn from_values(alphas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Self {
            table: MonotoneTable::new(alphas, values)?,
        })
    }

    pub fn alphas(&self) -> &[f64] {
        self.table.alphas()
    }

    pub fn values(&self) -> &[f64] {
        self.table.values()
    }

    pub fn direction(&self) -> Direction {
        self.table.direction()
    }

    pub fn alpha_range(&self) -> (f64, f64) {
        self.table.alpha_range()
    }

    pub fn invert(&self, nu_hat: f64) -> EstimateResult {
        let inv = self.table.invert(nu_hat);
        EstimateResult::new(Method::Mch, inv.alpha, inv.clamped)
    }
}

/// McCulloch estimate from the sample quantiles at 5, 25, 75 and 95%.
pub fn mcculloch_estimate(data: &[f64], table: &NuTable) -> Result<EstimateResult> {
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteData);
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    mcculloch_estimate_sorted(&sorted, table)
}

pub fn mcculloch_estimate_sorted(sorted: &[f64], table: &NuTable) -> Result<EstimateResult> {
    if sorted.len() < MIN_SAMPLE {
        return Err(Error::SampleTooSmall {
            got: sorted.len(),
            need: MIN_SAMPLE,
        });
    }
    let iqr = sample_quantile(sorted, 0.75) - sample_quantile(sorted, 0.25);
    if !(iqr > 0.0) {
        return Err(Error::ZeroDenominator { what: "interquartile range" });
    }
    let spread = sample_quantile(sorted, 0.95) - sample_quantile(sorted, 0.05);
    Ok(table.invert(spread / iqr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn nu_closed_form_values() {
        let cfg = IntegrationConfig::default();
        // standard normal quantile ratio Φ⁻¹(0.95) / Φ⁻¹(0.75)
        assert!((mcculloch_nu(2.0, &cfg).unwrap() - 2.438_663_636_435_238).abs() < 1e-12);
        // tan(0.45π) / tan(0.25π)
        assert!((mcculloch_nu(1.0, &cfg).unwrap() - 6.313_751_514_675_041).abs() < 1e-12);
    }

    #[test]
    fn quantile_interpolation() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(sample_quantile(&xs, 0.0), 1.0);
        assert_eq!(sample_quantile(&xs, 1.0), 5.0);
        assert_eq!(sample_quantile(&xs, 0.5), 3.0);
        assert_eq!(sample_quantile(&xs, 0.3), 2.2);
    }

    #[test]
    fn error_paths() {
        let t = NuTable::from_values(vec![1.0, 2.0], vec![6.3, 2.9]).unwrap();
        assert!(matches!(
            mcculloch_estimate(&[1.0; 10], &t),
            Err(Error::SampleTooSmall { .. })
        ));
        assert!(matches!(
            mcculloch_estimate(&[1.0; 30], &t),
            Err(Error::ZeroDenominator { .. })
        ));
    }
}
