//! A bundle of prepared estimators addressed by [`Method`].

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::benchmarks::ensemble::combine;
use crate::benchmarks::mcculloch::mcculloch_estimate_sorted;
use crate::benchmarks::{reg_estimate, MleConfig, MleEstimator, NuTable, RegConfig};
use crate::error::{Error, Result};
use crate::estimate::{EstimateResult, Method};
use crate::qcv::{build_table, estimate_alpha_sorted, RatioSpec, RatioTable};
use crate::stable::IntegrationConfig;

/// Default α range of the N1 and N2 tables.
pub const DEFAULT_RATIO_RANGE: (f64, f64) = (0.6, 2.0);
/// Default α range of the McCulloch table.
pub const DEFAULT_NU_RANGE: (f64, f64) = (0.5, 2.0);
/// Default table spacing in α.
pub const DEFAULT_TABLE_STEP: f64 = 0.0025;

#[derive(Debug, Clone, Default)]
pub struct Estimators {
    pub n1: Option<RatioTable>,
    pub n2: Option<RatioTable>,
    pub nu: Option<NuTable>,
    pub reg: RegConfig,
    pub mle: Option<MleEstimator>,
}

impl Estimators {
    /// Builds whatever `methods` need with the default ranges.
    pub fn build(methods: &[Method], cfg: &IntegrationConfig) -> Result<Self> {
        let needs = |m: &[Method]| methods.iter().any(|x| m.contains(x));
        let (lo, hi) = DEFAULT_RATIO_RANGE;
        let mut out = Self::default();
        if needs(&[Method::N1, Method::M1]) {
            out.n1 = Some(build_table(&RatioSpec::n1(), lo, hi, DEFAULT_TABLE_STEP, cfg)?);
        }
        if needs(&[Method::N2, Method::M2]) {
            out.n2 = Some(build_table(&RatioSpec::n2(), lo, hi, DEFAULT_TABLE_STEP, cfg)?);
        }
        if needs(&[Method::Mch]) {
            let (lo, hi) = DEFAULT_NU_RANGE;
            out.nu = Some(NuTable::build(lo, hi, DEFAULT_TABLE_STEP, cfg)?);
        }
        if needs(&[Method::Mle]) {
            out.mle = Some(MleEstimator::new(MleConfig {
                pdf_cfg: *cfg,
                ..MleConfig::default()
            })?);
        }
        Ok(out)
    }

    /// Methods whose prerequisites are present.
    pub fn available(&self) -> Vec<Method> {
        Method::ALL
            .iter()
            .copied()
            .filter(|m| self.check(*m).is_ok())
            .collect()
    }

    fn check(&self, method: Method) -> Result<()> {
        let missing = match method {
            Method::N1 | Method::M1 => self.n1.is_none(),
            Method::N2 | Method::M2 => self.n2.is_none(),
            Method::Mch => self.nu.is_none(),
            Method::Mle => self.mle.is_none(),
            Method::Reg => false,
            Method::Qcv => true,
        };
        if missing {
            Err(Error::MissingTable(method.name().to_string()))
        } else {
            Ok(())
        }
    }

    pub fn estimate(&self, method: Method, data: &[f64]) -> Result<EstimateResult> {
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteData);
        }
        let mut sorted = data.to_vec();
        sorted.sort_by(f64::total_cmp);
        self.estimate_sorted(method, &sorted)
    }

    /// Like [`Estimators::estimate`] on data already sorted ascending.
    pub fn estimate_sorted(&self, method: Method, sorted: &[f64]) -> Result<EstimateResult> {
        self.check(method)?;
        match method {
            Method::N1 => estimate_alpha_sorted(sorted, self.n1.as_ref().unwrap()),
            Method::N2 => estimate_alpha_sorted(sorted, self.n2.as_ref().unwrap()),
            Method::Mch => mcculloch_estimate_sorted(sorted, self.nu.as_ref().unwrap()),
            Method::Reg => reg_estimate(sorted, &self.reg),
            Method::Mle => self.mle.as_ref().unwrap().estimate(sorted),
            Method::M1 => {
                let q = estimate_alpha_sorted(sorted, self.n1.as_ref().unwrap())?;
                Ok(combine(Method::M1, &q, &reg_estimate(sorted, &self.reg)?))
            }
            Method::M2 => {
                let q = estimate_alpha_sorted(sorted, self.n2.as_ref().unwrap())?;
                Ok(combine(Method::M2, &q, &reg_estimate(sorted, &self.reg)?))
            }
            Method::Qcv => unreachable!("rejected by check"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_tables_are_reported() {
        let e = Estimators::default();
        assert_eq!(e.available(), alloc::vec![Method::Reg]);
        let data: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin()).collect();
        assert_eq!(
            e.estimate(Method::N1, &data).unwrap_err(),
            Error::MissingTable("n1".into())
        );
        assert!(e.estimate(Method::Reg, &data).is_ok());
    }
}
