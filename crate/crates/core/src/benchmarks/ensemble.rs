use super::regression::{reg_estimate, RegConfig};
use crate::error::Result;
use crate::estimate::{EstimateResult, Method};
use crate::qcv::{estimate_alpha, RatioTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    /// N1 with REG.
    M1,
    /// N2 with REG.
    M2,
}

impl Ensemble {
    pub fn method(self) -> Method {
        match self {
            Ensemble::M1 => Method::M1,
            Ensemble::M2 => Method::M2,
        }
    }
}

/// Mean of the variance-ratio estimate (from `table`) and the regression
/// estimate.
pub fn ensemble_estimate(
    data: &[f64],
    which: Ensemble,
    table: &RatioTable,
    reg_cfg: &RegConfig,
) -> Result<EstimateResult> {
    let qcv = estimate_alpha(data, table)?;
    let reg = reg_estimate(data, reg_cfg)?;
    Ok(combine(which.method(), &qcv, &reg))
}

pub(crate) fn combine(method: Method, a: &EstimateResult, b: &EstimateResult) -> EstimateResult {
    EstimateResult::new(
        method,
        0.5 * (a.alpha_hat + b.alpha_hat),
        a.clamped || b.clamped,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_mean() {
        let a = EstimateResult::new(Method::N1, 1.4, false);
        let b = EstimateResult::new(Method::Reg, 1.6, false);
        let m = combine(Method::M1, &a, &b);
        assert!((m.alpha_hat - 1.5).abs() < 1e-15);
        assert!(!m.clamped);
    }
}
