use core::fmt;
use core::str::FromStr;

/// Estimator identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Variance ratio with the `(0.015, 0.25, 0.25)` split.
    N1,
    /// Variance ratio with the `(0.01, 0.17, 0.1)` split.
    N2,
    /// Variance ratio with a user-defined split.
    Qcv,
    /// McCulloch quantile ratio.
    Mch,
    /// Characteristic-function regression.
    Reg,
    /// Maximum likelihood.
    Mle,
    /// Mean of N1 and REG.
    M1,
    /// Mean of N2 and REG.
    M2,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::N1,
        Method::N2,
        Method::Mch,
        Method::Reg,
        Method::Mle,
        Method::M1,
        Method::M2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::N1 => "n1",
            Method::N2 => "n2",
            Method::Qcv => "qcv",
            Method::Mch => "mch",
            Method::Reg => "reg",
            Method::Mle => "mle",
            Method::M1 => "m1",
            Method::M2 => "m2",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMethod;

impl fmt::Display for UnknownMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown method, expected one of n1, n2, mch, reg, mle, m1, m2")
    }
}

impl FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let m = match s.to_ascii_lowercase().as_str() {
            "n1" => Method::N1,
            "n2" => Method::N2,
            "qcv" => Method::Qcv,
            "mch" => Method::Mch,
            "reg" => Method::Reg,
            "mle" => Method::Mle,
            "m1" => Method::M1,
            "m2" => Method::M2,
            _ => return Err(UnknownMethod),
        };
        Ok(m)
    }
}

/// Percentile confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub low: f64,
    pub high: f64,
    pub level: f64,
    /// Number of bootstrap resamples.
    pub resamples: usize,
}

/// A point estimate of α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    pub method: Method,
    pub alpha_hat: f64,
    /// The raw statistic fell outside the table (or the estimate outside
    /// the admissible range) and `alpha_hat` was set to the boundary.
    pub clamped: bool,
    pub ci: Option<ConfidenceInterval>,
}

impl EstimateResult {
    pub fn new(method: Method, alpha_hat: f64, clamped: bool) -> Self {
        Self {
            method,
            alpha_hat,
            clamped,
            ci: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("MLE".parse::<Method>().unwrap(), Method::Mle);
        assert!("hill".parse::<Method>().is_err());
    }
}
