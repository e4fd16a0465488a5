use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::median_iqr;
use crate::error::{Error, Result};
use crate::estimate::{EstimateResult, Method};
use crate::math;

/// Settings for the characteristic-function regression.
#[derive(Debug, Clone, PartialEq)]
pub struct RegConfig {
    /// Evaluation points `u_i`, positive and distinct.
    pub u_grid: Vec<f64>,
    /// Fit `log(-log|φ̂|) = α log u + α log c` rather than assuming `c = 1`.
    pub fit_intercept: bool,
    /// Center by the median and divide by half the interquartile range
    /// before evaluating `φ̂`, so the grid sits where `|φ|` is informative
    /// whatever the data scale.
    pub standardize: bool,
}

impl Default for RegConfig {
    fn default() -> Self {
        Self {
            u_grid: (1..=10).map(|i| i as f64 * PI / 25.0).collect(),
            fit_intercept: true,
            standardize: true,
        }
    }
}

impl RegConfig {
    /// Slope through the origin on the raw data, for samples whose scale is
    /// known to be 1 (simulation studies).
    pub fn known_scale() -> Self {
        Self {
            fit_intercept: false,
            standardize: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(u) = self.u_grid.iter().find(|u| !(**u > 0.0 && u.is_finite())) {
            return Err(Error::param("u", *u, "grid points must be positive"));
        }
        let mut sorted = self.u_grid.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("u", sorted[0], "grid points must be distinct"));
        }
        if self.u_grid.len() < 2 {
            return Err(Error::param("u_grid", self.u_grid.len() as f64, "need two points"));
        }
        Ok(())
    }
}

/// `(1/n) Σ exp(i u X_j)`.
pub fn sample_char_function(data: &[f64], u: f64) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for &x in data {
        let (s, c) = math::sin_cos(u * x);
        re += c;
        im += s;
    }
    let n = data.len() as f64;
    Complex64::new(re / n, im / n)
}

/// Least-squares slope of `log(-log m_i)` on `log u_i`, skipping points
/// with `m_i` outside `(0, 1)`.
pub fn reg_fit(u_grid: &[f64], moduli: &[f64], fit_intercept: bool) -> Result<f64> {
    let mut xs = Vec::with_capacity(u_grid.len());
    let mut ys = Vec::with_capacity(u_grid.len());
    for (&u, &m) in u_grid.iter().zip(moduli) {
        if m > 0.0 && m < 1.0 {
            xs.push(math::ln(u));
            ys.push(math::ln(-math::ln(m)));
        }
    }
    if xs.len() < 2 {
        return Err(Error::NoRegressionPoints);
    }
    let k = xs.len() as f64;
    if fit_intercept {
        let mx = xs.iter().sum::<f64>() / k;
        let my = ys.iter().sum::<f64>() / k;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (x, y) in xs.iter().zip(&ys) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
        }
        Ok(sxy / sxx)
    } else {
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        Ok(sxy / sxx)
    }
}

/// Regression estimate of α; the slope is clamped to at most 2.
pub fn reg_estimate(data: &[f64], cfg: &RegConfig) -> Result<EstimateResult> {
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteData);
    }
    if data.is_empty() {
        return Err(Error::SampleTooSmall { got: 0, need: 1 });
    }
    let standardized;
    let xs: &[f64] = if cfg.standardize {
        let mut sorted = data.to_vec();
        sorted.sort_by(f64::total_cmp);
        let (med, iqr) = median_iqr(&sorted)?;
        let half = 0.5 * iqr;
        standardized = data.iter().map(|x| (x - med) / half).collect::<Vec<_>>();
        &standardized
    } else {
        data
    };
    let moduli: Vec<f64> = cfg
        .u_grid
        .iter()
        .map(|&u| sample_char_function(xs, u).norm())
        .collect();
    let slope = reg_fit(&cfg.u_grid, &moduli, cfg.fit_intercept)?;
    if !(slope > 0.0) {
        return Err(Error::param("alpha_hat", slope, "regression slope is not positive"));
    }
    if slope > 2.0 {
        return Ok(EstimateResult::new(Method::Reg, 2.0, true));
    }
    Ok(EstimateResult::new(Method::Reg, slope, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn exact_char_function_recovers_alpha() {
        let cfg = RegConfig::default();
        for &alpha in &[0.5, 1.0, 1.5, 2.0] {
            for &c in &[1.0, 2.5] {
                let m: Vec<f64> = cfg
                    .u_grid
                    .iter()
                    .map(|u: &f64| (-(c * u).powf(alpha)).exp())
                    .collect();
                let slope = reg_fit(&cfg.u_grid, &m, true).unwrap();
                assert!((slope - alpha).abs() < 1e-10, "alpha {alpha} c {c}");
            }
        }
    }

    #[test]
    fn origin_fit_needs_unit_scale() {
        let u = RegConfig::known_scale().u_grid;
        let moduli = |c: f64| -> Vec<f64> { u.iter().map(|t| (-(c * t).powf(1.5)).exp()).collect() };
        let slope = reg_fit(&u, &moduli(1.0), false).unwrap();
        assert!((slope - 1.5).abs() < 1e-12);
        // a wrong scale leaks into the slope without the intercept
        assert!((reg_fit(&u, &moduli(2.0), false).unwrap() - 1.5).abs() > 0.1);
        assert!((reg_fit(&u, &moduli(2.0), true).unwrap() - 1.5).abs() < 1e-10);
    }

    #[test]
    fn degenerate_sample() {
        let data = vec![0.0; 50];
        assert_eq!(sample_char_function(&data, 3.0), Complex64::new(1.0, 0.0));
        assert_eq!(sample_char_function(&[1.0, -2.0], 0.0), Complex64::new(1.0, 0.0));
        let cfg = RegConfig {
            standardize: false,
            ..RegConfig::default()
        };
        assert_eq!(reg_estimate(&data, &cfg).unwrap_err(), Error::NoRegressionPoints);
    }

    #[test]
    fn config_validation() {
        assert!(RegConfig::default().validate().is_ok());
        let bad = RegConfig {
            u_grid: vec![0.1, 0.1],
            ..RegConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
