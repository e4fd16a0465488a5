//! The symmetric α-stable law and the general 0-parametrization.

mod curve;
mod dist;
mod sampler;
pub(crate) mod series;

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::special::gamma;

pub use curve::QuantileCurve;
pub use dist::SymmetricStable;
pub use sampler::{sample, sample_with_rng, standard_symmetric};

/// Parameters `(α, β, c, μ)` of `S(α, β, c, μ)` in the 0-parametrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    alpha: f64,
    beta: f64,
    scale: f64,
    location: f64,
}

impl StableParams {
    pub fn new(alpha: f64, beta: f64, scale: f64, location: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(-1.0..=1.0).contains(&beta) {
            return Err(Error::param("beta", beta, "must lie in [-1, 1]"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::param("scale", scale, "must be positive and finite"));
        }
        if !location.is_finite() {
            return Err(Error::param("location", location, "must be finite"));
        }
        Ok(Self {
            alpha,
            beta,
            scale,
            location,
        })
    }

    /// `S(α, 0, 1, 0)`.
    pub fn symmetric(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0, 1.0, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    /// Always `"0-parametrization"`.
    pub fn parametrization(&self) -> &'static str {
        "0-parametrization"
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", alpha, "must lie in (0, 2]"))
    }
}

/// Numerical settings shared by density, distribution and quantile
/// evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    /// Trapezoid spacing in `t` for the Fourier integrals and in `p` for
    /// quantile integrals.
    pub step: f64,
    /// The `t`-integral is truncated where `exp(-t^α)` falls below this.
    pub envelope_floor: f64,
    /// Quantile levels above this use the power-law tail asymptote.
    pub tail_switch_p: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            envelope_floor: 1e-12,
            tail_switch_p: 0.9999,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::param("step", self.step, "must be positive"));
        }
        if !(self.envelope_floor > 0.0 && self.envelope_floor < 1.0) {
            return Err(Error::param(
                "envelope_floor",
                self.envelope_floor,
                "must lie in (0, 1)",
            ));
        }
        if !(self.tail_switch_p > 0.5 && self.tail_switch_p < 1.0) {
            return Err(Error::param(
                "tail_switch_p",
                self.tail_switch_p,
                "must lie in (0.5, 1)",
            ));
        }
        Ok(())
    }

    /// Upper limit `t*` of the Fourier integral: `exp(-t*^α) = envelope_floor`.
    pub fn truncation(&self, alpha: f64) -> f64 {
        math::powf(-math::ln(self.envelope_floor), 1.0 / alpha)
    }
}

/// Tail constants of the symmetric law:
/// `P[X > x] ~ c_α x^{-α}` and `Q(p) ~ c̄_α (1-p)^{-1/α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailConstants {
    pub c_alpha: f64,
    pub c_bar_alpha: f64,
}

/// `c_α = sin(πα/2) Γ(α) / π` and `c̄_α = c_α^{1/α}`; undefined at `α = 2`.
pub fn tail_constants(alpha: f64) -> Result<TailConstants> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::param("alpha", alpha, "tail constants need alpha in (0, 2)"));
    }
    let c_alpha = math::sin(0.5 * PI * alpha) * gamma(alpha) / PI;
    Ok(TailConstants {
        c_alpha,
        c_bar_alpha: math::powf(c_alpha, 1.0 / alpha),
    })
}

/// `c̄_α (1-p)^{-1/α}`.
pub fn tail_quantile_approx(alpha: f64, p: f64) -> Result<f64> {
    let tc = tail_constants(alpha)?;
    if !(p > 0.5 && p < 1.0) {
        return Err(Error::param("p", p, "must lie in (0.5, 1)"));
    }
    Ok(tc.c_bar_alpha * math::powf(1.0 - p, -1.0 / alpha))
}

/// Characteristic function `E exp(iuX)` of `S(α, β, c, μ)`.
pub fn char_function(params: &StableParams, u: f64) -> Complex64 {
    if u == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let StableParams {
        alpha,
        beta,
        scale: c,
        location: mu,
    } = *params;
    let au = math::abs(u);
    let sign = if u > 0.0 { 1.0 } else { -1.0 };
    let exponent = if alpha == 1.0 {
        let skew = beta * (2.0 / PI) * sign * math::ln(c * au);
        Complex64::new(-c * au, -c * au * skew + mu * u)
    } else {
        let mag = math::powf(c * au, alpha);
        let skew =
            beta * sign * math::tan(0.5 * PI * alpha) * (math::powf(c * au, 1.0 - alpha) - 1.0);
        Complex64::new(-mag, -mag * skew + mu * u)
    };
    exponent.exp()
}

/// Density of `S(α, 0, 1, 0)` at `x`.
pub fn pdf(alpha: f64, x: f64, cfg: &IntegrationConfig) -> Result<f64> {
    Ok(SymmetricStable::new(alpha, cfg)?.pdf(x))
}

/// Distribution function of `S(α, 0, 1, 0)` at `x`.
pub fn cdf(alpha: f64, x: f64, cfg: &IntegrationConfig) -> Result<f64> {
    Ok(SymmetricStable::new(alpha, cfg)?.cdf(x))
}

/// Quantile function of `S(α, 0, 1, 0)`.
pub fn quantile(alpha: f64, p: f64, cfg: &IntegrationConfig) -> Result<f64> {
    SymmetricStable::new(alpha, cfg)?.quantile(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_are_validated() {
        assert!(StableParams::new(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(StableParams::new(2.1, 0.0, 1.0, 0.0).is_err());
        assert!(StableParams::new(1.5, 1.2, 1.0, 0.0).is_err());
        assert!(StableParams::new(1.5, 0.0, 0.0, 0.0).is_err());
        assert!(StableParams::new(1.5, 0.0, 1.0, f64::NAN).is_err());
        let p = StableParams::new(2.0, 0.7, 3.0, -1.0).unwrap();
        assert_eq!(p.parametrization(), "0-parametrization");
    }

    #[test]
    fn char_function_symmetric_cases() {
        let g = StableParams::symmetric(2.0).unwrap();
        assert!((char_function(&g, 1.0).re - (-1.0f64).exp()).abs() < 1e-15);
        let c = StableParams::symmetric(1.0).unwrap();
        let v = char_function(&c, 2.0);
        assert!((v.re - (-2.0f64).exp()).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert_eq!(char_function(&c, 0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn char_function_skewed() {
        // exp(-(1 + 0.5 i tan(3π/4)(1 - 1))) at u = 1, c = 1: the skew term
        // vanishes because |cu|^{1-α} = 1.
        let p = StableParams::new(1.5, 0.5, 1.0, 0.0).unwrap();
        let v = char_function(&p, 1.0);
        assert!((v.re - (-1.0f64).exp()).abs() < 1e-15 && v.im.abs() < 1e-15);
        // at u = 2: exponent = -2^1.5 (1 + 0.5 i tan(0.75π)(2^{-0.5} - 1))
        let mag = 2f64.powf(1.5);
        let im = -mag * 0.5 * (0.75 * PI).tan() * (2f64.powf(-0.5) - 1.0);
        let expect = Complex64::new(-mag, im).exp();
        assert!((char_function(&p, 2.0) - expect).norm() < 1e-15);
        // conjugate symmetry
        assert!((char_function(&p, -2.0) - expect.conj()).norm() < 1e-15);
    }

    #[test]
    fn tail_constant_values() {
        let t1 = tail_constants(1.0).unwrap();
        assert!((t1.c_alpha - 1.0 / PI).abs() < 1e-15);
        assert!((t1.c_bar_alpha - 1.0 / PI).abs() < 1e-15);
        let t = tail_constants(0.5).unwrap();
        let c = (0.25 * PI).sin() * PI.sqrt() / PI;
        assert!((t.c_alpha - c).abs() < 1e-13);
        assert!((t.c_bar_alpha - c * c).abs() < 1e-13);
        let t = tail_constants(1.5).unwrap();
        let c = (0.75 * PI).sin() * 0.5 * PI.sqrt() / PI;
        assert!((t.c_alpha - c).abs() < 1e-13);
        assert!(tail_constants(2.0).is_err());
    }

    #[test]
    fn tail_quantile_values() {
        let q = tail_quantile_approx(1.0, 0.999).unwrap();
        assert!((q - 1000.0 / PI).abs() < 1e-9);
        let exact = (PI * (0.9999 - 0.5)).tan();
        let ratio = tail_quantile_approx(1.0, 0.9999).unwrap() / exact;
        assert!((ratio - 1.0).abs() < 1e-4);
        let cb = tail_constants(0.5).unwrap().c_bar_alpha;
        assert!((tail_quantile_approx(0.5, 0.99).unwrap() - cb * 1e4).abs() < 1e-8);
    }

    #[test]
    fn config_truncation() {
        let cfg = IntegrationConfig::default();
        let t = cfg.truncation(1.5);
        assert!(((-t.powf(1.5)).exp() - 1e-12).abs() < 1e-24);
        assert!(cfg.validate().is_ok());
        let bad = IntegrationConfig {
            tail_switch_p: 1.0,
            ..cfg
        };
        assert!(bad.validate().is_err());
    }
}
