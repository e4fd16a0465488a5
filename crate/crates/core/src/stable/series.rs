//! Large-`x` power series for the symmetric density and survival function,
//!
//! ```text
//! f(x)    = 1/π Σ_k (-1)^{k+1} Γ(kα+1)/k! sin(kπα/2) x^{-(kα+1)}
//! 1-F(x)  = 1/π Σ_k (-1)^{k+1} Γ(kα)/k!   sin(kπα/2) x^{-kα}
//! ```
//!
//! Convergent for `α < 1` and asymptotic for `1 < α < 2`. Summation stops
//! once the magnitude envelope (the terms without the sine factor) drops
//! below the requested relative tolerance; if the envelope starts growing
//! first, or cancellation would eat the tolerance, no value is returned.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math;
use crate::special::ln_gamma;

const MAX_TERMS: usize = 60;
/// Largest tolerated ratio between the biggest term and the final sum.
const MAX_CANCELLATION: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SeriesValue {
    pub pdf: f64,
    pub survival: f64,
    pub pdf_derivative: f64,
}

#[derive(Debug, Clone, Copy)]
struct Term {
    pdf_coef: f64,
    ln_envelope: f64,
    power: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct TailSeries {
    terms: Vec<Term>,
    tol: f64,
}

impl TailSeries {
    pub fn new(alpha: f64, tol: f64) -> Self {
        let terms = (1..=MAX_TERMS)
            .map(|k| {
                let kf = k as f64;
                let power = kf * alpha;
                let ln_envelope = ln_gamma(power + 1.0) - ln_gamma(kf + 1.0) - math::ln(PI);
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                let pdf_coef = sign * math::sin(0.5 * PI * power) * math::exp(ln_envelope);
                Term {
                    pdf_coef,
                    ln_envelope,
                    power,
                }
            })
            .collect();
        Self { terms, tol }
    }

    /// Series value at `x > 0`, or `None` when it cannot deliver the
    /// tolerance there.
    pub fn eval(&self, x: f64) -> Option<SeriesValue> {
        debug_assert!(x > 0.0);
        let lx = math::ln(x);
        let mut pdf = 0.0;
        let mut survival = 0.0;
        let mut deriv = 0.0;
        let mut prev_env = f64::INFINITY;
        let mut max_env: f64 = 0.0;
        for (i, term) in self.terms.iter().enumerate() {
            let x_pow = math::exp(-(term.power + 1.0) * lx);
            let env = math::exp(term.ln_envelope - (term.power + 1.0) * lx);
            if i >= 2 && env > prev_env {
                return None;
            }
            let t = term.pdf_coef * x_pow;
            pdf += t;
            survival += t * x / term.power;
            deriv -= t * (term.power + 1.0) / x;
            max_env = max_env.max(env);
            prev_env = env;

            let surv_env = env * x / term.power;
            if i >= 1
                && env <= self.tol * math::abs(pdf)
                && surv_env <= self.tol * math::abs(survival)
            {
                if max_env > MAX_CANCELLATION * math::abs(pdf) {
                    return None;
                }
                return Some(SeriesValue {
                    pdf,
                    survival,
                    pdf_derivative: deriv,
                });
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_series_matches_closed_form() {
        // α = 1: only odd k survive and the series is the expansion of
        // 1/(π(1+x²)).
        let s = TailSeries::new(1.0, 1e-12);
        for &x in &[3.0, 10.0, 100.0] {
            let v = s.eval(x).unwrap();
            let f = 1.0 / (PI * (1.0 + x * x));
            assert!((v.pdf / f - 1.0).abs() < 1e-11, "x = {x}");
            let surv = 0.5 - x.atan() / PI;
            assert!((v.survival / surv - 1.0).abs() < 1e-11, "x = {x}");
        }
    }

    #[test]
    fn refuses_small_x_for_heavy_alpha() {
        let s = TailSeries::new(1.8, 1e-11);
        assert!(s.eval(0.5).is_none());
        assert!(s.eval(1e3).is_some());
    }
}
