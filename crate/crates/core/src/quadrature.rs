//! Trapezoidal evaluation of the Fourier-type integrals that define the
//! symmetric stable density and distribution function,
//!
//! ```text
//! f(x)     = 1/π ∫₀^∞ cos(xt) e^{-t^α} dt
//! F(x)-1/2 = 1/π ∫₀^∞ sin(xt)/t e^{-t^α} dt
//! f'(x)    = -1/π ∫₀^∞ t sin(xt) e^{-t^α} dt
//! ```
//!
//! on a uniform grid `t_k = k h` truncated where the envelope drops below a
//! floor. The `t^α` term of the envelope is not smooth at the origin, so the
//! plain trapezoid sum carries an `O(h^{1+α})` error; the generalized
//! Euler–Maclaurin (Navot) expansion removes its leading terms exactly.
//!
//! Sums for many abscissae are accumulated in one pass over `t`, with
//! `cos(x t_k)`/`sin(x t_k)` advanced by complex rotation and re-anchored
//! every [`ANCHOR_EVERY`] steps.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math;
use crate::special::{ln_gamma, zeta_negative};

/// Steps between exact `sin_cos` re-anchoring of the rotation recurrence.
pub const ANCHOR_EVERY: usize = 64;

/// Number of `t^{mα}` endpoint terms removed from the trapezoid error.
const ENDPOINT_TERMS: u32 = 3;

/// Raw integrals at one abscissa, already divided by π.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FourierValues {
    pub pdf: f64,
    /// `F(x) - 1/2`.
    pub cdf_offset: f64,
    pub pdf_derivative: f64,
}

/// Precomputed trapezoid weights for one stability index.
#[derive(Debug, Clone)]
pub struct FourierSweep {
    alpha: f64,
    step: f64,
    envelope: Vec<f64>,
    envelope_over_t: Vec<f64>,
    endpoint: f64,
}

impl FourierSweep {
    /// Grid `t_k = k·step` for `k = 0..=ceil(upper/step)`.
    pub fn new(alpha: f64, step: f64, upper: f64) -> Self {
        let count = math::ceil(upper / step) as usize;
        let mut envelope = Vec::with_capacity(count + 1);
        let mut envelope_over_t = Vec::with_capacity(count + 1);
        envelope.push(1.0);
        envelope_over_t.push(0.0);
        for k in 1..=count {
            let t = k as f64 * step;
            let w = math::exp(-math::powf(t, alpha));
            envelope.push(w);
            envelope_over_t.push(w / t);
        }
        Self {
            alpha,
            step,
            envelope,
            envelope_over_t,
            endpoint: endpoint_correction(alpha, step),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of grid intervals.
    pub fn len(&self) -> usize {
        self.envelope.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn eval(&self, x: f64) -> FourierValues {
        let mut out = [FourierValues::default()];
        self.eval_batch(&[x], &mut out);
        out[0]
    }

    /// Evaluates all three integrals at every `xs[j]` into `out[j]`.
    pub fn eval_batch(&self, xs: &[f64], out: &mut [FourierValues]) {
        assert_eq!(xs.len(), out.len());
        let m = xs.len();
        if m == 0 {
            return;
        }
        let h = self.step;
        let mut rot_c = vec![0.0; m];
        let mut rot_s = vec![0.0; m];
        for (j, &x) in xs.iter().enumerate() {
            let (s, c) = math::sin_cos(x * h);
            rot_c[j] = c;
            rot_s[j] = s;
        }
        let mut re = vec![0.0; m];
        let mut im = vec![0.0; m];
        let mut acc_cos = vec![0.0; m];
        let mut acc_sin = vec![0.0; m];
        let mut acc_tsin = vec![0.0; m];

        let n = self.len();
        let mut k = 1;
        while k <= n {
            let block_end = (k + ANCHOR_EVERY).min(n + 1);
            let t0 = k as f64 * h;
            for j in 0..m {
                let (s, c) = math::sin_cos(xs[j] * t0);
                re[j] = c;
                im[j] = s;
            }
            for kk in k..block_end {
                let w = self.envelope[kk];
                let v = self.envelope_over_t[kk];
                let u = w * (kk as f64 * h);
                for j in 0..m {
                    let (c, s) = (re[j], im[j]);
                    acc_cos[j] += w * c;
                    acc_sin[j] += v * s;
                    acc_tsin[j] += u * s;
                    re[j] = c * rot_c[j] - s * rot_s[j];
                    im[j] = c * rot_s[j] + s * rot_c[j];
                }
            }
            k = block_end;
        }

        for j in 0..m {
            let x = xs[j];
            // k = 0 terms carry half weight: cos -> 1, sin(xt)/t -> x, t sin -> 0
            let cos_sum = h * (0.5 + acc_cos[j]) + self.endpoint;
            let sin_sum = h * (0.5 * x + acc_sin[j]) + x * self.endpoint;
            out[j] = FourierValues {
                pdf: cos_sum / PI,
                cdf_offset: sin_sum / PI,
                pdf_derivative: -h * acc_tsin[j] / PI,
            };
        }
    }
}

/// Additive correction `I - T_h` contributed by the `t^{mα}` terms of
/// `e^{-t^α}` at the origin: `-Σ_m (-1)^m/m! ζ(-mα) h^{mα+1}`.
pub fn endpoint_correction(alpha: f64, step: f64) -> f64 {
    let mut total = 0.0;
    for m in 1..=ENDPOINT_TERMS {
        let mf = m as f64;
        let power = mf * alpha;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let inv_fact = math::exp(-ln_gamma(mf + 1.0));
        total -= sign * inv_fact * zeta_negative(power) * math::powf(step, power + 1.0);
    }
    total
}

/// Plain trapezoid rule on `[lo, hi]` with `intervals` equal pieces.
pub fn trapezoid<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, intervals: usize) -> f64 {
    assert!(intervals > 0);
    let h = (hi - lo) / intervals as f64;
    let mut sum = 0.5 * (f(lo) + f(hi));
    for i in 1..intervals {
        sum += f(lo + i as f64 * h);
    }
    sum * h
}
