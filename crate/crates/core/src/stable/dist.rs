use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use super::series::TailSeries;
use super::{check_alpha, tail_constants, IntegrationConfig, TailConstants};
use crate::error::{Error, Result};
use crate::math;
use crate::quadrature::{FourierSweep, FourierValues};
use crate::roots::bisect_secant;
use crate::special::{normal_cdf, normal_quantile};

/// Relative tolerance demanded from the tail series before it replaces
/// quadrature.
const SERIES_TOL: f64 = 1e-11;
/// Absolute tolerance in probability for quantile root finding.
const QUANTILE_TOL: f64 = 1e-12;
/// Refuse quadrature grids larger than this (tiny α).
const MAX_NODES: f64 = 1.6e7;

/// Values of the symmetric law at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PointValues {
    pub pdf: f64,
    pub cdf: f64,
    /// `1 - F(|x|)`, kept separately to avoid cancellation in the tail.
    pub upper_tail: f64,
    pub pdf_derivative: f64,
}

#[derive(Debug, Clone)]
enum Kind {
    Gaussian,
    Cauchy,
    General(General),
}

#[derive(Debug, Clone)]
struct General {
    sweep: FourierSweep,
    series: TailSeries,
    /// Smallest `x` at which the series is attempted.
    series_from: f64,
    tail: TailConstants,
}

/// Standardized symmetric α-stable law `S(α, 0, 1, 0)`.
///
/// Construction precomputes the quadrature weights, so reuse one instance
/// for many evaluations at the same α.
#[derive(Debug, Clone)]
pub struct SymmetricStable {
    alpha: f64,
    cfg: IntegrationConfig,
    kind: Kind,
}

impl SymmetricStable {
    pub fn new(alpha: f64, cfg: &IntegrationConfig) -> Result<Self> {
        check_alpha(alpha)?;
        cfg.validate()?;
        let kind = if alpha == 2.0 {
            Kind::Gaussian
        } else if alpha == 1.0 {
            Kind::Cauchy
        } else {
            let upper = cfg.truncation(alpha);
            if upper / cfg.step > MAX_NODES {
                return Err(Error::Quadrature("integration grid too large for this alpha"));
            }
            let series = TailSeries::new(alpha, SERIES_TOL);
            let series_from = first_series_point(&series);
            Kind::General(General {
                sweep: FourierSweep::new(alpha, cfg.step, upper),
                series,
                series_from,
                tail: tail_constants(alpha)?,
            })
        };
        Ok(Self {
            alpha,
            cfg: *cfg,
            kind,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn config(&self) -> &IntegrationConfig {
        &self.cfg
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.values(x).pdf
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.values(x).cdf
    }

    /// Derivative of the density.
    pub fn pdf_derivative(&self, x: f64) -> f64 {
        self.values(x).pdf_derivative
    }

    pub(crate) fn values(&self, x: f64) -> PointValues {
        let mut out = [zero_values()];
        self.values_batch(&[x], &mut out);
        out[0]
    }

    /// Evaluates many abscissae, sharing one quadrature sweep.
    pub(crate) fn values_batch(&self, xs: &[f64], out: &mut [PointValues]) {
        assert_eq!(xs.len(), out.len());
        match &self.kind {
            Kind::Gaussian => {
                for (x, o) in xs.iter().zip(out.iter_mut()) {
                    *o = gaussian_values(*x);
                }
            }
            Kind::Cauchy => {
                for (x, o) in xs.iter().zip(out.iter_mut()) {
                    *o = cauchy_values(*x);
                }
            }
            Kind::General(g) => {
                let mut pending_x = Vec::new();
                let mut pending_idx = Vec::new();
                for (i, &x) in xs.iter().enumerate() {
                    let ax = math::abs(x);
                    let from_series = if ax >= g.series_from {
                        g.series.eval(ax)
                    } else {
                        None
                    };
                    match from_series {
                        Some(s) => {
                            out[i] = assemble(x, s.pdf, s.survival, s.pdf_derivative);
                        }
                        None => {
                            pending_x.push(ax);
                            pending_idx.push(i);
                        }
                    }
                }
                if pending_x.is_empty() {
                    return;
                }
                let mut raw = vec![FourierValues::default(); pending_x.len()];
                g.sweep.eval_batch(&pending_x, &mut raw);
                for (&i, r) in pending_idx.iter().zip(&raw) {
                    let survival = 0.5 - r.cdf_offset;
                    out[i] = assemble(xs[i], r.pdf.max(0.0), survival, r.pdf_derivative);
                }
            }
        }
    }

    /// Tail constants, unless α = 2.
    pub fn tail_constants(&self) -> Option<TailConstants> {
        match &self.kind {
            Kind::General(g) => Some(g.tail),
            Kind::Cauchy => tail_constants(1.0).ok(),
            Kind::Gaussian => None,
        }
    }

    /// `c̄_α (1-p)^{-1/α}`; the Gaussian quantile itself at α = 2.
    pub(crate) fn tail_asymptote(&self, p: f64) -> f64 {
        match self.tail_constants() {
            Some(tc) => tc.c_bar_alpha * math::powf(1.0 - p, -1.0 / self.alpha),
            None => SQRT_2 * normal_quantile(p),
        }
    }

    /// Inverse distribution function.
    ///
    /// Above `tail_switch_p` (and symmetrically below `1 - tail_switch_p`)
    /// the power-law asymptote is returned.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::param("p", p, "must lie in (0, 1)"));
        }
        if p == 0.5 {
            return Ok(0.0);
        }
        if p < 0.5 {
            return self.upper_quantile(1.0 - p).map(|q| -q);
        }
        self.upper_quantile(p)
    }

    fn upper_quantile(&self, p: f64) -> Result<f64> {
        match &self.kind {
            Kind::Gaussian => return Ok(SQRT_2 * normal_quantile(p)),
            Kind::Cauchy => return Ok(math::tan(PI * (p - 0.5))),
            Kind::General(_) => {}
        }
        if p > self.cfg.tail_switch_p {
            return Ok(self.tail_asymptote(p));
        }
        // Near α = 2 the power-law constant vanishes, so the bracket also
        // covers the Gaussian quantile.
        let mut hi = (2.0 * self.tail_asymptote(p))
            .max(3.0 * SQRT_2 * normal_quantile(p))
            .max(1.0);
        let survival = 1.0 - p;
        let mut grown = 0;
        while self.values(hi).upper_tail > survival {
            hi *= 2.0;
            grown += 1;
            if grown > 60 {
                return Err(Error::Bracketing { what: "stable quantile" });
            }
        }
        bisect_secant(
            |x| survival - self.values(x).upper_tail,
            0.0,
            hi,
            QUANTILE_TOL,
            "stable quantile",
        )
    }
}

fn zero_values() -> PointValues {
    PointValues {
        pdf: 0.0,
        cdf: 0.5,
        upper_tail: 0.5,
        pdf_derivative: 0.0,
    }
}

/// Builds signed values from the `|x|` quantities.
fn assemble(x: f64, pdf: f64, upper_tail: f64, deriv_at_abs: f64) -> PointValues {
    let (cdf, deriv) = if x >= 0.0 {
        (1.0 - upper_tail, deriv_at_abs)
    } else {
        (upper_tail, -deriv_at_abs)
    };
    PointValues {
        pdf,
        cdf,
        upper_tail,
        pdf_derivative: deriv,
    }
}

fn gaussian_values(x: f64) -> PointValues {
    // N(0, 2)
    let pdf = math::exp(-0.25 * x * x) / (2.0 * math::sqrt(PI));
    let upper_tail = normal_cdf(-math::abs(x) / SQRT_2);
    PointValues {
        pdf,
        cdf: normal_cdf(x / SQRT_2),
        upper_tail,
        pdf_derivative: -0.5 * x * pdf,
    }
}

fn cauchy_values(x: f64) -> PointValues {
    let q = 1.0 + x * x;
    let ax = math::abs(x);
    // atan(1/|x|)/π avoids cancellation in the upper tail
    let upper_tail = if ax > 1.0 {
        math::atan(1.0 / ax) / PI
    } else {
        0.5 - math::atan(ax) / PI
    };
    PointValues {
        pdf: 1.0 / (PI * q),
        cdf: 0.5 + math::atan(x) / PI,
        upper_tail,
        pdf_derivative: -2.0 * x / (PI * q * q),
    }
}

/// First point of a geometric grid from which the series keeps converging.
fn first_series_point(series: &TailSeries) -> f64 {
    const CONFIRM: usize = 4;
    let mut x = 0.5;
    while x < 1e12 {
        if (0..CONFIRM).all(|i| series.eval(x * math::powf(1.25, i as f64)).is_some()) {
            return x;
        }
        x *= 1.25;
    }
    f64::INFINITY
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> IntegrationConfig {
        IntegrationConfig::default()
    }

    /// Independent oracle: a composite Simpson rule on a fine grid with the
    /// `t^α` kink handled by the substitution `t = s^{1/α}` on `[0, 1]`.
    fn oracle_pdf(alpha: f64, x: f64) -> f64 {
        // ∫₀¹ cos(x t) e^{-t^α} dt with t = s^{1/α}, dt = (1/α) s^{1/α-1} ds
        // is smooth only for α ≤ 1, so split further by plain Simpson on
        // [0, 1] with a very fine grid for α > 1.
        fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(a + i as f64 * h);
            }
            s * h / 3.0
        }
        let head = if alpha <= 1.0 {
            simpson(
                |s: f64| {
                    if s == 0.0 {
                        return 0.0;
                    }
                    let t = s.powf(1.0 / alpha);
                    (x * t).cos() * (-s).exp() * t / (alpha * s)
                },
                0.0,
                1.0,
                200_000,
            )
        } else {
            simpson(|t| (x * t).cos() * (-t.powf(alpha)).exp(), 0.0, 1.0, 2_000_000)
        };
        let upper = 40f64.powf(1.0 / alpha);
        let tail = simpson(|t| (x * t).cos() * (-t.powf(alpha)).exp(), 1.0, upper, 2_000_000);
        (head + tail) / PI
    }

    #[test]
    fn closed_forms() {
        let g = SymmetricStable::new(2.0, &cfg()).unwrap();
        assert!((g.pdf(0.0) - 0.282_094_791_773_878_1).abs() < 1e-15);
        let c = SymmetricStable::new(1.0, &cfg()).unwrap();
        assert!((c.pdf(0.0) - 1.0 / PI).abs() < 1e-15);
        assert!((c.cdf(1.0) - 0.75).abs() < 1e-15);
        assert_eq!(g.cdf(0.0), 0.5);
        assert!((c.quantile(0.75).unwrap() - 1.0).abs() < 1e-15);
        assert!((g.quantile(0.975).unwrap() - 2.771_807_648_699_737).abs() < 1e-12);
    }

    #[test]
    fn density_matches_oracle() {
        for &alpha in &[0.6, 1.5, 1.9] {
            let d = SymmetricStable::new(alpha, &cfg()).unwrap();
            for &x in &[0.0, 0.4, 1.0, 2.5] {
                let o = oracle_pdf(alpha, x);
                assert!((d.pdf(x) - o).abs() < 2e-10, "alpha {alpha} x {x}: {} vs {o}", d.pdf(x));
            }
        }
    }

    #[test]
    fn frozen_density_values() {
        // adaptive high-precision quadrature of the defining integrals (mpmath, 30 digits)
        let d = SymmetricStable::new(1.5, &cfg()).unwrap();
        assert!((d.pdf(1.0) - 0.202_038_159_607_840_13).abs() < 1e-11, "{}", d.pdf(1.0));
        assert!((d.cdf(2.0) - 0.894_960_170_345_170_83).abs() < 1e-10, "{}", d.cdf(2.0));
    }

    #[test]
    fn series_and_quadrature_agree_at_switch() {
        for &alpha in &[0.6, 0.9, 1.2, 1.5, 1.8, 1.95, 1.99] {
            let d = SymmetricStable::new(alpha, &cfg()).unwrap();
            let Kind::General(g) = &d.kind else { panic!() };
            if !g.series_from.is_finite() {
                continue;
            }
            for &m in &[1.0, 1.3, 2.0] {
                let x = g.series_from * m;
                let s = g.series.eval(x).unwrap();
                let q = g.sweep.eval(x);
                assert!((s.pdf - q.pdf).abs() < 1e-12 + 1e-8 * s.pdf, "alpha {alpha} x {x}");
                assert!((s.survival - (0.5 - q.cdf_offset)).abs() < 1e-12, "alpha {alpha}");
            }
        }
    }

    #[test]
    fn quantile_round_trip() {
        for &alpha in &[0.5, 0.8, 1.3, 1.7, 1.9, 1.999] {
            let d = SymmetricStable::new(alpha, &cfg()).unwrap();
            for &p in &[0.01, 0.3, 0.5, 0.6, 0.9, 0.99, 0.9995] {
                let q = d.quantile(p).unwrap();
                assert!((d.cdf(q) - p).abs() < 1e-11, "alpha {alpha} p {p}");
            }
        }
    }

    #[test]
    fn tail_branch_above_switch() {
        let d = SymmetricStable::new(1.5, &cfg()).unwrap();
        let q = d.quantile(0.99995).unwrap();
        assert_eq!(q, d.tail_asymptote(0.99995));
        assert_eq!(d.quantile(0.00005).unwrap(), -q);
    }
}
