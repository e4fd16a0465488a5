use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::median_iqr;
use crate::error::{Error, Result};
use crate::estimate::{EstimateResult, Method};
use crate::math;
use crate::optimize::golden_section_max;
use crate::stable::series::TailSeries;
use crate::stable::{IntegrationConfig, SymmetricStable};
use crate::table::alpha_grid;

/// Spacing of the α nodes of the density surface.
const ALPHA_STEP: f64 = 0.01;
/// Spacing of the `x` nodes in `s = asinh(x)`.
const S_STEP: f64 = 0.02;
/// Beyond this |x| node densities come from the tail series.
const X_MAX: f64 = 1e4;

/// Settings for the likelihood maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleConfig {
    pub alpha_bracket: (f64, f64),
    pub tolerance: f64,
    pub pdf_cfg: IntegrationConfig,
    /// Replace the data by `(x - median) / (IQR / IQR_ref)` where `IQR_ref`
    /// is the interquartile range of the α = 1.5 law.
    pub standardize: bool,
}

impl Default for MleConfig {
    fn default() -> Self {
        Self {
            alpha_bracket: (0.5, 2.0),
            tolerance: 1e-4,
            pdf_cfg: IntegrationConfig::default(),
            standardize: false,
        }
    }
}

#[derive(Debug, Clone)]
enum FarTail {
    Gaussian,
    Series(TailSeries, f64),
}

#[derive(Debug, Clone)]
struct AlphaNode {
    alpha: f64,
    log_f: Vec<f64>,
    /// `d log f / ds`.
    slope: Vec<f64>,
    far: FarTail,
}

impl AlphaNode {
    fn far_log_pdf(&self, ax: f64) -> f64 {
        match &self.far {
            FarTail::Gaussian => gaussian_log_pdf(ax),
            FarTail::Series(series, c_alpha) => match series.eval(ax) {
                Some(v) if v.pdf > 0.0 => math::ln(v.pdf),
                _ => math::ln(self.alpha * c_alpha) - (self.alpha + 1.0) * math::ln(ax),
            },
        }
    }
}

fn gaussian_log_pdf(x: f64) -> f64 {
    -0.25 * x * x - math::ln(2.0 * math::sqrt(PI))
}

/// `log f_α(x)` tabulated on a grid of α values and `x = sinh(s)` nodes,
/// interpolated by cubic Hermite in `s` and cubic Lagrange in α.
#[derive(Debug, Clone)]
pub struct DensitySurface {
    alpha_lo: f64,
    nodes: Vec<AlphaNode>,
    n_x: usize,
}

impl DensitySurface {
    pub fn new(alpha_lo: f64, alpha_hi: f64, cfg: &IntegrationConfig) -> Result<Self> {
        let alphas = alpha_grid(alpha_lo, alpha_hi, ALPHA_STEP)?;
        let n_x = math::ceil(math::asinh(X_MAX) / S_STEP) as usize + 1;
        let xs: Vec<f64> = (0..n_x).map(|j| math::sinh(j as f64 * S_STEP)).collect();
        let nodes = alphas
            .iter()
            .map(|&a| build_node(a, &xs, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha_lo: alphas[0],
            nodes,
            n_x,
        })
    }

    pub fn alpha_range(&self) -> (f64, f64) {
        (self.alpha_lo, self.nodes[self.nodes.len() - 1].alpha)
    }

    fn node_log_pdf(&self, node: &AlphaNode, ax: f64) -> f64 {
        let s = math::asinh(ax);
        let u = s / S_STEP;
        let j = (math::floor(u) as usize).min(self.n_x - 2);
        if ax > math::sinh((self.n_x - 1) as f64 * S_STEP) {
            return node.far_log_pdf(ax);
        }
        let t = u - j as f64;
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * node.log_f[j]
            + (t3 - 2.0 * t2 + t) * S_STEP * node.slope[j]
            + (-2.0 * t3 + 3.0 * t2) * node.log_f[j + 1]
            + (t3 - t2) * S_STEP * node.slope[j + 1]
    }

    /// `log f_α(x)` for α inside the surface range.
    pub fn log_pdf(&self, alpha: f64, x: f64) -> f64 {
        let ax = math::abs(x);
        let pos = (alpha - self.alpha_lo) / ALPHA_STEP;
        let last = self.nodes.len() - 1;
        let nearest = math::round(pos);
        if math::abs(pos - nearest) < 1e-9 {
            let i = (nearest.max(0.0) as usize).min(last);
            return self.node_log_pdf(&self.nodes[i], ax);
        }
        let i0 = (math::floor(pos).max(0.0) as usize).min(last - 1);
        if self.nodes.len() < 4 {
            return self.linear(i0, pos, ax);
        }
        let start = i0.saturating_sub(1).min(self.nodes.len() - 4);
        let mut weights = [1.0; 4];
        for (k, w) in weights.iter_mut().enumerate() {
            for m in 0..4 {
                if m != k {
                    *w *= (pos - (start + m) as f64) / (k as f64 - m as f64);
                }
            }
        }
        let stencil = &self.nodes[start..start + 4];
        // log f is smooth in α except at the Gaussian end, where the power
        // law tail vanishes; there f·x^{α+1}, which tends to α c_α in the
        // tail, is interpolated instead.
        if stencil[3].alpha < 2.0 {
            return stencil
                .iter()
                .zip(weights)
                .map(|(node, w)| w * self.node_log_pdf(node, ax))
                .sum();
        }
        let lx = math::ln(ax.max(1.0));
        let g: f64 = stencil
            .iter()
            .zip(weights)
            .map(|(node, w)| w * math::exp(self.node_log_pdf(node, ax) + (node.alpha + 1.0) * lx))
            .sum();
        if g > 0.0 {
            math::ln(g) - (alpha + 1.0) * lx
        } else {
            self.linear(i0, pos, ax)
        }
    }

    fn linear(&self, i0: usize, pos: f64, ax: f64) -> f64 {
        let t = pos - i0 as f64;
        let f0 = math::exp(self.node_log_pdf(&self.nodes[i0], ax));
        let f1 = math::exp(self.node_log_pdf(&self.nodes[i0 + 1], ax));
        math::ln((1.0 - t) * f0 + t * f1)
    }
}

fn build_node(alpha: f64, xs: &[f64], cfg: &IntegrationConfig) -> Result<AlphaNode> {
    if alpha == 2.0 {
        return Ok(AlphaNode {
            alpha,
            log_f: xs.iter().map(|&x| gaussian_log_pdf(x)).collect(),
            slope: xs.iter().map(|&x| -0.5 * x * math::sqrt(1.0 + x * x)).collect(),
            far: FarTail::Gaussian,
        });
    }
    let dist = SymmetricStable::new(alpha, cfg)?;
    let tc = dist.tail_constants().expect("alpha below 2");
    let mut vals = vec![dist.values(0.0); xs.len()];
    dist.values_batch(xs, &mut vals);
    let mut log_f = Vec::with_capacity(xs.len());
    let mut slope = Vec::with_capacity(xs.len());
    for (&x, v) in xs.iter().zip(&vals) {
        let (f, df) = if v.pdf > 0.0 {
            (v.pdf, v.pdf_derivative)
        } else {
            // far beyond anything the quadrature resolves
            let f = alpha * tc.c_alpha * math::powf(x, -alpha - 1.0);
            (f, -(alpha + 1.0) * f / x)
        };
        log_f.push(math::ln(f));
        slope.push(df / f * math::sqrt(1.0 + x * x));
    }
    Ok(AlphaNode {
        alpha,
        log_f,
        slope,
        far: FarTail::Series(TailSeries::new(alpha, 1e-11), tc.c_alpha),
    })
}

/// Maximum-likelihood estimator over a prebuilt density surface.
#[derive(Debug, Clone)]
pub struct MleEstimator {
    cfg: MleConfig,
    surface: DensitySurface,
    reference_iqr: f64,
}

impl MleEstimator {
    pub fn new(cfg: MleConfig) -> Result<Self> {
        let (lo, hi) = cfg.alpha_bracket;
        if !(lo > 0.0 && lo < hi && hi <= 2.0) {
            return Err(Error::param("alpha_bracket", lo, "need 0 < lo < hi <= 2"));
        }
        if !(cfg.tolerance > 0.0) {
            return Err(Error::param("tolerance", cfg.tolerance, "must be positive"));
        }
        let surface = DensitySurface::new(lo, hi, &cfg.pdf_cfg)?;
        let reference_iqr = 2.0 * SymmetricStable::new(1.5, &cfg.pdf_cfg)?.quantile(0.75)?;
        Ok(Self {
            cfg,
            surface,
            reference_iqr,
        })
    }

    pub fn config(&self) -> &MleConfig {
        &self.cfg
    }

    pub fn surface(&self) -> &DensitySurface {
        &self.surface
    }

    /// `Σ log f_α(x_j)` on the data as given.
    pub fn log_likelihood(&self, data: &[f64], alpha: f64) -> f64 {
        data.iter().map(|&x| self.surface.log_pdf(alpha, x)).sum()
    }

    pub fn estimate(&self, data: &[f64]) -> Result<EstimateResult> {
        if data.is_empty() {
            return Err(Error::SampleTooSmall { got: 0, need: 1 });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteData);
        }
        let standardized;
        let xs: &[f64] = if self.cfg.standardize {
            let mut sorted = data.to_vec();
            sorted.sort_by(f64::total_cmp);
            let (med, iqr) = median_iqr(&sorted)?;
            let scale = iqr / self.reference_iqr;
            standardized = data.iter().map(|x| (x - med) / scale).collect::<Vec<_>>();
            &standardized
        } else {
            data
        };
        let (lo, hi) = self.surface.alpha_range();
        let (alpha, best) =
            golden_section_max(|a| self.log_likelihood(xs, a), lo, hi, self.cfg.tolerance);
        if !best.is_finite() {
            return Err(Error::NonFiniteLikelihood);
        }
        Ok(EstimateResult::new(Method::Mle, alpha, alpha == lo || alpha == hi))
    }
}

/// One-off MLE; builds the density surface, so prefer [`MleEstimator`] for
/// repeated use.
pub fn mle_estimate(data: &[f64], cfg: &MleConfig) -> Result<EstimateResult> {
    MleEstimator::new(*cfg)?.estimate(data)
}
