use alloc::vec;
use alloc::vec::Vec;

use super::dist::{PointValues, SymmetricStable};
use crate::error::{Error, Result};
use crate::math;

/// Node spacing in `s = asinh(x)`.
const NODE_SPACING: f64 = 0.01;

/// Fast quantiles for one α: the distribution function is tabulated on
/// nodes `x_j = sinh(j·0.01)` with its exact derivative, and each quantile
/// inverts the cubic Hermite interpolant.
///
/// Covers levels up to a chosen `p_max`; beyond that, and beyond
/// `tail_switch_p`, it defers to [`SymmetricStable::quantile`].
#[derive(Debug, Clone)]
pub struct QuantileCurve<'a> {
    dist: &'a SymmetricStable,
    xs: Vec<f64>,
    cdf: Vec<f64>,
    pdf: Vec<f64>,
}

impl<'a> QuantileCurve<'a> {
    pub fn new(dist: &'a SymmetricStable, p_max: f64) -> Result<Self> {
        if !(p_max > 0.5 && p_max < 1.0) {
            return Err(Error::param("p_max", p_max, "must lie in (0.5, 1)"));
        }
        let p_top = p_max.min(dist.config().tail_switch_p);
        let x_top = dist.quantile(p_top)? * 1.05 + 0.05;
        let nodes = math::ceil(math::asinh(x_top) / NODE_SPACING) as usize;
        let xs: Vec<f64> = (0..=nodes)
            .map(|j| math::sinh(j as f64 * NODE_SPACING))
            .collect();
        let mut vals = vec![
            PointValues {
                pdf: 0.0,
                cdf: 0.0,
                upper_tail: 0.0,
                pdf_derivative: 0.0,
            };
            xs.len()
        ];
        dist.values_batch(&xs, &mut vals);
        Ok(Self {
            dist,
            cdf: vals.iter().map(|v| v.cdf).collect(),
            pdf: vals.iter().map(|v| v.pdf).collect(),
            xs,
        })
    }

    pub fn distribution(&self) -> &SymmetricStable {
        self.dist
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::param("p", p, "must lie in (0, 1)"));
        }
        if p == 0.5 {
            return Ok(0.0);
        }
        if p < 0.5 {
            return self.upper(1.0 - p).map(|q| -q);
        }
        self.upper(p)
    }

    /// Density at the quantile of level `p`.
    pub fn density_at(&self, p: f64) -> Result<f64> {
        Ok(self.dist.pdf(self.quantile(p)?))
    }

    fn upper(&self, p: f64) -> Result<f64> {
        let last = self.cdf.len() - 1;
        if p > self.dist.config().tail_switch_p || p > self.cdf[last] {
            return self.dist.quantile(p);
        }
        let j = self.cdf.partition_point(|&f| f <= p).clamp(1, last);
        Ok(self.invert_segment(j - 1, p))
    }

    fn invert_segment(&self, i: usize, p: f64) -> f64 {
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (f0, f1) = (self.cdf[i], self.cdf[i + 1]);
        let h = x1 - x0;
        let (d0, d1) = (self.pdf[i] * h, self.pdf[i + 1] * h);
        if f1 <= f0 {
            return x0;
        }
        let value = |t: f64| {
            let t2 = t * t;
            let t3 = t2 * t;
            (2.0 * t3 - 3.0 * t2 + 1.0) * f0
                + (t3 - 2.0 * t2 + t) * d0
                + (-2.0 * t3 + 3.0 * t2) * f1
                + (t3 - t2) * d1
        };
        let slope = |t: f64| {
            let t2 = t * t;
            (6.0 * t2 - 6.0 * t) * f0
                + (3.0 * t2 - 4.0 * t + 1.0) * d0
                + (-6.0 * t2 + 6.0 * t) * f1
                + (3.0 * t2 - 2.0 * t) * d1
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut t = ((p - f0) / (f1 - f0)).clamp(0.0, 1.0);
        for _ in 0..60 {
            let r = value(t) - p;
            if r > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let d = slope(t);
            let mut next = if d > 0.0 { t - r / d } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if math::abs(next - t) < 1e-15 {
                t = next;
                break;
            }
            t = next;
        }
        x0 + t * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stable::IntegrationConfig;

    #[test]
    fn curve_matches_direct_quantiles() {
        let cfg = IntegrationConfig::default();
        for &alpha in &[0.6, 1.0, 1.4, 1.85, 2.0] {
            let d = SymmetricStable::new(alpha, &cfg).unwrap();
            let c = QuantileCurve::new(&d, 0.995).unwrap();
            for &p in &[0.005, 0.2, 0.5, 0.75, 0.9, 0.985, 0.995, 0.999] {
                let a = c.quantile(p).unwrap();
                let b = d.quantile(p).unwrap();
                assert!(
                    (a - b).abs() <= 1e-8 * (1.0 + b.abs()),
                    "alpha {alpha} p {p}: {a} vs {b}"
                );
            }
        }
    }
}
