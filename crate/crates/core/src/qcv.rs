//! Quantile conditional variances and the variance-ratio estimators.
//!
//! For a window `0 < a < b < 1` the quantile conditional variance is the
//! variance of `X` given `Q(a) <= X <= Q(b)`:
//!
//! ```text
//! σ²(a, b) = 1/(b-a) ∫_a^b Q(p)² dp - (1/(b-a) ∫_a^b Q(p) dp)²
//! ```
//!
//! The ratio `N(α) = 2 σ²_α(a, b) / σ²_α(d, 1-d)` compares a tail window to
//! a central one. It is free of location and scale and strictly monotone in
//! α for suitable splits, so inverting a precomputed table at the sample
//! ratio estimates α.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::estimate::{EstimateResult, Method};
use crate::math;
use crate::special::{normal_pdf, normal_quantile};
use crate::stable::{IntegrationConfig, QuantileCurve, SymmetricStable};
use crate::table::{alpha_grid, Direction, MonotoneTable};

/// A quantile window `(a, b)` with `0 < a < b < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileSplit {
    a: f64,
    b: f64,
}

impl QuantileSplit {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a < b && b < 1.0) {
            return Err(Error::param("a", a, "window needs 0 < a < b < 1"));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The reflected window `(1-b, 1-a)`.
    pub fn mirror(&self) -> Self {
        Self {
            a: 1.0 - self.b,
            b: 1.0 - self.a,
        }
    }

    fn upper_reach(&self) -> f64 {
        self.b.max(1.0 - self.a)
    }
}

/// A tail window `(a, b)` together with the central window `(d, 1-d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSpec {
    tail: QuantileSplit,
    central_d: f64,
    name: String,
}

impl RatioSpec {
    pub fn new(a: f64, b: f64, d: f64, name: impl Into<String>) -> Result<Self> {
        let tail = QuantileSplit::new(a, b)?;
        if !(d > 0.0 && d < 0.5) {
            return Err(Error::param("d", d, "central window needs 0 < d < 0.5"));
        }
        Ok(Self {
            tail,
            central_d: d,
            name: name.into(),
        })
    }

    /// `(a, b, d) = (0.015, 0.25, 0.25)`.
    pub fn n1() -> Self {
        Self::new(0.015, 0.25, 0.25, "n1").expect("valid split")
    }

    /// `(a, b, d) = (0.01, 0.17, 0.1)`.
    pub fn n2() -> Self {
        Self::new(0.01, 0.17, 0.1, "n2").expect("valid split")
    }

    pub fn tail(&self) -> QuantileSplit {
        self.tail
    }

    pub fn central_d(&self) -> f64 {
        self.central_d
    }

    pub fn central(&self) -> QuantileSplit {
        QuantileSplit {
            a: self.central_d,
            b: 1.0 - self.central_d,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Estimator tag reported for this split.
    pub fn method(&self) -> Method {
        if *self == Self::n1() {
            Method::N1
        } else if *self == Self::n2() {
            Method::N2
        } else {
            Method::Qcv
        }
    }

    fn upper_reach(&self) -> f64 {
        self.tail.upper_reach().max(1.0 - self.central_d)
    }
}

/// A conditional variance together with its window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcvValue {
    pub value: f64,
    pub window: QuantileSplit,
}

/// Sample quantile conditional variance.
///
/// Uses the order statistics `X_(⌊na⌋+1), …, X_(⌊nb⌋)`.
pub fn sample_qcv(data: &[f64], a: f64, b: f64) -> Result<QcvValue> {
    let window = QuantileSplit::new(a, b)?;
    let sorted = sorted_copy(data)?;
    sample_qcv_sorted(&sorted, window)
}

/// [`sample_qcv`] on data that is already sorted ascending.
pub fn sample_qcv_sorted(sorted: &[f64], window: QuantileSplit) -> Result<QcvValue> {
    let (lo, hi) = window_bounds(sorted.len(), window);
    let count = hi.saturating_sub(lo);
    if count < 2 {
        return Err(Error::WindowTooSmall { count });
    }
    let slice = &sorted[lo..hi];
    // Differences from the window minimum keep the sums small and make the
    // result unchanged under exact shifts of the data.
    let base = slice[0];
    let (mut s1, mut s2) = (0.0, 0.0);
    for &x in slice {
        let d = x - base;
        s1 += d;
        s2 += d * d;
    }
    let k = count as f64;
    let value = ((k * s2 - s1 * s1) / (k * k)).max(0.0);
    Ok(QcvValue { value, window })
}

/// 0-based half-open index range `[⌊na⌋, ⌊nb⌋)` of the window.
fn window_bounds(n: usize, window: QuantileSplit) -> (usize, usize) {
    // the slack absorbs products such as 100 * 0.17 = 17.000000000000004
    // and 10 * 0.7 = 6.999999999999999 landing on the wrong side of an integer
    let nf = n as f64;
    let lo = math::floor(nf * window.a + 1e-9) as usize;
    let hi = math::floor(nf * window.b + 1e-9) as usize;
    (lo.min(n), hi.min(n))
}

fn sorted_copy(data: &[f64]) -> Result<Vec<f64>> {
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteData);
    }
    let mut v = data.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Quantile conditional variance of `S(α, 0, 1, 0)` by the trapezoidal rule
/// in `p` with spacing about `cfg.step`.
pub fn theoretical_qcv(alpha: f64, split: QuantileSplit, cfg: &IntegrationConfig) -> Result<QcvValue> {
    let dist = SymmetricStable::new(alpha, cfg)?;
    let curve = QuantileCurve::new(&dist, split.upper_reach())?;
    qcv_from_curve(&curve, split)
}

/// [`theoretical_qcv`] reusing a prepared quantile curve.
///
/// The trapezoid sums carry the Euler–Maclaurin endpoint correction
/// `-(h²/12)(g'(b) - g'(a))`, with `Q' = 1/f(Q)`.
pub fn qcv_from_curve(curve: &QuantileCurve<'_>, split: QuantileSplit) -> Result<QcvValue> {
    let dist = curve.distribution();
    let (a, b) = (split.a, split.b);
    let width = b - a;
    let intervals = math::ceil(width / dist.config().step - 1e-9).max(2.0) as usize;
    let h = width / intervals as f64;

    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for i in 0..=intervals {
        let p = if i == intervals { b } else { a + i as f64 * h };
        let q = curve.quantile(p)?;
        let w = if i == 0 || i == intervals { 0.5 } else { 1.0 };
        s1 += w * q;
        s2 += w * q * q;
    }
    let qa = curve.quantile(a)?;
    let qb = curve.quantile(b)?;
    let da = 1.0 / dist.pdf(qa);
    let db = 1.0 / dist.pdf(qb);
    let c = h * h / 12.0;
    let i1 = h * s1 - c * (db - da);
    let i2 = h * s2 - c * (2.0 * qb * db - 2.0 * qa * da);
    let mean = i1 / width;
    let value = (i2 / width - mean * mean).max(0.0);
    Ok(QcvValue { value, window: split })
}

/// Closed form for `α = 2`, the `N(0, 2)` law:
/// `2 (1 + (z_a φ(z_a) - z_b φ(z_b))/(b-a) - ((φ(z_a) - φ(z_b))/(b-a))²)`.
pub fn gaussian_qcv_closed(split: QuantileSplit) -> QcvValue {
    let (a, b) = (split.a, split.b);
    let (za, zb) = (normal_quantile(a), normal_quantile(b));
    let (fa, fb) = (normal_pdf(za), normal_pdf(zb));
    let w = b - a;
    let m = (fa - fb) / w;
    let value = 2.0 * (1.0 + (za * fa - zb * fb) / w - m * m);
    QcvValue {
        value: value.max(0.0),
        window: split,
    }
}

/// Closed form for `α = 1`, the standard Cauchy law. With
/// `D = atan Q(b) - atan Q(a) = π(b-a)`:
/// `(Q(b) - Q(a))/D - 1 - (ln((1+Q(b)²)/(1+Q(a)²)) / (2D))²`.
pub fn cauchy_qcv_closed(split: QuantileSplit) -> QcvValue {
    let (a, b) = (split.a, split.b);
    let qa = math::tan(PI * (a - 0.5));
    let qb = math::tan(PI * (b - 0.5));
    let d = PI * (b - a);
    let m = math::ln((1.0 + qb * qb) / (1.0 + qa * qa)) / (2.0 * d);
    QcvValue {
        value: ((qb - qa) / d - 1.0 - m * m).max(0.0),
        window: split,
    }
}

/// `N(α) = 2 σ²_α(a, b) / σ²_α(d, 1-d)`.
pub fn ratio_value(alpha: f64, spec: &RatioSpec, cfg: &IntegrationConfig) -> Result<f64> {
    let dist = SymmetricStable::new(alpha, cfg)?;
    let curve = QuantileCurve::new(&dist, spec.upper_reach())?;
    ratio_from_curve(&curve, spec)
}

pub fn ratio_from_curve(curve: &QuantileCurve<'_>, spec: &RatioSpec) -> Result<f64> {
    let tail = qcv_from_curve(curve, spec.tail)?.value;
    let central = qcv_from_curve(curve, spec.central())?.value;
    if !(central > 0.0) {
        return Err(Error::ZeroDenominator { what: "central conditional variance" });
    }
    Ok(2.0 * tail / central)
}

/// Tabulated `α ↦ N(α)` used for plug-in inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioTable {
    spec: RatioSpec,
    table: MonotoneTable,
}

impl RatioTable {
    /// Wraps precomputed values; fails if they are not strictly monotone.
    pub fn from_values(spec: RatioSpec, alphas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Self {
            spec,
            table: MonotoneTable::new(alphas, values)?,
        })
    }

    pub fn spec(&self) -> &RatioSpec {
        &self.spec
    }

    pub fn alphas(&self) -> &[f64] {
        self.table.alphas()
    }

    pub fn values(&self) -> &[f64] {
        self.table.values()
    }

    /// `(α, N(α))` pairs in increasing α.
    pub fn grid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.alphas().iter().copied().zip(self.values().iter().copied())
    }

    pub fn alpha_range(&self) -> (f64, f64) {
        self.table.alpha_range()
    }

    pub fn direction(&self) -> Direction {
        self.table.direction()
    }

    /// Plug-in estimate for a sample ratio; out-of-range values clamp to the
    /// nearest end of the α range with the flag set.
    pub fn invert(&self, n_hat: f64) -> EstimateResult {
        let inv = self.table.invert(n_hat);
        EstimateResult::new(self.spec.method(), inv.alpha, inv.clamped)
    }
}

/// Tabulates `N` on `[alpha_lo, alpha_hi]` with spacing at most `step`.
pub fn build_table(
    spec: &RatioSpec,
    alpha_lo: f64,
    alpha_hi: f64,
    step: f64,
    cfg: &IntegrationConfig,
) -> Result<RatioTable> {
    if !(alpha_lo > 0.0 && alpha_hi <= 2.0) {
        return Err(Error::param("alpha_lo", alpha_lo, "range must sit inside (0, 2]"));
    }
    let alphas = alpha_grid(alpha_lo, alpha_hi, step)?;
    let values = alphas
        .iter()
        .map(|&a| ratio_value(a, spec, cfg))
        .collect::<Result<Vec<_>>>()?;
    RatioTable::from_values(spec.clone(), alphas, values)
}

/// `(σ̂²(a, b) + σ̂²(1-b, 1-a)) / σ̂²(d, 1-d)` from one sort of the data.
pub fn sample_ratio(data: &[f64], spec: &RatioSpec) -> Result<f64> {
    let sorted = sorted_copy(data)?;
    sample_ratio_sorted(&sorted, spec)
}

pub fn sample_ratio_sorted(sorted: &[f64], spec: &RatioSpec) -> Result<f64> {
    let lower = sample_qcv_sorted(sorted, spec.tail)?.value;
    let upper = sample_qcv_sorted(sorted, spec.tail.mirror())?.value;
    let central = sample_qcv_sorted(sorted, spec.central())?.value;
    if !(central > 0.0) {
        return Err(Error::ZeroDenominator { what: "central sample variance" });
    }
    Ok((lower + upper) / central)
}

/// Sample ratio followed by table inversion.
pub fn estimate_alpha(data: &[f64], table: &RatioTable) -> Result<EstimateResult> {
    Ok(table.invert(sample_ratio(data, &table.spec)?))
}

/// [`estimate_alpha`] on data sorted ascending.
pub fn estimate_alpha_sorted(sorted: &[f64], table: &RatioTable) -> Result<EstimateResult> {
    Ok(table.invert(sample_ratio_sorted(sorted, &table.spec)?))
}

/// Quantile level above which the quantiles of heavier-tailed laws dominate.
/// Found numerically; no closed form is known.
pub const QUANTILE_ORDERING_LEVEL: f64 = 0.75;

/// Lower window edge above which conditional variances decrease in α.
/// Found numerically; no closed form is known.
pub const QCV_ORDERING_LEVEL: f64 = 0.65;

/// `√2 Φ⁻¹(p)`, the α = 2 quantile.
pub fn gaussian_quantile(p: f64) -> f64 {
    SQRT_2 * normal_quantile(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn split(a: f64, b: f64) -> QuantileSplit {
        QuantileSplit::new(a, b).unwrap()
    }

    #[test]
    fn sample_qcv_hand_example() {
        let data: Vec<f64> = (1..=10).map(f64::from).collect();
        let v = sample_qcv(&data, 0.2, 0.7).unwrap();
        assert_eq!(v.value, 2.0);
        assert_eq!(sample_qcv(&[3.5; 40], 0.1, 0.9).unwrap().value, 0.0);
    }

    #[test]
    fn sample_qcv_window_too_small() {
        let data = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(
            sample_qcv(&data, 0.3, 0.5).unwrap_err(),
            Error::WindowTooSmall { count: 1 }
        );
        assert!(sample_qcv(&[1.0, f64::NAN, 2.0], 0.1, 0.9).is_err());
    }

    #[test]
    fn closed_forms_reference_values() {
        // scipy: 0.28530367097703757
        assert!((gaussian_qcv_closed(split(0.25, 0.75)).value - 0.285_303_670_977_037_6).abs() < 1e-12);
        assert!((cauchy_qcv_closed(split(0.25, 0.75)).value - 0.2732).abs() < 1e-4);
        let s = split(0.015, 0.25);
        assert!(
            (gaussian_qcv_closed(s).value - gaussian_qcv_closed(s.mirror()).value).abs() < 1e-12
        );
        assert!((cauchy_qcv_closed(s).value - cauchy_qcv_closed(s.mirror()).value).abs() < 1e-10);
    }

    #[test]
    fn closed_forms_match_direct_integration() {
        // independent oracle: Simpson on the quantile functions directly
        fn simpson_var(q: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            let n = 200_000;
            let h = (b - a) / n as f64;
            let (mut s1, mut s2) = (0.0, 0.0);
            for i in 0..=n {
                let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                let x = q(a + i as f64 * h);
                s1 += w * x;
                s2 += w * x * x;
            }
            let (m1, m2) = (s1 * h / 3.0 / (b - a), s2 * h / 3.0 / (b - a));
            m2 - m1 * m1
        }
        for &(a, b) in &[(0.25, 0.75), (0.1, 0.9), (0.015, 0.25), (0.01, 0.17)] {
            let g = simpson_var(gaussian_quantile, a, b);
            assert!((gaussian_qcv_closed(split(a, b)).value - g).abs() < 1e-9, "{a} {b}");
            let c = simpson_var(|p| (PI * (p - 0.5)).tan(), a, b);
            assert!((cauchy_qcv_closed(split(a, b)).value - c).abs() < 1e-9, "{a} {b}");
        }
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let cfg = IntegrationConfig::default();
        for &(a, b) in &[(0.25, 0.75), (0.015, 0.25)] {
            let s = split(a, b);
            let g = theoretical_qcv(2.0, s, &cfg).unwrap().value;
            let exact = gaussian_qcv_closed(s).value;
            assert!((g - exact).abs() < 1e-6 * exact);
            let c = theoretical_qcv(1.0, s, &cfg).unwrap().value;
            let exact = cauchy_qcv_closed(s).value;
            assert!((c - exact).abs() < 1e-5 * exact);
        }
    }

    #[test]
    fn ratio_symmetry_and_closed_ratio() {
        let cfg = IntegrationConfig::default();
        let spec = RatioSpec::n1();
        let n = ratio_value(2.0, &spec, &cfg).unwrap();
        let closed = 2.0 * gaussian_qcv_closed(spec.tail()).value
            / gaussian_qcv_closed(spec.central()).value;
        assert!((n - closed).abs() < 1e-6 * closed);
        let n = ratio_value(1.0, &spec, &cfg).unwrap();
        let closed = 2.0 * cauchy_qcv_closed(spec.tail()).value
            / cauchy_qcv_closed(spec.central()).value;
        assert!((n - closed).abs() < 1e-5 * closed);
    }

    #[test]
    fn ratio_of_shifted_scaled_sample() {
        let data: Vec<f64> = (0..200).map(|i| ((i * 37 % 101) as f64).powf(1.3)).collect();
        let spec = RatioSpec::n2();
        let r = sample_ratio(&data, &spec).unwrap();
        let moved: Vec<f64> = data.iter().map(|x| 4.0 * x - 8.0).collect();
        assert_eq!(sample_ratio(&moved, &spec).unwrap(), r);
    }

    #[test]
    fn table_round_trip_at_grid_point() {
        let spec = RatioSpec::n1();
        let t = RatioTable::from_values(spec, vec![1.0, 1.5, 2.0], vec![7.0, 5.0, 4.0]).unwrap();
        assert_eq!(t.invert(5.0).alpha_hat, 1.5);
        let r = t.invert(3.9);
        assert_eq!((r.alpha_hat, r.clamped, r.method), (2.0, true, Method::N1));
    }

    #[test]
    fn spec_validation() {
        assert!(RatioSpec::new(0.3, 0.2, 0.1, "x").is_err());
        assert!(RatioSpec::new(0.1, 0.2, 0.5, "x").is_err());
        assert_eq!(RatioSpec::n2().method(), Method::N2);
        assert_eq!(RatioSpec::new(0.02, 0.2, 0.2, "x").unwrap().method(), Method::Qcv);
    }
}
