//! Monte Carlo experiment harness: RMSE tables, bias grids, robustness
//! differences and bootstrap intervals.
//!
//! Every replication draws its sample from a seed derived from the master
//! seed and the replication's coordinates, so results do not depend on
//! execution order. Estimator failures are counted per cell and excluded
//! from the aggregates.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::benchmarks::sample_quantile;
use crate::error::{Error, Result};
use crate::estimate::{ConfidenceInterval, EstimateResult, Method};
use crate::estimators::Estimators;
use crate::math;
use crate::stable::{sample, StableParams};

/// Root mean squared deviation of `estimates` from `alpha_true`; `NaN` for
/// an empty slice.
pub fn rmse(alpha_true: f64, estimates: &[f64]) -> f64 {
    if estimates.is_empty() {
        return f64::NAN;
    }
    let ss: f64 = estimates.iter().map(|e| (e - alpha_true) * (e - alpha_true)).sum();
    math::sqrt(ss / estimates.len() as f64)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample skewness `m3 / m2^{3/2}`.
pub fn skewness(values: &[f64]) -> f64 {
    let m = mean(values);
    let n = values.len() as f64;
    let m2 = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
    let m3 = values.iter().map(|v| (v - m) * (v - m) * (v - m)).sum::<f64>() / n;
    m3 / (m2 * math::sqrt(m2))
}

/// Splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `j` in cell `(α, β, n)`.
pub fn replication_seed(master: u64, alpha: f64, beta: f64, n: usize, j: usize) -> u64 {
    let mut h = mix(master);
    for word in [alpha.to_bits(), beta.to_bits(), n as u64, j as u64] {
        h = mix(h ^ word);
    }
    h
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloConfig {
    pub replications: usize,
    pub sample_sizes: Vec<usize>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub methods: Vec<Method>,
    pub master_seed: u64,
}

/// Smallest sample size accepted by the harness.
pub const MIN_SAMPLE_SIZE: usize = 50;

impl MonteCarloConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::param("replications", 0.0, "need at least one"));
        }
        if let Some(&n) = self.sample_sizes.iter().find(|&&n| n < MIN_SAMPLE_SIZE) {
            return Err(Error::SampleTooSmall {
                got: n,
                need: MIN_SAMPLE_SIZE,
            });
        }
        if self.methods.is_empty() || self.sample_sizes.is_empty() || self.alphas.is_empty() {
            return Err(Error::param("methods", 0.0, "methods, sizes and alphas must be nonempty"));
        }
        if self.betas.is_empty() {
            return Err(Error::param("betas", 0.0, "need at least one beta"));
        }
        for &a in &self.alphas {
            for &b in &self.betas {
                StableParams::new(a, b, 1.0, 0.0)?;
            }
        }
        Ok(())
    }

    /// Cells in report order: α, then β, then n.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &alpha in &self.alphas {
            for &beta in &self.betas {
                for &n in &self.sample_sizes {
                    out.push(Cell { alpha, beta, n });
                }
            }
        }
        out
    }
}

/// One `(α, β, n)` combination of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
}

/// Draws replication `j` of `cell` and applies every method to the same
/// sample; failed estimates are `None`.
pub fn simulate_replication(
    cell: &Cell,
    j: usize,
    master_seed: u64,
    methods: &[Method],
    estimators: &Estimators,
) -> Result<Vec<Option<f64>>> {
    let params = StableParams::new(cell.alpha, cell.beta, 1.0, 0.0)?;
    let seed = replication_seed(master_seed, cell.alpha, cell.beta, cell.n, j);
    let mut data = sample(&params, cell.n, seed);
    data.sort_by(f64::total_cmp);
    Ok(methods
        .iter()
        .map(|&m| estimators.estimate_sorted(m, &data).ok().map(|e| e.alpha_hat))
        .collect())
}

/// Estimates of one method in one cell, in replication order.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSamples {
    pub method: Method,
    pub estimates: Vec<f64>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellOutcome {
    pub cell: Cell,
    pub methods: Vec<MethodSamples>,
}

impl CellOutcome {
    /// Regroups per-replication rows (as from [`simulate_replication`],
    /// ordered by replication) into per-method series.
    pub fn from_replications(cell: Cell, methods: &[Method], rows: &[Vec<Option<f64>>]) -> Self {
        let methods = methods
            .iter()
            .enumerate()
            .map(|(i, &method)| {
                let mut estimates = Vec::with_capacity(rows.len());
                let mut failures = 0;
                for row in rows {
                    match row[i] {
                        Some(v) => estimates.push(v),
                        None => failures += 1,
                    }
                }
                MethodSamples {
                    method,
                    estimates,
                    failures,
                }
            })
            .collect();
        Self { cell, methods }
    }

    pub fn method(&self, method: Method) -> Option<&MethodSamples> {
        self.methods.iter().find(|m| m.method == method)
    }
}

/// Runs every cell serially.
pub fn run_cells(cfg: &MonteCarloConfig, estimators: &Estimators) -> Result<Vec<CellOutcome>> {
    cfg.validate()?;
    cfg.cells()
        .into_iter()
        .map(|cell| {
            let rows = (0..cfg.replications)
                .map(|j| simulate_replication(&cell, j, cfg.master_seed, &cfg.methods, estimators))
                .collect::<Result<Vec<_>>>()?;
            Ok(CellOutcome::from_replications(cell, &cfg.methods, &rows))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmseRow {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub method: Method,
    pub rmse: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RmseReport {
    pub rows: Vec<RmseRow>,
}

impl RmseReport {
    pub fn from_outcomes(outcomes: &[CellOutcome]) -> Self {
        let rows = outcomes
            .iter()
            .flat_map(|o| {
                o.methods.iter().map(move |m| RmseRow {
                    alpha: o.cell.alpha,
                    beta: o.cell.beta,
                    n: o.cell.n,
                    method: m.method,
                    rmse: rmse(o.cell.alpha, &m.estimates),
                    failures: m.failures,
                })
            })
            .collect();
        Self { rows }
    }

    pub fn get(&self, alpha: f64, n: usize, method: Method) -> Option<&RmseRow> {
        self.rows
            .iter()
            .find(|r| r.alpha == alpha && r.n == n && r.method == method)
    }
}

/// RMSE experiment on symmetric samples (`β` taken from the config,
/// normally just 0).
pub fn run_rmse_experiment(cfg: &MonteCarloConfig, estimators: &Estimators) -> Result<RmseReport> {
    Ok(RmseReport::from_outcomes(&run_cells(cfg, estimators)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasCell {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub method: Method,
    pub mean: f64,
    pub count: usize,
    pub failures: usize,
}

/// Mean estimate per `(α, β)` cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiasGrid {
    pub cells: Vec<BiasCell>,
}

impl BiasGrid {
    pub fn from_outcomes(outcomes: &[CellOutcome]) -> Self {
        let cells = outcomes
            .iter()
            .flat_map(|o| {
                o.methods.iter().map(move |m| BiasCell {
                    alpha: o.cell.alpha,
                    beta: o.cell.beta,
                    n: o.cell.n,
                    method: m.method,
                    mean: mean(&m.estimates),
                    count: m.estimates.len(),
                    failures: m.failures,
                })
            })
            .collect();
        Self { cells }
    }

    pub fn get(&self, alpha: f64, beta: f64, method: Method) -> Option<&BiasCell> {
        self.cells
            .iter()
            .find(|c| c.alpha == alpha && c.beta == beta && c.method == method)
    }
}

pub fn run_bias_grid(cfg: &MonteCarloConfig, estimators: &Estimators) -> Result<BiasGrid> {
    Ok(BiasGrid::from_outcomes(&run_cells(cfg, estimators)?))
}

/// `|mean(α, β) - mean(α, 0)|` for one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffCell {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub method: Method,
    pub abs_diff: f64,
}

/// Absolute difference of every cell's mean from the symmetric `β = 0`
/// cell with the same α, n and method.
pub fn robustness_diff(grid: &BiasGrid) -> Result<Vec<DiffCell>> {
    grid.cells
        .iter()
        .map(|c| {
            let base = grid
                .cells
                .iter()
                .find(|b| b.beta == 0.0 && b.alpha == c.alpha && b.n == c.n && b.method == c.method)
                .ok_or(Error::MissingColumn)?;
            Ok(DiffCell {
                alpha: c.alpha,
                beta: c.beta,
                n: c.n,
                method: c.method,
                abs_diff: math::abs(c.mean - base.mean),
            })
        })
        .collect()
}

/// Smallest accepted number of bootstrap resamples.
pub const MIN_RESAMPLES: usize = 100;
/// Largest tolerated share of failed resamples.
pub const MAX_FAILED_SHARE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapResult {
    pub point: EstimateResult,
    pub ci_low: f64,
    pub ci_high: f64,
    pub level: f64,
    pub resamples: usize,
    pub failures: usize,
}

/// Percentile bootstrap interval around the estimate of `method`.
pub fn bootstrap_ci(
    data: &[f64],
    method: Method,
    resamples: usize,
    level: f64,
    seed: u64,
    estimators: &Estimators,
) -> Result<BootstrapResult> {
    if resamples < MIN_RESAMPLES {
        return Err(Error::param("resamples", resamples as f64, "need at least 100"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::param("level", level, "must lie in (0, 1)"));
    }
    let mut point = estimators.estimate(method, data)?;
    let n = data.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = alloc::vec![0.0; n];
    let mut estimates = Vec::with_capacity(resamples);
    let mut failures = 0;
    for _ in 0..resamples {
        for slot in buf.iter_mut() {
            *slot = data[rng.gen_range(0..n)];
        }
        buf.sort_by(f64::total_cmp);
        match estimators.estimate_sorted(method, &buf) {
            Ok(e) => estimates.push(e.alpha_hat),
            Err(_) => failures += 1,
        }
    }
    if failures as f64 > MAX_FAILED_SHARE * resamples as f64 {
        return Err(Error::BootstrapFailures {
            failed: failures,
            total: resamples,
        });
    }
    estimates.sort_by(f64::total_cmp);
    let tail = 0.5 * (1.0 - level);
    let ci_low = sample_quantile(&estimates, tail);
    let ci_high = sample_quantile(&estimates, 1.0 - tail);
    point.ci = Some(ConfidenceInterval {
        low: ci_low,
        high: ci_high,
        level,
        resamples,
    });
    Ok(BootstrapResult {
        point,
        ci_low,
        ci_high,
        level,
        resamples,
        failures,
    })
}
