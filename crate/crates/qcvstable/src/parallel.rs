//! Multi-threaded experiment drivers.
//!
//! Replications run in any order on the rayon pool; results are collected
//! by (cell, replication) index, so output does not depend on the number of
//! workers and equals the serial drivers in `qcvstable_core::evaluation`.

use qcvstable_core::evaluation::{
    simulate_replication, BiasGrid, CellOutcome, MonteCarloConfig, RmseReport,
};
use qcvstable_core::Estimators;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub fn run_cells(cfg: &MonteCarloConfig, estimators: &Estimators) -> Result<Vec<CellOutcome>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let k = cfg.replications;
    let rows = (0..cells.len() * k)
        .into_par_iter()
        .map(|t| {
            simulate_replication(&cells[t / k], t % k, cfg.master_seed, &cfg.methods, estimators)
        })
        .collect::<qcvstable_core::Result<Vec<_>>>()?;
    Ok(cells
        .into_iter()
        .zip(rows.chunks(k))
        .map(|(cell, rows)| CellOutcome::from_replications(cell, &cfg.methods, rows))
        .collect())
}

pub fn run_rmse_experiment(cfg: &MonteCarloConfig, estimators: &Estimators) -> Result<RmseReport> {
    Ok(RmseReport::from_outcomes(&run_cells(cfg, estimators)?))
}

pub fn run_bias_grid(cfg: &MonteCarloConfig, estimators: &Estimators) -> Result<BiasGrid> {
    Ok(BiasGrid::from_outcomes(&run_cells(cfg, estimators)?))
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Usage("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcvstable_core::evaluation;
    use qcvstable_core::Method;

    #[test]
    fn matches_serial_driver_for_any_worker_count() {
        let cfg = MonteCarloConfig {
            replications: 6,
            sample_sizes: vec![60, 80],
            alphas: vec![1.3, 2.0],
            betas: vec![0.0],
            methods: vec![Method::Reg],
            master_seed: 99,
        };
        let est = Estimators::default();
        let serial = evaluation::run_cells(&cfg, &est).unwrap();
        for threads in [1, 3] {
            let par = with_threads(Some(threads), || run_cells(&cfg, &est))
                .unwrap()
                .unwrap();
            assert_eq!(par, serial);
        }
    }
}
