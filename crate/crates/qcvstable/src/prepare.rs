//! Assembling [`Estimators`] from cached tables.

use qcvstable_core::benchmarks::{MleConfig, MleEstimator, RegConfig};
use qcvstable_core::estimators::{DEFAULT_NU_RANGE, DEFAULT_RATIO_RANGE, DEFAULT_TABLE_STEP};
use qcvstable_core::{Estimators, IntegrationConfig, Method, RatioSpec};

use crate::cache::{CachedTable, TableCache, TableRequest};
use crate::error::Result;
use crate::report::TableDigest;

#[derive(Debug, Clone, PartialEq)]
pub struct PrepareOptions {
    pub cfg: IntegrationConfig,
    pub reg: RegConfig,
    /// Median/IQR standardization before the likelihood fit.
    pub mle_standardize: bool,
}

impl Default for PrepareOptions {
    fn default() -> Self {
        Self {
            cfg: IntegrationConfig::default(),
            reg: RegConfig::default(),
            mle_standardize: false,
        }
    }
}

impl PrepareOptions {
    /// Settings for simulated `S(α, β, 1, 0)` samples: regression through
    /// the origin with the scale taken as known.
    pub fn simulation() -> Self {
        Self {
            reg: RegConfig::known_scale(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct Prepared {
    pub estimators: Estimators,
    pub digests: Vec<TableDigest>,
}

fn digest(name: &str, cached: &CachedTable) -> TableDigest {
    TableDigest {
        name: name.to_owned(),
        path: cached.path.display().to_string(),
        sha256: cached.digest.clone(),
    }
}

/// Loads or builds the tables `methods` need with the default ranges.
pub fn prepare(methods: &[Method], opts: &PrepareOptions, cache: &TableCache) -> Result<Prepared> {
    let needs = |m: &[Method]| methods.iter().any(|x| m.contains(x));
    let cfg = opts.cfg;
    let (lo, hi) = DEFAULT_RATIO_RANGE;
    let mut est = Estimators {
        reg: opts.reg.clone(),
        ..Estimators::default()
    };
    let mut digests = Vec::new();
    for (spec, wanted) in [
        (RatioSpec::n1(), needs(&[Method::N1, Method::M1])),
        (RatioSpec::n2(), needs(&[Method::N2, Method::M2])),
    ] {
        if !wanted {
            continue;
        }
        let name = spec.name().to_owned();
        let (table, cached) = cache.ratio_table(&TableRequest::ratio(spec, lo, hi, DEFAULT_TABLE_STEP, cfg))?;
        digests.push(digest(&name, &cached));
        if name == "n1" {
            est.n1 = Some(table);
        } else {
            est.n2 = Some(table);
        }
    }
    if needs(&[Method::Mch]) {
        let (lo, hi) = DEFAULT_NU_RANGE;
        let (table, cached) = cache.nu_table(&TableRequest::nu(lo, hi, DEFAULT_TABLE_STEP, cfg))?;
        digests.push(digest("mcculloch", &cached));
        est.nu = Some(table);
    }
    if needs(&[Method::Mle]) {
        est.mle = Some(MleEstimator::new(MleConfig {
            pdf_cfg: cfg,
            standardize: opts.mle_standardize,
            ..MleConfig::default()
        })?);
    }
    Ok(Prepared {
        estimators: est,
        digests,
    })
}
