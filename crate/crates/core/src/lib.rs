//! Stability-index estimation for symmetric α-stable laws.
//!
//! The crate covers four layers:
//!
//! - [`stable`]: characteristic function, density, distribution and quantile
//!   functions of the standardized symmetric law, tail asymptotics and a
//!   seeded Chambers–Mallows–Stuck sampler for the general 0-parametrization.
//! - [`qcv`]: theoretical and sample quantile conditional variances, the
//!   tail-to-central variance ratio and its plug-in inversion through a
//!   precomputed monotone table.
//! - [`benchmarks`]: McCulloch quantile ratios, characteristic-function
//!   regression, maximum likelihood and the averaged ensembles.
//! - [`evaluation`]: RMSE, bias and robustness aggregation, reproducible
//!   per-replication seeding and percentile bootstrap intervals.
//!
//! Everything here is pure computation and builds without `std` (an
//! allocator is required). File formats, parallel drivers and the command
//! line live in the companion `qcvstable` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

mod math;

pub mod benchmarks;
pub mod error;
pub mod estimate;
pub mod estimators;
pub mod evaluation;
pub mod optimize;
pub mod qcv;
pub mod quadrature;
pub mod roots;
pub mod special;
pub mod stable;
pub mod table;

pub use crate::error::{Error, Result};
pub use crate::estimate::{ConfidenceInterval, EstimateResult, Method};
pub use crate::estimators::Estimators;
pub use crate::qcv::{QcvValue, QuantileSplit, RatioSpec, RatioTable};
pub use crate::stable::{IntegrationConfig, StableParams, SymmetricStable, TailConstants};
