//! File formats, table caching, multi-threaded experiment drivers and the
//! `qcvstable` command line, on top of [`qcvstable_core`].

#![warn(missing_debug_implementations, rust_2018_idioms)]

pub mod cache;
pub mod cli;
pub mod data;
pub mod error;
pub mod parallel;
pub mod prepare;
pub mod report;

pub use qcvstable_core as core;

pub use crate::error::{Error, Result};
