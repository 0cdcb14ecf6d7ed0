//! Experiment runner and analysis tools on top of `nrp-core`.

pub mod algorithm;
pub mod best_known;
pub mod error;
pub mod experiment;
pub mod landscape;
pub mod stats;
pub mod trajectory;

pub use algorithm::{Algorithm, Outcome};
pub use error::{BenchError, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod guide_experiments {}
