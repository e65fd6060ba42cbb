//! Downsampling benchmarks for classic top-N recommenders: ingest and
//! k-core preprocessing, per-user holdout splits with nested training
//! fractions, eleven algorithms, nDCG evaluation, runtime and CO2e
//! accounting, and report generation.
//!
//! Data-parallel loops go through [`par`]; building without the default
//! `parallel` feature runs everything on the calling thread with identical
//! results.

pub mod error;
pub mod eval;
pub mod green;
pub mod ingest;
pub mod models;
pub mod par;
pub mod preprocess;
pub mod report;
pub mod rng;
pub mod runner;
pub mod split;

pub use error::{Error, Result};
