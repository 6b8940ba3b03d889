//! Rank-spectrum analysis of social account metrics.
//!
//! Fits `y = a * x^k` to ranked tweet, retweet and follower counts, checks
//! conformance to the `F / n` Zipf model, computes the retweet-to-follower
//! engagement ratio with log binning, and generates scale-free and
//! small-world graphs to validate the fitter.

// `!(x > 0.0)` is used deliberately so NaN fails positivity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod dataset;
pub mod error;
pub mod format;
pub mod netmodels;
pub mod powerlaw;
pub mod pratio;
pub mod reference;
pub mod stats;
pub mod zipf;

pub use error::{Error, Result};

/// Seed used by generators when none is supplied.
pub const DEFAULT_SEED: u64 = 20_160_901;
