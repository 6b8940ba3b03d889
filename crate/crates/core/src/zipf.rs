//! The rank-value Zipf model `X(n) = F / n` and conformance measurement.

use serde::Serialize;

use crate::dataset::{RankedEntry, RankedSeries};
use crate::error::{Error, Result};

/// Zipf model with rank-1 value `top` over `ranks` positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfModel {
    top: f64,
    ranks: usize,
}

impl ZipfModel {
    pub fn new(top: f64, ranks: usize) -> Result<Self> {
        if !(top > 0.0) || !top.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rank-1 value must be positive and finite, got {top}"
            )));
        }
        if ranks == 0 {
            return Err(Error::InvalidParameter(
                "rank count must be at least 1".into(),
            ));
        }
        Ok(Self { top, ranks })
    }

    pub fn top(&self) -> f64 {
        self.top
    }

    pub fn ranks(&self) -> usize {
        self.ranks
    }
}

pub fn zipf_expected(model: &ZipfModel, rank: usize) -> Result<f64> {
    if rank == 0 || rank > model.ranks {
        return Err(Error::RankOutOfRange {
            rank,
            max: model.ranks,
        });
    }
    Ok(model.top / rank as f64)
}

pub fn zipf_series(model: &ZipfModel) -> RankedSeries {
    RankedSeries {
        label: "zipf".into(),
        entries: (1..=model.ranks)
            .map(|n| RankedEntry {
                rank: n,
                name: n.to_string(),
                value: model.top / n as f64,
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankDeviation {
    pub rank: usize,
    pub observed: f64,
    pub expected: f64,
    /// `(observed - expected) / expected`
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub per_rank: Vec<RankDeviation>,
    pub max_abs_relative_error: f64,
}

/// Compares every rank against `value(1) / n`.
pub fn zipf_deviation(series: &RankedSeries) -> Result<DeviationReport> {
    let first = series
        .entries
        .first()
        .ok_or_else(|| Error::EmptyInput(format!("zipf deviation of {}", series.label)))?;
    if let Some(e) = series.entries.iter().find(|e| !(e.value > 0.0)) {
        return Err(Error::NonPositive {
            rank: e.rank,
            label: e.name.clone(),
            value: e.value,
        });
    }
    let top = first.value;
    let per_rank: Vec<RankDeviation> = series
        .entries
        .iter()
        .map(|e| {
            let expected = top / e.rank as f64;
            RankDeviation {
                rank: e.rank,
                observed: e.value,
                expected,
                relative_error: (e.value - expected) / expected,
            }
        })
        .collect();
    let max_abs_relative_error = per_rank
        .iter()
        .map(|d| d.relative_error.abs())
        .fold(0.0, f64::max);
    Ok(DeviationReport {
        per_rank,
        max_abs_relative_error,
    })
}
