//! Retweet-to-follower engagement ratio, its normalization, and log binning.
//!
//! `p = average_retweets / total_followers`, `n_norm = p * 1e6`, and the
//! binning coordinate is `log10(n_norm)`.

use serde::Serialize;

use crate::dataset::AccountSet;
use crate::error::{Error, Result};
use crate::stats;

/// Multiplier applied to `p` before taking the logarithm.
pub const NORMALIZATION: f64 = 1e6;

/// Bin boundaries. The first bin is `[0.5, 1.0)`, the rest are 0.2 wide.
pub const BIN_EDGES: [f64; 17] = [
    0.5, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4, 2.6, 2.8, 3.0, 3.2, 3.4, 3.6, 3.8, 4.0,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PRatioRecord {
    pub account_name: String,
    pub p: f64,
    pub n_norm: f64,
    /// `log10(n_norm)`; `None` when `n_norm` is zero.
    pub log_n: Option<f64>,
    pub bin_index: Option<usize>,
}

/// Where a log value falls relative to [`BIN_EDGES`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinSlot {
    Underflow,
    Bin(usize),
    Overflow,
}

/// Half-open `[lo, hi)` bins, with the last bin closed at 4.0.
pub fn bin_slot(log_n: f64) -> BinSlot {
    let last = BIN_EDGES.len() - 1;
    if log_n < BIN_EDGES[0] {
        return BinSlot::Underflow;
    }
    if log_n > BIN_EDGES[last] {
        return BinSlot::Overflow;
    }
    if log_n == BIN_EDGES[last] {
        return BinSlot::Bin(last - 1);
    }
    // partition_point gives the count of edges <= log_n, which is >= 1 here.
    BinSlot::Bin(BIN_EDGES.partition_point(|&e| e <= log_n) - 1)
}

pub fn p_ratio(
    account_name: &str,
    average_retweets: f64,
    total_followers: f64,
) -> Result<PRatioRecord> {
    if total_followers == 0.0 {
        return Err(Error::ZeroFollowers {
            account: account_name.to_string(),
        });
    }
    if !(total_followers > 0.0) || !(average_retweets >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "account {account_name:?}: counts must be non-negative"
        )));
    }
    let p = average_retweets / total_followers;
    let n_norm = p * NORMALIZATION;
    let log_n = (n_norm > 0.0).then(|| n_norm.log10());
    let bin_index = log_n.and_then(|l| match bin_slot(l) {
        BinSlot::Bin(i) => Some(i),
        _ => None,
    });
    Ok(PRatioRecord {
        account_name: account_name.to_string(),
        p,
        n_norm,
        log_n,
        bin_index,
    })
}

/// One record per account, in set order.
pub fn p_ratio_records(set: &AccountSet) -> Result<Vec<PRatioRecord>> {
    set.records()
        .iter()
        .map(|r| p_ratio(&r.name, r.average_retweets, r.total_followers))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    /// Records whose `log_n` is undefined (zero ratio).
    pub undefined: u64,
}

impl BinHistogram {
    pub fn empty() -> Self {
        Self {
            edges: BIN_EDGES.to_vec(),
            counts: vec![0; BIN_EDGES.len() - 1],
            underflow: 0,
            overflow: 0,
            undefined: 0,
        }
    }

    pub fn add(&mut self, log_n: Option<f64>) {
        match log_n.map(bin_slot) {
            None => self.undefined += 1,
            Some(BinSlot::Underflow) => self.underflow += 1,
            Some(BinSlot::Overflow) => self.overflow += 1,
            Some(BinSlot::Bin(i)) => self.counts[i] += 1,
        }
    }

    /// Adds another histogram's counters into this one.
    pub fn merge(&mut self, other: &BinHistogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        self.undefined += other.undefined;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow + self.undefined
    }
}

pub fn bin_log(records: &[PRatioRecord]) -> BinHistogram {
    let mut h = BinHistogram::empty();
    for r in records {
        h.add(r.log_n);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogTrend {
    pub slope: f64,
    pub intercept: f64,
    #[serde(rename = "r2")]
    pub r_squared: f64,
}

/// Least-squares line of `log_n` against rank, ranking by `n_norm`
/// descending. Records with undefined `log_n` are skipped.
pub fn log_trend_fit(records: &[PRatioRecord]) -> Result<LogTrend> {
    let mut defined: Vec<(&str, f64, f64)> = records
        .iter()
        .filter_map(|r| r.log_n.map(|l| (r.account_name.as_str(), r.n_norm, l)))
        .collect();
    if defined.len() < 2 {
        return Err(Error::InsufficientData {
            context: "log trend".into(),
            needed: 2,
            got: defined.len(),
        });
    }
    defined.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let ranks: Vec<f64> = (1..=defined.len()).map(|r| r as f64).collect();
    let logs: Vec<f64> = defined.iter().map(|d| d.2).collect();
    let line = stats::ols(&ranks, &logs)?;
    Ok(LogTrend {
        slope: line.slope,
        intercept: line.intercept,
        r_squared: line.r_squared,
    })
}
