//! Published account tables bundled as CSV.
//!
//! Each table lists its three columns already sorted descending and ranked
//! independently, so a "row" pairs the rank-n value of every metric rather
//! than describing one real account. Names are synthesized (`P1`..`P9` etc).

use crate::dataset::{load_accounts, AccountSet, InputFormat};

/// Top 12 ranks of the pooled 70-account population.
pub const TOP12_POOLED_CSV: &str = include_str!("../data/top12_pooled.csv");
/// 31 film and music accounts, category `celebrity`.
pub const CELEBRITIES_CSV: &str = include_str!("../data/celebrities.csv");
/// 9 accounts, category `politician`.
pub const POLITICIANS_CSV: &str = include_str!("../data/politicians.csv");
/// 9 accounts, category `sportsman`.
pub const SPORTSMEN_CSV: &str = include_str!("../data/sportsmen.csv");

pub const ALL_CSV: [&str; 4] = [
    TOP12_POOLED_CSV,
    CELEBRITIES_CSV,
    POLITICIANS_CSV,
    SPORTSMEN_CSV,
];

/// Published node counts per log10(N) bin for the 70-account population,
/// in the same order as [`crate::pratio::BIN_EDGES`].
pub const BIN_DENSITY_COUNTS: [u32; 16] = [2, 4, 7, 4, 9, 3, 4, 7, 13, 6, 5, 3, 1, 1, 0, 1];

fn load(csv: &str, source: &str) -> AccountSet {
    load_accounts(csv.as_bytes(), InputFormat::Csv, source).expect("bundled table is valid")
}

pub fn top12_pooled() -> AccountSet {
    load(TOP12_POOLED_CSV, "top12_pooled.csv")
}

pub fn celebrities() -> AccountSet {
    load(CELEBRITIES_CSV, "celebrities.csv")
}

pub fn politicians() -> AccountSet {
    load(POLITICIANS_CSV, "politicians.csv")
}

pub fn sportsmen() -> AccountSet {
    load(SPORTSMEN_CSV, "sportsmen.csv")
}

/// Celebrities, politicians and sportsmen in one set (49 accounts).
pub fn three_categories() -> AccountSet {
    celebrities()
        .merge(&politicians())
        .and_then(|s| s.merge(&sportsmen()))
        .expect("bundled names are disjoint")
}
