//! Category-level reports: per-metric power-law fits, engagement scores,
//! and the pooled histogram and trend.
//!
//! `fake_index` is a heuristic: the shortfall of an account's ratio below
//! its category median, `1 - min(1, p / median_p)`. It orders accounts; it
//! does not estimate what fraction of followers are fake.

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{rank_metric, AccountSet, Metric};
use crate::error::{Error, Result};
use crate::powerlaw::{fit_power_law, PowerLawFit};
use crate::pratio::{bin_log, log_trend_fit, p_ratio, p_ratio_records, BinHistogram, LogTrend};
use crate::stats;
use crate::zipf::zipf_deviation;

pub const SCHEMA_VERSION: u32 = 1;

/// Label used in every report that carries `fake_index`.
pub const FAKE_INDEX_METHOD: &str =
    "heuristic: 1 - min(1, p / category median p); an ordering aid, not an estimate of the fake-follower fraction";

/// One value per metric, serialized as an object keyed by metric name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerMetric<T> {
    pub total_tweets: T,
    pub average_retweets: T,
    pub total_followers: T,
}

impl<T> PerMetric<T> {
    pub fn try_build(mut f: impl FnMut(Metric) -> Result<T>) -> Result<Self> {
        Ok(Self {
            total_tweets: f(Metric::TotalTweets)?,
            average_retweets: f(Metric::AverageRetweets)?,
            total_followers: f(Metric::TotalFollowers)?,
        })
    }

    pub fn get(&self, metric: Metric) -> &T {
        match metric {
            Metric::TotalTweets => &self.total_tweets,
            Metric::AverageRetweets => &self.average_retweets,
            Metric::TotalFollowers => &self.total_followers,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryReport {
    pub category: String,
    pub account_count: usize,
    pub fits: PerMetric<PowerLawFit>,
    pub zipf_max_deviation: PerMetric<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccountScore {
    pub name: String,
    pub category: String,
    pub p: f64,
    pub p_percentile: f64,
    pub fake_index: f64,
}

fn group_report(group: &AccountSet, label: &str) -> Result<CategoryReport> {
    if group.len() < 2 {
        return Err(Error::InsufficientData {
            context: format!("category {label:?}"),
            needed: 2,
            got: group.len(),
        });
    }
    for r in group.records() {
        for m in Metric::ALL {
            let value = r.metric(m);
            if !(value > 0.0) {
                return Err(Error::NonPositiveMetric {
                    account: r.name.clone(),
                    metric: m.to_string(),
                    value,
                });
            }
        }
    }
    let ranked = PerMetric::try_build(|m| rank_metric(group, m))?;
    Ok(CategoryReport {
        category: label.to_string(),
        account_count: group.len(),
        fits: PerMetric::try_build(|m| fit_power_law(ranked.get(m)))?,
        zipf_max_deviation: PerMetric::try_build(|m| {
            zipf_deviation(ranked.get(m)).map(|d| d.max_abs_relative_error)
        })?,
    })
}

/// Ranks and fits each metric over the accounts tagged `category`.
pub fn category_report(set: &AccountSet, category: &str) -> Result<CategoryReport> {
    let group = set.in_category(category);
    if group.is_empty() {
        return Err(Error::UnknownCategory(category.to_string()));
    }
    group_report(&group, category)
}

/// Ratio, percentile, and heuristic index for each account in `category`,
/// highest ratio first.
pub fn account_scores(set: &AccountSet, category: &str) -> Result<Vec<AccountScore>> {
    let group = set.in_category(category);
    if group.is_empty() {
        return Err(Error::UnknownCategory(category.to_string()));
    }
    let ratios: Vec<(&str, f64)> = group
        .records()
        .iter()
        .map(|r| {
            p_ratio(&r.name, r.average_retweets, r.total_followers)
                .map(|rec| (r.name.as_str(), rec.p))
        })
        .collect::<Result<_>>()?;
    let ps: Vec<f64> = ratios.iter().map(|r| r.1).collect();
    let median = stats::median(&ps).expect("group is non-empty");
    let count = ps.len();

    let mut scores: Vec<AccountScore> = ratios
        .iter()
        .map(|&(name, p)| {
            let smaller = ps.iter().filter(|&&q| q < p).count();
            let p_percentile = if count == 1 {
                1.0
            } else {
                smaller as f64 / (count - 1) as f64
            };
            let fake_index = if median > 0.0 {
                1.0 - (p / median).min(1.0)
            } else {
                0.0
            };
            AccountScore {
                name: name.to_string(),
                category: category.to_string(),
                p,
                p_percentile,
                fake_index,
            }
        })
        .collect();
    scores.sort_by(|a, b| b.p.total_cmp(&a.p).then_with(|| a.name.cmp(&b.name)));
    Ok(scores)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub schema_version: u32,
    pub source: String,
    pub categories: Vec<CategoryReport>,
    /// Fits over every loaded account regardless of category.
    pub pooled: CategoryReport,
    pub histogram: BinHistogram,
    /// Absent when fewer than two accounts have a positive ratio.
    pub trend: Option<LogTrend>,
    pub fake_index_method: &'static str,
    pub scores: Vec<AccountScore>,
}

impl AuditReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn full_report(set: &AccountSet) -> Result<AuditReport> {
    if set.is_empty() {
        return Err(Error::EmptyInput("audit needs at least one account".into()));
    }
    let categories = set.categories();
    let reports: Vec<CategoryReport> = categories
        .par_iter()
        .map(|c| category_report(set, c))
        .collect::<Result<_>>()?;
    let pooled = group_report(set, "pooled")?;

    let records = p_ratio_records(set)?;
    let histogram = bin_log(&records);
    let trend = match log_trend_fit(&records) {
        Ok(t) => Some(t),
        Err(Error::InsufficientData { .. }) => None,
        Err(e) => return Err(e),
    };

    let mut scores = Vec::with_capacity(set.len());
    for c in &categories {
        scores.extend(account_scores(set, c)?);
    }

    Ok(AuditReport {
        schema_version: SCHEMA_VERSION,
        source: set.source().to_string(),
        categories: reports,
        pooled,
        histogram,
        trend,
        fake_index_method: FAKE_INDEX_METHOD,
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::AccountRecord;
    use crate::reference;
    use proptest::prelude::*;

    fn account(
        name: &str,
        category: &str,
        tweets: f64,
        retweets: f64,
        followers: f64,
    ) -> AccountRecord {
        AccountRecord {
            name: name.into(),
            category: category.into(),
            total_tweets: tweets,
            average_retweets: retweets,
            total_followers: followers,
        }
    }

    #[test]
    fn politician_followers_fit() {
        let r = category_report(&reference::politicians(), "politician").unwrap();
        assert_eq!(r.account_count, 9);
        let f = r.fits.total_followers;
        assert!((f.exponent - -2.265188827465204).abs() < 1e-9);
        assert!(((f.prefactor - 91_834_080.86275674) / 91_834_080.86275674).abs() < 1e-9);
        assert!((r.zipf_max_deviation.total_followers - 0.9683098591549296).abs() < 1e-12);
    }

    #[test]
    fn celebrity_tweets_exponent() {
        let r = category_report(&reference::celebrities(), "celebrity").unwrap();
        assert_eq!(r.account_count, 31);
        // Independent numpy.polyfit on the 31 ln-pairs gives -1.5116083364876263.
        assert!((r.fits.total_tweets.exponent - -1.5116083364876263).abs() < 1e-9);
        assert!((r.fits.total_tweets.exponent - -1.512).abs() < 0.05);
    }

    #[test]
    fn exact_two_account_category() {
        let set = AccountSet::new(
            vec![
                account("a", "x", 5.0, 5.0, 5.0),
                account("b", "x", 1.25, 1.25, 1.25),
            ],
            "inline",
        )
        .unwrap();
        let r = category_report(&set, "x").unwrap();
        for m in Metric::ALL {
            let f = r.fits.get(m);
            assert!((f.prefactor - 5.0).abs() < 1e-12);
            assert!((f.exponent + 2.0).abs() < 1e-12);
            assert!((f.r_squared - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn category_errors() {
        let set = AccountSet::new(
            vec![
                account("a", "x", 5.0, 5.0, 5.0),
                account("b", "y", 1.0, 1.0, 1.0),
                account("c", "y", 1.0, 0.0, 1.0),
            ],
            "inline",
        )
        .unwrap();
        assert!(matches!(
            category_report(&set, "x"),
            Err(Error::InsufficientData { got: 1, .. })
        ));
        assert!(matches!(
            category_report(&set, "z"),
            Err(Error::UnknownCategory(_))
        ));
        match category_report(&set, "y") {
            Err(Error::NonPositiveMetric {
                account, metric, ..
            }) => {
                assert_eq!(account, "c");
                assert_eq!(metric, "average_retweets");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn three_account_scores() {
        let set = AccountSet::new(
            vec![
                account("lo", "c", 1.0, 1.0, 10_000.0),
                account("hi", "c", 1.0, 4.0, 10_000.0),
                account("mid", "c", 1.0, 2.0, 10_000.0),
            ],
            "inline",
        )
        .unwrap();
        let s = account_scores(&set, "c").unwrap();
        let names: Vec<_> = s.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["hi", "mid", "lo"]);
        let idx: Vec<_> = s.iter().map(|a| a.fake_index).collect();
        assert_eq!(idx, [0.0, 0.0, 0.5]);
        let pct: Vec<_> = s.iter().map(|a| a.p_percentile).collect();
        assert_eq!(pct, [1.0, 0.5, 0.0]);
    }

    #[test]
    fn score_boundaries() {
        let set = AccountSet::new(
            vec![
                account("zero", "c", 1.0, 0.0, 100.0),
                account("a", "c", 1.0, 3.0, 100.0),
                account("b", "c", 1.0, 5.0, 100.0),
                account("solo", "s", 1.0, 1.0, 100.0),
            ],
            "inline",
        )
        .unwrap();
        let s = account_scores(&set, "c").unwrap();
        let by = |n: &str| s.iter().find(|a| a.name == n).unwrap().clone();
        assert_eq!(by("a").fake_index, 0.0); // p equals the median
        assert_eq!(by("zero").fake_index, 1.0);

        let solo = account_scores(&set, "s").unwrap();
        assert_eq!(solo[0].p_percentile, 1.0);
        assert_eq!(solo[0].fake_index, 0.0);
    }

    #[test]
    fn zero_followers_propagates() {
        let set = AccountSet::new(vec![account("ghost", "c", 1.0, 1.0, 0.0)], "inline").unwrap();
        assert!(
            matches!(account_scores(&set, "c"), Err(Error::ZeroFollowers { account }) if account == "ghost")
        );
    }

    #[test]
    fn merged_tables_report() {
        let set = reference::three_categories();
        assert_eq!(set.len(), 49);
        let r = full_report(&set).unwrap();
        assert_eq!(r.schema_version, 1);
        let cats: Vec<_> = r
            .categories
            .iter()
            .map(|c| (c.category.as_str(), c.account_count))
            .collect();
        assert_eq!(
            cats,
            [("celebrity", 31), ("politician", 9), ("sportsman", 9)]
        );
        assert_eq!(r.pooled.account_count, 49);
        assert_eq!(r.histogram.total(), 49);
        assert_eq!(r.scores.len(), 49);
        assert!(r.trend.is_some());
        assert!(r.to_json().unwrap().contains("\"fake_index_method\""));
    }

    #[test]
    fn single_category_pooled_matches() {
        let r = full_report(&reference::sportsmen()).unwrap();
        assert_eq!(r.categories.len(), 1);
        assert_eq!(r.pooled.fits, r.categories[0].fits);
        assert_eq!(
            r.pooled.zipf_max_deviation,
            r.categories[0].zipf_max_deviation
        );
    }

    #[test]
    fn empty_set_rejected() {
        let set = AccountSet::new(vec![], "inline").unwrap();
        assert!(matches!(full_report(&set), Err(Error::EmptyInput(_))));
    }

    fn category_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0.0f64..1e5, 1.0f64..1e8), 1..25)
    }

    fn build(rows: &[(f64, f64)], scale: f64) -> AccountSet {
        AccountSet::new(
            rows.iter()
                .enumerate()
                .map(|(i, &(r, f))| account(&format!("a{i:02}"), "c", 1.0, r * scale, f * scale))
                .collect(),
            "inline",
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn index_bounded_and_monotone(rows in category_strategy()) {
            let s = account_scores(&build(&rows, 1.0), "c").unwrap();
            for a in &s {
                prop_assert!((0.0..=1.0).contains(&a.fake_index));
                prop_assert!((0.0..=1.0).contains(&a.p_percentile));
            }
            // sorted by p descending, so the index must never decrease
            for w in s.windows(2) {
                prop_assert!(w[0].fake_index <= w[1].fake_index);
            }
        }

        #[test]
        fn joint_power_of_two_scaling_is_exact(rows in category_strategy(), j in -20i32..20) {
            let c = 2f64.powi(j);
            let base = account_scores(&build(&rows, 1.0), "c").unwrap();
            let scaled = account_scores(&build(&rows, c), "c").unwrap();
            prop_assert_eq!(base, scaled);
        }

        #[test]
        fn joint_scaling_keeps_order(rows in category_strategy(), c in 1e-3f64..1e3) {
            let base = account_scores(&build(&rows, 1.0), "c").unwrap();
            let scaled = account_scores(&build(&rows, c), "c").unwrap();
            for (a, b) in base.iter().zip(&scaled) {
                prop_assert!((a.fake_index - b.fake_index).abs() < 1e-12);
                prop_assert!((a.p - b.p).abs() <= a.p * 1e-14);
            }
        }

        #[test]
        fn report_order_independent(seed in any::<u64>()) {
            let set = reference::celebrities();
            let mut rows = set.records().to_vec();
            let n = rows.len();
            for i in 0..n {
                let j = (seed.rotate_left(i as u32) as usize ^ i) % n;
                rows.swap(i, j);
            }
            let shuffled = AccountSet::new(rows, "shuffled").unwrap();
            let a = category_report(&set, "celebrity").unwrap();
            let b = category_report(&shuffled, "celebrity").unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
