//! Account records, suffixed-count parsing, and per-metric ranking.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three per-account counts. Each is ranked independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    TotalTweets,
    AverageRetweets,
    TotalFollowers,
}

impl Metric {
    pub const ALL: [Metric; 3] = [
        Metric::TotalTweets,
        Metric::AverageRetweets,
        Metric::TotalFollowers,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::TotalTweets => "total_tweets",
            Metric::AverageRetweets => "average_retweets",
            Metric::TotalFollowers => "total_followers",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown metric {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccountRecord {
    pub name: String,
    pub category: String,
    pub total_tweets: f64,
    pub average_retweets: f64,
    pub total_followers: f64,
}

impl AccountRecord {
    pub fn metric(&self, metric: Metric) -> f64 {
        match metric {
            Metric::TotalTweets => self.total_tweets,
            Metric::AverageRetweets => self.average_retweets,
            Metric::TotalFollowers => self.total_followers,
        }
    }
}

/// An ordered collection of accounts with unique names.
#[derive(Debug, Clone, PartialEq)]
pub struct AccountSet {
    records: Vec<AccountRecord>,
    source: String,
}

impl AccountSet {
    pub fn new(records: Vec<AccountRecord>, source: impl Into<String>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(records.len());
        for r in &records {
            if r.name.is_empty() {
                return Err(Error::InvalidParameter("account name is empty".into()));
            }
            for m in Metric::ALL {
                let v = r.metric(m);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "account {:?}: {m} must be finite and non-negative, got {v}",
                        r.name
                    )));
                }
            }
            if !seen.insert(r.name.as_str()) {
                return Err(Error::DuplicateName(r.name.clone()));
            }
        }
        Ok(Self {
            records,
            source: source.into(),
        })
    }

    pub fn records(&self) -> &[AccountRecord] {
        &self.records
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Distinct category tags, sorted.
    pub fn categories(&self) -> Vec<String> {
        let mut cats: Vec<String> = self.records.iter().map(|r| r.category.clone()).collect();
        cats.sort();
        cats.dedup();
        cats
    }

    /// Accounts carrying `category`, in original order.
    pub fn in_category(&self, category: &str) -> AccountSet {
        AccountSet {
            records: self
                .records
                .iter()
                .filter(|r| r.category == category)
                .cloned()
                .collect(),
            source: self.source.clone(),
        }
    }

    /// Concatenates two sets, rejecting name collisions.
    pub fn merge(&self, other: &AccountSet) -> Result<AccountSet> {
        let mut records = self.records.clone();
        records.extend(other.records.iter().cloned());
        AccountSet::new(records, format!("{}+{}", self.source, other.source))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Json,
}

impl InputFormat {
    /// Guesses from a file extension; anything other than `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => InputFormat::Json,
            _ => InputFormat::Csv,
        }
    }
}

/// Parses a count such as `84.80M`, `51.70K`, `3` or `0.5`.
///
/// Suffixes `K`, `M`, `B` (either case) scale by 10^3, 10^6, 10^9. The
/// expansion is done on the decimal digits, so `84.80M` is exactly
/// 84,800,000 rather than a float product.
pub fn parse_count(text: &str) -> Result<f64> {
    let token = text.trim();
    let malformed = || Error::Parse {
        token: text.to_string(),
    };

    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let (digits, exp) = match body.chars().last() {
        Some('K' | 'k') => (&body[..body.len() - 1], 3u32),
        Some('M' | 'm') => (&body[..body.len() - 1], 6),
        Some('B' | 'b') => (&body[..body.len() - 1], 9),
        _ => (body, 0),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty())
        || !all_digits(int_part)
        || !all_digits(frac_part)
        || digits.ends_with('.')
    {
        return Err(malformed());
    }

    let frac_len = frac_part.len() as u32;
    let mantissa: u128 = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| malformed())?;
    if negative && mantissa != 0 {
        return Err(Error::NegativeCount {
            token: text.to_string(),
        });
    }

    let value = if exp >= frac_len {
        let scale = 10u128.checked_pow(exp - frac_len).ok_or_else(malformed)?;
        mantissa.checked_mul(scale).ok_or_else(malformed)? as f64
    } else {
        let divisor = 10u128.checked_pow(frac_len - exp).ok_or_else(malformed)?;
        mantissa as f64 / divisor as f64
    };
    Ok(value)
}

/// Formats a count with a suffix at fixed decimals, e.g. `84.80M`.
pub fn format_count(value: f64, suffix: char, decimals: usize) -> String {
    let scale = match suffix.to_ascii_uppercase() {
        'K' => 1e3,
        'M' => 1e6,
        'B' => 1e9,
        _ => return format!("{:.*}", decimals, value),
    };
    format!("{:.*}{}", decimals, value / scale, suffix)
}

const COLUMNS: [&str; 5] = [
    "name",
    "category",
    "total_tweets",
    "average_retweets",
    "total_followers",
];

/// Reads accounts from CSV or JSON. Row order is preserved.
pub fn load_accounts<R: Read>(
    reader: R,
    format: InputFormat,
    source: impl Into<String>,
) -> Result<AccountSet> {
    let records = match format {
        InputFormat::Csv => read_csv(reader)?,
        InputFormat::Json => read_json(reader)?,
    };
    AccountSet::new(records, source)
}

/// Opens `path` and loads it, picking the format from the extension unless given.
pub fn load_path(path: &Path, format: Option<InputFormat>) -> Result<AccountSet> {
    let format = format.unwrap_or_else(|| InputFormat::from_path(path));
    let file = std::fs::File::open(path).map_err(|source| Error::Open {
        path: path.display().to_string(),
        source,
    })?;
    load_accounts(file, format, path.display().to_string())
}

fn count_cell(row: usize, column: &str, text: &str) -> Result<f64> {
    parse_count(text).map_err(|e| Error::InvalidCell {
        row,
        column: column.to_string(),
        text: text.to_string(),
        reason: e.to_string(),
    })
}

fn read_csv<R: Read>(reader: R) -> Result<Vec<AccountRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut idx = [0usize; 5];
    for (slot, col) in idx.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == col)
            .ok_or_else(|| Error::MissingColumn(col.to_string()))?;
    }

    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 1;
        let row = row?;
        let cell = |k: usize| row.get(idx[k]).unwrap_or("");
        let name = cell(0);
        if name.is_empty() {
            return Err(Error::InvalidCell {
                row: row_no,
                column: "name".into(),
                text: String::new(),
                reason: "name must be non-empty".into(),
            });
        }
        out.push(AccountRecord {
            name: name.to_string(),
            category: cell(1).to_string(),
            total_tweets: count_cell(row_no, COLUMNS[2], cell(2))?,
            average_retweets: count_cell(row_no, COLUMNS[3], cell(3))?,
            total_followers: count_cell(row_no, COLUMNS[4], cell(4))?,
        });
    }
    Ok(out)
}

fn read_json<R: Read>(reader: R) -> Result<Vec<AccountRecord>> {
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_reader(reader)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, obj) in rows.iter().enumerate() {
        let row_no = i + 1;
        let field = |col: &str| {
            obj.get(col)
                .ok_or_else(|| Error::MissingColumn(col.to_string()))
        };
        let text = |col: &str| -> Result<String> {
            match field(col)? {
                serde_json::Value::String(s) => Ok(s.clone()),
                other => Err(Error::InvalidCell {
                    row: row_no,
                    column: col.to_string(),
                    text: other.to_string(),
                    reason: "expected a string".into(),
                }),
            }
        };
        let count = |col: &str| -> Result<f64> {
            match field(col)? {
                serde_json::Value::String(s) => count_cell(row_no, col, s),
                serde_json::Value::Number(n) => {
                    let v = n.as_f64().unwrap_or(f64::NAN);
                    if v.is_finite() && v >= 0.0 {
                        Ok(v)
                    } else {
                        Err(Error::InvalidCell {
                            row: row_no,
                            column: col.to_string(),
                            text: n.to_string(),
                            reason: "count must be finite and non-negative".into(),
                        })
                    }
                }
                other => Err(Error::InvalidCell {
                    row: row_no,
                    column: col.to_string(),
                    text: other.to_string(),
                    reason: "expected a number or suffixed string".into(),
                }),
            }
        };
        let name = text("name")?;
        if name.is_empty() {
            return Err(Error::InvalidCell {
                row: row_no,
                column: "name".into(),
                text: name,
                reason: "name must be non-empty".into(),
            });
        }
        out.push(AccountRecord {
            name,
            category: text("category")?,
            total_tweets: count("total_tweets")?,
            average_retweets: count("average_retweets")?,
            total_followers: count("total_followers")?,
        });
    }
    Ok(out)
}

/// One entry of a ranked series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedEntry {
    pub rank: usize,
    pub name: String,
    pub value: f64,
}

/// Values sorted descending with 1-based, gap-free ranks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedSeries {
    pub label: String,
    pub entries: Vec<RankedEntry>,
}

impl RankedSeries {
    /// Builds a series from bare values, sorting them descending.
    /// Entries are named after their rank.
    pub fn from_values(label: impl Into<String>, mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let entries = values
            .into_iter()
            .enumerate()
            .map(|(i, value)| RankedEntry {
                rank: i + 1,
                name: (i + 1).to_string(),
                value,
            })
            .collect();
        Self {
            label: label.into(),
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value at 1-based `rank`.
    pub fn value(&self, rank: usize) -> Option<f64> {
        rank.checked_sub(1)
            .and_then(|i| self.entries.get(i))
            .map(|e| e.value)
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    /// Returns a copy with every value multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            label: self.label.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| RankedEntry {
                    value: e.value * c,
                    ..e.clone()
                })
                .collect(),
        }
    }
}

/// Ranks one metric across the set. Ties go to the lexicographically smaller
/// name first and still receive distinct consecutive ranks.
pub fn rank_metric(set: &AccountSet, metric: Metric) -> Result<RankedSeries> {
    if set.is_empty() {
        return Err(Error::EmptyInput(format!(
            "cannot rank {metric} of an empty set"
        )));
    }
    let mut rows: Vec<(&str, f64)> = set
        .records()
        .iter()
        .map(|r| (r.name.as_str(), r.metric(metric)))
        .collect();
    rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Ok(RankedSeries {
        label: metric.to_string(),
        entries: rows
            .into_iter()
            .enumerate()
            .map(|(i, (name, value))| RankedEntry {
                rank: i + 1,
                name: name.to_string(),
                value,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    fn rec(name: &str, v: f64) -> AccountRecord {
        AccountRecord {
            name: name.into(),
            category: "x".into(),
            total_tweets: v,
            average_retweets: v,
            total_followers: v,
        }
    }

    #[test]
    fn parse_table_cells() {
        assert_eq!(parse_count("84.80M").unwrap(), 84_800_000.0);
        assert_eq!(parse_count("0").unwrap(), 0.0);
        assert_eq!(parse_count("51.70K").unwrap(), 51_700.0);
        assert_eq!(parse_count("3.45M").unwrap(), 3_450_000.0);
        assert_eq!(parse_count("20.71K").unwrap(), 20_710.0);
        assert_eq!(parse_count("0.11M").unwrap(), 110_000.0);
        assert_eq!(parse_count("2b").unwrap(), 2e9);
        assert_eq!(parse_count("12.5").unwrap(), 12.5);
        assert_eq!(parse_count(".5k").unwrap(), 500.0);
        assert_eq!(parse_count("1.2345K").unwrap(), 1234.5);
    }

    #[test]
    fn expansion_is_exact_where_float_product_is_not() {
        // 1.005 * 1000 is 1004.9999999999999 in binary floating point.
        assert_ne!(1.005_f64 * 1000.0, 1005.0);
        assert_eq!(parse_count("1.005K").unwrap(), 1005.0);
        assert_eq!(parse_count("1.005M").unwrap(), 1_005_000.0);
    }

    #[test]
    fn malformed_counts() {
        for bad in [
            "", "K", "1.2.3", "1 000", "1,000", "abc", "12X", "1.", "1e6", "--1", "M5",
        ] {
            match parse_count(bad) {
                Err(Error::Parse { token }) => assert_eq!(token, bad),
                other => panic!("{bad:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn negative_is_validation_error() {
        assert!(matches!(
            parse_count("-5"),
            Err(Error::NegativeCount { .. })
        ));
        assert!(matches!(
            parse_count("-1.5K"),
            Err(Error::NegativeCount { .. })
        ));
    }

    #[test]
    fn load_politicians_csv() {
        let set = reference::politicians();
        assert_eq!(set.len(), 9);
        assert_eq!(set.records()[0].name, "P1");
        assert_eq!(set.records()[0].total_followers, 71_000_000.0);
        assert!(set.records().iter().all(|r| r.category == "politician"));
    }

    #[test]
    fn header_only_csv_is_empty_set() {
        let set = load_accounts(
            "name,category,total_tweets,average_retweets,total_followers\n".as_bytes(),
            InputFormat::Csv,
            "inline",
        )
        .unwrap();
        assert!(set.is_empty());
        assert!(matches!(
            rank_metric(&set, Metric::TotalTweets),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn duplicate_name_rejected() {
        let csv = "name,category,total_tweets,average_retweets,total_followers\n\
                   P1,politician,1,1,1\nP1,politician,2,2,2\n";
        match load_accounts(csv.as_bytes(), InputFormat::Csv, "inline") {
            Err(Error::DuplicateName(n)) => assert_eq!(n, "P1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_column_named() {
        let csv = "name,category,total_tweets,total_followers\nA,x,1,1\n";
        match load_accounts(csv.as_bytes(), InputFormat::Csv, "inline") {
            Err(Error::MissingColumn(c)) => assert_eq!(c, "average_retweets"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_cell_reports_row_and_text() {
        let csv = "name,category,total_tweets,average_retweets,total_followers\n\
                   A,x,1,1,1\nB,x,1,12Q,1\n";
        match load_accounts(csv.as_bytes(), InputFormat::Csv, "inline") {
            Err(Error::InvalidCell {
                row, column, text, ..
            }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "average_retweets");
                assert_eq!(text, "12Q");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_accepts_strings_and_numbers() {
        let json = r#"[
            {"name":"A","category":"c","total_tweets":"1.5K","average_retweets":20,"total_followers":"3M"},
            {"name":"B","category":"c","total_tweets":7,"average_retweets":"0.02K","total_followers":1000}
        ]"#;
        let set = load_accounts(json.as_bytes(), InputFormat::Json, "inline").unwrap();
        assert_eq!(set.records()[0].total_tweets, 1500.0);
        assert_eq!(set.records()[0].total_followers, 3e6);
        assert_eq!(set.records()[1].average_retweets, 20.0);
    }

    #[test]
    fn json_errors() {
        let missing = r#"[{"name":"A","category":"c","total_tweets":1,"average_retweets":1}]"#;
        assert!(matches!(
            load_accounts(missing.as_bytes(), InputFormat::Json, "inline"),
            Err(Error::MissingColumn(c)) if c == "total_followers"
        ));
        let negative = r#"[{"name":"A","category":"c","total_tweets":-1,"average_retweets":1,"total_followers":1}]"#;
        assert!(matches!(
            load_accounts(negative.as_bytes(), InputFormat::Json, "inline"),
            Err(Error::InvalidCell { row: 1, .. })
        ));
    }

    #[test]
    fn rank_sportsmen_tweets() {
        let s = rank_metric(&reference::sportsmen(), Metric::TotalTweets).unwrap();
        let expected: Vec<f64> = [
            "96.20K", "21.00K", "13.30K", "4.20K", "2.70K", "2.10K", "0.78K", "0.78K", "0.42K",
        ]
        .iter()
        .map(|c| parse_count(c).unwrap())
        .collect();
        assert_eq!(s.values(), expected);
        assert_eq!(
            s.entries.iter().map(|e| e.rank).collect::<Vec<_>>(),
            (1..=9).collect::<Vec<_>>()
        );
        assert_eq!(s.entries[6].name, "S7");
        assert_eq!(s.entries[7].name, "S8");
    }

    #[test]
    fn rank_single_and_ties() {
        let one = AccountSet::new(vec![rec("only", 3.0)], "inline").unwrap();
        let s = rank_metric(&one, Metric::TotalFollowers).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.entries[0].rank, 1);

        let tied =
            AccountSet::new(vec![rec("C", 5.0), rec("A", 5.0), rec("B", 5.0)], "inline").unwrap();
        let s = rank_metric(&tied, Metric::TotalTweets).unwrap();
        let names: Vec<_> = s
            .entries
            .iter()
            .map(|e| (e.rank, e.name.as_str()))
            .collect();
        assert_eq!(names, vec![(1, "A"), (2, "B"), (3, "C")]);
    }

    #[test]
    fn table_cells_round_trip_through_suffix_format() {
        for csv in reference::ALL_CSV {
            let mut rdr = csv::Reader::from_reader(csv.as_bytes());
            for row in rdr.records() {
                let row = row.unwrap();
                for cell in row.iter().skip(2) {
                    let suffix = cell.chars().last().unwrap();
                    let v = parse_count(cell).unwrap();
                    assert_eq!(format_count(v, suffix, 2), cell);
                }
            }
        }
    }
}
