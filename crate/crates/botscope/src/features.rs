//! Per-account feature extraction.
//!
//! Features split into two groups: user-based (F1) — tweet count,
//! followers/friends ratio, account age, URL fraction, automation-client
//! fraction — and temporal extras that with F1 form the F2 set —
//! inter-tweet delay mean/std, hour-of-day entropy, longest-gap fraction
//! (hibernation proxy), and weekday concentration. Temporal extras are only
//! defined for accounts with at least two tweets in the window.

use std::collections::BTreeMap;
use std::io::Write;

use crate::corpus::{AccountSnapshot, EventSpec, Label, LabelMap, TweetRecord};
use crate::timeutil;

/// Which feature columns a design matrix carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureSet {
    /// User-based features only.
    F1,
    /// User-based plus temporal features.
    F2,
}

impl FeatureSet {
    pub fn parse(raw: &str) -> Result<Self, String> {
        match raw.trim().to_uppercase().as_str() {
            "F1" => Ok(FeatureSet::F1),
            "F2" => Ok(FeatureSet::F2),
            other => Err(format!("unknown feature set {other:?} (expected F1 or F2)")),
        }
    }

    pub fn column_names(&self) -> &'static [&'static str] {
        match self {
            FeatureSet::F1 => F1_COLUMNS,
            FeatureSet::F2 => F2_COLUMNS,
        }
    }
}

impl std::fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FeatureSet::F1 => "F1",
            FeatureSet::F2 => "F2",
        })
    }
}

/// Canonical column order for the user-based set.
pub const F1_COLUMNS: &[&str] = &[
    "tweet_count",
    "followers_friends_ratio",
    "account_age_days",
    "url_fraction",
    "automation_source_fraction",
];

/// Canonical column order for the user-based plus temporal set.
pub const F2_COLUMNS: &[&str] = &[
    "tweet_count",
    "followers_friends_ratio",
    "account_age_days",
    "url_fraction",
    "automation_source_fraction",
    "inter_tweet_mean_s",
    "inter_tweet_std_s",
    "hour_entropy_bits",
    "max_gap_fraction",
    "weekday_concentration",
];

/// Column index of the automation-client feature in either set.
pub const AUTOMATION_SOURCE_COLUMN: usize = 4;

/// Temporal feature block; defined only for accounts with >= 2 tweets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalFeatures {
    pub inter_tweet_mean_s: f64,
    pub inter_tweet_std_s: f64,
    pub hour_entropy_bits: f64,
    /// Longest silence (including window edges) divided by the window span.
    pub max_gap_fraction: f64,
    /// Largest share of tweets landing on a single weekday, in [1/7, 1].
    pub weekday_concentration: f64,
}

/// Feature vector for one account over one event window.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub user_id: String,
    pub tweet_count: usize,
    pub followers_friends_ratio: f64,
    /// Days from account creation to the window start (negative for
    /// accounts created during the event).
    pub account_age_days: f64,
    pub url_fraction: f64,
    pub automation_source_fraction: f64,
    pub temporal: Option<TemporalFeatures>,
    /// Set when the account had no tweets; fraction features default to 0.
    pub empty_activity: bool,
}

impl FeatureVector {
    /// Flatten into a numeric row in the canonical column order. Absent
    /// temporal values are encoded as 0 (documented imputation; it only
    /// applies to accounts with fewer than two tweets).
    pub fn to_row(&self, set: FeatureSet) -> Vec<f64> {
        let mut row = vec![
            self.tweet_count as f64,
            self.followers_friends_ratio,
            self.account_age_days,
            self.url_fraction,
            self.automation_source_fraction,
        ];
        if set == FeatureSet::F2 {
            match &self.temporal {
                Some(t) => row.extend([
                    t.inter_tweet_mean_s,
                    t.inter_tweet_std_s,
                    t.hour_entropy_bits,
                    t.max_gap_fraction,
                    t.weekday_concentration,
                ]),
                None => row.extend([0.0; 5]),
            }
        }
        row
    }
}

/// The configured set of client strings treated as automation platforms
/// when computing `automation_source_fraction`. Matching is case-folded.
#[derive(Debug, Clone, Default)]
pub struct AutomationSources {
    folded: std::collections::BTreeSet<String>,
}

impl AutomationSources {
    pub fn new(sources: impl IntoIterator<Item = impl AsRef<str>>) -> Self {
        AutomationSources {
            folded: sources
                .into_iter()
                .map(|s| s.as_ref().trim().to_lowercase())
                .filter(|s| !s.is_empty())
                .collect(),
        }
    }

    /// The default list, seeded from the shipped source-category table.
    pub fn default_list() -> Self {
        Self::new(
            crate::provenance::SourceCategoryTable::default_table()
                .entries()
                .filter(|(_, c)| **c == crate::provenance::SourceCategory::AutomationPlatform)
                .map(|(s, _)| s.clone())
                .collect::<Vec<_>>(),
        )
    }

    pub fn contains(&self, source: &str) -> bool {
        self.folded.contains(&source.trim().to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.folded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.folded.is_empty()
    }
}

/// Compute the user-based (F1) fields for one account.
///
/// `tweets` must all be authored by the account within the event window.
/// With zero tweets the fraction features are defined as 0 and
/// `empty_activity` is set.
pub fn extract_user_features(
    account: &AccountSnapshot,
    tweets: &[TweetRecord],
    spec: &EventSpec,
    automation_sources: &AutomationSources,
) -> FeatureVector {
    let tweet_count = tweets.len();
    let ratio = account.followers_count as f64 / (account.friends_count.max(1)) as f64;
    let age_days = (spec.window_start - account.created_at) as f64 / 86_400.0;
    let (url_fraction, automation_fraction) = if tweet_count == 0 {
        (0.0, 0.0)
    } else {
        let with_urls = tweets.iter().filter(|t| !t.urls.is_empty()).count();
        let automated = tweets
            .iter()
            .filter(|t| automation_sources.contains(&t.source))
            .count();
        (
            with_urls as f64 / tweet_count as f64,
            automated as f64 / tweet_count as f64,
        )
    };
    FeatureVector {
        user_id: account.user_id.clone(),
        tweet_count,
        followers_friends_ratio: ratio,
        account_age_days: age_days,
        url_fraction,
        automation_source_fraction: automation_fraction,
        temporal: None,
        empty_activity: tweet_count == 0,
    }
}

/// Full extraction: F1 fields plus temporal extras when requested and
/// defined. Tweets are sorted internally, so input order does not matter.
pub fn extract_features(
    account: &AccountSnapshot,
    tweets: &[TweetRecord],
    spec: &EventSpec,
    automation_sources: &AutomationSources,
    set: FeatureSet,
) -> FeatureVector {
    let mut vector = extract_user_features(account, tweets, spec, automation_sources);
    if set == FeatureSet::F2 && tweets.len() >= 2 {
        let mut times: Vec<i64> = tweets.iter().map(|t| t.created_at).collect();
        times.sort_unstable();
        let (mean, std) = inter_tweet_stats_from_times(&times).expect("len >= 2");
        vector.temporal = Some(TemporalFeatures {
            inter_tweet_mean_s: mean,
            inter_tweet_std_s: std,
            hour_entropy_bits: hour_entropy_from_times(&times).expect("len >= 1"),
            max_gap_fraction: max_gap_fraction(&times, spec),
            weekday_concentration: weekday_concentration_from_times(&times),
        });
    }
    vector
}

/// Mean and population standard deviation of the deltas between
/// consecutive timestamps, in seconds. `None` for fewer than two tweets.
/// Input must be sorted by `created_at`.
pub fn inter_tweet_stats(tweets: &[TweetRecord]) -> Option<(f64, f64)> {
    let times: Vec<i64> = tweets.iter().map(|t| t.created_at).collect();
    inter_tweet_stats_from_times(&times)
}

pub fn inter_tweet_stats_from_times(sorted_times: &[i64]) -> Option<(f64, f64)> {
    if sorted_times.len() < 2 {
        return None;
    }
    let deltas: Vec<f64> = sorted_times
        .windows(2)
        .map(|w| (w[1] - w[0]) as f64)
        .collect();
    let n = deltas.len() as f64;
    let mean = deltas.iter().sum::<f64>() / n;
    let variance = deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
    Some((mean, variance.sqrt()))
}

/// Shannon entropy in bits of the 24-hour UTC histogram of tweet times.
/// `None` for an empty slice.
pub fn hour_entropy(tweets: &[TweetRecord]) -> Option<f64> {
    let times: Vec<i64> = tweets.iter().map(|t| t.created_at).collect();
    hour_entropy_from_times(&times)
}

pub fn hour_entropy_from_times(times: &[i64]) -> Option<f64> {
    if times.is_empty() {
        return None;
    }
    let mut histogram = [0usize; 24];
    for &t in times {
        histogram[timeutil::hour_of_day(t) as usize] += 1;
    }
    let n = times.len() as f64;
    let mut bits = 0.0;
    for &count in &histogram {
        if count > 0 {
            let p = count as f64 / n;
            bits -= p * p.log2();
        }
    }
    Some(bits)
}

/// Longest silent gap — including the gaps from window start to the first
/// tweet and from the last tweet to window end — divided by the window
/// span. The hibernation proxy.
pub fn max_gap_fraction(sorted_times: &[i64], spec: &EventSpec) -> f64 {
    if sorted_times.is_empty() {
        return 1.0;
    }
    let mut max_gap = sorted_times[0].saturating_sub(spec.window_start);
    for w in sorted_times.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    max_gap = max_gap.max(spec.window_end.saturating_sub(sorted_times[sorted_times.len() - 1]));
    (max_gap.max(0) as f64 / spec.span_s() as f64).clamp(0.0, 1.0)
}

fn weekday_concentration_from_times(times: &[i64]) -> f64 {
    let mut histogram = [0usize; 7];
    for &t in times {
        histogram[timeutil::weekday(t) as usize] += 1;
    }
    let max = histogram.iter().copied().max().unwrap_or(0);
    max as f64 / times.len() as f64
}

/// A labeled per-account feature matrix with a fixed, documented column
/// order and rows sorted by user id.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub feature_set: FeatureSet,
    pub columns: Vec<String>,
    pub user_ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// True = Bot, false = NonBot; parallel to `rows`.
    pub labels: Vec<bool>,
    /// Labeled accounts with no tweet in the corpus, reported not erred.
    pub skipped_accounts: Vec<String>,
}

impl DesignMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    /// Export: header row, then one comma-separated row per account with
    /// the label as final column.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        write!(w, "user_id")?;
        for c in &self.columns {
            write!(w, ",{c}")?;
        }
        writeln!(w, ",label")?;
        for ((user, row), is_bot) in self.user_ids.iter().zip(&self.rows).zip(&self.labels) {
            write!(w, "{user}")?;
            for v in row {
                write!(w, ",{v}")?;
            }
            writeln!(w, ",{}", if *is_bot { "bot" } else { "nonbot" })?;
        }
        Ok(())
    }

    /// Parse the CSV form written by [`DesignMatrix::write_csv`].
    pub fn from_csv(raw: &str) -> Result<Self, String> {
        let mut lines = raw.lines();
        let header = lines.next().ok_or("empty design matrix file")?;
        let mut cols: Vec<&str> = header.split(',').collect();
        if cols.first() != Some(&"user_id") || cols.last() != Some(&"label") {
            return Err("design matrix header must be user_id,<features...>,label".into());
        }
        cols.remove(0);
        cols.pop();
        let columns: Vec<String> = cols.iter().map(|c| c.to_string()).collect();
        let feature_set = if columns == F2_COLUMNS {
            FeatureSet::F2
        } else {
            // any other column selection is treated as user-based shape
            FeatureSet::F1
        };
        let mut user_ids = Vec::new();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (idx, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns.len() + 2 {
                return Err(format!(
                    "row {}: expected {} fields, got {}",
                    idx + 2,
                    columns.len() + 2,
                    fields.len()
                ));
            }
            user_ids.push(fields[0].to_string());
            let mut row = Vec::with_capacity(columns.len());
            for f in &fields[1..fields.len() - 1] {
                row.push(
                    f.parse::<f64>()
                        .map_err(|e| format!("row {}: bad number {f:?}: {e}", idx + 2))?,
                );
            }
            rows.push(row);
            labels.push(match fields[fields.len() - 1] {
                "bot" => true,
                "nonbot" => false,
                other => return Err(format!("row {}: unknown label {other:?}", idx + 2)),
            });
        }
        Ok(DesignMatrix {
            feature_set,
            columns,
            user_ids,
            rows,
            labels,
            skipped_accounts: Vec::new(),
        })
    }
}

/// Assemble the design matrix for every Bot/NonBot-labeled account.
///
/// Rows are ordered by user id; accounts labeled but absent from the corpus
/// go to `skipped_accounts`. Unlabeled accounts are ignored.
pub fn build_design_matrix(
    labels: &LabelMap,
    corpus: &[TweetRecord],
    spec: &EventSpec,
    automation_sources: &AutomationSources,
    set: FeatureSet,
) -> DesignMatrix {
    let mut per_user: BTreeMap<&str, Vec<&TweetRecord>> = BTreeMap::new();
    for record in corpus {
        per_user
            .entry(record.author_id.as_str())
            .or_default()
            .push(record);
    }
    let snapshots = crate::corpus::latest_snapshots(corpus);

    let mut user_ids = Vec::new();
    let mut rows = Vec::new();
    let mut out_labels = Vec::new();
    let mut skipped = Vec::new();
    for (user, label) in labels.iter() {
        let is_bot = match label {
            Label::Bot => true,
            Label::NonBot => false,
            Label::Unlabeled => continue,
        };
        let Some(tweets) = per_user.get(user) else {
            skipped.push(user.to_string());
            continue;
        };
        let owned: Vec<TweetRecord> = tweets.iter().map(|t| (*t).clone()).collect();
        let snapshot = snapshots.get(user).expect("user has tweets");
        let vector = extract_features(snapshot, &owned, spec, automation_sources, set);
        user_ids.push(user.to_string());
        rows.push(vector.to_row(set));
        out_labels.push(is_bot);
    }
    DesignMatrix {
        feature_set: set,
        columns: set.column_names().iter().map(|c| c.to_string()).collect(),
        user_ids,
        rows,
        labels: out_labels,
        skipped_accounts: skipped,
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn fractions_stay_in_unit_interval(
            urls in prop::collection::vec(prop::bool::ANY, 1..50),
            automated in prop::collection::vec(prop::bool::ANY, 1..50),
        ) {
            let spec = EventSpec::new("ev", ["x"], 0, 100_000).unwrap();
            let sources = AutomationSources::new(["bot-client"]);
            let n = urls.len().min(automated.len());
            let tweets: Vec<TweetRecord> = (0..n)
                .map(|i| TweetRecord {
                    tweet_id: format!("t{i}"),
                    author_id: "u".into(),
                    created_at: 10 + i as i64,
                    text: "x".into(),
                    source: if automated[i] { "bot-client".into() } else { "web".into() },
                    retweet_of_author: None,
                    urls: if urls[i] { vec![format!("http://h.example/{i}")] } else { vec![] },
                    author: crate::corpus::AccountSnapshot {
                        user_id: "u".into(),
                        handle: "u".into(),
                        followers_count: 1,
                        friends_count: 1,
                        statuses_count: 0,
                        created_at: 0,
                        description: String::new(),
                        verified: false,
                    },
                })
                .collect();
            let account = tweets[0].author.clone();
            let v = extract_user_features(&account, &tweets, &spec, &sources);
            prop_assert!((0.0..=1.0).contains(&v.url_fraction));
            prop_assert!((0.0..=1.0).contains(&v.automation_source_fraction));
        }

        #[test]
        fn entropy_bounded_by_log2_24(times in prop::collection::vec(0i64..10_000_000, 1..200)) {
            let bits = hour_entropy_from_times(&times).unwrap();
            prop_assert!(bits >= 0.0);
            prop_assert!(bits <= 24f64.log2() + 1e-12);
        }

        #[test]
        fn inter_tweet_stats_translation_invariant(
            mut times in prop::collection::vec(0i64..1_000_000, 2..100),
            shift in 0i64..1_000_000,
        ) {
            times.sort_unstable();
            let base = inter_tweet_stats_from_times(&times).unwrap();
            let shifted: Vec<i64> = times.iter().map(|t| t + shift).collect();
            let moved = inter_tweet_stats_from_times(&shifted).unwrap();
            prop_assert!((base.0 - moved.0).abs() < 1e-9);
            prop_assert!((base.1 - moved.1).abs() < 1e-9);
        }
    }
}
