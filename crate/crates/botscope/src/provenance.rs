//! Where bot content comes from.
//!
//! Mentions are the citation mechanism: reposting bots credit their feeds
//! with `RT @handle ...` or `... via @handle`, so a frequency table of
//! mentions surfaces the data sources feeding automated accounts during an
//! event. This module extracts mentions, ranks them, resolves verified
//! flags, categorizes client-source strings, and counts profile-description
//! words.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use crate::corpus::{AccountSnapshot, Label, LabelMap, TweetRecord};

/// Longest handle the platform allows; longer runs are truncated.
const MAX_HANDLE_LEN: usize = 15;

/// One mentioned handle with its occurrence count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionTally {
    /// Case-folded, `@`-stripped handle.
    pub mentioned_handle: String,
    pub count: usize,
    /// Verified flag resolved from profile snapshots, when available.
    pub verified: Option<bool>,
}

/// Extract `@`-mentions from one post, in order, duplicates kept.
///
/// A mention starts at an `@` that is not glued to a preceding word
/// character (so e-mail addresses do not count) and runs over letters,
/// digits, and underscores, truncated at 15 characters. Handles come back
/// case-folded without the `@`.
pub fn extract_mentions(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut prev: Option<char> = None;
    let mut chars = text.char_indices().peekable();
    while let Some((idx, ch)) = chars.next() {
        if ch == '@' && !prev.is_some_and(|p| p.is_alphanumeric() || p == '_' || p == '@') {
            let start = idx + 1;
            let mut end = start;
            while end < bytes.len() {
                let c = bytes[end] as char;
                if c.is_ascii_alphanumeric() || c == '_' {
                    end += 1;
                } else {
                    break;
                }
            }
            let handle = &text[start..end.min(start + MAX_HANDLE_LEN)];
            if !handle.is_empty() {
                out.push(handle.to_lowercase());
            }
            // skip what we consumed so a handle is not re-scanned
            while let Some((i, _)) = chars.peek() {
                if *i < end {
                    chars.next();
                } else {
                    break;
                }
            }
            prev = Some('x');
            continue;
        }
        prev = Some(ch);
    }
    out
}

/// Frequency table of mentions over a set of tweets, sorted by count
/// descending, ties by handle ascending; the top `k` entries.
///
/// Callers restrict the tweet slice to the population of interest (for the
/// classic analysis: tweets authored by bot-labeled accounts).
pub fn top_sources(tweets: &[TweetRecord], k: usize) -> Vec<MentionTally> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for t in tweets {
        for handle in extract_mentions(&t.text) {
            *counts.entry(handle).or_insert(0) += 1;
        }
    }
    let mut tallies: Vec<MentionTally> = counts
        .into_iter()
        .map(|(mentioned_handle, count)| MentionTally {
            mentioned_handle,
            count,
            verified: None,
        })
        .collect();
    tallies.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| a.mentioned_handle.cmp(&b.mentioned_handle))
    });
    tallies.truncate(k);
    tallies
}

/// Build a case-folded handle -> verified map from profile snapshots.
pub fn verified_map<'a>(
    snapshots: impl IntoIterator<Item = &'a AccountSnapshot>,
) -> BTreeMap<String, bool> {
    snapshots
        .into_iter()
        .map(|s| (s.handle.to_lowercase(), s.verified))
        .collect()
}

/// Fill the `verified` flags of tallies from a handle map; handles missing
/// from the map stay `None`.
pub fn annotate_verified(tallies: &mut [MentionTally], verified: &BTreeMap<String, bool>) {
    for tally in tallies {
        tally.verified = verified.get(&tally.mentioned_handle).copied();
    }
}

/// Verified share over distinct mentioned handles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifiedRatio {
    pub verified_count: usize,
    /// Distinct mentioned handles, not mention occurrences.
    pub total_count: usize,
    /// `None` when no handles were mentioned.
    pub ratio: Option<f64>,
    /// Handles with no snapshot available; counted unverified above but
    /// reported so the unresolved share is visible.
    pub unresolved_count: usize,
}

/// Compute the verified ratio over DISTINCT mentioned handles. A handle
/// without a snapshot counts as unverified and is also tallied separately.
pub fn verified_ratio(
    tallies: &[MentionTally],
    verified: &BTreeMap<String, bool>,
) -> VerifiedRatio {
    let handles: BTreeSet<&str> = tallies.iter().map(|t| t.mentioned_handle.as_str()).collect();
    let total = handles.len();
    let mut verified_count = 0;
    let mut unresolved = 0;
    for handle in handles {
        match verified.get(handle) {
            Some(true) => verified_count += 1,
            Some(false) => {}
            None => unresolved += 1,
        }
    }
    VerifiedRatio {
        verified_count,
        total_count: total,
        ratio: (total > 0).then(|| verified_count as f64 / total as f64),
        unresolved_count: unresolved,
    }
}

/// Category of a client-source string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SourceCategory {
    AutomationPlatform,
    InteractiveClient,
    Other,
}

impl SourceCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            SourceCategory::AutomationPlatform => "automation_platform",
            SourceCategory::InteractiveClient => "interactive_client",
            SourceCategory::Other => "other",
        }
    }

    pub fn parse(raw: &str) -> Result<Self, String> {
        match raw.trim().to_lowercase().as_str() {
            "automation_platform" => Ok(SourceCategory::AutomationPlatform),
            "interactive_client" => Ok(SourceCategory::InteractiveClient),
            "other" => Ok(SourceCategory::Other),
            other => Err(format!("unknown source category {other:?}")),
        }
    }
}

impl std::fmt::Display for SourceCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Total mapping from client-source strings to categories; strings not in
/// the table map to [`SourceCategory::Other`]. Lookups are case-folded.
#[derive(Debug, Clone, Default)]
pub struct SourceCategoryTable {
    map: BTreeMap<String, SourceCategory>,
}

const DEFAULT_TABLE: &str = include_str!("../data/source_categories.txt");

impl SourceCategoryTable {
    /// The table shipped with the crate, seeded from client strings
    /// observed around 2011-2014 event datasets. User-extensible via
    /// config file.
    pub fn default_table() -> Self {
        Self::parse(DEFAULT_TABLE).expect("shipped table parses")
    }

    /// Parse `source_string = category` lines. `#` starts a comment.
    pub fn parse(raw: &str) -> Result<Self, String> {
        let mut map = BTreeMap::new();
        for (idx, line) in raw.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (source, category) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `source = category`", idx + 1))?;
            let source = source.trim();
            if source.is_empty() {
                return Err(format!("line {}: empty source string", idx + 1));
            }
            let category = SourceCategory::parse(category)
                .map_err(|e| format!("line {}: {e}", idx + 1))?;
            map.insert(source.to_lowercase(), category);
        }
        Ok(SourceCategoryTable { map })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, String> {
        let raw = std::fs::read_to_string(path.as_ref())
            .map_err(|e| format!("cannot read category table: {e}"))?;
        Self::parse(&raw)
    }

    pub fn category_of(&self, source: &str) -> SourceCategory {
        self.map
            .get(&source.trim().to_lowercase())
            .copied()
            .unwrap_or(SourceCategory::Other)
    }

    pub fn insert(&mut self, source: impl AsRef<str>, category: SourceCategory) {
        self.map.insert(source.as_ref().to_lowercase(), category);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &SourceCategory)> {
        self.map.iter()
    }
}

/// Per-class client-source frequencies: raw ranking plus category totals.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassSourceStats {
    pub total_tweets: usize,
    /// Raw source string -> occurrence count, ranked desc then asc by name.
    pub raw_ranking: Vec<(String, usize)>,
    pub by_category: BTreeMap<SourceCategory, usize>,
}

impl ClassSourceStats {
    pub fn category_share(&self, category: SourceCategory) -> f64 {
        if self.total_tweets == 0 {
            return 0.0;
        }
        *self.by_category.get(&category).unwrap_or(&0) as f64 / self.total_tweets as f64
    }
}

/// Client-source breakdown split by account label class.
#[derive(Debug, Clone, Default)]
pub struct SourceBreakdown {
    pub per_class: BTreeMap<Label, ClassSourceStats>,
}

impl SourceBreakdown {
    pub fn class(&self, label: Label) -> ClassSourceStats {
        self.per_class.get(&label).cloned().unwrap_or_default()
    }
}

/// Tally raw client sources and their categories per label class.
/// Category totals sum to the class tweet count exactly.
pub fn categorize_sources(
    corpus: &[TweetRecord],
    labels: &LabelMap,
    table: &SourceCategoryTable,
) -> SourceBreakdown {
    let mut raw: BTreeMap<Label, BTreeMap<&str, usize>> = BTreeMap::new();
    for t in corpus {
        let class = labels.label_of(&t.author_id);
        *raw.entry(class).or_default().entry(t.source.as_str()).or_insert(0) += 1;
    }
    let mut out = SourceBreakdown::default();
    for (class, counts) in raw {
        let mut stats = ClassSourceStats::default();
        for (source, count) in &counts {
            stats.total_tweets += count;
            *stats.by_category.entry(table.category_of(source)).or_insert(0) += count;
        }
        let mut ranking: Vec<(String, usize)> = counts
            .into_iter()
            .map(|(s, c)| (s.to_string(), c))
            .collect();
        ranking.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        stats.raw_ranking = ranking;
        out.per_class.insert(class, stats);
    }
    out
}

/// Case-folded, punctuation-stripped word frequencies over profile
/// descriptions, minus stopwords, ranked desc then alphabetically.
pub fn description_word_frequency<'a>(
    snapshots: impl IntoIterator<Item = &'a AccountSnapshot>,
    stopwords: &BTreeSet<String>,
) -> Vec<(String, usize)> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for snapshot in snapshots {
        for token in snapshot
            .description
            .split(|c: char| !c.is_alphanumeric())
            .filter(|t| !t.is_empty())
        {
            let word = token.to_lowercase();
            if !stopwords.contains(&word) {
                *counts.entry(word).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}

/// A small default stopword list for description analysis.
pub fn default_stopwords() -> BTreeSet<String> {
    [
        "a", "an", "and", "are", "as", "at", "be", "by", "for", "from", "i", "in", "is", "it",
        "me", "my", "of", "on", "or", "our", "that", "the", "this", "to", "we", "with", "you",
        "your",
    ]
    .into_iter()
    .map(str::to_string)
    .collect()
}

/// Write tallies as a delimiter-separated table mirroring the top-sources
/// table shape: rank, handle, count, verified.
pub fn write_tally_table(mut w: impl Write, tallies: &[MentionTally]) -> std::io::Result<()> {
    writeln!(w, "rank,handle,count,verified")?;
    for (idx, t) in tallies.iter().enumerate() {
        let verified = match t.verified {
            Some(true) => "verified",
            Some(false) => "non-verified",
            None => "unresolved",
        };
        writeln!(w, "{},{},{},{}", idx + 1, t.mentioned_handle, t.count, verified)?;
    }
    Ok(())
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn mentions_never_contain_at_or_exceed_15(text in ".{0,200}") {
            for handle in extract_mentions(&text) {
                prop_assert!(!handle.contains('@'));
                prop_assert!(handle.len() <= 15);
                prop_assert!(!handle.is_empty());
            }
        }

        #[test]
        fn per_class_totals_partition_tweets(classes in prop::collection::vec(0u8..3, 1..50)) {
            let labels = LabelMap::from_labels([
                crate::corpus::AccountLabel { user_id: "b".into(), label: Label::Bot },
                crate::corpus::AccountLabel { user_id: "h".into(), label: Label::NonBot },
            ]).unwrap();
            let corpus: Vec<TweetRecord> = classes
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let user = match c { 0 => "b", 1 => "h", _ => "stranger" };
                    let mut t = super::tests::tweet(user, "x", if i % 2 == 0 { "web" } else { "IFTTT" });
                    t.tweet_id = format!("t{i}");
                    t
                })
                .collect();
            let breakdown = categorize_sources(&corpus, &labels, &SourceCategoryTable::default_table());
            let mut total = 0;
            for stats in breakdown.per_class.values() {
                let by_cat: usize = stats.by_category.values().sum();
                prop_assert_eq!(by_cat, stats.total_tweets);
                total += stats.total_tweets;
            }
            prop_assert_eq!(total, corpus.len());
        }
    }
}
