//! Canonical data model and event-corpus ingestion.
//!
//! A corpus is a UTF-8 line-delimited file with one JSON record per line
//! (see [`TweetRecord`] for the exact field names). Loading filters to an
//! event window and keyword set, drops duplicate tweet ids keep-first, and
//! returns records sorted by `(created_at, tweet_id)` so that output is
//! deterministic regardless of input order.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::timeutil;

/// Profile snapshot of an account at observation time.
///
/// A snapshot is embedded in every [`TweetRecord`]; snapshots of the same
/// account may differ across a corpus. Account-level analyses use the
/// snapshot attached to the account's latest tweet (latest wins).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountSnapshot {
    pub user_id: String,
    pub handle: String,
    pub followers_count: u64,
    pub friends_count: u64,
    pub statuses_count: u64,
    /// Account creation time, epoch seconds UTC.
    pub created_at: i64,
    pub description: String,
    pub verified: bool,
}

/// One post, as stored in the line-delimited corpus format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub author_id: String,
    /// Post time, epoch seconds UTC.
    pub created_at: i64,
    pub text: String,
    /// Client string the post was made from (e.g. "twitterfeed", "web").
    pub source: String,
    /// Handle of the retweeted account, when the post is a repost.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retweet_of_author: Option<String>,
    /// Absolute URLs embedded in the post, normalized at load time.
    pub urls: Vec<String>,
    pub author: AccountSnapshot,
}

impl TweetRecord {
    /// A record counts as a retweet if it carries a repost origin or its
    /// text uses the legacy `RT @mention ...` prefix (case-sensitive).
    pub fn is_retweet(&self) -> bool {
        self.retweet_of_author.is_some() || self.text.starts_with("RT @")
    }
}

/// An event definition: a name, a UTC observation window, and the keyword
/// phrases used to filter the stream.
///
/// Keywords are stored case-folded with any leading `#` stripped, so the
/// stored phrase `manhunt` matches both `#manhunt` and `manhunt` in text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventSpec {
    pub name: String,
    pub keywords: Vec<String>,
    pub window_start: i64,
    pub window_end: i64,
}

impl<'de> Deserialize<'de> for EventSpec {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum TimeField {
            Epoch(i64),
            Iso(String),
        }
        impl TimeField {
            fn epoch<E: serde::de::Error>(self) -> Result<i64, E> {
                match self {
                    TimeField::Epoch(t) => Ok(t),
                    TimeField::Iso(s) => timeutil::parse_utc(&s).map_err(E::custom),
                }
            }
        }
        #[derive(Deserialize)]
        struct Raw {
            name: String,
            window_start: TimeField,
            window_end: TimeField,
            keywords: Vec<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let start = raw.window_start.epoch()?;
        let end = raw.window_end.epoch()?;
        EventSpec::new(raw.name, raw.keywords, start, end).map_err(serde::de::Error::custom)
    }
}

impl EventSpec {
    pub fn new(
        name: impl Into<String>,
        keywords: impl IntoIterator<Item = impl Into<String>>,
        window_start: i64,
        window_end: i64,
    ) -> Result<Self, CorpusError> {
        if window_start >= window_end {
            return Err(CorpusError::InvalidEventSpec(format!(
                "window_start ({window_start}) must precede window_end ({window_end})"
            )));
        }
        let keywords: Vec<String> = keywords
            .into_iter()
            .map(|k| normalize_keyword(&k.into()))
            .filter(|k| !k.is_empty())
            .collect();
        if keywords.is_empty() {
            return Err(CorpusError::InvalidEventSpec(
                "event needs at least one non-empty keyword".into(),
            ));
        }
        Ok(EventSpec {
            name: name.into(),
            keywords,
            window_start,
            window_end,
        })
    }

    /// Read an event spec from a JSON config file with RFC 3339 window
    /// bounds:
    ///
    /// ```json
    /// {
    ///   "name": "boston",
    ///   "window_start": "2013-04-15T00:00:00Z",
    ///   "window_end": "2013-04-21T23:59:59Z",
    ///   "keywords": ["#bostonblasts", "boston marathon", "manhunt"]
    /// }
    /// ```
    pub fn from_json_str(raw: &str) -> Result<Self, CorpusError> {
        serde_json::from_str(raw)
            .map_err(|e| CorpusError::InvalidEventSpec(format!("bad event config: {e}")))
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&raw)
    }

    pub fn contains_time(&self, epoch_s: i64) -> bool {
        (self.window_start..=self.window_end).contains(&epoch_s)
    }

    /// Case-folded substring match against any keyword phrase.
    pub fn matches_text(&self, text: &str) -> bool {
        let folded = text.to_lowercase();
        self.keywords.iter().any(|k| folded.contains(k.as_str()))
    }

    /// Window span in seconds.
    pub fn span_s(&self) -> i64 {
        self.window_end - self.window_start
    }
}

fn normalize_keyword(raw: &str) -> String {
    let trimmed = raw.trim();
    let stripped = trimmed.strip_prefix('#').unwrap_or(trimmed);
    stripped.to_lowercase()
}

/// One annotator's judgement of one account.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub user_id: String,
    pub annotator_id: String,
    pub choice: AnnotationChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnotationChoice {
    Bot,
    NotBot,
    CantDecide,
}

impl AnnotationChoice {
    pub fn parse(raw: &str) -> Result<Self, String> {
        match raw.trim().to_lowercase().as_str() {
            "bot" => Ok(AnnotationChoice::Bot),
            "notbot" => Ok(AnnotationChoice::NotBot),
            "cantdecide" => Ok(AnnotationChoice::CantDecide),
            other => Err(format!(
                "unknown annotation choice {other:?} (expected bot, notbot, or cantdecide)"
            )),
        }
    }
}

/// Final class of an account after annotation aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Bot,
    NonBot,
    Unlabeled,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Bot => "bot",
            Label::NonBot => "nonbot",
            Label::Unlabeled => "unlabeled",
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccountLabel {
    pub user_id: String,
    pub label: Label,
}

/// Lookup table from user id to label; users absent from the table are
/// [`Label::Unlabeled`].
#[derive(Debug, Clone, Default)]
pub struct LabelMap {
    map: BTreeMap<String, Label>,
}

impl LabelMap {
    /// Build from explicit labels. Duplicate user ids are a validation
    /// error: exactly one label per user.
    pub fn from_labels(labels: impl IntoIterator<Item = AccountLabel>) -> Result<Self, CorpusError> {
        let mut map = BTreeMap::new();
        for l in labels {
            if map.insert(l.user_id.clone(), l.label).is_some() {
                return Err(CorpusError::DuplicateLabel { user_id: l.user_id });
            }
        }
        Ok(LabelMap { map })
    }

    pub fn label_of(&self, user_id: &str) -> Label {
        self.map.get(user_id).copied().unwrap_or(Label::Unlabeled)
    }

    pub fn users_with(&self, label: Label) -> Vec<&str> {
        self.map
            .iter()
            .filter(|(_, l)| **l == label)
            .map(|(u, _)| u.as_str())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Label)> {
        self.map.iter().map(|(u, l)| (u.as_str(), *l))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Errors from corpus loading and label/annotation handling.
#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Record { line: usize, reason: String },
    #[error("invalid event spec: {0}")]
    InvalidEventSpec(String),
    #[error("duplicate annotation for user {user_id} by annotator {annotator_id}")]
    DuplicateAnnotation {
        user_id: String,
        annotator_id: String,
    },
    #[error("duplicate label for user {user_id}")]
    DuplicateLabel { user_id: String },
}

/// Loader behaviour for malformed input.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Fail on the first malformed line instead of skip-and-count.
    pub strict: bool,
}

/// A skipped or repaired input line, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineIssue {
    pub line: usize,
    pub reason: String,
}

/// Result of loading a corpus file.
#[derive(Debug, Clone, Default)]
pub struct LoadOutcome {
    /// Window- and keyword-filtered records, sorted by `(created_at,
    /// tweet_id)`, duplicate ids dropped keep-first.
    pub records: Vec<TweetRecord>,
    /// Malformed lines that were skipped (lenient mode only).
    pub issues: Vec<LineIssue>,
    /// Non-fatal validation warnings (e.g. author snapshot newer than the
    /// tweet it is attached to).
    pub warnings: Vec<LineIssue>,
    /// Well-formed records that fell outside the window or matched no
    /// keyword.
    pub filtered_out: usize,
    /// Records dropped because an earlier record had the same tweet id.
    pub duplicates_dropped: usize,
}

/// Load an event corpus from a line-delimited file. See [`LoadOutcome`].
pub fn load_corpus(
    path: impl AsRef<Path>,
    spec: &EventSpec,
    options: LoadOptions,
) -> Result<LoadOutcome, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_corpus_reader(BufReader::new(file), spec, options)
}

/// Load from any buffered reader; the file variant delegates here.
pub fn load_corpus_reader(
    reader: impl BufRead,
    spec: &EventSpec,
    options: LoadOptions,
) -> Result<LoadOutcome, CorpusError> {
    let mut outcome = LoadOutcome::default();
    let mut kept: Vec<TweetRecord> = Vec::new();
    let mut seen_ids: HashSet<String> = HashSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: format!("<line {line_no}>"),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut record = match parse_record_line(&line) {
            Ok(r) => r,
            Err(reason) => {
                if options.strict {
                    return Err(CorpusError::Record {
                        line: line_no,
                        reason,
                    });
                }
                outcome.issues.push(LineIssue {
                    line: line_no,
                    reason,
                });
                continue;
            }
        };
        // URL normalization: keep only syntactically valid absolute URLs.
        let raw_count = record.urls.len();
        record.urls = record
            .urls
            .iter()
            .filter_map(|u| normalize_url(u))
            .collect();
        if record.urls.len() < raw_count {
            let reason = format!(
                "dropped {} invalid url(s) from tweet {}",
                raw_count - record.urls.len(),
                record.tweet_id
            );
            if options.strict {
                return Err(CorpusError::Record {
                    line: line_no,
                    reason,
                });
            }
            outcome.issues.push(LineIssue {
                line: line_no,
                reason,
            });
        }
        if record.author.created_at > record.created_at {
            outcome.warnings.push(LineIssue {
                line: line_no,
                reason: format!(
                    "account {} created after tweet {} was posted",
                    record.author.user_id, record.tweet_id
                ),
            });
        }
        if !spec.contains_time(record.created_at) || !spec.matches_text(&record.text) {
            outcome.filtered_out += 1;
            continue;
        }
        if !seen_ids.insert(record.tweet_id.clone()) {
            outcome.duplicates_dropped += 1;
            continue;
        }
        kept.push(record);
    }

    kept.sort_by(|a, b| {
        a.created_at
            .cmp(&b.created_at)
            .then_with(|| a.tweet_id.cmp(&b.tweet_id))
    });
    outcome.records = kept;
    Ok(outcome)
}

fn parse_record_line(line: &str) -> Result<TweetRecord, String> {
    let record: TweetRecord =
        serde_json::from_str(line).map_err(|e| format!("malformed record: {e}"))?;
    if record.tweet_id.is_empty() {
        return Err("tweet_id must be non-empty".into());
    }
    if record.created_at <= 0 {
        return Err(format!(
            "tweet {} has non-positive created_at {}",
            record.tweet_id, record.created_at
        ));
    }
    Ok(record)
}

/// Normalize one URL: parse, require an absolute URL with a host, lowercase
/// the host, strip default ports. Returns `None` when invalid.
pub fn normalize_url(raw: &str) -> Option<String> {
    let parsed = url::Url::parse(raw.trim()).ok()?;
    if !parsed.has_host() {
        return None;
    }
    Some(parsed.to_string())
}

/// Parse every well-formed record in a corpus file with no window or
/// keyword filtering; used by audits that must see the raw stream.
pub fn load_corpus_unfiltered(
    path: impl AsRef<Path>,
    options: LoadOptions,
) -> Result<LoadOutcome, CorpusError> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut outcome = LoadOutcome::default();
    for (idx, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_record_line(line) {
            Ok(record) => outcome.records.push(record),
            Err(reason) => {
                if options.strict {
                    return Err(CorpusError::Record {
                        line: idx + 1,
                        reason,
                    });
                }
                outcome.issues.push(LineIssue {
                    line: idx + 1,
                    reason,
                });
            }
        }
    }
    outcome
        .records
        .sort_by(|a, b| a.created_at.cmp(&b.created_at).then_with(|| a.tweet_id.cmp(&b.tweet_id)));
    Ok(outcome)
}

/// Serialize records in the canonical line-delimited form. Writing the
/// output of [`load_corpus`] and loading it again yields the same records.
pub fn write_corpus(mut w: impl Write, records: &[TweetRecord]) -> std::io::Result<()> {
    for record in records {
        let line = serde_json::to_string(record)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn write_corpus_file(path: impl AsRef<Path>, records: &[TweetRecord]) -> std::io::Result<()> {
    let mut file = std::io::BufWriter::new(File::create(path)?);
    write_corpus(&mut file, records)?;
    file.flush()
}

/// Headline counts over a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub total_tweets: usize,
    pub unique_users: usize,
    pub tweets_with_urls: usize,
    pub retweet_count: usize,
}

pub fn corpus_stats(records: &[TweetRecord]) -> CorpusStats {
    let mut users: BTreeSet<&str> = BTreeSet::new();
    let mut with_urls = 0;
    let mut retweets = 0;
    for r in records {
        users.insert(r.author_id.as_str());
        if !r.urls.is_empty() {
            with_urls += 1;
        }
        if r.is_retweet() {
            retweets += 1;
        }
    }
    CorpusStats {
        total_tweets: records.len(),
        unique_users: users.len(),
        tweets_with_urls: with_urls,
        retweet_count: retweets,
    }
}

/// Collapse per-annotator votes into account labels.
///
/// An account is labeled `Bot` only when it has at least three annotations
/// and every annotator chose Bot; `NonBot` symmetrically. Anything else is
/// `Unlabeled`. Output is sorted by user id.
pub fn aggregate_annotations(
    records: &[AnnotationRecord],
) -> Result<Vec<AccountLabel>, CorpusError> {
    let mut per_user: BTreeMap<&str, Vec<&AnnotationRecord>> = BTreeMap::new();
    let mut seen: HashSet<(&str, &str)> = HashSet::new();
    for record in records {
        if !seen.insert((record.user_id.as_str(), record.annotator_id.as_str())) {
            return Err(CorpusError::DuplicateAnnotation {
                user_id: record.user_id.clone(),
                annotator_id: record.annotator_id.clone(),
            });
        }
        per_user
            .entry(record.user_id.as_str())
            .or_default()
            .push(record);
    }
    Ok(per_user
        .into_iter()
        .map(|(user_id, votes)| {
            let label = if votes.len() >= 3
                && votes.iter().all(|v| v.choice == AnnotationChoice::Bot)
            {
                Label::Bot
            } else if votes.len() >= 3
                && votes.iter().all(|v| v.choice == AnnotationChoice::NotBot)
            {
                Label::NonBot
            } else {
                Label::Unlabeled
            };
            AccountLabel {
                user_id: user_id.to_string(),
                label,
            }
        })
        .collect())
}

/// Parse an annotations file: `user_id,annotator_id,choice` per line with
/// choice in {bot, notbot, cantdecide}. Blank lines are skipped.
pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<AnnotationRecord>, CorpusError> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_annotations(&raw)
}

pub fn parse_annotations(raw: &str) -> Result<Vec<AnnotationRecord>, CorpusError> {
    let mut out = Vec::new();
    for (idx, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, ',');
        let (user, annotator, choice) = match (parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(a), Some(c)) if !u.trim().is_empty() && !a.trim().is_empty() => {
                (u.trim(), a.trim(), c)
            }
            _ => {
                return Err(CorpusError::Record {
                    line: idx + 1,
                    reason: format!("expected user_id,annotator_id,choice, got {line:?}"),
                })
            }
        };
        let choice = AnnotationChoice::parse(choice).map_err(|reason| CorpusError::Record {
            line: idx + 1,
            reason,
        })?;
        out.push(AnnotationRecord {
            user_id: user.to_string(),
            annotator_id: annotator.to_string(),
            choice,
        });
    }
    Ok(out)
}

/// Parse a labels file: `user_id,label` per line with label in
/// {bot, nonbot}.
pub fn load_labels(path: impl AsRef<Path>) -> Result<LabelMap, CorpusError> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_labels(&raw)
}

pub fn parse_labels(raw: &str) -> Result<LabelMap, CorpusError> {
    let mut labels = Vec::new();
    for (idx, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (user, label) = line.rsplit_once(',').ok_or_else(|| CorpusError::Record {
            line: idx + 1,
            reason: format!("expected user_id,label, got {line:?}"),
        })?;
        let label = match label.trim().to_lowercase().as_str() {
            "bot" => Label::Bot,
            "nonbot" => Label::NonBot,
            other => {
                return Err(CorpusError::Record {
                    line: idx + 1,
                    reason: format!("unknown label {other:?} (expected bot or nonbot)"),
                })
            }
        };
        labels.push(AccountLabel {
            user_id: user.trim().to_string(),
            label,
        });
    }
    LabelMap::from_labels(labels)
}

pub fn write_labels(mut w: impl Write, labels: &LabelMap) -> std::io::Result<()> {
    for (user, label) in labels.iter() {
        if label != Label::Unlabeled {
            writeln!(w, "{user},{label}")?;
        }
    }
    Ok(())
}

/// The author snapshot attached to each account's latest tweet in the
/// corpus (latest wins; ties broken by tweet id as in corpus order).
pub fn latest_snapshots(records: &[TweetRecord]) -> BTreeMap<String, AccountSnapshot> {
    let mut latest: BTreeMap<String, (i64, &str, &AccountSnapshot)> = BTreeMap::new();
    for r in records {
        let candidate = (r.created_at, r.tweet_id.as_str(), &r.author);
        match latest.get(&r.author_id) {
            Some((t, id, _)) if (*t, *id) >= (r.created_at, r.tweet_id.as_str()) => {}
            _ => {
                latest.insert(r.author_id.clone(), candidate);
            }
        }
    }
    latest
        .into_iter()
        .map(|(user, (_, _, snap))| (user, snap.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn snapshot(user_id: &str) -> AccountSnapshot {
        AccountSnapshot {
            user_id: user_id.to_string(),
            handle: format!("h_{user_id}"),
            followers_count: 10,
            friends_count: 20,
            statuses_count: 100,
            created_at: 1_000,
            description: String::new(),
            verified: false,
        }
    }

    pub(crate) fn tweet(id: &str, user: &str, at: i64, text: &str) -> TweetRecord {
        TweetRecord {
            tweet_id: id.to_string(),
            author_id: user.to_string(),
            created_at: at,
            text: text.to_string(),
            source: "web".to_string(),
            retweet_of_author: None,
            urls: vec![],
            author: snapshot(user),
        }
    }

    fn spec() -> EventSpec {
        EventSpec::new("ev", ["storm"], 1_000, 2_000).unwrap()
    }

    fn to_jsonl(records: &[TweetRecord]) -> String {
        let mut buf = Vec::new();
        write_corpus(&mut buf, records).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        let out = load_corpus_reader("".as_bytes(), &spec(), LoadOptions::default()).unwrap();
        assert!(out.records.is_empty());
        assert!(out.issues.is_empty());
        assert_eq!(out.filtered_out, 0);
    }

    #[test]
    fn window_filter_drops_outside_records() {
        let records = vec![
            tweet("a", "u1", 1_100, "storm incoming"),
            tweet("b", "u1", 2_500, "storm passed"), // outside window
            tweet("c", "u2", 1_900, "storm again"),
        ];
        let out =
            load_corpus_reader(to_jsonl(&records).as_bytes(), &spec(), LoadOptions::default())
                .unwrap();
        assert_eq!(out.records.len(), 2);
        assert_eq!(out.filtered_out, 1);
    }

    #[test]
    fn keyword_match_is_case_folded_substring() {
        let spec = EventSpec::new("ev", ["#Manhunt", "boston marathon"], 0, 10).unwrap();
        assert_eq!(spec.keywords, vec!["manhunt", "boston marathon"]);
        assert!(spec.matches_text("the #MANHUNT continues"));
        assert!(spec.matches_text("manhunt in watertown"));
        assert!(spec.matches_text("Boston Marathon update"));
        assert!(!spec.matches_text("unrelated chatter"));
    }

    #[test]
    fn duplicates_dropped_keep_first() {
        let mut first = tweet("dup", "u1", 1_100, "storm one");
        first.source = "first".into();
        let mut second = tweet("dup", "u2", 1_200, "storm two");
        second.source = "second".into();
        let jsonl = to_jsonl(&[first, second]);
        let out = load_corpus_reader(jsonl.as_bytes(), &spec(), LoadOptions::default()).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.duplicates_dropped, 1);
        assert_eq!(out.records[0].source, "first");
    }

    #[test]
    fn output_sorted_by_time_then_id() {
        let records = vec![
            tweet("b", "u1", 1_500, "storm"),
            tweet("a", "u2", 1_500, "storm"),
            tweet("c", "u3", 1_100, "storm"),
        ];
        let out =
            load_corpus_reader(to_jsonl(&records).as_bytes(), &spec(), LoadOptions::default())
                .unwrap();
        let ids: Vec<&str> = out.records.iter().map(|r| r.tweet_id.as_str()).collect();
        assert_eq!(ids, ["c", "a", "b"]);
    }

    #[test]
    fn malformed_line_skipped_lenient_fatal_strict() {
        let good = to_jsonl(&[tweet("a", "u1", 1_100, "storm")]);
        let input = format!("{good}{{not json\n");
        let out = load_corpus_reader(input.as_bytes(), &spec(), LoadOptions::default()).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.issues.len(), 1);
        assert_eq!(out.issues[0].line, 2);

        let err = load_corpus_reader(input.as_bytes(), &spec(), LoadOptions { strict: true });
        assert!(matches!(err, Err(CorpusError::Record { line: 2, .. })));
    }

    #[test]
    fn invalid_urls_are_dropped_and_counted() {
        let mut record = tweet("a", "u1", 1_100, "storm link");
        record.urls = vec![
            "HTTP://Bit.Ly/Abc".to_string(),
            "not a url".to_string(),
            "/relative/path".to_string(),
        ];
        let jsonl = to_jsonl(&[record]);
        let out = load_corpus_reader(jsonl.as_bytes(), &spec(), LoadOptions::default()).unwrap();
        assert_eq!(out.records[0].urls, vec!["http://bit.ly/Abc"]);
        assert_eq!(out.issues.len(), 1);
    }

    #[test]
    fn thousand_record_fixture_dedupes_to_990() {
        // Build 1,000 lines where ten ids repeat; ground truth for the
        // distinct count comes from the generator itself plus an
        // independent line scan below.
        let mut lines = String::new();
        let mut expected_ids: BTreeSet<String> = BTreeSet::new();
        for i in 0..1_000u32 {
            let id = if i >= 990 {
                format!("t{:04}", i - 990) // repeat the first ten ids
            } else {
                format!("t{i:04}")
            };
            expected_ids.insert(id.clone());
            let record = tweet(&id, &format!("u{}", i % 37), 1_000 + (i as i64 % 900), "storm");
            lines.push_str(&serde_json::to_string(&record).unwrap());
            lines.push('\n');
        }
        // Independent scan: count distinct ids by raw string extraction,
        // not via the loader.
        let distinct_by_scan = lines
            .lines()
            .filter_map(|l| {
                let start = l.find("\"tweet_id\":\"")? + "\"tweet_id\":\"".len();
                let rest = &l[start..];
                let end = rest.find('"')?;
                Some(rest[..end].to_string())
            })
            .collect::<BTreeSet<_>>()
            .len();
        assert_eq!(distinct_by_scan, 990);
        assert_eq!(expected_ids.len(), 990);

        let out = load_corpus_reader(lines.as_bytes(), &spec(), LoadOptions::default()).unwrap();
        assert_eq!(out.records.len(), 990);
        assert_eq!(out.duplicates_dropped, 10);
    }

    #[test]
    fn loading_is_idempotent_on_its_own_output() {
        let records = vec![
            tweet("b", "u1", 1_500, "storm"),
            tweet("a", "u2", 1_400, "storm #two"),
            tweet("c", "u3", 1_100, "storm RT"),
        ];
        let first =
            load_corpus_reader(to_jsonl(&records).as_bytes(), &spec(), LoadOptions::default())
                .unwrap();
        let second = load_corpus_reader(
            to_jsonl(&first.records).as_bytes(),
            &spec(),
            LoadOptions::default(),
        )
        .unwrap();
        assert_eq!(first.records, second.records);
    }

    #[test]
    fn stats_on_empty_corpus_are_zero() {
        let stats = corpus_stats(&[]);
        assert_eq!(
            stats,
            CorpusStats {
                total_tweets: 0,
                unique_users: 0,
                tweets_with_urls: 0,
                retweet_count: 0
            }
        );
    }

    #[test]
    fn stats_count_users_urls_and_retweets() {
        let mut a = tweet("a", "u1", 1_100, "RT @x: storm");
        a.retweet_of_author = Some("x".into());
        let b = tweet("b", "u1", 1_200, "RT @y: storm again"); // prefix only
        let mut c = tweet("c", "u2", 1_300, "storm link");
        c.urls = vec!["http://example.com/".into()];
        let d = tweet("d", "u2", 1_400, "plain storm");
        let stats = corpus_stats(&[a, b, c, d]);
        assert_eq!(
            stats,
            CorpusStats {
                total_tweets: 4,
                unique_users: 2,
                tweets_with_urls: 1,
                retweet_count: 2
            }
        );
    }

    fn annotation(user: &str, annotator: &str, choice: AnnotationChoice) -> AnnotationRecord {
        AnnotationRecord {
            user_id: user.into(),
            annotator_id: annotator.into(),
            choice,
        }
    }

    #[test]
    fn unanimous_bot_across_three_annotators_is_bot() {
        let labels = aggregate_annotations(&[
            annotation("u", "a1", AnnotationChoice::Bot),
            annotation("u", "a2", AnnotationChoice::Bot),
            annotation("u", "a3", AnnotationChoice::Bot),
        ])
        .unwrap();
        assert_eq!(labels, vec![AccountLabel { user_id: "u".into(), label: Label::Bot }]);
    }

    #[test]
    fn any_dissent_means_unlabeled() {
        let labels = aggregate_annotations(&[
            annotation("u", "a1", AnnotationChoice::Bot),
            annotation("u", "a2", AnnotationChoice::Bot),
            annotation("u", "a3", AnnotationChoice::CantDecide),
        ])
        .unwrap();
        assert_eq!(labels[0].label, Label::Unlabeled);
    }

    #[test]
    fn fewer_than_three_annotations_cannot_label() {
        let labels = aggregate_annotations(&[
            annotation("u", "a1", AnnotationChoice::NotBot),
            annotation("u", "a2", AnnotationChoice::NotBot),
        ])
        .unwrap();
        assert_eq!(labels[0].label, Label::Unlabeled);
    }

    #[test]
    fn duplicate_annotator_pair_is_fatal() {
        let err = aggregate_annotations(&[
            annotation("u", "a1", AnnotationChoice::Bot),
            annotation("u", "a1", AnnotationChoice::Bot),
        ]);
        assert!(matches!(err, Err(CorpusError::DuplicateAnnotation { .. })));
    }

    #[test]
    fn labels_file_round_trip() {
        let parsed = parse_labels("alice,bot\nbob,nonbot\n\n").unwrap();
        assert_eq!(parsed.label_of("alice"), Label::Bot);
        assert_eq!(parsed.label_of("bob"), Label::NonBot);
        assert_eq!(parsed.label_of("eve"), Label::Unlabeled);

        let mut buf = Vec::new();
        write_labels(&mut buf, &parsed).unwrap();
        let reparsed = parse_labels(&String::from_utf8(buf).unwrap()).unwrap();
        assert_eq!(reparsed.label_of("alice"), Label::Bot);
        assert_eq!(reparsed.len(), 2);

        assert!(parse_labels("alice,bot\nalice,nonbot").is_err());
        assert!(parse_labels("alice,cyborg").is_err());
    }

    #[test]
    fn annotations_file_parses_choices() {
        let parsed = parse_annotations("u1,a1,bot\nu1,a2,notbot\nu2,a1,cantdecide\n").unwrap();
        assert_eq!(parsed.len(), 3);
        assert_eq!(parsed[2].choice, AnnotationChoice::CantDecide);
        assert!(parse_annotations("u1,a1,maybe").is_err());
        assert!(parse_annotations("only-two,fields").is_err());
    }

    #[test]
    fn latest_snapshot_wins() {
        let mut early = tweet("a", "u1", 1_100, "storm");
        early.author.followers_count = 5;
        let mut late = tweet("b", "u1", 1_900, "storm");
        late.author.followers_count = 50;
        let snaps = latest_snapshots(&[early, late]);
        assert_eq!(snaps["u1"].followers_count, 50);
    }

    #[test]
    fn event_spec_validation() {
        assert!(EventSpec::new("e", ["k"], 10, 10).is_err());
        assert!(EventSpec::new("e", Vec::<String>::new(), 0, 10).is_err());
        assert!(EventSpec::new("e", ["#"], 0, 10).is_err());

        let from_json = EventSpec::from_json_str(
            r#"{"name":"ev","window_start":"1970-01-01T00:16:40Z",
                "window_end":"1970-01-01T00:33:20Z","keywords":["Storm"]}"#,
        )
        .unwrap();
        assert_eq!(from_json.window_start, 1_000);
        assert_eq!(from_json.window_end, 2_000);
        assert_eq!(from_json.keywords, vec!["storm"]);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_record() -> impl Strategy<Value = TweetRecord> {
        (
            "[a-z]{1,8}",
            "[a-z]{1,4}",
            1i64..10_000,
            prop::bool::ANY,
            prop::bool::ANY,
        )
            .prop_map(|(id, user, at, has_url, is_rt)| {
                let mut r = tests::tweet(&id, &user, at, "storm watch");
                if has_url {
                    r.urls = vec![format!("http://example.com/{id}")];
                }
                if is_rt {
                    r.retweet_of_author = Some("origin".to_string());
                }
                r
            })
    }

    proptest! {
        #[test]
        fn stats_bounds_hold(records in prop::collection::vec(arb_record(), 0..60)) {
            let stats = corpus_stats(&records);
            prop_assert!(stats.tweets_with_urls <= stats.total_tweets);
            prop_assert!(stats.retweet_count <= stats.total_tweets);
            prop_assert!(stats.unique_users <= stats.total_tweets);
        }

        #[test]
        fn loaded_corpus_is_time_ordered_and_unique(
            records in prop::collection::vec(arb_record(), 0..60)
        ) {
            let spec = EventSpec::new("ev", ["storm"], 1, 10_000).unwrap();
            let mut buf = Vec::new();
            write_corpus(&mut buf, &records).unwrap();
            let out = load_corpus_reader(buf.as_slice(), &spec, LoadOptions::default()).unwrap();
            for pair in out.records.windows(2) {
                prop_assert!(pair[0].created_at <= pair[1].created_at);
            }
            let ids: std::collections::HashSet<_> =
                out.records.iter().map(|r| r.tweet_id.clone()).collect();
            prop_assert_eq!(ids.len(), out.records.len());
        }

        #[test]
        fn aggregation_never_labels_both_ways(
            votes in prop::collection::vec((0u8..6, 0u8..3), 1..40)
        ) {
            let records: Vec<AnnotationRecord> = votes
                .iter()
                .enumerate()
                .map(|(i, (user, choice))| AnnotationRecord {
                    user_id: format!("u{user}"),
                    annotator_id: format!("a{i}"),
                    choice: match choice {
                        0 => AnnotationChoice::Bot,
                        1 => AnnotationChoice::NotBot,
                        _ => AnnotationChoice::CantDecide,
                    },
                })
                .collect();
            let labels = aggregate_annotations(&records).unwrap();
            let mut seen = std::collections::HashMap::new();
            for l in labels {
                prop_assert!(seen.insert(l.user_id.clone(), l.label).is_none());
            }
        }
    }
}
