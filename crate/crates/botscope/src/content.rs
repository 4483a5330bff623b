//! Rumor pickup and URL analysis.
//!
//! Rumors are identified by known tweet-text fragments and/or the handle
//! of the origin account; pickup latency per account class is the time
//! from the origin post to the first matching post by that class. URL
//! analysis ranks hostnames, expands short links through a pluggable
//! resolver, and screens final URLs against a blocklist.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::corpus::{Label, LabelMap, TweetRecord};
use crate::timeutil;

/// Errors from rumor and URL operations.
#[derive(Debug, thiserror::Error)]
pub enum ContentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid rumor spec: {0}")]
    InvalidRumorSpec(String),
    #[error("rumor {name}: origin_time {origin} is after the window end {window_end}")]
    OriginAfterWindow {
        name: String,
        origin: i64,
        window_end: i64,
    },
    #[error("blocklist client failed on {url}: {reason}")]
    BlocklistUnavailable { url: String, reason: String },
}

/// A known rumor: origin time plus matchers (case-folded substrings and/or
/// the origin handle whose retweets count as pickups).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RumorSpec {
    pub name: String,
    /// Origin post time, epoch seconds UTC.
    pub origin_time: i64,
    /// Case-folded substrings; a tweet matches if its folded text contains
    /// any of them.
    pub matchers: Vec<String>,
    /// Origin account handle; retweets of it match too.
    pub origin_handle: Option<String>,
}

impl RumorSpec {
    pub fn new(
        name: impl Into<String>,
        origin_time: i64,
        matchers: impl IntoIterator<Item = impl Into<String>>,
        origin_handle: Option<String>,
    ) -> Result<Self, ContentError> {
        let matchers: Vec<String> = matchers
            .into_iter()
            .map(|m| m.into().to_lowercase())
            .filter(|m| !m.is_empty())
            .collect();
        let origin_handle = origin_handle
            .map(|h| h.trim().trim_start_matches('@').to_lowercase())
            .filter(|h| !h.is_empty());
        if matchers.is_empty() && origin_handle.is_none() {
            return Err(ContentError::InvalidRumorSpec(
                "rumor needs at least one matcher or an origin handle".into(),
            ));
        }
        Ok(RumorSpec {
            name: name.into(),
            origin_time,
            matchers,
            origin_handle,
        })
    }

    /// Read one rumor from a JSON config with an RFC 3339 origin time:
    ///
    /// ```json
    /// {
    ///   "name": "donation",
    ///   "origin_time": "2013-04-15T11:29:23Z",
    ///   "matchers": ["$1 will be donated"],
    ///   "origin_handle": "_bostonmarathon"
    /// }
    /// ```
    pub fn from_json_str(raw: &str) -> Result<Self, ContentError> {
        #[derive(serde::Deserialize)]
        struct FileSpec {
            name: String,
            origin_time: String,
            #[serde(default)]
            matchers: Vec<String>,
            #[serde(default)]
            origin_handle: Option<String>,
        }
        let spec: FileSpec = serde_json::from_str(raw)
            .map_err(|e| ContentError::InvalidRumorSpec(format!("bad rumor config: {e}")))?;
        let origin = timeutil::parse_utc(&spec.origin_time).map_err(ContentError::InvalidRumorSpec)?;
        RumorSpec::new(spec.name, origin, spec.matchers, spec.origin_handle)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, ContentError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| ContentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&raw)
    }

    pub fn matches(&self, tweet: &TweetRecord) -> bool {
        let folded = tweet.text.to_lowercase();
        if self.matchers.iter().any(|m| folded.contains(m.as_str())) {
            return true;
        }
        match (&self.origin_handle, &tweet.retweet_of_author) {
            (Some(origin), Some(reposted)) => {
                reposted.trim_start_matches('@').to_lowercase() == *origin
            }
            _ => false,
        }
    }
}

/// Pickup summary for one account class.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassPickup {
    /// Distinct users in the class with a matching post at or after the
    /// origin time.
    pub count_distinct_users: usize,
    /// Time of the first matching post, when any.
    pub first_pickup_time: Option<i64>,
    /// `first_pickup_time - origin_time`, never negative.
    pub latency_s: Option<i64>,
    /// Distinct users with matching posts strictly before the origin time,
    /// reported separately instead of producing negative latencies.
    pub pre_origin_users: usize,
}

/// Rumor pickup broken down by account class.
#[derive(Debug, Clone, Default)]
pub struct RumorPickup {
    pub per_class: BTreeMap<Label, ClassPickup>,
}

impl RumorPickup {
    pub fn class(&self, label: Label) -> ClassPickup {
        self.per_class.get(&label).copied().unwrap_or_default()
    }
}

/// Who picked a rumor up, when, with what latency, by class.
///
/// `window_end` guards against rumor specs pointing past the corpus
/// window. Matching tweets earlier than the origin are tallied as
/// pre-origin matches, not negative latencies.
pub fn rumor_pickup(
    corpus: &[TweetRecord],
    labels: &LabelMap,
    rumor: &RumorSpec,
    window_end: i64,
) -> Result<RumorPickup, ContentError> {
    if rumor.origin_time > window_end {
        return Err(ContentError::OriginAfterWindow {
            name: rumor.name.clone(),
            origin: rumor.origin_time,
            window_end,
        });
    }
    let mut users_at_or_after: BTreeMap<Label, BTreeSet<&str>> = BTreeMap::new();
    let mut users_before: BTreeMap<Label, BTreeSet<&str>> = BTreeMap::new();
    let mut first: BTreeMap<Label, i64> = BTreeMap::new();
    for tweet in corpus {
        if !rumor.matches(tweet) {
            continue;
        }
        let class = labels.label_of(&tweet.author_id);
        if tweet.created_at >= rumor.origin_time {
            users_at_or_after
                .entry(class)
                .or_default()
                .insert(tweet.author_id.as_str());
            first
                .entry(class)
                .and_modify(|t| *t = (*t).min(tweet.created_at))
                .or_insert(tweet.created_at);
        } else {
            users_before
                .entry(class)
                .or_default()
                .insert(tweet.author_id.as_str());
        }
    }
    let mut out = RumorPickup::default();
    let classes: BTreeSet<Label> = users_at_or_after
        .keys()
        .chain(users_before.keys())
        .copied()
        .collect();
    for class in classes {
        let first_pickup = first.get(&class).copied();
        out.per_class.insert(
            class,
            ClassPickup {
                count_distinct_users: users_at_or_after.get(&class).map_or(0, BTreeSet::len),
                first_pickup_time: first_pickup,
                latency_s: first_pickup.map(|t| t - rumor.origin_time),
                pre_origin_users: users_before.get(&class).map_or(0, BTreeSet::len),
            },
        );
    }
    Ok(out)
}

/// One URL occurrence and what became of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrlRecord {
    pub raw_url: String,
    /// Lowercase hostname, port stripped; `"invalid"` for unparseable URLs.
    pub hostname: String,
    pub expanded_url: Option<String>,
    pub expanded_hostname: Option<String>,
    /// Set by blocklist screening.
    pub blocklisted: Option<bool>,
    /// Expansion was attempted but the resolver did not know the link.
    pub unresolved: bool,
}

/// Sentinel hostname for URLs that fail to parse.
pub const INVALID_HOSTNAME: &str = "invalid";

/// Lowercase hostname with port stripped, or the `invalid` sentinel.
pub fn hostname_of(raw: &str) -> String {
    url::Url::parse(raw.trim())
        .ok()
        .and_then(|u| u.host_str().map(|h| h.to_lowercase()))
        .unwrap_or_else(|| INVALID_HOSTNAME.to_string())
}

impl UrlRecord {
    pub fn new(raw_url: impl Into<String>) -> Self {
        let raw_url = raw_url.into();
        let hostname = hostname_of(&raw_url);
        UrlRecord {
            raw_url,
            hostname,
            expanded_url: None,
            expanded_hostname: None,
            blocklisted: None,
            unresolved: false,
        }
    }

    /// The URL screening and final rankings should use: the expansion when
    /// known, the raw URL otherwise.
    pub fn final_url(&self) -> &str {
        self.expanded_url.as_deref().unwrap_or(&self.raw_url)
    }

    pub fn final_hostname(&self) -> &str {
        self.expanded_hostname.as_deref().unwrap_or(&self.hostname)
    }
}

/// Collect URL occurrences posted by accounts of one class.
pub fn urls_of_class(corpus: &[TweetRecord], labels: &LabelMap, class: Label) -> Vec<UrlRecord> {
    corpus
        .iter()
        .filter(|t| labels.label_of(&t.author_id) == class)
        .flat_map(|t| t.urls.iter().map(|u| UrlRecord::new(u.clone())))
        .collect()
}

/// Hostname ranking: count per URL occurrence, descending, ties
/// alphabetical; the top `k`. Unparseable URLs count under the
/// [`INVALID_HOSTNAME`] sentinel and are also tallied in
/// `invalid_occurrences`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HostnameRanking {
    pub top: Vec<(String, usize)>,
    pub total_occurrences: usize,
    pub invalid_occurrences: usize,
}

pub fn hostname_rank(
    corpus: &[TweetRecord],
    labels: &LabelMap,
    class: Label,
    k: usize,
) -> HostnameRanking {
    rank_hostnames(
        urls_of_class(corpus, labels, class)
            .iter()
            .map(|r| r.hostname.clone()),
        k,
    )
}

/// Rank hostnames of already-collected URL records; `use_expanded` ranks
/// the post-expansion hostname where available.
pub fn hostname_rank_records(records: &[UrlRecord], k: usize, use_expanded: bool) -> HostnameRanking {
    rank_hostnames(
        records.iter().map(|r| {
            if use_expanded {
                r.final_hostname().to_string()
            } else {
                r.hostname.clone()
            }
        }),
        k,
    )
}

fn rank_hostnames(hostnames: impl Iterator<Item = String>, k: usize) -> HostnameRanking {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut total = 0usize;
    let mut invalid = 0usize;
    for hostname in hostnames {
        total += 1;
        if hostname == INVALID_HOSTNAME {
            invalid += 1;
        }
        *counts.entry(hostname).or_insert(0) += 1;
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    HostnameRanking {
        top: ranked,
        total_occurrences: total,
        invalid_occurrences: invalid,
    }
}

/// The configured set of shortener hostnames eligible for expansion.
#[derive(Debug, Clone)]
pub struct ShortenerSet {
    hosts: BTreeSet<String>,
}

impl ShortenerSet {
    pub fn new(hosts: impl IntoIterator<Item = impl AsRef<str>>) -> Self {
        ShortenerSet {
            hosts: hosts
                .into_iter()
                .map(|h| h.as_ref().trim().to_lowercase())
                .filter(|h| !h.is_empty())
                .collect(),
        }
    }

    /// Default set seeded from shorteners commonly observed in event
    /// streams.
    pub fn default_set() -> Self {
        Self::new(["bit.ly", "j.mp", "dlvr.it", "q.gs", "adf.ly", "bo.st", "youtu.be"])
    }

    /// One hostname per line; `#` comments allowed.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ContentError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| ContentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::new(raw.lines().filter(|l| !l.trim_start().starts_with('#'))))
    }

    pub fn contains(&self, hostname: &str) -> bool {
        self.hosts.contains(&hostname.to_lowercase())
    }
}

/// Short-link resolution seam. Implementations may be offline tables or
/// remote clients; resolution failures are per-record, never fatal.
pub trait UrlResolver {
    /// `Ok(Some(expanded))` when known, `Ok(None)` when unknown,
    /// `Err` when the lookup itself failed.
    fn resolve(&self, short_url: &str) -> Result<Option<String>, String>;
}

/// Offline resolver backed by a `short_url<TAB>expanded_url` table.
#[derive(Debug, Clone, Default)]
pub struct OfflineResolver {
    map: BTreeMap<String, String>,
}

impl OfflineResolver {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Self {
        OfflineResolver {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn parse(raw: &str) -> Result<Self, ContentError> {
        let mut map = BTreeMap::new();
        for (idx, line) in raw.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (short, expanded) = line.split_once('\t').ok_or_else(|| {
                ContentError::InvalidRumorSpec(format!(
                    "resolver table line {}: expected short<TAB>expanded",
                    idx + 1
                ))
            })?;
            map.insert(short.trim().to_string(), expanded.trim().to_string());
        }
        Ok(OfflineResolver { map })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ContentError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| ContentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&raw)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl UrlResolver for OfflineResolver {
    fn resolve(&self, short_url: &str) -> Result<Option<String>, String> {
        Ok(self.map.get(short_url).cloned())
    }
}

/// Expand short links in place. Only URLs whose hostname is in the
/// shortener set are attempted; already-expanded records are left alone,
/// so the operation is idempotent. Resolver failures mark the record
/// unresolved rather than aborting.
pub fn expand_urls(
    records: &mut [UrlRecord],
    resolver: &dyn UrlResolver,
    shorteners: &ShortenerSet,
) {
    for record in records {
        if record.expanded_url.is_some() || !shorteners.contains(&record.hostname) {
            continue;
        }
        match resolver.resolve(&record.raw_url) {
            Ok(Some(expanded)) => {
                record.expanded_hostname = Some(hostname_of(&expanded));
                record.expanded_url = Some(expanded);
                record.unresolved = false;
            }
            Ok(None) | Err(_) => {
                record.unresolved = true;
            }
        }
    }
}

/// Blocklist membership seam; like the resolver, offline by default.
pub trait BlocklistClient {
    /// Whether the (final) URL is listed. An `Err` aborts screening — no
    /// partial reports.
    fn is_listed(&self, url: &str) -> Result<bool, String>;
}

/// Offline blocklist: one URL or hostname pattern per line. A pattern
/// containing `://` must match the full URL exactly; anything else matches
/// by hostname.
#[derive(Debug, Clone, Default)]
pub struct OfflineBlocklist {
    exact_urls: BTreeSet<String>,
    hostnames: BTreeSet<String>,
}

impl OfflineBlocklist {
    pub fn parse(raw: &str) -> Self {
        let mut exact_urls = BTreeSet::new();
        let mut hostnames = BTreeSet::new();
        for line in raw.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.contains("://") {
                exact_urls.insert(line.to_string());
            } else {
                hostnames.insert(line.to_lowercase());
            }
        }
        OfflineBlocklist {
            exact_urls,
            hostnames,
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ContentError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| ContentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::parse(&raw))
    }

    pub fn len(&self) -> usize {
        self.exact_urls.len() + self.hostnames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact_urls.is_empty() && self.hostnames.is_empty()
    }
}

impl BlocklistClient for OfflineBlocklist {
    fn is_listed(&self, url: &str) -> Result<bool, String> {
        if self.exact_urls.contains(url) {
            return Ok(true);
        }
        Ok(self.hostnames.contains(&hostname_of(url)))
    }
}

/// Per-class screening outcome, over URL occurrences and distinct URLs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassScreen {
    pub total_urls: usize,
    pub flagged: usize,
    pub distinct_urls: usize,
    pub distinct_flagged: usize,
}

impl ClassScreen {
    pub fn flagged_fraction(&self) -> Option<f64> {
        (self.total_urls > 0).then(|| self.flagged as f64 / self.total_urls as f64)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScreenReport {
    pub per_class: BTreeMap<Label, ClassScreen>,
}

impl ScreenReport {
    pub fn class(&self, label: Label) -> ClassScreen {
        self.per_class.get(&label).copied().unwrap_or_default()
    }
}

/// Screen final URLs (expanded when available) against the blocklist,
/// split by poster class. The records are marked in place; a client error
/// aborts with no partial report.
pub fn blocklist_screen(
    records_by_class: &mut BTreeMap<Label, Vec<UrlRecord>>,
    client: &dyn BlocklistClient,
) -> Result<ScreenReport, ContentError> {
    // Resolve every membership first so a late failure cannot leave a
    // half-written report.
    let mut resolved: BTreeMap<Label, Vec<bool>> = BTreeMap::new();
    for (class, records) in records_by_class.iter() {
        let mut flags = Vec::with_capacity(records.len());
        for record in records {
            let flag = client.is_listed(record.final_url()).map_err(|reason| {
                ContentError::BlocklistUnavailable {
                    url: record.final_url().to_string(),
                    reason,
                }
            })?;
            flags.push(flag);
        }
        resolved.insert(*class, flags);
    }
    let mut report = ScreenReport::default();
    for (class, records) in records_by_class.iter_mut() {
        let flags = &resolved[class];
        let mut distinct: BTreeMap<&str, bool> = BTreeMap::new();
        let mut screen = ClassScreen::default();
        for (record, &flag) in records.iter_mut().zip(flags) {
            record.blocklisted = Some(flag);
            screen.total_urls += 1;
            if flag {
                screen.flagged += 1;
            }
        }
        for record in records.iter() {
            distinct.entry(record.final_url()).or_insert(record.blocklisted == Some(true));
        }
        screen.distinct_urls = distinct.len();
        screen.distinct_flagged = distinct.values().filter(|&&f| f).count();
        report.per_class.insert(*class, screen);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AccountLabel, AccountSnapshot};

    fn tweet(user: &str, id: &str, at: i64, text: &str) -> TweetRecord {
        TweetRecord {
            tweet_id: id.into(),
            author_id: user.into(),
            created_at: at,
            text: text.into(),
            source: "web".into(),
            retweet_of_author: None,
            urls: vec![],
            author: AccountSnapshot {
                user_id: user.into(),
                handle: user.into(),
                followers_count: 0,
                friends_count: 0,
                statuses_count: 0,
                created_at: 1,
                description: String::new(),
                verified: false,
            },
        }
    }

    fn labels() -> LabelMap {
        LabelMap::from_labels([
            AccountLabel { user_id: "bot1".into(), label: Label::Bot },
            AccountLabel { user_id: "bot2".into(), label: Label::Bot },
            AccountLabel { user_id: "human1".into(), label: Label::NonBot },
        ])
        .unwrap()
    }

    #[test]
    fn donation_rumor_latency_matches_timestamp_difference() {
        let origin = timeutil::parse_utc("2013-04-15T11:29:23Z").unwrap();
        let bot_pickup = timeutil::parse_utc("2013-04-17T00:50:24Z").unwrap();
        let rumor = RumorSpec::new(
            "donation",
            origin,
            ["$1 will be donated"],
            Some("_bostonmarathon".into()),
        )
        .unwrap();
        let corpus = vec![
            tweet("stranger", "t0", origin, "For each RT this gets, $1 will be donated #boston"),
            tweet("human1", "t1", origin + 120, "RT: for each rt this gets, $1 WILL BE DONATED"),
            tweet("bot1", "t2", bot_pickup, "RT @_BostonMarathon: For each RT this gets, $1 will be donated"),
        ];
        let pickup = rumor_pickup(&corpus, &labels(), &rumor, origin + 10 * 86_400).unwrap();
        let bots = pickup.class(Label::Bot);
        assert_eq!(bots.count_distinct_users, 1);
        assert_eq!(bots.latency_s, Some(134_461));
        let humans = pickup.class(Label::NonBot);
        assert_eq!(humans.count_distinct_users, 1);
        assert_eq!(humans.latency_s, Some(120));
    }

    #[test]
    fn rumor_never_picked_up_reports_absent() {
        let rumor = RumorSpec::new("sandy-hook", 100, ["she ran for the"], None).unwrap();
        let corpus = vec![
            tweet("human1", "t1", 150, "She ran for the victims #prayforboston"),
            tweet("bot1", "t2", 160, "completely unrelated bot content"),
        ];
        let pickup = rumor_pickup(&corpus, &labels(), &rumor, 10_000).unwrap();
        let bots = pickup.class(Label::Bot);
        assert_eq!(bots.count_distinct_users, 0);
        assert_eq!(bots.latency_s, None);
        assert_eq!(pickup.class(Label::NonBot).count_distinct_users, 1);
    }

    #[test]
    fn no_matches_anywhere_reports_all_absent() {
        let rumor = RumorSpec::new("ghost", 100, ["never said"], None).unwrap();
        let corpus = vec![tweet("human1", "t1", 150, "ordinary post")];
        let pickup = rumor_pickup(&corpus, &labels(), &rumor, 10_000).unwrap();
        assert!(pickup.per_class.is_empty());
    }

    #[test]
    fn pre_origin_matches_do_not_go_negative() {
        let rumor = RumorSpec::new("early", 1_000, ["leak"], None).unwrap();
        let corpus = vec![
            tweet("human1", "t1", 500, "early leak before origin"),
            tweet("human1", "t2", 1_200, "the leak again"),
        ];
        let pickup = rumor_pickup(&corpus, &labels(), &rumor, 10_000).unwrap();
        let humans = pickup.class(Label::NonBot);
        assert_eq!(humans.pre_origin_users, 1);
        assert_eq!(humans.latency_s, Some(200));
        assert!(humans.latency_s.unwrap() >= 0);
    }

    #[test]
    fn origin_after_window_is_a_validation_error() {
        let rumor = RumorSpec::new("late", 5_000, ["x"], None).unwrap();
        assert!(matches!(
            rumor_pickup(&[], &labels(), &rumor, 4_000),
            Err(ContentError::OriginAfterWindow { .. })
        ));
    }

    #[test]
    fn per_class_counts_partition_matched_users() {
        let rumor = RumorSpec::new("r", 0, ["storm"], None).unwrap();
        let corpus: Vec<TweetRecord> = (0..30)
            .map(|i| {
                let user = match i % 3 {
                    0 => "bot1".to_string(),
                    1 => "human1".to_string(),
                    _ => format!("stranger{}", i % 5),
                };
                tweet(&user, &format!("t{i}"), 10 + i, "storm text")
            })
            .collect();
        let pickup = rumor_pickup(&corpus, &labels(), &rumor, 10_000).unwrap();
        // brute-force: matched users by class
        let mut expected: BTreeMap<Label, BTreeSet<&str>> = BTreeMap::new();
        for t in &corpus {
            expected
                .entry(labels().label_of(&t.author_id))
                .or_default()
                .insert(t.author_id.as_str());
        }
        let total_matched: usize = expected.values().map(BTreeSet::len).sum();
        let sum_by_class: usize = pickup
            .per_class
            .values()
            .map(|c| c.count_distinct_users)
            .sum();
        assert_eq!(sum_by_class, total_matched);
    }

    #[test]
    fn rumor_spec_validation_and_json() {
        assert!(RumorSpec::new("x", 0, Vec::<String>::new(), None).is_err());
        let spec = RumorSpec::from_json_str(
            r#"{"name":"d","origin_time":"1970-01-01T00:00:10Z","matchers":["Donated"],
                "origin_handle":"@Fund"}"#,
        )
        .unwrap();
        assert_eq!(spec.origin_time, 10);
        assert_eq!(spec.matchers, vec!["donated"]);
        assert_eq!(spec.origin_handle.as_deref(), Some("fund"));
    }

    #[test]
    fn hostname_ranking_counts_occurrences() {
        let mut a = tweet("bot1", "t1", 10, "links");
        a.urls = vec!["http://bit.ly/a".into(), "http://bit.ly/b".into()];
        let mut b = tweet("bot2", "t2", 20, "more");
        b.urls = vec!["https://j.mp/x".into()];
        let ranking = hostname_rank(&[a, b], &labels(), Label::Bot, 10);
        assert_eq!(
            ranking.top,
            vec![("bit.ly".to_string(), 2), ("j.mp".to_string(), 1)]
        );
        assert_eq!(ranking.total_occurrences, 3);
        assert_eq!(ranking.invalid_occurrences, 0);

        let empty = hostname_rank(&[], &labels(), Label::Bot, 10);
        assert!(empty.top.is_empty());
    }

    #[test]
    fn unparseable_urls_count_as_invalid_sentinel() {
        let records = vec![UrlRecord::new("::::"), UrlRecord::new("http://ok.example/x")];
        let ranking = hostname_rank_records(&records, 10, false);
        assert_eq!(ranking.invalid_occurrences, 1);
        assert!(ranking.top.contains(&(INVALID_HOSTNAME.to_string(), 1)));
    }

    #[test]
    fn expansion_fills_known_short_links_only() {
        let resolver = OfflineResolver::parse(
            "http://bit.ly/a\thttp://www.sigalert.com/x\n# comment\n",
        )
        .unwrap();
        let shorteners = ShortenerSet::default_set();
        let mut records = vec![
            UrlRecord::new("http://bit.ly/a"),
            UrlRecord::new("http://cnn.com/story"),
            UrlRecord::new("http://bit.ly/unknown"),
        ];
        expand_urls(&mut records, &resolver, &shorteners);
        assert_eq!(records[0].expanded_hostname.as_deref(), Some("www.sigalert.com"));
        assert_eq!(records[1].expanded_url, None);
        assert!(!records[1].unresolved); // not a shortener: untouched
        assert!(records[2].unresolved);

        // idempotent: a second pass changes nothing
        let snapshot = records.clone();
        expand_urls(&mut records, &resolver, &shorteners);
        assert_eq!(records, snapshot);
    }

    #[test]
    fn resolver_failure_marks_unresolved_not_fatal() {
        struct Failing;
        impl UrlResolver for Failing {
            fn resolve(&self, _short_url: &str) -> Result<Option<String>, String> {
                Err("socket closed".into())
            }
        }
        let mut records = vec![UrlRecord::new("http://bit.ly/a")];
        expand_urls(&mut records, &Failing, &ShortenerSet::default_set());
        assert!(records[0].unresolved);
        assert_eq!(records[0].expanded_url, None);
    }

    #[test]
    fn empty_blocklist_flags_nothing() {
        let mut by_class = BTreeMap::from([(Label::Bot, vec![UrlRecord::new("http://a.example/x")])]);
        let report = blocklist_screen(&mut by_class, &OfflineBlocklist::parse("")).unwrap();
        assert_eq!(report.class(Label::Bot).flagged, 0);
    }

    #[test]
    fn single_listed_url_flagged_in_posters_class() {
        let blocklist = OfflineBlocklist::parse("http://evil.example/payload\n");
        let mut by_class = BTreeMap::from([
            (Label::Bot, vec![UrlRecord::new("http://evil.example/payload")]),
            (Label::NonBot, vec![UrlRecord::new("http://fine.example/ok")]),
        ]);
        let report = blocklist_screen(&mut by_class, &blocklist).unwrap();
        assert_eq!(report.class(Label::Bot).flagged, 1);
        assert_eq!(report.class(Label::NonBot).flagged, 0);
        assert_eq!(by_class[&Label::Bot][0].blocklisted, Some(true));
    }

    #[test]
    fn hostname_patterns_match_any_path() {
        let blocklist = OfflineBlocklist::parse("malware.example\n");
        assert!(blocklist.is_listed("http://malware.example/a/b").unwrap());
        assert!(blocklist.is_listed("https://MALWARE.example/other").unwrap());
        assert!(!blocklist.is_listed("http://clean.example/x").unwrap());
    }

    #[test]
    fn client_failure_aborts_with_no_partial_report() {
        struct Flaky;
        impl BlocklistClient for Flaky {
            fn is_listed(&self, url: &str) -> Result<bool, String> {
                if url.contains("second") {
                    Err("timeout".into())
                } else {
                    Ok(false)
                }
            }
        }
        let mut by_class = BTreeMap::from([(
            Label::Bot,
            vec![
                UrlRecord::new("http://first.example/"),
                UrlRecord::new("http://second.example/"),
            ],
        )]);
        let err = blocklist_screen(&mut by_class, &Flaky);
        assert!(matches!(err, Err(ContentError::BlocklistUnavailable { .. })));
        // nothing was marked
        assert!(by_class[&Label::Bot].iter().all(|r| r.blocklisted.is_none()));
    }

    #[test]
    fn screening_uses_expanded_urls_when_available() {
        let blocklist = OfflineBlocklist::parse("http://landed.example/final\n");
        let mut record = UrlRecord::new("http://bit.ly/short");
        record.expanded_url = Some("http://landed.example/final".into());
        record.expanded_hostname = Some("landed.example".into());
        let mut by_class = BTreeMap::from([(Label::Bot, vec![record])]);
        let report = blocklist_screen(&mut by_class, &blocklist).unwrap();
        assert_eq!(report.class(Label::Bot).flagged, 1);
    }

    #[test]
    fn screening_reports_distinct_counts_too() {
        let blocklist = OfflineBlocklist::parse("bad.example\n");
        let mut by_class = BTreeMap::from([(
            Label::Bot,
            vec![
                UrlRecord::new("http://bad.example/x"),
                UrlRecord::new("http://bad.example/x"),
                UrlRecord::new("http://ok.example/y"),
            ],
        )]);
        let report = blocklist_screen(&mut by_class, &blocklist).unwrap();
        let screen = report.class(Label::Bot);
        assert_eq!(screen.total_urls, 3);
        assert_eq!(screen.flagged, 2);
        assert_eq!(screen.distinct_urls, 2);
        assert_eq!(screen.distinct_flagged, 1);
    }
}
