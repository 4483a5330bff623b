//! Simulation configuration and validation.
//!
//! Everything is serde-deserializable from a JSON config file; every field
//! has a default so a minimal `{"seed": 7}` file runs the standard
//! scenario. Validation names the violated platform rule when a configured
//! posting rate cannot fit under the caps.

use serde::{Deserialize, Serialize};

use crate::corpus::EventSpec;

/// Platform posting limits the simulator must respect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RateLimitPolicy {
    /// Tweets per account per sliding 24 h window.
    pub daily_cap: usize,
    /// Tweets per account per sliding 30-minute window. The platform
    /// states the daily limit is broken into semi-hourly sub-limits
    /// without publishing their size; ceil(1000/48) = 21 is the default
    /// assumption and it is configurable.
    pub semi_hour_cap: usize,
    /// Follow actions per account per day.
    pub follow_daily_cap: usize,
}

impl Default for RateLimitPolicy {
    fn default() -> Self {
        RateLimitPolicy {
            daily_cap: 1_000,
            semi_hour_cap: 21,
            follow_daily_cap: 1_000,
        }
    }
}

/// The four ways bots get their content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchetypeKind {
    /// Reposts currently-popular items.
    PopularTweet,
    /// Reposts items matching its keyword list.
    Keyword,
    /// Reposts everything from specific cited accounts.
    Source,
    /// Posts items from web feeds outside the platform.
    OutsideContent,
}

impl ArchetypeKind {
    pub const ALL: [ArchetypeKind; 4] = [
        ArchetypeKind::PopularTweet,
        ArchetypeKind::Keyword,
        ArchetypeKind::Source,
        ArchetypeKind::OutsideContent,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ArchetypeKind::PopularTweet => "popular_tweet",
            ArchetypeKind::Keyword => "keyword",
            ArchetypeKind::Source => "source",
            ArchetypeKind::OutsideContent => "outside_content",
        }
    }

    pub(crate) fn handle_prefix(&self) -> &'static str {
        match self {
            ArchetypeKind::PopularTweet => "trend_echo",
            ArchetypeKind::Keyword => "tag_watch",
            ArchetypeKind::Source => "wire_relay",
            ArchetypeKind::OutsideContent => "feed_post",
        }
    }
}

impl std::fmt::Display for ArchetypeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How many bots of each archetype to create.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BotMix {
    pub popular_tweet: usize,
    pub keyword: usize,
    pub source: usize,
    pub outside_content: usize,
}

impl Default for BotMix {
    fn default() -> Self {
        BotMix {
            popular_tweet: 5,
            keyword: 5,
            source: 5,
            outside_content: 5,
        }
    }
}

impl BotMix {
    pub fn total(&self) -> usize {
        self.popular_tweet + self.keyword + self.source + self.outside_content
    }

    pub fn count(&self, kind: ArchetypeKind) -> usize {
        match kind {
            ArchetypeKind::PopularTweet => self.popular_tweet,
            ArchetypeKind::Keyword => self.keyword,
            ArchetypeKind::Source => self.source,
            ArchetypeKind::OutsideContent => self.outside_content,
        }
    }
}

/// A scripted news publisher feeding the event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publisher {
    pub handle: String,
    pub verified: bool,
}

/// The scripted news feed driving bot activity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeedConfig {
    /// Regular items per hour across all publishers.
    pub items_per_hour: f64,
    /// Uniform jitter added to each item time; 0 gives exact spacing.
    pub jitter_s: u64,
    /// Chance an item spawns a short burst of follow-up items.
    pub burst_probability: f64,
    /// Extra items per burst, at most.
    pub burst_extra_max: usize,
    /// Thin the feed overnight the way the news cycle does. Disable for
    /// exact-schedule scenarios.
    pub diurnal: bool,
    pub publishers: Vec<Publisher>,
    /// Per-bot short-link hosts used in repost texts.
    pub shortener_hosts: Vec<String>,
    /// Hostnames for the canonical article links carried by feed items.
    pub article_hosts: Vec<String>,
}

impl Default for FeedConfig {
    fn default() -> Self {
        FeedConfig {
            items_per_hour: 6.0,
            jitter_s: 240,
            burst_probability: 0.25,
            burst_extra_max: 3,
            diurnal: true,
            publishers: vec![
                Publisher { handle: "newswire".into(), verified: true },
                Publisher { handle: "cityalerts".into(), verified: true },
                Publisher { handle: "breaking_hub".into(), verified: false },
                Publisher { handle: "local7news".into(), verified: true },
                Publisher { handle: "stormdesk".into(), verified: true },
                Publisher { handle: "wire_global".into(), verified: false },
            ],
            shortener_hosts: vec![
                "bit.ly".into(),
                "j.mp".into(),
                "dlvr.it".into(),
                "q.gs".into(),
            ],
            article_hosts: vec![
                "news.example.com".into(),
                "stormcentral.example".into(),
                "cityblog.example".into(),
                "wires.example.net".into(),
            ],
        }
    }
}

/// How the temporal texture of the two classes relates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemporalNoise {
    /// Event-like: both classes bursty around-the-clock, so temporal
    /// features carry almost no class signal.
    EventLike,
    /// Bots post on a near-metronomic schedule, giving temporal features a
    /// real class signal.
    Distinct,
}

/// Bot posting behaviour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BotBehavior {
    /// Repost delay bounds after a feed item appears (distinct-mode
    /// timing; in event-like mode bot posting clocks mirror human ones).
    pub min_delay_s: u64,
    pub max_delay_s: u64,
    /// Event-like mode: bot posting-slot budget per day, like humans'.
    pub tweets_per_day_min: usize,
    pub tweets_per_day_max: usize,
    /// Share of a bot's posts made manually by its operator through the
    /// web client, diluting the automation-client signal. 0 keeps bot
    /// sources purely automation-platform.
    pub manual_client_share_max: f64,
    /// Publishers each Source bot cites.
    pub cited_handles_per_bot: usize,
    /// Chance an eligible item is actually reposted.
    pub repost_probability: f64,
    /// Per-bot link-share bounds; each bot gets a fixed share drawn from
    /// this range.
    pub url_probability_min: f64,
    pub url_probability_max: f64,
    /// Popularity cutoff above which PopularTweet bots repost.
    pub popular_threshold: f64,
    /// Posts per hour for OutsideContent bots' own feeds.
    pub outside_posts_per_hour: f64,
    /// Client strings for the majority of bots (well-known automation
    /// platforms).
    pub clients: Vec<String>,
    /// Share of bots using a niche automation app instead.
    pub obscure_client_fraction: f64,
    /// Niche automation client strings.
    pub obscure_clients: Vec<String>,
    /// Bot account-age bounds, days before the window start.
    pub account_age_days_min: u64,
    pub account_age_days_max: u64,
}

impl Default for BotBehavior {
    fn default() -> Self {
        BotBehavior {
            min_delay_s: 30,
            max_delay_s: 2_400,
            tweets_per_day_min: 10,
            tweets_per_day_max: 40,
            manual_client_share_max: 0.0,
            cited_handles_per_bot: 2,
            repost_probability: 0.35,
            url_probability_min: 0.50,
            url_probability_max: 0.95,
            popular_threshold: 0.55,
            outside_posts_per_hour: 1.2,
            clients: vec![
                "twitterfeed".into(),
                "dlvr.it".into(),
                "IFTTT".into(),
                "Tweet Old Post".into(),
                "RoundTeam".into(),
                "WordPress.com".into(),
            ],
            obscure_client_fraction: 0.10,
            obscure_clients: vec![
                "Crime News Updates".into(),
                "TweetAutoPilot".into(),
                "SimpleWeatherAlert".into(),
                "Sam Tweet".into(),
            ],
            account_age_days_min: 10,
            account_age_days_max: 1_200,
        }
    }
}

/// Human posting behaviour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HumanBehavior {
    pub tweets_per_day_min: usize,
    pub tweets_per_day_max: usize,
    /// Chance a drawn tweet time starts a burst of quick follow-ups.
    pub burst_probability: f64,
    pub burst_extra_max: usize,
    /// Per-human URL-share bounds; each human gets a fixed share drawn
    /// from this range.
    pub url_probability_min: f64,
    pub url_probability_max: f64,
    /// Chance a human tweet is a retweet of a feed item.
    pub retweet_probability: f64,
    /// Share of a human's posts routed through an automation platform
    /// (scheduled posts, feed mirroring). 0 keeps human sources purely
    /// interactive.
    pub automation_client_share_max: f64,
    pub clients: Vec<String>,
    pub account_age_days_min: u64,
    pub account_age_days_max: u64,
}

impl Default for HumanBehavior {
    fn default() -> Self {
        HumanBehavior {
            tweets_per_day_min: 4,
            tweets_per_day_max: 26,
            burst_probability: 0.35,
            burst_extra_max: 3,
            url_probability_min: 0.25,
            url_probability_max: 0.80,
            retweet_probability: 0.35,
            automation_client_share_max: 0.0,
            clients: vec![
                "web".into(),
                "Twitter for iPhone".into(),
                "Twitter for Android".into(),
                "TweetDeck".into(),
                "Twitter for iPad".into(),
                "Echofon".into(),
                "HootSuite".into(),
                "Mobile Web".into(),
            ],
            account_age_days_min: 90,
            account_age_days_max: 3_000,
        }
    }
}

/// Who follows whom in the generated edge file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FollowConfig {
    pub human_follows_bot_probability: f64,
    pub bots_followed_max: usize,
    pub human_follows_publisher_probability: f64,
    pub publishers_followed_max: usize,
    pub human_follows_human_probability: f64,
    pub humans_followed_max: usize,
}

impl Default for FollowConfig {
    fn default() -> Self {
        FollowConfig {
            human_follows_bot_probability: 0.6,
            bots_followed_max: 2,
            human_follows_publisher_probability: 0.55,
            publishers_followed_max: 3,
            human_follows_human_probability: 0.3,
            humans_followed_max: 5,
        }
    }
}

/// A rumor injected into the simulated event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRumor {
    pub name: String,
    /// Handle of the account that originates the rumor; stays unlabeled.
    pub origin_handle: String,
    /// Origin time as an offset from the window start, seconds.
    pub origin_offset_s: i64,
    /// The rumor text. Must contain an event keyword or the corpus filter
    /// would drop it — validated.
    pub text: String,
    /// Humans that repost it.
    pub human_pickups: usize,
    /// First human pickup happens this soon after the origin.
    pub first_pickup_delay_s: u64,
    /// Remaining pickups spread over this many seconds.
    pub pickup_spread_s: u64,
    /// Publishers that carry the rumor; Source bots citing one of them
    /// repost it. Empty = no bot ever sees it.
    #[serde(default)]
    pub carried_by: Vec<String>,
    /// Carrying publishers post it this long after the origin.
    #[serde(default)]
    pub carry_delay_s: u64,
}

/// Full simulation configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub event: EventSpec,
    pub seed: u64,
    pub bots: BotMix,
    pub n_humans: usize,
    pub feed: FeedConfig,
    pub bot_behavior: BotBehavior,
    pub human_behavior: HumanBehavior,
    pub follow: FollowConfig,
    pub temporal_noise: TemporalNoise,
    #[serde(rename = "rumors")]
    pub rumors: Vec<SimRumor>,
    pub policy: RateLimitPolicy,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            event: default_event(),
            seed: 0,
            bots: BotMix::default(),
            n_humans: 20,
            feed: FeedConfig::default(),
            bot_behavior: BotBehavior::default(),
            human_behavior: HumanBehavior::default(),
            follow: FollowConfig::default(),
            temporal_noise: TemporalNoise::EventLike,
            rumors: Vec::new(),
            policy: RateLimitPolicy::default(),
        }
    }
}

/// The standard simulated event: a three-day storm window in mid-2013.
pub fn default_event() -> EventSpec {
    // 2013-06-01T00:00:00Z
    const START: i64 = 1_370_044_800;
    EventSpec::new(
        "simulated-storm",
        ["stormwatch", "bigstorm"],
        START,
        START + 3 * 86_400,
    )
    .expect("default event is valid")
}

#[derive(Debug, thiserror::Error)]
pub enum SimConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("bad simulator config: {0}")]
    Parse(String),
    #[error("rule {rule} violated: {detail}")]
    RateRule { rule: &'static str, detail: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl SimConfig {
    pub fn with_seed(seed: u64) -> Self {
        SimConfig {
            seed,
            ..SimConfig::default()
        }
    }

    pub fn from_json_str(raw: &str) -> Result<Self, SimConfigError> {
        let config: SimConfig =
            serde_json::from_str(raw).map_err(|e| SimConfigError::Parse(e.to_string()))?;
        Ok(config)
    }

    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self, SimConfigError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| SimConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&raw)
    }

    /// Reject configurations that cannot respect the posting rules, naming
    /// the rule. The runtime limiter still enforces the caps; validation
    /// catches configurations that could never fit.
    pub fn validate(&self) -> Result<(), SimConfigError> {
        if self.event.span_s() < 86_400 {
            return Err(SimConfigError::Invalid(format!(
                "event window must span at least one day, got {} s",
                self.event.span_s()
            )));
        }
        if self.feed.publishers.is_empty() {
            return Err(SimConfigError::Invalid("feed needs at least one publisher".into()));
        }
        if self.feed.shortener_hosts.is_empty() || self.feed.article_hosts.is_empty() {
            return Err(SimConfigError::Invalid(
                "feed needs shortener and article hosts".into(),
            ));
        }
        if self.bot_behavior.min_delay_s > self.bot_behavior.max_delay_s {
            return Err(SimConfigError::Invalid("bot delay bounds inverted".into()));
        }
        if self.bot_behavior.cited_handles_per_bot > self.feed.publishers.len() {
            return Err(SimConfigError::Invalid(format!(
                "cited_handles_per_bot {} exceeds publisher count {}",
                self.bot_behavior.cited_handles_per_bot,
                self.feed.publishers.len()
            )));
        }
        if self.bot_behavior.cited_handles_per_bot > self.policy.follow_daily_cap {
            return Err(SimConfigError::RateRule {
                rule: "follow_daily_cap",
                detail: format!(
                    "a Source bot would follow {} accounts on day one, cap is {}",
                    self.bot_behavior.cited_handles_per_bot, self.policy.follow_daily_cap
                ),
            });
        }
        if self.policy.daily_cap == 0 || self.policy.semi_hour_cap == 0 {
            return Err(SimConfigError::Invalid(
                "rate caps must be at least 1".into(),
            ));
        }
        let bot_daily = self.bot_behavior.tweets_per_day_max as f64
            * (1.0 + self.human_behavior.burst_probability * self.human_behavior.burst_extra_max as f64);
        if bot_daily > self.policy.daily_cap as f64 {
            return Err(SimConfigError::RateRule {
                rule: "daily_cap",
                detail: format!("bots configured at {bot_daily:.0} tweets/day"),
            });
        }
        for p in [
            self.bot_behavior.repost_probability,
            self.bot_behavior.url_probability_min,
            self.bot_behavior.url_probability_max,
            self.bot_behavior.manual_client_share_max,
            self.human_behavior.automation_client_share_max,
            self.bot_behavior.obscure_client_fraction,
            self.human_behavior.burst_probability,
            self.human_behavior.retweet_probability,
            self.human_behavior.url_probability_min,
            self.human_behavior.url_probability_max,
            self.feed.burst_probability,
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(SimConfigError::Invalid(format!(
                    "probability {p} outside [0, 1]"
                )));
            }
        }
        let mut rumor_names = std::collections::BTreeSet::new();
        for rumor in &self.rumors {
            if !rumor_names.insert(&rumor.name) {
                return Err(SimConfigError::Invalid(format!(
                    "duplicate rumor name {:?}",
                    rumor.name
                )));
            }
        }
        // Worst-case repost rate for feed-driven bots: every regular item
        // plus every burst follow-up.
        let burst_factor = 1.0 + self.feed.burst_probability * self.feed.burst_extra_max as f64;
        let feed_daily = self.feed.items_per_hour * burst_factor * 24.0;
        if feed_daily > self.policy.daily_cap as f64 {
            return Err(SimConfigError::RateRule {
                rule: "daily_cap",
                detail: format!(
                    "feed can emit {feed_daily:.0} items per day; a bot reposting all of them \
                     would exceed the {} tweets/day cap",
                    self.policy.daily_cap
                ),
            });
        }
        let outside_daily = self.bot_behavior.outside_posts_per_hour * 24.0;
        if outside_daily > self.policy.daily_cap as f64 {
            return Err(SimConfigError::RateRule {
                rule: "daily_cap",
                detail: format!(
                    "outside-content rate {:.1}/hour is {outside_daily:.0}/day, over the {} cap",
                    self.bot_behavior.outside_posts_per_hour, self.policy.daily_cap
                ),
            });
        }
        if self.bot_behavior.outside_posts_per_hour / 2.0 > self.policy.semi_hour_cap as f64 {
            return Err(SimConfigError::RateRule {
                rule: "semi_hour_cap",
                detail: format!(
                    "outside-content rate {:.1}/hour exceeds {} per 30 minutes",
                    self.bot_behavior.outside_posts_per_hour, self.policy.semi_hour_cap
                ),
            });
        }
        let human_daily = self.human_behavior.tweets_per_day_max as f64
            * (1.0 + self.human_behavior.burst_probability * self.human_behavior.burst_extra_max as f64);
        if human_daily > self.policy.daily_cap as f64 {
            return Err(SimConfigError::RateRule {
                rule: "daily_cap",
                detail: format!("humans configured at {human_daily:.0} tweets/day"),
            });
        }
        for rumor in &self.rumors {
            let origin = self.event.window_start + rumor.origin_offset_s;
            if !self.event.contains_time(origin) {
                return Err(SimConfigError::Invalid(format!(
                    "rumor {:?} origin falls outside the event window",
                    rumor.name
                )));
            }
            if !self.event.matches_text(&rumor.text) {
                return Err(SimConfigError::Invalid(format!(
                    "rumor {:?} text matches no event keyword and would be filtered on load",
                    rumor.name
                )));
            }
            for handle in &rumor.carried_by {
                if !self.feed.publishers.iter().any(|p| &p.handle == handle) {
                    return Err(SimConfigError::Invalid(format!(
                        "rumor {:?} carried_by {handle:?} is not a configured publisher",
                        rumor.name
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_validates() {
        SimConfig::with_seed(1).validate().unwrap();
    }

    #[test]
    fn minimal_json_uses_defaults() {
        let config = SimConfig::from_json_str(r#"{"seed": 7}"#).unwrap();
        assert_eq!(config.seed, 7);
        assert_eq!(config.bots.total(), 20);
        config.validate().unwrap();
    }

    #[test]
    fn over_cap_feed_rate_names_the_rule() {
        let mut config = SimConfig::with_seed(1);
        config.feed.items_per_hour = 60.0; // 1440+/day, over 1000
        match config.validate() {
            Err(SimConfigError::RateRule { rule, .. }) => assert_eq!(rule, "daily_cap"),
            other => panic!("expected daily_cap violation, got {other:?}"),
        }
    }

    #[test]
    fn over_cap_outside_rate_names_semi_hour() {
        let mut config = SimConfig::with_seed(1);
        config.bot_behavior.outside_posts_per_hour = 41.0;
        config.validate().unwrap(); // ~41/hour fits both caps

        config.bot_behavior.outside_posts_per_hour = 43.0;
        match config.validate() {
            Err(SimConfigError::RateRule { rule, .. }) => assert_eq!(rule, "daily_cap"),
            other => panic!("expected rate violation, got {other:?}"),
        }
    }

    #[test]
    fn short_window_rejected() {
        let mut config = SimConfig::with_seed(1);
        config.event = EventSpec::new("e", ["x"], 0, 3_600).unwrap();
        assert!(matches!(config.validate(), Err(SimConfigError::Invalid(_))));
    }

    #[test]
    fn rumor_without_keyword_rejected() {
        let mut config = SimConfig::with_seed(1);
        config.rumors.push(SimRumor {
            name: "r".into(),
            origin_handle: "fund_account".into(),
            origin_offset_s: 100,
            text: "donate now please".into(), // no event keyword
            human_pickups: 3,
            first_pickup_delay_s: 30,
            pickup_spread_s: 3_600,
            carried_by: vec![],
            carry_delay_s: 0,
        });
        assert!(matches!(config.validate(), Err(SimConfigError::Invalid(_))));
    }

    #[test]
    fn config_json_round_trip() {
        let config = SimConfig::with_seed(42);
        let json = serde_json::to_string_pretty(&config).unwrap();
        let back = SimConfig::from_json_str(&json).unwrap();
        assert_eq!(back, config);
    }
}
