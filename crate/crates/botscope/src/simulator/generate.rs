//! Deterministic corpus generation.
//!
//! A single seeded generator drives everything: the scripted news feed,
//! account creation, per-archetype repost decisions, human diurnal
//! activity, rumor injection, follow edges, and the ground-truth sidecar.
//! Emission runs through a per-account sliding-window rate limiter and a
//! cross-account duplicate-text registry, so generated corpora never
//! violate the posting rules they are later audited against.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::config::{ArchetypeKind, SimConfig, SimConfigError, TemporalNoise};
use crate::corpus::{AccountLabel, AccountSnapshot, Label, LabelMap, TweetRecord};
use crate::diffusion::FollowEdgeSet;

/// Everything one simulation produces.
#[derive(Debug, Clone)]
pub struct SimOutput {
    /// Corpus records sorted by `(created_at, tweet_id)`.
    pub records: Vec<TweetRecord>,
    pub edges: FollowEdgeSet,
    pub labels: LabelMap,
    pub truth: GroundTruth,
}

/// Ground-truth sidecar, keyed by account id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub accounts: BTreeMap<String, AccountTruth>,
    pub totals: TruthTotals,
    pub rumors: BTreeMap<String, RumorTruth>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AccountTruth {
    /// "bot", "human", "publisher", or "rumor_origin".
    pub role: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub archetype: Option<String>,
    pub client: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub cited_handles: Vec<String>,
    pub tweets: usize,
    pub tweets_with_urls: usize,
    pub retweets: usize,
    /// Handle -> number of posts crediting it.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub citations: BTreeMap<String, usize>,
    /// Rumor name -> number of matching posts by this account.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub rumor_pickups: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TruthTotals {
    pub total_tweets: usize,
    pub unique_users: usize,
    pub tweets_with_urls: usize,
    pub retweet_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RumorTruth {
    pub origin_handle: String,
    pub origin_time: i64,
    pub human_pickup_users: usize,
    pub source_bot_pickup_users: usize,
    pub first_human_pickup: Option<i64>,
    pub first_bot_pickup: Option<i64>,
}

/// Run one simulation. Validates the config first.
pub fn simulate(config: &SimConfig) -> Result<SimOutput, SimConfigError> {
    config.validate()?;
    Ok(Generator::new(config).run())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Bot(ArchetypeKind),
    Human,
    Publisher,
    RumorOrigin,
}

struct SimAccount {
    handle: String,
    role: Role,
    snapshot: AccountSnapshot,
    client: String,
    /// Bot short-link host.
    shortener: String,
    /// Source bots: cited publisher handles.
    cited: Vec<String>,
    /// Keyword bots: indices into the event keyword list.
    keyword_subset: Vec<usize>,
    /// Fixed per-account URL share.
    url_probability: f64,
    /// How far this account's hour profile flattens toward
    /// around-the-clock activity (event junkies), 0..1.
    flatten: f64,
    /// Which reaction wave this account rides in event-like mode.
    wave: usize,
    /// Bots: share of posts the operator makes manually via the web
    /// client. Humans: share of posts routed through an automation
    /// platform. Dilutes the client-source signal when configured.
    offbrand_client_share: f64,
}

struct FeedItem {
    seq: usize,
    time: i64,
    publisher_idx: usize,
    keyword_idx: usize,
    headline: String,
    article_url: String,
    popularity: f64,
    /// Set on rumor-carriage items, which only Source bots react to.
    rumor_idx: Option<usize>,
}

struct Candidate {
    time: i64,
    account_idx: usize,
    seq: usize,
    text: String,
    /// Client string for this post (usually the account's client, with
    /// occasional off-brand posts when mixing is configured).
    source: String,
    urls: Vec<String>,
    retweet_of: Option<String>,
    /// Handle credited by this post, for the truth sidecar.
    cites: Option<String>,
    /// Rumor this post picks up, for the truth sidecar.
    rumor_idx: Option<usize>,
}

const HEADLINE_PHRASES: &[&str] = &[
    "emergency crews on scene downtown",
    "officials confirm road closures near the river",
    "power out across the east side, utilities responding",
    "evacuation advisory extended to two more districts",
    "mayor to brief press within the hour",
    "shelters open at the fairgrounds and north high",
    "rail service suspended until further notice",
    "flooding reported along the waterfront",
    "national guard units staging at the armory",
    "hospital asks residents to avoid the ER except emergencies",
    "bridge inspection underway after debris strike",
    "volunteers coordinating relief supplies downtown",
];

const HUMAN_TEMPLATES: &[&str] = &[
    "can't believe what i'm seeing with this {kw}",
    "praying for everyone affected #{kw}",
    "{kw} is all over my feed tonight, stay safe",
    "checking in on family near the {kw} zone",
    "the {kw} photos are unreal",
    "anyone else lose power? #{kw}",
    "glued to the news over this {kw}",
    "sending love to first responders #{kw}",
    "school's closed tomorrow because of the {kw}",
    "that {kw} siren just went off again",
    "grocery run before the {kw} gets worse",
    "my street after the {kw} looks like a river",
    "hoping the {kw} passes quickly",
    "neighbors helping neighbors out here #{kw}",
    "radio says the {kw} peaks tonight",
    "stay off the roads, {kw} is no joke",
];

const RT_COMMENTS: &[&str] = &[
    "wow", "this is awful", "omg", "unreal", "heartbreaking", "stay safe",
    "can this be true?", "sharing", "everyone read this", "oh no",
    "thinking of them", "terrible news", "please retweet", "important",
    "watch this", "so scary", "hard to believe", "keep alert", "more info",
    "just saw this", "big if true", "confirmed?", "spread the word", "look",
];

const OUTSIDE_TEMPLATES: &[&str] = &[
    "blog update: {kw} timeline and what we know",
    "live tracker refreshed for the {kw}",
    "new post: preparing your home for the {kw}",
    "field notes from the {kw} perimeter",
    "photo essay: faces of the {kw}",
    "data roundup: {kw} by the numbers",
];

/// Reaction waves per event: accounts cluster on shared shock times.
const N_WAVES: usize = 32;

/// Relative news-feed volume by UTC hour: overnight lull, daytime peak.
const NEWS_CYCLE_WEIGHTS: [f64; 24] = [
    0.55, 0.45, 0.40, 0.40, 0.45, 0.55, 0.75, 0.95, 1.15, 1.30, 1.35, 1.35, 1.35, 1.35, 1.35,
    1.30, 1.30, 1.35, 1.40, 1.35, 1.20, 1.00, 0.80, 0.65,
];
const NEWS_CYCLE_MAX: f64 = 1.40;

const BOT_DESCRIPTIONS: &[&str] = &[
    "Breaking news aggregator. All the latest updates 24/7",
    "News alerts and live updates from trusted wires",
    "Automated weather and emergency alerts for your area",
    "Latest breaking stories retweeted as they happen",
    "Your hourly news robot. Headlines around the clock",
    "Aggregating world news, storms and breaking events",
    "Real time news relay. Unofficial. Links to sources",
    "Breaking: news, alerts, updates. Not affiliated",
];

const HUMAN_DESCRIPTIONS: &[&str] = &[
    "dad. runner. coffee first",
    "local teacher and weekend hiker",
    "opinions my own",
    "sports fan, amateur cook, cat person",
    "engineer by day, guitarist by night",
    "student. probably napping",
    "love this city",
    "photographer chasing light",
    "retired and loving it",
    "here for the memes",
];

/// Per-account sliding-window rate limiter.
struct RateLimiter {
    daily_cap: usize,
    semi_hour_cap: usize,
    times: Vec<Vec<i64>>,
}

impl RateLimiter {
    fn new(n_accounts: usize, daily_cap: usize, semi_hour_cap: usize) -> Self {
        RateLimiter {
            daily_cap,
            semi_hour_cap,
            times: vec![Vec::new(); n_accounts],
        }
    }

    /// Earliest time >= `t` at which the account can post without pushing
    /// any sliding window over its cap.
    fn earliest_allowed(&self, account: usize, mut t: i64) -> i64 {
        let times = &self.times[account];
        if let Some(&last) = times.last() {
            t = t.max(last);
        }
        loop {
            let mut moved = false;
            for (window, cap) in [(86_400i64, self.daily_cap), (1_800i64, self.semi_hour_cap)] {
                let idx = times.partition_point(|&s| s <= t - window);
                let count = times.len() - idx;
                if count >= cap {
                    // drop the oldest in-window post out of the window
                    let blocker = times[times.len() - cap];
                    let next = blocker + window;
                    if next > t {
                        t = next;
                        moved = true;
                    }
                }
            }
            if !moved {
                return t;
            }
        }
    }

    fn record(&mut self, account: usize, t: i64) {
        self.times[account].push(t);
    }
}

/// Cross-account duplicate-text registry: no two accounts may post the
/// same text within ten minutes of each other.
#[derive(Default)]
struct DuplicateRegistry {
    emitted: BTreeMap<String, Vec<(i64, usize)>>,
}

impl DuplicateRegistry {
    fn earliest_allowed(&self, text: &str, account: usize, mut t: i64) -> i64 {
        let Some(entries) = self.emitted.get(text) else {
            return t;
        };
        loop {
            let mut moved = false;
            for &(s, a) in entries {
                if a != account && (t - s).abs() <= 600 {
                    t = s + 601;
                    moved = true;
                }
            }
            if !moved {
                return t;
            }
        }
    }

    fn record(&mut self, text: &str, account: usize, t: i64) {
        self.emitted
            .entry(text.to_string())
            .or_default()
            .push((t, account));
    }
}

struct Generator<'a> {
    config: &'a SimConfig,
    rng: ChaCha20Rng,
    accounts: Vec<SimAccount>,
}

impl<'a> Generator<'a> {
    fn new(config: &'a SimConfig) -> Self {
        Generator {
            config,
            rng: ChaCha20Rng::seed_from_u64(config.seed),
            accounts: Vec::new(),
        }
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.random::<f64>() < p
    }

    fn range_i64(&mut self, lo: i64, hi_inclusive: i64) -> i64 {
        if lo >= hi_inclusive {
            return lo;
        }
        self.rng.random_range(lo..=hi_inclusive)
    }

    fn run(mut self) -> SimOutput {
        let span_days = (self.config.event.span_s() as f64 / 86_400.0).round().max(1.0) as usize;
        let has_population = self.config.bots.total() + self.config.n_humans > 0;

        // The scripted feed only materializes when someone is listening.
        let items = if has_population {
            self.build_feed()
        } else {
            Vec::new()
        };

        self.build_accounts();
        let waves = if has_population {
            self.build_waves(N_WAVES)
        } else {
            Vec::new()
        };
        let candidates = if has_population {
            self.build_candidates(&items, span_days, &waves)
        } else {
            Vec::new()
        };
        let (records, truth) = self.emit(candidates);
        let edges = self.build_edges();
        let labels = self.build_labels();
        SimOutput {
            records,
            edges,
            labels,
            truth,
        }
    }

    fn keyword(&mut self, idx: usize) -> String {
        self.config.event.keywords[idx % self.config.event.keywords.len()].clone()
    }

    fn build_feed(&mut self) -> Vec<FeedItem> {
        let event = &self.config.event;
        let feed = &self.config.feed;
        let mut items = Vec::new();
        let mut seq = 0usize;
        let spacing = (3_600.0 / feed.items_per_hour).max(1.0) as i64;
        let jitter = feed.jitter_s as i64;
        // The news cycle itself is diurnal: thin the feed overnight so
        // feed-driven bots inherit event-like hour patterns.
        let follow_news_cycle =
            feed.diurnal && self.config.temporal_noise == TemporalNoise::EventLike;
        let mut base = event.window_start;
        let emit = |gen: &mut Self, items: &mut Vec<FeedItem>, time: i64, seq: &mut usize| {
            let publisher_idx = gen.rng.random_range(0..gen.config.feed.publishers.len());
            let keyword_idx = gen.rng.random_range(0..gen.config.event.keywords.len());
            let phrase = HEADLINE_PHRASES[gen.rng.random_range(0..HEADLINE_PHRASES.len())];
            let keyword = gen.keyword(keyword_idx);
            let host = gen.config.feed.article_hosts
                [gen.rng.random_range(0..gen.config.feed.article_hosts.len())]
            .clone();
            let headline = format!("#{keyword} update {seq}: {phrase}");
            let article_url = format!("http://{host}/{}/{seq}", gen.config.event.name);
            let popularity = gen.rng.random::<f64>();
            items.push(FeedItem {
                seq: *seq,
                time,
                publisher_idx,
                keyword_idx,
                headline,
                article_url,
                popularity,
                rumor_idx: None,
            });
            *seq += 1;
        };
        while base <= event.window_end {
            let time = if jitter > 0 {
                (base + self.range_i64(0, jitter)).min(event.window_end)
            } else {
                base
            };
            if follow_news_cycle {
                let hour = crate::timeutil::hour_of_day(time) as usize;
                let keep = NEWS_CYCLE_WEIGHTS[hour] / NEWS_CYCLE_MAX;
                if !self.chance(keep) {
                    base += spacing;
                    continue;
                }
            }
            emit(&mut *self, &mut items, time, &mut seq);
            if self.chance(feed.burst_probability) && feed.burst_extra_max > 0 {
                let extra = self.rng.random_range(1..=feed.burst_extra_max);
                for _ in 0..extra {
                    let follow_up = time + self.range_i64(45, 600);
                    if follow_up <= event.window_end {
                        emit(&mut *self, &mut items, follow_up, &mut seq);
                    }
                }
            }
            base += spacing;
        }
        // Rumor carriage items: the carrying publisher posts the rumor
        // text; only Source bots react to these.
        for (rumor_idx, rumor) in self.config.rumors.iter().enumerate() {
            let carry_time =
                event.window_start + rumor.origin_offset_s + rumor.carry_delay_s as i64;
            for carrier in &rumor.carried_by {
                if carry_time > event.window_end {
                    continue;
                }
                let publisher_idx = self
                    .config
                    .feed
                    .publishers
                    .iter()
                    .position(|p| &p.handle == carrier)
                    .expect("validated carrier");
                items.push(FeedItem {
                    seq,
                    time: carry_time,
                    publisher_idx,
                    keyword_idx: 0,
                    headline: rumor.text.clone(),
                    article_url: String::new(),
                    popularity: 0.0,
                    rumor_idx: Some(rumor_idx),
                });
                seq += 1;
            }
        }
        items.sort_by_key(|i| (i.time, i.seq));
        items
    }

    fn build_accounts(&mut self) {
        let window_start = self.config.event.window_start;
        let bb = self.config.bot_behavior.clone();
        let hb = self.config.human_behavior.clone();
        let n_keywords = self.config.event.keywords.len();

        for kind in ArchetypeKind::ALL {
            for i in 0..self.config.bots.count(kind) {
                let handle = format!("{}_{i:03}", kind.handle_prefix());
                let obscure = self.chance(bb.obscure_client_fraction) && !bb.obscure_clients.is_empty();
                let client = if obscure {
                    bb.obscure_clients[self.rng.random_range(0..bb.obscure_clients.len())].clone()
                } else {
                    bb.clients[self.rng.random_range(0..bb.clients.len())].clone()
                };
                let flatten = self.rng.random::<f64>();
                let offbrand_client_share =
                    self.rng.random::<f64>() * bb.manual_client_share_max;
                let wave = self.rng.random_range(0..N_WAVES);
                let shortener = self.config.feed.shortener_hosts
                    [self.rng.random_range(0..self.config.feed.shortener_hosts.len())]
                .clone();
                let cited = if kind == ArchetypeKind::Source {
                    let mut publishers: Vec<String> = self
                        .config
                        .feed
                        .publishers
                        .iter()
                        .map(|p| p.handle.clone())
                        .collect();
                    publishers.shuffle(&mut self.rng);
                    publishers.truncate(bb.cited_handles_per_bot.max(1));
                    publishers.sort();
                    publishers
                } else {
                    Vec::new()
                };
                let keyword_subset = if kind == ArchetypeKind::Keyword {
                    let take = 1 + self.rng.random_range(0..n_keywords.max(1));
                    let mut all: Vec<usize> = (0..n_keywords).collect();
                    all.shuffle(&mut self.rng);
                    all.truncate(take.min(n_keywords));
                    all.sort_unstable();
                    all
                } else {
                    Vec::new()
                };
                // Niche-client bots are operator-curated: their profiles
                // and schedules drift toward human ranges, which is what
                // makes them the hard cases.
                let (age_days, followers, friends, url_probability) = if obscure {
                    let age = self.range_i64(200, 2_500);
                    let followers = self.range_i64(40, 1_500) as u64;
                    let ratio = 0.35 + self.rng.random::<f64>() * 2.15;
                    let friends = ((followers as f64 / ratio) as u64).max(10);
                    let url = 0.70 + self.rng.random::<f64>() * 0.25;
                    (age, followers, friends, url)
                } else {
                    let age = self
                        .range_i64(bb.account_age_days_min as i64, bb.account_age_days_max as i64);
                    let followers = self.range_i64(20, 500) as u64;
                    let friends = self.range_i64(100, 2_500) as u64;
                    let url = bb.url_probability_min
                        + self.rng.random::<f64>()
                            * (bb.url_probability_max - bb.url_probability_min);
                    (age, followers, friends, url)
                };
                let statuses = self.range_i64(5_000, 150_000) as u64;
                let created_at = window_start - age_days * 86_400 - self.range_i64(0, 86_399);
                let description =
                    BOT_DESCRIPTIONS[self.rng.random_range(0..BOT_DESCRIPTIONS.len())].to_string();
                self.accounts.push(SimAccount {
                    snapshot: AccountSnapshot {
                        user_id: handle.clone(),
                        handle: handle.clone(),
                        followers_count: followers,
                        friends_count: friends,
                        statuses_count: statuses,
                        created_at,
                        description,
                        verified: false,
                    },
                    handle,
                    role: Role::Bot(kind),
                    client,
                    shortener,
                    cited,
                    keyword_subset,
                    url_probability,
                    flatten,
                    wave,
                    offbrand_client_share,
                });
            }
        }

        for i in 0..self.config.n_humans {
            let handle = format!("resident_{i:04}");
            let client = hb.clients[self.rng.random_range(0..hb.clients.len())].clone();
            let followers = self.range_i64(40, 1_800) as u64;
            let ratio = 0.35 + self.rng.random::<f64>() * 2.15;
            let friends = ((followers as f64 / ratio) as u64).max(10);
            let age_days =
                self.range_i64(hb.account_age_days_min as i64, hb.account_age_days_max as i64);
            let url_probability = hb.url_probability_min
                + self.rng.random::<f64>() * (hb.url_probability_max - hb.url_probability_min);
            let description =
                HUMAN_DESCRIPTIONS[self.rng.random_range(0..HUMAN_DESCRIPTIONS.len())].to_string();
            let statuses = self.range_i64(300, 20_000) as u64;
            let created_at = window_start - age_days * 86_400 - self.range_i64(0, 86_399);
            // event junkies flatten their diurnal profile toward 24/7
            let flatten = self.rng.random::<f64>();
            let offbrand_client_share =
                self.rng.random::<f64>() * hb.automation_client_share_max;
            let wave = self.rng.random_range(0..N_WAVES);
            self.accounts.push(SimAccount {
                snapshot: AccountSnapshot {
                    user_id: handle.clone(),
                    handle: handle.clone(),
                    followers_count: followers,
                    friends_count: friends,
                    statuses_count: statuses,
                    created_at,
                    description,
                    verified: false,
                },
                handle,
                role: Role::Human,
                client,
                shortener: String::new(),
                cited: Vec::new(),
                keyword_subset: Vec::new(),
                url_probability,
                flatten,
                wave,
                offbrand_client_share,
            });
        }

        let has_population = !self.accounts.is_empty();
        if has_population {
            for publisher in &self.config.feed.publishers.clone() {
                let followers = self.range_i64(50_000, 900_000) as u64;
                let friends = self.range_i64(50, 900) as u64;
                let statuses = self.range_i64(20_000, 300_000) as u64;
                let created_at = window_start - self.range_i64(1_000, 2_600) * 86_400;
                self.accounts.push(SimAccount {
                    snapshot: AccountSnapshot {
                        user_id: publisher.handle.clone(),
                        handle: publisher.handle.clone(),
                        followers_count: followers,
                        friends_count: friends,
                        statuses_count: statuses,
                        created_at,
                        description: "Newsroom account. Verified wire updates".into(),
                        verified: publisher.verified,
                    },
                    handle: publisher.handle.clone(),
                    role: Role::Publisher,
                    client: "TweetDeck".into(),
                    shortener: String::new(),
                    cited: Vec::new(),
                    keyword_subset: Vec::new(),
                    url_probability: 1.0,
                    flatten: 0.0,
                    wave: 0,
                    offbrand_client_share: 0.0,
                });
            }
            for rumor in &self.config.rumors {
                if self.accounts.iter().any(|a| a.handle == rumor.origin_handle) {
                    continue;
                }
                let followers = self.range_i64(10, 5_000) as u64;
                let friends = self.range_i64(10, 500) as u64;
                let statuses = self.range_i64(1, 50) as u64;
                let created_at = window_start - self.range_i64(0, 20) * 86_400;
                self.accounts.push(SimAccount {
                    snapshot: AccountSnapshot {
                        user_id: rumor.origin_handle.clone(),
                        handle: rumor.origin_handle.clone(),
                        followers_count: followers,
                        friends_count: friends,
                        statuses_count: statuses,
                        created_at,
                        description: String::new(),
                        verified: false,
                    },
                    handle: rumor.origin_handle.clone(),
                    role: Role::RumorOrigin,
                    client: "web".into(),
                    shortener: String::new(),
                    cited: Vec::new(),
                    keyword_subset: Vec::new(),
                    url_probability: 0.0,
                    flatten: 0.0,
                    wave: 0,
                    offbrand_client_share: 0.0,
                });
            }
        }
    }

    fn short_link(&self, account_idx: usize, item_seq: usize) -> String {
        let code = (account_idx as u64)
            .wrapping_mul(1_000_003)
            .wrapping_add(item_seq as u64 * 97);
        format!("http://{}/{code:x}", self.accounts[account_idx].shortener)
    }

    /// Diurnal, bursty activity times; one sampler for humans and, in
    /// event-like mode, for bots too, so the two classes are temporally
    /// indistinguishable the way short event windows make them.
    ///
    /// When a reaction wave is given, most posting slots cluster around
    /// the wave's shared shock times: during a high-impact event the
    /// shock structure, not the account's nature, drives when everyone
    /// posts.
    #[allow(clippy::too_many_arguments)]
    fn draw_activity_times(
        &mut self,
        per_day: i64,
        span_days: usize,
        flatten: f64,
        burst_probability: f64,
        burst_extra_max: usize,
        hour_weights: &[f64; 24],
        wave: Option<&[i64]>,
    ) -> Vec<i64> {
        let window_start = self.config.event.window_start;
        let window_end = self.config.event.window_end;
        let mean_weight: f64 = hour_weights.iter().sum::<f64>() / 24.0;
        let own_weights: Vec<f64> = hour_weights
            .iter()
            .map(|w| w + flatten * (mean_weight - w))
            .collect();
        let weight_total: f64 = own_weights.iter().sum();
        let total = (per_day as usize) * span_days;
        // accounts in the same wave react to the same shocks with their
        // own small lag
        let personal_lag = self.range_i64(-420, 420);
        let mut times = Vec::new();
        for _ in 0..total {
            let base = match wave {
                Some(shocks) if !shocks.is_empty() && self.chance(0.8) => {
                    let shock = shocks[self.rng.random_range(0..shocks.len())];
                    shock + personal_lag + self.range_i64(-900, 900)
                }
                _ => {
                    let day = self.rng.random_range(0..span_days) as i64;
                    let mut pick = self.rng.random::<f64>() * weight_total;
                    let mut hour = 0i64;
                    for (h, w) in own_weights.iter().enumerate() {
                        pick -= w;
                        if pick <= 0.0 {
                            hour = h as i64;
                            break;
                        }
                    }
                    window_start + day * 86_400 + hour * 3_600 + self.range_i64(0, 3_599)
                }
            };
            times.push(base);
            if self.chance(burst_probability) && burst_extra_max > 0 {
                let extra = self.rng.random_range(1..=burst_extra_max);
                let mut t = base;
                for _ in 0..extra {
                    t += self.range_i64(45, 900);
                    times.push(t);
                }
            }
        }
        times.retain(|&t| (window_start..=window_end).contains(&t));
        times.sort_unstable();
        times
    }

    /// Shared shock times for the event's reaction waves. Every account
    /// joins one wave; wave membership is independent of class.
    fn build_waves(&mut self, n_waves: usize) -> Vec<Vec<i64>> {
        let window_start = self.config.event.window_start;
        let span = self.config.event.span_s();
        (0..n_waves)
            .map(|_| {
                let n_shocks = self.rng.random_range(2..=5);
                let mut shocks: Vec<i64> = (0..n_shocks)
                    .map(|_| window_start + self.range_i64(0, span - 1))
                    .collect();
                shocks.sort_unstable();
                shocks
            })
            .collect()
    }

    /// Client string for one post, honoring the configured off-brand
    /// share: bot operators occasionally post by hand via the web client,
    /// humans occasionally schedule posts through an automation platform.
    fn post_client(&mut self, account_idx: usize) -> String {
        let share = self.accounts[account_idx].offbrand_client_share;
        if share > 0.0 && self.chance(share) {
            match self.accounts[account_idx].role {
                Role::Bot(_) => "web".to_string(),
                Role::Human => "twitterfeed".to_string(),
                _ => self.accounts[account_idx].client.clone(),
            }
        } else {
            self.accounts[account_idx].client.clone()
        }
    }

    fn repost_candidate(
        &mut self,
        bot_idx: usize,
        kind: ArchetypeKind,
        item: &FeedItem,
        time: i64,
        seq: usize,
    ) -> Candidate {
        let publisher_handle = self.config.feed.publishers[item.publisher_idx].handle.clone();
        let with_link = self.chance(self.accounts[bot_idx].url_probability);
        let link = self.short_link(bot_idx, item.seq);
        let source = self.post_client(bot_idx);
        let (text, urls, retweet_of, cites) = match kind {
            ArchetypeKind::Source => {
                let text = if with_link {
                    format!("RT @{publisher_handle}: {} {link}", item.headline)
                } else {
                    format!("RT @{publisher_handle}: {}", item.headline)
                };
                (
                    text,
                    if with_link { vec![link] } else { vec![] },
                    Some(publisher_handle.clone()),
                    Some(publisher_handle),
                )
            }
            _ => {
                let text = if with_link {
                    format!("{} {link}", item.headline)
                } else {
                    item.headline.clone()
                };
                (text, if with_link { vec![link] } else { vec![] }, None, None)
            }
        };
        Candidate {
            time,
            account_idx: bot_idx,
            seq,
            text,
            source,
            urls,
            retweet_of,
            cites,
            rumor_idx: item.rumor_idx,
        }
    }

    fn outside_post_candidate(
        &mut self,
        bot_idx: usize,
        time: i64,
        seq: usize,
        post_no: usize,
    ) -> Candidate {
        let template = OUTSIDE_TEMPLATES[self.rng.random_range(0..OUTSIDE_TEMPLATES.len())];
        let keyword_idx = self.rng.random_range(0..self.config.event.keywords.len());
        let keyword = self.keyword(keyword_idx);
        let host = self.config.feed.article_hosts
            [self.rng.random_range(0..self.config.feed.article_hosts.len())]
        .clone();
        let url = format!("http://{host}/feed/{}/{post_no}", self.accounts[bot_idx].handle);
        let text = format!("{} {url}", template.replace("{kw}", &keyword));
        let source = self.post_client(bot_idx);
        Candidate {
            time,
            account_idx: bot_idx,
            seq,
            text,
            source,
            urls: vec![url],
            retweet_of: None,
            cites: None,
            rumor_idx: None,
        }
    }

    fn build_candidates(
        &mut self,
        items: &[FeedItem],
        span_days: usize,
        waves: &[Vec<i64>],
    ) -> Vec<Candidate> {
        let mut candidates = Vec::new();
        let mut seq = 0usize;
        let event = self.config.event.clone();
        let bb = self.config.bot_behavior.clone();
        let hb = self.config.human_behavior.clone();
        let metronomic = self.config.temporal_noise == TemporalNoise::Distinct;

        // Publishers post every item they script.
        for item in items {
            let publisher_handle = self.config.feed.publishers[item.publisher_idx].handle.clone();
            let Some(account_idx) = self.accounts.iter().position(|a| a.handle == publisher_handle)
            else {
                continue;
            };
            let (text, urls) = if item.article_url.is_empty() {
                (item.headline.clone(), vec![])
            } else {
                (
                    format!("{} {}", item.headline, item.article_url),
                    vec![item.article_url.clone()],
                )
            };
            candidates.push(Candidate {
                time: item.time,
                account_idx,
                seq,
                text,
                source: self.accounts[account_idx].client.clone(),
                urls,
                retweet_of: None,
                cites: None,
                rumor_idx: item.rumor_idx,
            });
            seq += 1;
        }

        let bot_indices: Vec<usize> = (0..self.accounts.len())
            .filter(|&i| matches!(self.accounts[i].role, Role::Bot(_)))
            .collect();

        let hour_weights: [f64; 24] = if metronomic {
            // strong diurnal curve: almost nothing overnight
            [
                0.05, 0.05, 0.05, 0.05, 0.1, 0.2, 0.5, 0.9, 1.2, 1.3, 1.3, 1.3, 1.4, 1.4, 1.3,
                1.3, 1.3, 1.4, 1.6, 1.7, 1.5, 1.0, 0.5, 0.2,
            ]
        } else {
            // event-like: people stay up, the dip is mild
            [
                0.7, 0.6, 0.5, 0.5, 0.5, 0.6, 0.8, 1.0, 1.2, 1.3, 1.3, 1.3, 1.3, 1.3, 1.3, 1.3,
                1.3, 1.4, 1.5, 1.5, 1.4, 1.2, 1.0, 0.8,
            ]
        };

        if metronomic {
            // Distinct mode: bots are schedulers. Reposts fire a fixed
            // delay after each item; outside-content bots post on a grid.
            for item in items {
                let publisher_handle =
                    self.config.feed.publishers[item.publisher_idx].handle.clone();
                for &bot_idx in &bot_indices {
                    let Role::Bot(kind) = self.accounts[bot_idx].role else {
                        unreachable!()
                    };
                    let eligible = match (kind, item.rumor_idx) {
                        // carriage items reach only bots citing the carrier
                        (ArchetypeKind::Source, _) => {
                            self.accounts[bot_idx].cited.contains(&publisher_handle)
                        }
                        (_, Some(_)) => false,
                        (ArchetypeKind::Keyword, None) => {
                            self.accounts[bot_idx].keyword_subset.contains(&item.keyword_idx)
                        }
                        (ArchetypeKind::PopularTweet, None) => {
                            item.popularity >= bb.popular_threshold
                        }
                        (ArchetypeKind::OutsideContent, None) => false,
                    };
                    if !eligible || !self.chance(bb.repost_probability) {
                        continue;
                    }
                    let time = item.time + bb.min_delay_s as i64;
                    let candidate = self.repost_candidate(bot_idx, kind, item, time, seq);
                    candidates.push(candidate);
                    seq += 1;
                }
            }
            let spacing = (3_600.0 / bb.outside_posts_per_hour).max(1.0) as i64;
            for &bot_idx in &bot_indices {
                let Role::Bot(ArchetypeKind::OutsideContent) = self.accounts[bot_idx].role else {
                    continue;
                };
                let mut t = event.window_start + self.range_i64(0, spacing);
                let mut post_no = 0usize;
                while t <= event.window_end {
                    let candidate = self.outside_post_candidate(bot_idx, t, seq, post_no);
                    candidates.push(candidate);
                    seq += 1;
                    post_no += 1;
                    t += spacing;
                }
            }
        } else {
            // Event-like mode: a short window shows every account - bot or
            // not - posting in event-driven bursts, so bot posting slots
            // come from the same diurnal sampler humans use; only the
            // content stays mechanical.
            for &bot_idx in &bot_indices {
                let Role::Bot(kind) = self.accounts[bot_idx].role else {
                    unreachable!()
                };
                let per_day =
                    self.range_i64(bb.tweets_per_day_min as i64, bb.tweets_per_day_max as i64);
                let flatten = self.accounts[bot_idx].flatten;
                let wave = waves.get(self.accounts[bot_idx].wave).map(Vec::as_slice);
                let times = self.draw_activity_times(
                    per_day,
                    span_days,
                    flatten,
                    hb.burst_probability,
                    hb.burst_extra_max,
                    &hour_weights,
                    wave,
                );
                let cited = self.accounts[bot_idx].cited.clone();
                let keyword_subset = self.accounts[bot_idx].keyword_subset.clone();
                let eligible: Vec<&FeedItem> = items
                    .iter()
                    .filter(|i| {
                        let publisher = &self.config.feed.publishers[i.publisher_idx].handle;
                        i.rumor_idx.is_none()
                            && match kind {
                                ArchetypeKind::Source => cited.contains(publisher),
                                ArchetypeKind::Keyword => {
                                    keyword_subset.contains(&i.keyword_idx)
                                }
                                ArchetypeKind::PopularTweet => {
                                    i.popularity >= bb.popular_threshold
                                }
                                ArchetypeKind::OutsideContent => false,
                            }
                    })
                    .collect();
                let mut carriage: Vec<(&FeedItem, bool)> = if kind == ArchetypeKind::Source {
                    items
                        .iter()
                        .filter(|i| {
                            i.rumor_idx.is_some()
                                && cited
                                    .contains(&self.config.feed.publishers[i.publisher_idx].handle)
                        })
                        .map(|i| (i, false))
                        .collect()
                } else {
                    Vec::new()
                };
                let mut post_no = 0usize;
                for t in times {
                    if let Some(slot) = carriage
                        .iter()
                        .position(|(item, done)| !done && item.time <= t)
                    {
                        let item = carriage[slot].0;
                        carriage[slot].1 = true;
                        let candidate = self.repost_candidate(bot_idx, kind, item, t, seq);
                        candidates.push(candidate);
                        seq += 1;
                        continue;
                    }
                    if kind == ArchetypeKind::OutsideContent {
                        let candidate = self.outside_post_candidate(bot_idx, t, seq, post_no);
                        candidates.push(candidate);
                        seq += 1;
                        post_no += 1;
                        continue;
                    }
                    let pos = eligible.partition_point(|i| i.time <= t);
                    if pos == 0 {
                        continue;
                    }
                    // repost one of the half-dozen freshest eligible items
                    let lo = pos.saturating_sub(6);
                    let slot = lo + self.rng.random_range(0..(pos - lo));
                    let item = eligible[slot];
                    let candidate = self.repost_candidate(bot_idx, kind, item, t, seq);
                    candidates.push(candidate);
                    seq += 1;
                }
            }
        }

        // Humans: diurnal bursty activity with occasional feed retweets.
        let regular_items: Vec<&FeedItem> =
            items.iter().filter(|i| i.rumor_idx.is_none()).collect();
        let human_indices: Vec<usize> = (0..self.accounts.len())
            .filter(|&i| self.accounts[i].role == Role::Human)
            .collect();
        for &human_idx in &human_indices {
            let per_day =
                self.range_i64(hb.tweets_per_day_min as i64, hb.tweets_per_day_max as i64);
            let flatten = self.accounts[human_idx].flatten;
            let wave = if metronomic {
                None
            } else {
                waves.get(self.accounts[human_idx].wave).map(Vec::as_slice)
            };
            let times = self.draw_activity_times(
                per_day,
                span_days,
                flatten,
                hb.burst_probability,
                hb.burst_extra_max,
                &hour_weights,
                wave,
            );
            for t in times {
                let retweet = !regular_items.is_empty() && self.chance(hb.retweet_probability);
                if retweet {
                    // retweet something that already exists
                    let pos = regular_items.partition_point(|i| i.time <= t);
                    if pos == 0 {
                        continue;
                    }
                    let item = regular_items[self.rng.random_range(0..pos)];
                    let publisher =
                        self.config.feed.publishers[item.publisher_idx].handle.clone();
                    let comment = if self.chance(0.5) {
                        Some(RT_COMMENTS[self.rng.random_range(0..RT_COMMENTS.len())])
                    } else {
                        None
                    };
                    let core = format!("RT @{publisher}: {} {}", item.headline, item.article_url);
                    let text = match comment {
                        Some(c) => format!("{c} {core}"),
                        None => core,
                    };
                    let source = self.post_client(human_idx);
                    candidates.push(Candidate {
                        time: t,
                        account_idx: human_idx,
                        seq,
                        text,
                        source,
                        urls: vec![item.article_url.clone()],
                        retweet_of: Some(publisher.clone()),
                        cites: Some(publisher),
                        rumor_idx: None,
                    });
                    seq += 1;
                } else {
                    let template =
                        HUMAN_TEMPLATES[self.rng.random_range(0..HUMAN_TEMPLATES.len())];
                    let keyword_idx = self.rng.random_range(0..event.keywords.len());
                    let keyword = self.keyword(keyword_idx);
                    let mut text = template.replace("{kw}", &keyword);
                    let mut urls = Vec::new();
                    if self.chance(self.accounts[human_idx].url_probability) {
                        let url = if self.chance(0.4) {
                            let host = self.config.feed.shortener_hosts
                                [self.rng.random_range(0..self.config.feed.shortener_hosts.len())]
                            .clone();
                            format!("http://{host}/{seq:x}h")
                        } else {
                            let host = self.config.feed.article_hosts
                                [self.rng.random_range(0..self.config.feed.article_hosts.len())]
                            .clone();
                            format!("http://{host}/shared/{seq}")
                        };
                        text = format!("{text} {url}");
                        urls.push(url);
                    }
                    let source = self.post_client(human_idx);
                    candidates.push(Candidate {
                        time: t,
                        account_idx: human_idx,
                        seq,
                        text,
                        source,
                        urls,
                        retweet_of: None,
                        cites: None,
                        rumor_idx: None,
                    });
                    seq += 1;
                }
            }
        }

        // Rumors: the origin post, then human pickups starting immediately.
        for (rumor_idx, rumor) in self.config.rumors.iter().enumerate() {
            let origin_time = event.window_start + rumor.origin_offset_s;
            let Some(origin_idx) = self
                .accounts
                .iter()
                .position(|a| a.handle == rumor.origin_handle)
            else {
                continue;
            };
            candidates.push(Candidate {
                time: origin_time,
                account_idx: origin_idx,
                seq,
                text: rumor.text.clone(),
                source: self.accounts[origin_idx].client.clone(),
                urls: vec![],
                retweet_of: None,
                cites: None,
                rumor_idx: Some(rumor_idx),
            });
            seq += 1;

            let mut pool = human_indices.clone();
            pool.shuffle(&mut self.rng);
            pool.truncate(rumor.human_pickups);
            let n = pool.len().max(1) as i64;
            for (i, human_idx) in pool.into_iter().enumerate() {
                let offset = rumor.first_pickup_delay_s as i64
                    + (i as i64) * (rumor.pickup_spread_s as i64) / n
                    + self.range_i64(0, 30);
                let t = origin_time + offset;
                if t > event.window_end {
                    continue;
                }
                let core = format!("RT @{}: {}", rumor.origin_handle, rumor.text);
                let text = if i == 0 {
                    core
                } else {
                    format!("{} {core}", RT_COMMENTS[(rumor_idx * 7 + i) % RT_COMMENTS.len()])
                };
                let source = self.post_client(human_idx);
                candidates.push(Candidate {
                    time: t,
                    account_idx: human_idx,
                    seq,
                    text,
                    source,
                    urls: vec![],
                    retweet_of: Some(rumor.origin_handle.clone()),
                    cites: None,
                    rumor_idx: Some(rumor_idx),
                });
                seq += 1;
            }
        }

        candidates
    }

    fn emit(&mut self, mut candidates: Vec<Candidate>) -> (Vec<TweetRecord>, GroundTruth) {
        candidates.sort_by(|a, b| {
            a.time
                .cmp(&b.time)
                .then_with(|| a.account_idx.cmp(&b.account_idx))
                .then_with(|| a.seq.cmp(&b.seq))
        });
        let mut limiter = RateLimiter::new(
            self.accounts.len(),
            self.config.policy.daily_cap,
            self.config.policy.semi_hour_cap,
        );
        let mut registry = DuplicateRegistry::default();
        let mut emissions: Vec<(i64, usize, Candidate)> = Vec::new();
        for candidate in candidates {
            let mut t = candidate.time.max(self.config.event.window_start);
            loop {
                let by_rate = limiter.earliest_allowed(candidate.account_idx, t);
                let by_dupes = registry.earliest_allowed(&candidate.text, candidate.account_idx, by_rate);
                if by_dupes == t {
                    break;
                }
                t = by_dupes;
            }
            if t > self.config.event.window_end {
                continue;
            }
            limiter.record(candidate.account_idx, t);
            registry.record(&candidate.text, candidate.account_idx, t);
            emissions.push((t, candidate.account_idx, candidate));
        }
        emissions.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then_with(|| self.accounts[a.1].handle.cmp(&self.accounts[b.1].handle))
                .then_with(|| a.2.seq.cmp(&b.2.seq))
        });

        let mut truth = GroundTruth {
            seed: self.config.seed,
            accounts: BTreeMap::new(),
            totals: TruthTotals::default(),
            rumors: BTreeMap::new(),
        };
        for account in &self.accounts {
            let (role, archetype) = match account.role {
                Role::Bot(kind) => ("bot", Some(kind.as_str().to_string())),
                Role::Human => ("human", None),
                Role::Publisher => ("publisher", None),
                Role::RumorOrigin => ("rumor_origin", None),
            };
            truth.accounts.insert(
                account.handle.clone(),
                AccountTruth {
                    role: role.to_string(),
                    archetype,
                    client: account.client.clone(),
                    cited_handles: account.cited.clone(),
                    ..AccountTruth::default()
                },
            );
        }
        for (rumor_idx, rumor) in self.config.rumors.iter().enumerate() {
            let _ = rumor_idx;
            truth.rumors.insert(
                rumor.name.clone(),
                RumorTruth {
                    origin_handle: rumor.origin_handle.clone(),
                    origin_time: self.config.event.window_start + rumor.origin_offset_s,
                    ..RumorTruth::default()
                },
            );
        }

        let mut records = Vec::with_capacity(emissions.len());
        let mut authors = std::collections::BTreeSet::new();
        for (tweet_seq, (t, account_idx, candidate)) in emissions.into_iter().enumerate() {
            let account = &self.accounts[account_idx];
            let record = TweetRecord {
                tweet_id: format!("t{tweet_seq:07}"),
                author_id: account.handle.clone(),
                created_at: t,
                text: candidate.text.clone(),
                source: candidate.source.clone(),
                retweet_of_author: candidate.retweet_of.clone(),
                urls: candidate.urls.clone(),
                author: account.snapshot.clone(),
            };
            authors.insert(account.handle.clone());
            truth.totals.total_tweets += 1;
            if !record.urls.is_empty() {
                truth.totals.tweets_with_urls += 1;
            }
            if record.is_retweet() {
                truth.totals.retweet_count += 1;
            }
            let entry = truth
                .accounts
                .get_mut(&account.handle)
                .expect("account registered");
            entry.tweets += 1;
            if !record.urls.is_empty() {
                entry.tweets_with_urls += 1;
            }
            if record.is_retweet() {
                entry.retweets += 1;
            }
            if let Some(cited) = &candidate.cites {
                *entry.citations.entry(cited.clone()).or_insert(0) += 1;
            }
            if let Some(rumor_idx) = candidate.rumor_idx {
                let rumor = &self.config.rumors[rumor_idx];
                *entry.rumor_pickups.entry(rumor.name.clone()).or_insert(0) += 1;
                let rumor_truth = truth.rumors.get_mut(&rumor.name).expect("rumor registered");
                match account.role {
                    Role::Human => {
                        if entry.rumor_pickups[&rumor.name] == 1 {
                            rumor_truth.human_pickup_users += 1;
                        }
                        rumor_truth.first_human_pickup = Some(
                            rumor_truth.first_human_pickup.map_or(t, |x| x.min(t)),
                        );
                    }
                    Role::Bot(ArchetypeKind::Source) => {
                        if entry.rumor_pickups[&rumor.name] == 1 {
                            rumor_truth.source_bot_pickup_users += 1;
                        }
                        rumor_truth.first_bot_pickup =
                            Some(rumor_truth.first_bot_pickup.map_or(t, |x| x.min(t)));
                    }
                    _ => {}
                }
            }
            records.push(record);
        }
        truth.totals.unique_users = authors.len();
        (records, truth)
    }

    fn build_edges(&mut self) -> FollowEdgeSet {
        let mut edges = FollowEdgeSet::new();
        if self.accounts.is_empty() {
            return edges;
        }
        let publishers: Vec<String> = self
            .config
            .feed
            .publishers
            .iter()
            .map(|p| p.handle.clone())
            .collect();
        let bots: Vec<String> = self
            .accounts
            .iter()
            .filter(|a| matches!(a.role, Role::Bot(_)))
            .map(|a| a.handle.clone())
            .collect();
        let humans: Vec<String> = self
            .accounts
            .iter()
            .filter(|a| a.role == Role::Human)
            .map(|a| a.handle.clone())
            .collect();

        for account in &self.accounts {
            if let Role::Bot(kind) = account.role {
                if kind == ArchetypeKind::Source {
                    for cited in &account.cited {
                        let _ = edges.insert(account.handle.clone(), cited.clone());
                    }
                } else {
                    let n = 1 + self.rng.random_range(0..publishers.len().min(3));
                    let mut picks = publishers.clone();
                    picks.shuffle(&mut self.rng);
                    for publisher in picks.into_iter().take(n) {
                        let _ = edges.insert(account.handle.clone(), publisher);
                    }
                }
            }
        }
        let follow = self.config.follow;
        for human in &humans {
            if !bots.is_empty() && self.chance(follow.human_follows_bot_probability) {
                let n = 1 + self.rng.random_range(0..follow.bots_followed_max.max(1));
                for _ in 0..n {
                    let bot = bots.choose(&mut self.rng).expect("non-empty").clone();
                    let _ = edges.insert(human.clone(), bot);
                }
            }
            if self.chance(follow.human_follows_publisher_probability) {
                let n = 1 + self.rng.random_range(0..follow.publishers_followed_max.max(1));
                for _ in 0..n {
                    let publisher = publishers.choose(&mut self.rng).expect("non-empty").clone();
                    let _ = edges.insert(human.clone(), publisher);
                }
            }
            if humans.len() > 1 && self.chance(follow.human_follows_human_probability) {
                let n = 1 + self.rng.random_range(0..follow.humans_followed_max.max(1));
                for _ in 0..n {
                    let other = humans.choose(&mut self.rng).expect("non-empty").clone();
                    if other != *human {
                        let _ = edges.insert(human.clone(), other);
                    }
                }
            }
        }
        edges
    }

    fn build_labels(&self) -> LabelMap {
        let labels = self.accounts.iter().filter_map(|account| match account.role {
            Role::Bot(_) => Some(AccountLabel {
                user_id: account.handle.clone(),
                label: Label::Bot,
            }),
            Role::Human => Some(AccountLabel {
                user_id: account.handle.clone(),
                label: Label::NonBot,
            }),
            _ => None,
        });
        LabelMap::from_labels(labels).expect("simulated handles are unique")
    }
}
