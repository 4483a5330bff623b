//! Labeled synthetic event corpora with ground truth.
//!
//! Four bot archetypes (popular-tweet, keyword, source, outside-content)
//! repost a scripted news feed under platform posting limits while humans
//! tweet diurnally and burstily from interactive clients. The output is a
//! corpus file, a follower-edge file, a labels file, and a truth sidecar —
//! the oracle substrate the analysis and classifier suites validate
//! against. Same seed, byte-identical output.

mod audit;
mod config;
mod generate;

pub use audit::{audit_rate_limits, Violation, ViolationKind};
pub use config::{
    default_event, ArchetypeKind, BotBehavior, BotMix, FeedConfig, FollowConfig, HumanBehavior,
    Publisher, RateLimitPolicy, SimConfig, SimConfigError, SimRumor, TemporalNoise,
};
pub use generate::{simulate, AccountTruth, GroundTruth, RumorTruth, SimOutput, TruthTotals};

use std::path::{Path, PathBuf};

/// Where [`write_output`] put each artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimPaths {
    pub corpus: PathBuf,
    pub edges: PathBuf,
    pub labels: PathBuf,
    pub truth: PathBuf,
}

/// Write the four output files under `dir`: `corpus.jsonl`, `edges.csv`,
/// `labels.csv`, `truth.json`. Files are byte-stable for a given seed.
pub fn write_output(output: &SimOutput, dir: impl AsRef<Path>) -> std::io::Result<SimPaths> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let paths = SimPaths {
        corpus: dir.join("corpus.jsonl"),
        edges: dir.join("edges.csv"),
        labels: dir.join("labels.csv"),
        truth: dir.join("truth.json"),
    };
    crate::corpus::write_corpus_file(&paths.corpus, &output.records)?;

    let mut edges_buf = Vec::new();
    output.edges.write(&mut edges_buf)?;
    std::fs::write(&paths.edges, edges_buf)?;

    let mut labels_buf = Vec::new();
    crate::corpus::write_labels(&mut labels_buf, &output.labels)?;
    std::fs::write(&paths.labels, labels_buf)?;

    let truth_json = serde_json::to_string_pretty(&output.truth)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
    std::fs::write(&paths.truth, truth_json + "\n")?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{corpus_stats, Label};
    use crate::provenance;

    #[test]
    fn zero_accounts_yield_empty_but_valid_output() {
        let mut config = SimConfig::with_seed(5);
        config.bots = BotMix { popular_tweet: 0, keyword: 0, source: 0, outside_content: 0 };
        config.n_humans = 0;
        let output = simulate(&config).unwrap();
        assert!(output.records.is_empty());
        assert!(output.labels.is_empty());
        assert_eq!(output.edges.edge_count(), 0);
        assert_eq!(output.truth.totals.total_tweets, 0);

        let dir = tempfile::tempdir().unwrap();
        let paths = write_output(&output, dir.path()).unwrap();
        assert!(paths.corpus.exists() && paths.edges.exists());
        assert!(paths.labels.exists() && paths.truth.exists());
        assert_eq!(std::fs::read_to_string(&paths.corpus).unwrap(), "");
    }

    #[test]
    fn single_source_bot_hourly_feed_posts_twenty_four_reposts() {
        let mut config = SimConfig::with_seed(11);
        config.event = crate::corpus::EventSpec::new(
            "day",
            ["stormwatch"],
            1_370_044_800,
            1_370_044_800 + 86_400,
        )
        .unwrap();
        config.bots = BotMix { popular_tweet: 0, keyword: 0, source: 1, outside_content: 0 };
        config.n_humans = 0;
        config.feed.items_per_hour = 1.0;
        config.feed.jitter_s = 0;
        config.feed.burst_probability = 0.0;
        config.feed.diurnal = false;
        config.temporal_noise = TemporalNoise::Distinct;
        config.feed.publishers = vec![Publisher { handle: "newswire".into(), verified: true }];
        config.bot_behavior.cited_handles_per_bot = 1;
        config.bot_behavior.repost_probability = 1.0;
        config.bot_behavior.url_probability_min = 1.0;
        config.bot_behavior.url_probability_max = 1.0;
        config.bot_behavior.min_delay_s = 60;
        config.bot_behavior.max_delay_s = 90;
        let output = simulate(&config).unwrap();

        let bot_tweets: Vec<_> = output
            .records
            .iter()
            .filter(|r| r.author_id.starts_with("wire_relay"))
            .collect();
        assert_eq!(bot_tweets.len(), 24);
        assert!(bot_tweets
            .iter()
            .all(|t| provenance::extract_mentions(&t.text) == vec!["newswire"]));
        assert!(audit_rate_limits(&output.records, &config.policy).is_empty());
    }

    #[test]
    fn same_seed_same_output_different_seed_differs() {
        let config = SimConfig::with_seed(77);
        let a = simulate(&config).unwrap();
        let b = simulate(&config).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.truth, b.truth);

        let c = simulate(&SimConfig::with_seed(78)).unwrap();
        assert_ne!(a.records, c.records);
    }

    #[test]
    fn written_files_are_byte_identical_across_runs() {
        let config = SimConfig::with_seed(13);
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let paths_a = write_output(&simulate(&config).unwrap(), dir_a.path()).unwrap();
        let paths_b = write_output(&simulate(&config).unwrap(), dir_b.path()).unwrap();
        for (a, b) in [
            (&paths_a.corpus, &paths_b.corpus),
            (&paths_a.edges, &paths_b.edges),
            (&paths_a.labels, &paths_b.labels),
            (&paths_a.truth, &paths_b.truth),
        ] {
            assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
        }
    }

    #[test]
    fn truth_totals_match_corpus_stats() {
        let output = simulate(&SimConfig::with_seed(3)).unwrap();
        let stats = corpus_stats(&output.records);
        assert_eq!(stats.total_tweets, output.truth.totals.total_tweets);
        assert_eq!(stats.unique_users, output.truth.totals.unique_users);
        assert_eq!(stats.tweets_with_urls, output.truth.totals.tweets_with_urls);
        assert_eq!(stats.retweet_count, output.truth.totals.retweet_count);
        assert!(stats.total_tweets > 0);
    }

    #[test]
    fn every_bot_tweet_is_attributable() {
        let output = simulate(&SimConfig::with_seed(9)).unwrap();
        // every account's sidecar tweet count matches the corpus, and
        // source bots only ever cite their configured handles
        for (handle, truth) in &output.truth.accounts {
            let actual = output
                .records
                .iter()
                .filter(|r| &r.author_id == handle)
                .count();
            assert_eq!(actual, truth.tweets, "tweet count mismatch for {handle}");
            if truth.role == "bot" && truth.archetype.as_deref() == Some("source") {
                for cited in truth.citations.keys() {
                    assert!(
                        truth.cited_handles.contains(cited),
                        "{handle} cited {cited} outside its configured set"
                    );
                }
            }
        }
        // no orphan content: every bot tweet traces to a feed item (the
        // headline marker), a cited handle (RT form), or the bot's own
        // outside feed (its URL path)
        for record in &output.records {
            if output.labels.label_of(&record.author_id) != Label::Bot {
                continue;
            }
            let from_feed_item = record.text.contains(" update ");
            let from_cited_handle = record.text.starts_with("RT @");
            let from_own_feed = record
                .urls
                .iter()
                .any(|u| u.contains(&format!("/feed/{}/", record.author_id)));
            assert!(
                from_feed_item || from_cited_handle || from_own_feed,
                "orphan bot content: {:?}",
                record.text
            );
        }
    }

    #[test]
    fn class_source_separation_is_recoverable() {
        let output = simulate(&SimConfig::with_seed(21)).unwrap();
        let table = provenance::SourceCategoryTable::default_table();
        let breakdown = provenance::categorize_sources(&output.records, &output.labels, &table);
        let bots = breakdown.class(Label::Bot);
        let humans = breakdown.class(Label::NonBot);
        assert!(bots.total_tweets > 0 && humans.total_tweets > 0);
        assert_eq!(
            bots.category_share(provenance::SourceCategory::AutomationPlatform),
            1.0
        );
        assert_eq!(
            humans.category_share(provenance::SourceCategory::InteractiveClient),
            1.0
        );
    }

    fn rumor(carried: Vec<String>) -> SimRumor {
        SimRumor {
            name: "donation-hoax".into(),
            origin_handle: "charity_fund".into(),
            origin_offset_s: 3_600,
            text: "for every RT $1 goes to stormwatch victims".into(),
            human_pickups: 8,
            first_pickup_delay_s: 45,
            pickup_spread_s: 4 * 3_600,
            carried_by: carried,
            carry_delay_s: 7_200,
        }
    }

    #[test]
    fn uncarried_rumor_reaches_humans_but_no_source_bot() {
        let mut config = SimConfig::with_seed(31);
        config.rumors = vec![rumor(vec![])];
        let output = simulate(&config).unwrap();
        let truth = &output.truth.rumors["donation-hoax"];
        assert!(truth.human_pickup_users > 0);
        assert_eq!(truth.source_bot_pickup_users, 0);
        // first human pickup is immediate (within a couple of minutes)
        let latency = truth.first_human_pickup.unwrap() - truth.origin_time;
        assert!((0..=180).contains(&latency), "latency {latency}");
    }

    #[test]
    fn carried_rumor_reaches_citing_source_bots_late() {
        let mut config = SimConfig::with_seed(33);
        config.bot_behavior.repost_probability = 1.0;
        config.rumors = vec![rumor(vec!["newswire".into()])];
        let output = simulate(&config).unwrap();
        let truth = &output.truth.rumors["donation-hoax"];
        assert!(truth.source_bot_pickup_users > 0);
        let bot_latency = truth.first_bot_pickup.unwrap() - truth.origin_time;
        let human_latency = truth.first_human_pickup.unwrap() - truth.origin_time;
        assert!(
            bot_latency >= 7_200,
            "bots can only pick the rumor up after carriage, got {bot_latency}"
        );
        assert!(human_latency < bot_latency);
        // only source bots citing the carrier picked it up
        for (handle, account) in &output.truth.accounts {
            if account.rumor_pickups.contains_key("donation-hoax") && account.role == "bot" {
                assert_eq!(account.archetype.as_deref(), Some("source"), "{handle}");
                assert!(account.cited_handles.contains(&"newswire".to_string()));
            }
        }
    }

    #[test]
    fn cited_feeds_dominate_bot_mention_ranking() {
        let mut config = SimConfig::with_seed(47);
        config.feed.publishers = vec![
            Publisher { handle: "newswire".into(), verified: true },
            Publisher { handle: "cityalerts".into(), verified: true },
            Publisher { handle: "stormdesk".into(), verified: false },
        ];
        config.bots = BotMix { popular_tweet: 0, keyword: 0, source: 8, outside_content: 0 };
        config.n_humans = 0;
        config.bot_behavior.cited_handles_per_bot = 3;
        let output = simulate(&config).unwrap();
        let bot_tweets: Vec<_> = output
            .records
            .iter()
            .filter(|r| output.labels.label_of(&r.author_id) == Label::Bot)
            .cloned()
            .collect();
        let top = provenance::top_sources(&bot_tweets, 10);
        let handles: Vec<&str> = top.iter().map(|t| t.mentioned_handle.as_str()).collect();
        assert_eq!(handles.len(), 3, "exactly the three cited feeds appear");
        for handle in ["cityalerts", "newswire", "stormdesk"] {
            assert!(handles.contains(&handle));
        }
        // and the truth sidecar carries the same citation counts
        let mut truth_counts: std::collections::BTreeMap<String, usize> = Default::default();
        for account in output.truth.accounts.values() {
            for (cited, count) in &account.citations {
                *truth_counts.entry(cited.clone()).or_default() += count;
            }
        }
        for tally in &top {
            assert_eq!(truth_counts[&tally.mentioned_handle], tally.count);
        }
    }

    #[test]
    fn bot_descriptions_rank_news_vocabulary_first() {
        let output = simulate(&SimConfig::with_seed(53)).unwrap();
        let snapshots = crate::corpus::latest_snapshots(&output.records);
        let bot_snapshots: Vec<_> = snapshots
            .iter()
            .filter(|(user, _)| output.labels.label_of(user) == Label::Bot)
            .map(|(_, snap)| snap)
            .collect();
        let ranked = provenance::description_word_frequency(
            bot_snapshots,
            &provenance::default_stopwords(),
        );
        let top3: Vec<&str> = ranked.iter().take(3).map(|(w, _)| w.as_str()).collect();
        assert!(top3.contains(&"news"), "expected \"news\" in top 3, got {top3:?}");
    }

    #[test]
    fn configured_shortener_mix_is_recoverable() {
        let mut config = SimConfig::with_seed(59);
        config.feed.shortener_hosts = vec!["bit.ly".into()];
        config.n_humans = 0;
        let output = simulate(&config).unwrap();
        let ranking =
            crate::content::hostname_rank(&output.records, &output.labels, Label::Bot, 1);
        assert_eq!(ranking.top[0].0, "bit.ly", "the single configured shortener dominates");
    }

    #[test]
    fn simulated_corpus_loads_back_identically() {
        let config = SimConfig::with_seed(41);
        let output = simulate(&config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let paths = write_output(&output, dir.path()).unwrap();
        let loaded = crate::corpus::load_corpus(
            &paths.corpus,
            &config.event,
            crate::corpus::LoadOptions { strict: true },
        )
        .unwrap();
        assert_eq!(loaded.records, output.records);
        assert_eq!(loaded.filtered_out, 0);
        assert_eq!(loaded.duplicates_dropped, 0);
    }
}
