//! Generate a labeled synthetic event corpus with ground truth.
//!
//! Run with: `cargo run --example simulate_event`

use botscope::corpus::corpus_stats;
use botscope::simulator::{simulate, write_output, BotMix, SimConfig};

fn main() {
    let mut config = SimConfig::with_seed(20130415);
    config.bots = BotMix { popular_tweet: 8, keyword: 8, source: 8, outside_content: 8 };
    config.n_humans = 40;

    println!("simulating event {:?}", config.event.name);
    println!(
        "  window: {} .. {}",
        botscope::timeutil::format_utc(config.event.window_start),
        botscope::timeutil::format_utc(config.event.window_end)
    );
    println!("  {} bots across four archetypes, {} humans\n", config.bots.total(), config.n_humans);

    let output = simulate(&config).expect("config validates");

    let stats = corpus_stats(&output.records);
    println!("corpus:");
    println!("  total tweets:     {}", stats.total_tweets);
    println!("  unique users:     {}", stats.unique_users);
    println!("  tweets with URLs: {}", stats.tweets_with_urls);
    println!("  retweets:         {}", stats.retweet_count);
    println!("  follow edges:     {}", output.edges.edge_count());

    // the truth sidecar carries the generator's own counters
    assert_eq!(stats.total_tweets, output.truth.totals.total_tweets);
    println!("\nground truth agrees with corpus_stats on every counter");

    let mut by_archetype: std::collections::BTreeMap<&str, usize> = Default::default();
    for account in output.truth.accounts.values() {
        if let Some(kind) = &account.archetype {
            *by_archetype.entry(kind).or_default() += account.tweets;
        }
    }
    println!("\ntweets per bot archetype:");
    for (kind, tweets) in by_archetype {
        println!("  {kind:16} {tweets}");
    }

    let dir = std::env::temp_dir().join("botscope-example-sim");
    let paths = write_output(&output, &dir).expect("writable temp dir");
    println!("\nfiles written:");
    for path in [&paths.corpus, &paths.edges, &paths.labels, &paths.truth] {
        println!("  {}", path.display());
    }
    println!("\nsame seed, byte-identical files. Try the CLI:");
    println!("  botscope simulate --seed 20130415 --out my-event");
}
