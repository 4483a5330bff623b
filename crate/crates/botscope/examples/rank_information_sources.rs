//! Where do bots get their content? Rank the accounts they cite via
//! @mentions and check how many of those sources are verified.
//!
//! Run with: `cargo run --example rank_information_sources`

use botscope::corpus::Label;
use botscope::provenance::{
    annotate_verified, extract_mentions, top_sources, verified_map, verified_ratio,
};
use botscope::simulator::{simulate, SimConfig};

fn main() {
    // mention grammar on its own first
    for text in [
        "RT @cnnbrk: blast downtown",
        "storm update via @GP_Today and @GP_Today",
        "email me@example.com is not a mention",
    ] {
        println!("{text:52} -> {:?}", extract_mentions(text));
    }

    let output = simulate(&SimConfig::with_seed(11)).expect("default config");
    let bot_tweets: Vec<_> = output
        .records
        .iter()
        .filter(|r| output.labels.label_of(&r.author_id) == Label::Bot)
        .cloned()
        .collect();
    println!("\n{} tweets by bot-labeled accounts", bot_tweets.len());

    let verified = verified_map(output.records.iter().map(|r| &r.author));
    let mut tallies = top_sources(&bot_tweets, 10);
    annotate_verified(&mut tallies, &verified);

    println!("\ntop mention sources cited by bots:");
    println!("  rank  handle            count  verified");
    for (i, tally) in tallies.iter().enumerate() {
        let verified = match tally.verified {
            Some(true) => "verified",
            Some(false) => "non-verified",
            None => "unresolved",
        };
        println!(
            "  {:>4}  {:16} {:>6}  {verified}",
            i + 1,
            tally.mentioned_handle,
            tally.count
        );
    }

    let all = top_sources(&bot_tweets, usize::MAX);
    let ratio = verified_ratio(&all, &verified);
    println!(
        "\nverified sources: {} of {} distinct mentioned accounts ({})",
        ratio.verified_count,
        ratio.total_count,
        ratio
            .ratio
            .map(|r| format!("{:.2}%", r * 100.0))
            .unwrap_or_else(|| "undefined".into())
    );
    println!("unresolved handles (no profile snapshot seen): {}", ratio.unresolved_count);
}
