//! URL analytics: hostname rankings, short-link expansion through an
//! offline table, and blocklist screening per class.
//!
//! Run with: `cargo run --example url_analysis`

use std::collections::BTreeMap;

use botscope::content::{
    blocklist_screen, expand_urls, hostname_rank, hostname_rank_records, urls_of_class,
    OfflineBlocklist, OfflineResolver, ShortenerSet,
};
use botscope::corpus::Label;
use botscope::simulator::{simulate, SimConfig};

fn main() {
    let output = simulate(&SimConfig::with_seed(17)).expect("default config");

    for class in [Label::Bot, Label::NonBot] {
        let ranking = hostname_rank(&output.records, &output.labels, class, 6);
        println!("top URL hostnames posted by {class} accounts ({} occurrences):", ranking.total_occurrences);
        for (i, (host, count)) in ranking.top.iter().enumerate() {
            println!("  {}. {host:24} {count}", i + 1);
        }
        println!();
    }

    // expand bot short links through an offline table covering a few of them
    let mut bot_urls = urls_of_class(&output.records, &output.labels, Label::Bot);
    let table: Vec<(String, String)> = bot_urls
        .iter()
        .filter(|r| r.hostname == "bit.ly")
        .take(40)
        .enumerate()
        .map(|(i, r)| {
            (
                r.raw_url.clone(),
                format!("http://landing{}.example/article", i % 5),
            )
        })
        .collect();
    let resolver = OfflineResolver::new(table);
    expand_urls(&mut bot_urls, &resolver, &ShortenerSet::default_set());
    let expanded = bot_urls.iter().filter(|r| r.expanded_url.is_some()).count();
    let unresolved = bot_urls.iter().filter(|r| r.unresolved).count();
    println!("expansion: {expanded} short links resolved, {unresolved} unknown to the table");
    let ranking = hostname_rank_records(&bot_urls, 5, true);
    println!("post-expansion hostnames:");
    for (i, (host, count)) in ranking.top.iter().enumerate() {
        println!("  {}. {host:24} {count}", i + 1);
    }

    // screen final URLs against a blocklist that names one landing host
    let blocklist = OfflineBlocklist::parse("landing0.example\n");
    let mut by_class = BTreeMap::new();
    by_class.insert(Label::Bot, bot_urls);
    by_class.insert(Label::NonBot, urls_of_class(&output.records, &output.labels, Label::NonBot));
    let report = blocklist_screen(&mut by_class, &blocklist).expect("offline client cannot fail");
    println!("\nblocklist screening:");
    for (class, screen) in &report.per_class {
        println!(
            "  {class:7} {} of {} URL occurrences flagged ({})",
            screen.flagged,
            screen.total_urls,
            screen
                .flagged_fraction()
                .map(|f| format!("{:.2}%", f * 100.0))
                .unwrap_or_else(|| "n/a".into())
        );
    }
}
