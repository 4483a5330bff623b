//! Client-source categorization: how bot and human posting clients split
//! into automation platforms vs interactive clients, and how the bot
//! tooling mix shifted between a 2011-style and a 2013-style event.
//!
//! Run with: `cargo run --example source_categories`

use botscope::corpus::Label;
use botscope::provenance::{categorize_sources, SourceCategory, SourceCategoryTable};
use botscope::simulator::{simulate, SimConfig};

fn print_breakdown(title: &str, output: &botscope::simulator::SimOutput, table: &SourceCategoryTable) {
    let breakdown = categorize_sources(&output.records, &output.labels, table);
    println!("{title}");
    for class in [Label::Bot, Label::NonBot] {
        let stats = breakdown.class(class);
        println!("  {class} ({} tweets):", stats.total_tweets);
        for category in [
            SourceCategory::AutomationPlatform,
            SourceCategory::InteractiveClient,
            SourceCategory::Other,
        ] {
            let share = stats.category_share(category);
            if share > 0.0 {
                println!("    {category:20} {:>5.1}%", share * 100.0);
            }
        }
        let top: Vec<String> = stats
            .raw_ranking
            .iter()
            .take(4)
            .map(|(s, c)| format!("{s} ({c})"))
            .collect();
        println!("    top clients: {}", top.join(", "));
    }
    println!();
}

fn main() {
    let table = SourceCategoryTable::default_table();

    let output_2013 = simulate(&SimConfig::with_seed(2013)).expect("default config");
    print_breakdown("2013-style event (web-automation tooling era):", &output_2013, &table);

    // a 2011-style bot population posted through desktop and phone
    // clients far more often
    let mut config = SimConfig::with_seed(2011);
    config.bot_behavior.clients = vec![
        "twitterfeed".into(),
        "TweetDeck".into(),
        "web".into(),
        "Twitter for iPhone".into(),
        "PageBase.Net".into(),
        "Echofon".into(),
        "Mobile Web".into(),
    ];
    config.bot_behavior.obscure_client_fraction = 0.0;
    let output_2011 = simulate(&config).expect("config validates");
    print_breakdown("2011-style event (API and desktop client era):", &output_2011, &table);

    let share = |output: &botscope::simulator::SimOutput| {
        categorize_sources(&output.records, &output.labels, &table)
            .class(Label::Bot)
            .category_share(SourceCategory::AutomationPlatform)
    };
    println!(
        "bot automation-platform share moved {:.1}% -> {:.1}% between the two eras",
        share(&output_2011) * 100.0,
        share(&output_2013) * 100.0
    );
}
