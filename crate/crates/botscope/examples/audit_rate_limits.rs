//! Audit corpora against the platform posting rules: sliding daily and
//! semi-hourly caps plus the cross-account duplicate-content rule.
//!
//! Run with: `cargo run --example audit_rate_limits`

use botscope::corpus::{AccountSnapshot, TweetRecord};
use botscope::simulator::{audit_rate_limits, simulate, RateLimitPolicy, SimConfig};

fn tweet(user: &str, id: usize, at: i64, text: &str) -> TweetRecord {
    TweetRecord {
        tweet_id: format!("t{id}"),
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

fn main() {
    let policy = RateLimitPolicy::default();
    println!(
        "policy: {} tweets per sliding day, {} per sliding half hour\n",
        policy.daily_cap, policy.semi_hour_cap
    );

    // the simulator's own output always audits clean
    let output = simulate(&SimConfig::with_seed(3)).expect("default config");
    let violations = audit_rate_limits(&output.records, &policy);
    println!(
        "simulated corpus ({} tweets): {} violations",
        output.records.len(),
        violations.len()
    );

    // a hand-built flood: 1,001 posts inside one day
    let flood: Vec<TweetRecord> = (0..1_001)
        .map(|i| tweet("flooder", i, 10_000 + i as i64 * 60, &format!("update {i}")))
        .collect();
    println!("\nflood corpus (1,001 posts in a day):");
    for violation in audit_rate_limits(&flood, &policy) {
        println!("  [{}] {}: {}", violation.kind, violation.account, violation.detail);
    }

    // a burst that trips the semi-hourly cap
    let burst: Vec<TweetRecord> = (0..22)
        .map(|i| tweet("bursty", i, 5_000 + i as i64 * 10, &format!("burst {i}")))
        .collect();
    println!("\nburst corpus (22 posts in four minutes):");
    for violation in audit_rate_limits(&burst, &policy) {
        println!("  [{}] {}: {}", violation.kind, violation.account, violation.detail);
    }

    // identical text across two accounts within ten minutes
    let dupes = vec![
        tweet("acct_a", 1, 9_000, "breaking: copied alert text"),
        tweet("acct_b", 2, 9_300, "breaking: copied alert text"),
    ];
    println!("\nduplicate-content corpus:");
    for violation in audit_rate_limits(&dupes, &policy) {
        println!("  [{}] {}", violation.kind, violation.detail);
    }
}
