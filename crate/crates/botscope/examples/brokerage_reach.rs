//! How many bot followers get event updates ONLY through bots? The
//! exclusive-reach (brokerage) computation plus follower-graph degree
//! statistics.
//!
//! Run with: `cargo run --example brokerage_reach`

use std::collections::BTreeSet;

use botscope::corpus::Label;
use botscope::diffusion::{brokerage_reach, degree_stats, friends_of, FollowEdgeSet};
use botscope::simulator::{simulate, SimConfig};

fn main() {
    // a tiny hand-built graph first: F1 follows only the bot, F2 follows
    // the bot and its source, so exactly half the followers are exclusive
    let edges = FollowEdgeSet::from_edges([
        ("f1", "relay_bot"),
        ("f2", "relay_bot"),
        ("f2", "newswire"),
        ("relay_bot", "newswire"),
    ])
    .unwrap();
    let bots: BTreeSet<String> = [String::from("relay_bot")].into();
    let friends = friends_of(&bots, &edges);
    let result = brokerage_reach(&bots, &friends, &edges).unwrap();
    println!("hand-built graph:");
    println!("  bot followers:       {}", result.bot_follower_count);
    println!("  exclusive followers: {}", result.exclusive_follower_count);
    println!("  exclusive fraction:  {:.2}\n", result.exclusive_fraction);

    // the same question on a simulated event
    let output = simulate(&SimConfig::with_seed(23)).expect("default config");
    let bots: BTreeSet<String> = output
        .labels
        .users_with(Label::Bot)
        .into_iter()
        .map(str::to_string)
        .collect();
    let friends = friends_of(&bots, &output.edges);
    let result = brokerage_reach(&bots, &friends, &output.edges).unwrap();
    println!("simulated event ({} follow edges):", output.edges.edge_count());
    println!("  bots:                {}", bots.len());
    println!("  bot friends:         {}", friends.len());
    println!("  bot followers:       {}", result.bot_follower_count);
    println!("  exclusive followers: {}", result.exclusive_follower_count);
    println!(
        "  exclusive fraction:  {:.2}% of bot followers have no direct edge to any bot friend",
        result.exclusive_fraction * 100.0
    );

    let stats = degree_stats(&output.edges, output.edges.nodes()).unwrap();
    println!("\nfollower-graph degree:");
    println!("  nodes: {}", stats.node_count);
    println!("  edges: {}", stats.edge_count);
    println!("  average degree (E/N):       {:.5}", stats.average_degree);
    println!("  undirected convention 2E/N: {:.5}", stats.undirected_average_degree);

    // the star-shaped regime: a large follower crowd each following one
    // of a few dozen bots pushes the average degree toward 1
    let mut star = FollowEdgeSet::new();
    for i in 0..40_000u32 {
        star.insert(format!("f{i:05}"), format!("bot{:02}", i % 97)).unwrap();
    }
    let stats = degree_stats(&star, star.nodes()).unwrap();
    println!(
        "\nstar graph (40,000 followers, 97 bots): average degree {:.5}",
        stats.average_degree
    );
}
