//! Rumor pickup by account class: who spread it, how fast, and whether
//! any bot touched it at all.
//!
//! Run with: `cargo run --example rumor_latency`

use botscope::content::{rumor_pickup, RumorSpec};
use botscope::corpus::Label;
use botscope::simulator::{simulate, SimConfig, SimRumor};
use botscope::timeutil;

fn main() {
    let mut config = SimConfig::with_seed(31);
    config.bot_behavior.repost_probability = 0.8;
    // two rumors: one carried by a publisher some bots cite, one that
    // never enters any bot's sources
    config.rumors = vec![
        SimRumor {
            name: "donation-hoax".into(),
            origin_handle: "charity_fund".into(),
            origin_offset_s: 3_600,
            text: "for every RT $1 goes to stormwatch victims".into(),
            human_pickups: 12,
            first_pickup_delay_s: 40,
            pickup_spread_s: 3 * 3_600,
            carried_by: vec!["newswire".into()],
            carry_delay_s: 6 * 3_600,
        },
        SimRumor {
            name: "school-closure".into(),
            origin_handle: "anon_tipline".into(),
            origin_offset_s: 10_000,
            text: "hearing every school closes for a week #bigstorm".into(),
            human_pickups: 9,
            first_pickup_delay_s: 60,
            pickup_spread_s: 2 * 3_600,
            carried_by: vec![],
            carry_delay_s: 0,
        },
    ];
    let output = simulate(&config).expect("config validates");

    for rumor_config in &config.rumors {
        let origin_time = config.event.window_start + rumor_config.origin_offset_s;
        let rumor = RumorSpec::new(
            rumor_config.name.clone(),
            origin_time,
            [rumor_config.text.clone()],
            Some(rumor_config.origin_handle.clone()),
        )
        .unwrap();
        let pickup =
            rumor_pickup(&output.records, &output.labels, &rumor, config.event.window_end).unwrap();

        println!("rumor {:?}", rumor.name);
        println!("  origin: {} by @{}", timeutil::format_utc(origin_time), rumor_config.origin_handle);
        for class in [Label::NonBot, Label::Bot, Label::Unlabeled] {
            let stats = pickup.class(class);
            match stats.latency_s {
                Some(latency) => println!(
                    "  {class:9} {} distinct users, first pickup after {latency} s",
                    stats.count_distinct_users
                ),
                None => println!("  {class:9} never picked it up"),
            }
        }
        println!();
    }

    println!("the carried rumor reaches source bots only after their cited");
    println!("publisher posts it; the uncarried one never reaches a bot at all.");
}
