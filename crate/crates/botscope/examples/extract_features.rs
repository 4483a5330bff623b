//! Per-account feature extraction: the user-based (F1) fields, the
//! temporal extras that complete F2, and the exported design matrix.
//!
//! Run with: `cargo run --example extract_features`

use botscope::corpus::Label;
use botscope::features::{
    build_design_matrix, extract_features, AutomationSources, FeatureSet, F2_COLUMNS,
};
use botscope::simulator::{simulate, SimConfig};

fn main() {
    let config = SimConfig::with_seed(5);
    let output = simulate(&config).expect("default config");
    let automation = AutomationSources::default_list();

    // walk one bot and one human through full extraction
    let snapshots = botscope::corpus::latest_snapshots(&output.records);
    let mut shown = Vec::new();
    for wanted in [Label::Bot, Label::NonBot] {
        let user = output.labels.users_with(wanted)[0].to_string();
        let tweets: Vec<_> = output
            .records
            .iter()
            .filter(|r| r.author_id == user)
            .cloned()
            .collect();
        let vector = extract_features(&snapshots[&user], &tweets, &config.event, &automation, FeatureSet::F2);
        shown.push((wanted, vector));
    }

    println!("{:28} {:>14} {:>14}", "feature", shown[0].0.to_string(), shown[1].0.to_string());
    for (i, name) in F2_COLUMNS.iter().enumerate() {
        let a = shown[0].1.to_row(FeatureSet::F2)[i];
        let b = shown[1].1.to_row(FeatureSet::F2)[i];
        println!("{name:28} {a:>14.3} {b:>14.3}");
    }

    // the full design matrix, exported in the CSV interchange format
    let matrix = build_design_matrix(&output.labels, &output.records, &config.event, &automation, FeatureSet::F2);
    println!(
        "\ndesign matrix: {} accounts x {} features ({} labeled accounts had no tweets)",
        matrix.n_rows(),
        matrix.n_cols(),
        matrix.skipped_accounts.len()
    );
    let mut csv = Vec::new();
    matrix.write_csv(&mut csv).unwrap();
    let csv = String::from_utf8(csv).unwrap();
    println!("\nfirst rows of the exported CSV:");
    for line in csv.lines().take(4) {
        let short: String = line.chars().take(100).collect();
        println!("  {short}...");
    }
}
