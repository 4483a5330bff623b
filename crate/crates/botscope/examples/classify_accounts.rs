//! Train and evaluate the gain-ratio tree on simulated accounts: build
//! both feature sets, cross-validate, and rank features by information
//! gain.
//!
//! Run with: `cargo run --example classify_accounts`

use botscope::classifier::{cross_validate, predict, rank_features_by_gain, train, Class, TrainParams};
use botscope::features::{build_design_matrix, AutomationSources, FeatureSet};
use botscope::simulator::{simulate, BotMix, SimConfig};

fn main() {
    let mut config = SimConfig::with_seed(7);
    config.bots = BotMix { popular_tweet: 15, keyword: 15, source: 15, outside_content: 15 };
    config.n_humans = 60;
    let output = simulate(&config).expect("config validates");
    println!(
        "simulated {} tweets by {} bots + {} humans\n",
        output.truth.totals.total_tweets,
        config.bots.total(),
        config.n_humans
    );

    let automation = AutomationSources::default_list();
    let params = TrainParams::default();

    for set in [FeatureSet::F1, FeatureSet::F2] {
        let matrix = build_design_matrix(&output.labels, &output.records, &config.event, &automation, set);
        let cv = cross_validate(&matrix.rows, &matrix.labels, 10, 7, &params).expect("both classes >= k");
        println!(
            "{set} ({} features): accuracy {:.4}  precision {:.4}  recall {:.4}  roc_auc {:.4}",
            matrix.n_cols(),
            cv.report.accuracy,
            cv.report.precision,
            cv.report.recall,
            cv.report.roc_auc
        );
    }

    // feature ranking on the user-based set
    let f1 = build_design_matrix(&output.labels, &output.records, &config.event, &automation, FeatureSet::F1);
    let ranks = rank_features_by_gain(&f1.rows, &f1.labels);
    println!("\nfeatures by single-split information gain:");
    for (i, rank) in ranks.iter().enumerate() {
        println!("  {}. {:28} {:.4}", i + 1, f1.columns[rank.feature_index], rank.gain);
    }

    // a full tree on all rows, then a couple of predictions
    let tree = train(&f1.rows, &f1.labels, &params).expect("non-empty matrix");
    println!("\ntrained tree: depth {}, {} training rows", tree.depth(), f1.n_rows());
    let mut shown = 0;
    for (user, row) in f1.user_ids.iter().zip(&f1.rows) {
        let (class, probability) = predict(&tree, row).expect("matching arity");
        if class == Class::Bot && shown < 3 {
            println!("  {user:20} -> {class} (p = {probability:.3})");
            shown += 1;
        }
    }
    println!("\nserialized tree round-trips through the node-per-line text format:");
    let text = tree.to_text();
    for line in text.lines().take(5) {
        println!("  {line}");
    }
    println!("  ... ({} lines total)", text.lines().count());
}
