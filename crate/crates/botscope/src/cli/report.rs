//! The `report` subcommand: one deterministic document aggregating every
//! analysis table, suitable for golden-file testing.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::ops::{read_category_table, read_corpus, read_event, read_labels, Ctx};
use super::{validation, CliError};
use crate::classifier::{cross_validate, rank_features_by_gain, TrainParams};
use crate::content::{expand_urls, hostname_rank_records, rumor_pickup, urls_of_class, OfflineResolver, RumorSpec, ShortenerSet};
use crate::corpus::{corpus_stats, Label, TweetRecord};
use crate::diffusion::{brokerage_reach, degree_stats, friends_of, FollowEdgeSet};
use crate::features::{build_design_matrix, AutomationSources, FeatureSet};
use crate::provenance::{
    annotate_verified, categorize_sources, top_sources, verified_map, verified_ratio,
};
use crate::timeutil;

#[allow(clippy::too_many_arguments)]
pub(super) fn report_cmd(
    out_dir: &Path,
    corpus: &Path,
    event: &Path,
    labels: &Path,
    edges_path: &Path,
    rumor: &Option<PathBuf>,
    resolver: &Option<PathBuf>,
    category_table: &Option<PathBuf>,
    seed: u64,
    k: usize,
    top: usize,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("report", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input_path("event", event);
    ctx.input_path("labels", labels);
    ctx.input_path("edges", edges_path);
    ctx.seed = Some(seed);
    ctx.input("k", k);
    ctx.input("top", top);

    let spec = read_event(event)?;
    let records = read_corpus(corpus, &spec, false)?;
    let label_map = read_labels(labels)?;
    let edges = FollowEdgeSet::from_file(edges_path).map_err(validation)?;
    let table = read_category_table(category_table)?;

    let mut doc = String::new();
    let _ = writeln!(doc, "botscope report :: event {}", spec.name);
    let _ = writeln!(
        doc,
        "window {} .. {}",
        timeutil::format_utc(spec.window_start),
        timeutil::format_utc(spec.window_end)
    );
    let _ = writeln!(doc, "keywords: {}", spec.keywords.join(", "));

    // corpus stats
    let stats = corpus_stats(&records);
    let _ = writeln!(doc, "\n== corpus");
    let _ = writeln!(doc, "total_tweets: {}", stats.total_tweets);
    let _ = writeln!(doc, "unique_users: {}", stats.unique_users);
    let _ = writeln!(doc, "tweets_with_urls: {}", stats.tweets_with_urls);
    let _ = writeln!(doc, "retweet_count: {}", stats.retweet_count);

    // mention sources + verified ratio over the bot class
    let bot_tweets: Vec<TweetRecord> = records
        .iter()
        .filter(|r| label_map.label_of(&r.author_id) == Label::Bot)
        .cloned()
        .collect();
    let verified = verified_map(records.iter().map(|r| &r.author));
    let mut tallies = top_sources(&bot_tweets, top);
    annotate_verified(&mut tallies, &verified);
    let _ = writeln!(doc, "\n== top mention sources (bot class)");
    let _ = writeln!(doc, "rank,handle,count,verified");
    for (i, t) in tallies.iter().enumerate() {
        let v = match t.verified {
            Some(true) => "verified",
            Some(false) => "non-verified",
            None => "unresolved",
        };
        let _ = writeln!(doc, "{},{},{},{}", i + 1, t.mentioned_handle, t.count, v);
    }
    let all_tallies = top_sources(&bot_tweets, usize::MAX);
    let ratio = verified_ratio(&all_tallies, &verified);
    let _ = writeln!(
        doc,
        "verified_sources: {} of {} distinct ({}), unresolved {}",
        ratio.verified_count,
        ratio.total_count,
        ratio
            .ratio
            .map(|r| format!("{r:.4}"))
            .unwrap_or_else(|| "undefined".into()),
        ratio.unresolved_count
    );

    // client source categories
    let breakdown = categorize_sources(&records, &label_map, &table);
    let _ = writeln!(doc, "\n== client source categories");
    let _ = writeln!(doc, "class,category,count,share");
    for (class, class_stats) in &breakdown.per_class {
        for (category, count) in &class_stats.by_category {
            let share = *count as f64 / class_stats.total_tweets.max(1) as f64;
            let _ = writeln!(doc, "{class},{category},{count},{share:.4}");
        }
    }
    let _ = writeln!(doc, "\n== top raw client sources per class");
    let _ = writeln!(doc, "class,rank,source,count");
    for (class, class_stats) in &breakdown.per_class {
        for (i, (source, count)) in class_stats.raw_ranking.iter().take(top).enumerate() {
            let _ = writeln!(doc, "{class},{},{source},{count}", i + 1);
        }
    }

    // URL hostnames per class, expanded when a resolver is supplied
    let _ = writeln!(doc, "\n== url hostnames");
    for class in [Label::Bot, Label::NonBot] {
        let mut url_records = urls_of_class(&records, &label_map, class);
        let ranking = hostname_rank_records(&url_records, top, false);
        let _ = writeln!(doc, "-- {class} (raw), {} occurrences", ranking.total_occurrences);
        let _ = writeln!(doc, "rank,hostname,count");
        for (i, (host, count)) in ranking.top.iter().enumerate() {
            let _ = writeln!(doc, "{},{host},{count}", i + 1);
        }
        if let Some(resolver_path) = resolver {
            let resolver_table = OfflineResolver::from_file(resolver_path).map_err(validation)?;
            expand_urls(&mut url_records, &resolver_table, &ShortenerSet::default_set());
            let expanded = hostname_rank_records(&url_records, top, true);
            let unresolved = url_records.iter().filter(|r| r.unresolved).count();
            let _ = writeln!(doc, "-- {class} (expanded), {unresolved} unresolved short links");
            let _ = writeln!(doc, "rank,hostname,count");
            for (i, (host, count)) in expanded.top.iter().enumerate() {
                let _ = writeln!(doc, "{},{host},{count}", i + 1);
            }
        }
    }
    if let Some(r) = resolver {
        ctx.input_path("resolver", r);
    }

    // brokerage + degree over the follower graph
    let bots: std::collections::BTreeSet<String> = label_map
        .users_with(Label::Bot)
        .into_iter()
        .map(str::to_string)
        .collect();
    let _ = writeln!(doc, "\n== brokerage");
    if bots.is_empty() {
        return Err(validation("labels contain no bot accounts for brokerage"));
    }
    let friends = friends_of(&bots, &edges);
    let brokerage = brokerage_reach(&bots, &friends, &edges).map_err(validation)?;
    let _ = writeln!(doc, "bots: {}", bots.len());
    let _ = writeln!(doc, "bot_friends: {}", friends.len());
    let _ = writeln!(doc, "bot_followers: {}", brokerage.bot_follower_count);
    let _ = writeln!(doc, "exclusive_followers: {}", brokerage.exclusive_follower_count);
    let _ = writeln!(doc, "exclusive_fraction: {:.4}", brokerage.exclusive_fraction);

    let degree = degree_stats(&edges, edges.nodes()).map_err(validation)?;
    let _ = writeln!(doc, "\n== follower graph degree");
    let _ = writeln!(doc, "node_count: {}", degree.node_count);
    let _ = writeln!(doc, "edge_count: {}", degree.edge_count);
    let _ = writeln!(doc, "average_degree: {:.5}", degree.average_degree);
    let _ = writeln!(
        doc,
        "undirected_average_degree: {:.5}",
        degree.undirected_average_degree
    );

    // rumor pickup
    if let Some(rumor_path) = rumor {
        ctx.input_path("rumor", rumor_path);
        let rumor_spec = RumorSpec::from_json_file(rumor_path).map_err(validation)?;
        let pickup =
            rumor_pickup(&records, &label_map, &rumor_spec, spec.window_end).map_err(validation)?;
        let _ = writeln!(doc, "\n== rumor: {}", rumor_spec.name);
        let _ = writeln!(doc, "origin: {}", timeutil::format_utc(rumor_spec.origin_time));
        let _ = writeln!(doc, "class,distinct_users,first_pickup_utc,latency_s,pre_origin_users");
        for (class, class_pickup) in &pickup.per_class {
            let _ = writeln!(
                doc,
                "{class},{},{},{},{}",
                class_pickup.count_distinct_users,
                class_pickup
                    .first_pickup_time
                    .map(timeutil::format_utc)
                    .unwrap_or_else(|| "absent".into()),
                class_pickup
                    .latency_s
                    .map(|l| l.to_string())
                    .unwrap_or_else(|| "absent".into()),
                class_pickup.pre_origin_users
            );
        }
    }

    // classifier under both feature sets plus the F1 feature ranking
    let automation = AutomationSources::default_list();
    let _ = writeln!(doc, "\n== classifier ({k}-fold CV, seed {seed})");
    let _ = writeln!(
        doc,
        "feature_set,accuracy,tp_rate,fp_rate,precision,recall,f_measure,roc_auc"
    );
    let mut matrices: BTreeMap<&str, crate::features::DesignMatrix> = BTreeMap::new();
    for (name, set) in [("F1", FeatureSet::F1), ("F2", FeatureSet::F2)] {
        let matrix = build_design_matrix(&label_map, &records, &spec, &automation, set);
        let cv = cross_validate(&matrix.rows, &matrix.labels, k, seed, &TrainParams::default())
            .map_err(validation)?;
        let r = cv.report;
        let _ = writeln!(
            doc,
            "{name},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4}",
            r.accuracy, r.tp_rate, r.fp_rate, r.precision, r.recall, r.f_measure, r.roc_auc
        );
        matrices.insert(name, matrix);
    }
    let f1 = &matrices["F1"];
    let ranks = rank_features_by_gain(&f1.rows, &f1.labels);
    let _ = writeln!(doc, "\n== feature ranking by information gain (F1)");
    let _ = writeln!(doc, "rank,feature,information_gain");
    for (i, r) in ranks.iter().enumerate() {
        let _ = writeln!(doc, "{},{},{:.6}", i + 1, f1.columns[r.feature_index], r.gain);
    }

    ctx.write("report.txt", &doc)?;
    println!("report with {} sections written", 8);
    ctx.finish()
}
