//! Subcommand implementations.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::{runtime, validation, CliError, Command, MatrixSource, RunManifest};
use crate::classifier::{
    cross_validate, predict, rank_features_by_gain, train, DecisionTree, TrainParams,
};
use crate::content::{
    blocklist_screen, expand_urls, hostname_rank_records, rumor_pickup, urls_of_class,
    OfflineBlocklist, OfflineResolver, RumorSpec, ShortenerSet,
};
use crate::corpus::{
    aggregate_annotations, corpus_stats, load_annotations, load_corpus, load_corpus_unfiltered,
    load_labels, write_corpus, write_labels, EventSpec, Label, LabelMap, LoadOptions, TweetRecord,
};
use crate::diffusion::{brokerage_reach, degree_stats, friends_of, sample_nodes, FollowEdgeSet};
use crate::features::{build_design_matrix, AutomationSources, DesignMatrix, FeatureSet};
use crate::provenance::{
    annotate_verified, categorize_sources, top_sources, verified_map, verified_ratio,
    write_tally_table, SourceCategoryTable,
};
use crate::simulator::{audit_rate_limits, simulate, write_output, RateLimitPolicy, SimConfig};
use crate::timeutil;

/// Collects inputs and outputs for the manifest while a handler runs.
pub(super) struct Ctx {
    out_dir: PathBuf,
    subcommand: String,
    inputs: BTreeMap<String, String>,
    pub(super) outputs: Vec<String>,
    pub(super) seed: Option<u64>,
    started: Instant,
}

impl Ctx {
    pub(super) fn new(subcommand: &str, out_dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(out_dir)
            .map_err(|e| runtime(format!("cannot create {}: {e}", out_dir.display())))?;
        Ok(Ctx {
            out_dir: out_dir.to_path_buf(),
            subcommand: subcommand.to_string(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            seed: None,
            started: Instant::now(),
        })
    }

    pub(super) fn input(&mut self, key: &str, value: impl std::fmt::Display) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub(super) fn input_path(&mut self, key: &str, path: &Path) {
        self.input(key, path.display());
    }

    pub(super) fn write(&mut self, name: &str, content: impl AsRef<[u8]>) -> Result<PathBuf, CliError> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, content)
            .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(name.to_string());
        println!("wrote {}", path.display());
        Ok(path)
    }

    pub(super) fn finish(mut self) -> Result<(), CliError> {
        self.outputs.push("manifest.json".to_string());
        let manifest = RunManifest {
            subcommand: self.subcommand.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: self.inputs.clone(),
            seed: self.seed,
            outputs: self.outputs.clone(),
            created_utc: timeutil::format_utc(
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs() as i64)
                    .unwrap_or(0),
            ),
            timings_ms: self.started.elapsed().as_millis() as u64,
        };
        let json = serde_json::to_string_pretty(&manifest).map_err(runtime)?;
        let path = self.out_dir.join("manifest.json");
        std::fs::write(&path, json + "\n")
            .map_err(|e| runtime(format!("cannot write manifest: {e}")))?;
        Ok(())
    }
}

pub(super) fn read_event(path: &Path) -> Result<EventSpec, CliError> {
    EventSpec::from_json_file(path).map_err(validation)
}

pub(super) fn read_corpus(path: &Path, event: &EventSpec, strict: bool) -> Result<Vec<TweetRecord>, CliError> {
    let outcome = load_corpus(path, event, LoadOptions { strict }).map_err(validation)?;
    Ok(outcome.records)
}

pub(super) fn read_labels(path: &Path) -> Result<LabelMap, CliError> {
    load_labels(path).map_err(validation)
}

fn parse_class(raw: &str) -> Result<Label, CliError> {
    match raw.trim().to_lowercase().as_str() {
        "bot" => Ok(Label::Bot),
        "nonbot" => Ok(Label::NonBot),
        "unlabeled" => Ok(Label::Unlabeled),
        other => Err(validation(format!(
            "unknown class {other:?} (expected bot, nonbot, or unlabeled)"
        ))),
    }
}

fn read_id_set(path: &Path) -> Result<BTreeSet<String>, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?;
    Ok(raw
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

fn read_automation_sources(path: &Option<PathBuf>) -> Result<AutomationSources, CliError> {
    match path {
        None => Ok(AutomationSources::default_list()),
        Some(p) => {
            let raw = std::fs::read_to_string(p)
                .map_err(|e| validation(format!("cannot read {}: {e}", p.display())))?;
            Ok(AutomationSources::new(
                raw.lines().filter(|l| !l.trim_start().starts_with('#')),
            ))
        }
    }
}

fn read_shorteners(path: &Option<PathBuf>) -> Result<ShortenerSet, CliError> {
    match path {
        None => Ok(ShortenerSet::default_set()),
        Some(p) => ShortenerSet::from_file(p).map_err(validation),
    }
}

pub(super) fn read_category_table(path: &Option<PathBuf>) -> Result<SourceCategoryTable, CliError> {
    match path {
        None => Ok(SourceCategoryTable::default_table()),
        Some(p) => SourceCategoryTable::from_file(p).map_err(validation),
    }
}

fn load_matrix(source: &MatrixSource, ctx: &mut Ctx) -> Result<DesignMatrix, CliError> {
    if let Some(path) = &source.matrix {
        ctx.input_path("matrix", path);
        let raw = std::fs::read_to_string(path)
            .map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?;
        return DesignMatrix::from_csv(&raw).map_err(validation);
    }
    let (Some(corpus_path), Some(event_path), Some(labels_path)) =
        (&source.corpus, &source.event, &source.labels)
    else {
        return Err(validation(
            "provide either --matrix or all of --corpus/--event/--labels",
        ));
    };
    ctx.input_path("corpus", corpus_path);
    ctx.input_path("event", event_path);
    ctx.input_path("labels", labels_path);
    ctx.input("features", &source.features);
    let set = FeatureSet::parse(&source.features).map_err(validation)?;
    let event = read_event(event_path)?;
    let records = read_corpus(corpus_path, &event, false)?;
    let labels = read_labels(labels_path)?;
    let automation = read_automation_sources(&source.automation_sources)?;
    Ok(build_design_matrix(&labels, &records, &event, &automation, set))
}

pub(super) fn dispatch(command: Command, out_dir: &Path) -> Result<(), CliError> {
    match command {
        Command::Ingest { corpus, event, strict } => ingest(out_dir, &corpus, &event, strict),
        Command::Stats { corpus, event } => stats(out_dir, &corpus, &event),
        Command::Annotate { annotations } => annotate(out_dir, &annotations),
        Command::Features {
            corpus,
            event,
            labels,
            features,
            automation_sources,
        } => features_cmd(out_dir, &corpus, &event, &labels, &features, &automation_sources),
        Command::Train {
            matrix,
            max_depth,
            min_leaf,
            seed,
            prune_cf,
        } => train_cmd(out_dir, &matrix, max_depth, min_leaf, seed, prune_cf),
        Command::Crossval {
            matrix,
            k,
            seed,
            max_depth,
            min_leaf,
            prune_cf,
        } => crossval_cmd(out_dir, &matrix, k, seed, max_depth, min_leaf, prune_cf),
        Command::RankFeatures { matrix } => rank_features_cmd(out_dir, &matrix),
        Command::Classify { tree, matrix } => classify_cmd(out_dir, &tree, &matrix),
        Command::Sources {
            corpus,
            event,
            labels,
            class,
            top,
        } => sources_cmd(out_dir, &corpus, &event, &labels, &class, top),
        Command::Verified {
            corpus,
            event,
            labels,
            class,
        } => verified_cmd(out_dir, &corpus, &event, &labels, &class),
        Command::SourceCategories {
            corpus,
            event,
            labels,
            category_table,
            top,
        } => source_categories_cmd(out_dir, &corpus, &event, &labels, &category_table, top),
        Command::Brokerage { edges, bots, friends } => {
            brokerage_cmd(out_dir, &edges, &bots, &friends)
        }
        Command::Degree {
            edges,
            nodes,
            sample,
            seed,
        } => degree_cmd(out_dir, &edges, &nodes, sample, seed),
        Command::Rumors {
            corpus,
            event,
            labels,
            rumor,
        } => rumors_cmd(out_dir, &corpus, &event, &labels, &rumor),
        Command::Urls {
            corpus,
            event,
            labels,
            class,
            top,
            resolver,
            shorteners,
        } => urls_cmd(out_dir, &corpus, &event, &labels, &class, top, &resolver, &shorteners),
        Command::Screen {
            corpus,
            event,
            labels,
            blocklist,
            resolver,
            shorteners,
        } => screen_cmd(out_dir, &corpus, &event, &labels, &blocklist, &resolver, &shorteners),
        Command::Simulate { config, seed } => simulate_cmd(out_dir, &config, seed),
        Command::Audit {
            corpus,
            daily_cap,
            semi_hour_cap,
        } => audit_cmd(out_dir, &corpus, daily_cap, semi_hour_cap),
        Command::Report {
            corpus,
            event,
            labels,
            edges,
            rumor,
            resolver,
            category_table,
            seed,
            k,
            top,
        } => super::report::report_cmd(
            out_dir,
            &corpus,
            &event,
            &labels,
            &edges,
            &rumor,
            &resolver,
            &category_table,
            seed,
            k,
            top,
        ),
    }
}

fn ingest(out_dir: &Path, corpus: &Path, event: &Path, strict: bool) -> Result<(), CliError> {
    let mut ctx = Ctx::new("ingest", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input_path("event", event);
    ctx.input("strict", strict);
    let spec = read_event(event)?;
    let outcome = load_corpus(corpus, &spec, LoadOptions { strict }).map_err(validation)?;
    let mut buf = Vec::new();
    write_corpus(&mut buf, &outcome.records).map_err(runtime)?;
    ctx.write("filtered.jsonl", &buf)?;
    let mut rep = String::new();
    rep.push_str(&format!("event: {}\n", spec.name));
    rep.push_str(&format!("records_kept: {}\n", outcome.records.len()));
    rep.push_str(&format!("filtered_out: {}\n", outcome.filtered_out));
    rep.push_str(&format!("duplicates_dropped: {}\n", outcome.duplicates_dropped));
    rep.push_str(&format!("malformed_lines: {}\n", outcome.issues.len()));
    rep.push_str(&format!("warnings: {}\n", outcome.warnings.len()));
    for issue in outcome.issues.iter().take(50) {
        rep.push_str(&format!("issue line {}: {}\n", issue.line, issue.reason));
    }
    ctx.write("ingest_report.txt", rep)?;
    ctx.finish()
}

fn stats(out_dir: &Path, corpus: &Path, event: &Path) -> Result<(), CliError> {
    let mut ctx = Ctx::new("stats", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input_path("event", event);
    let spec = read_event(event)?;
    let records = read_corpus(corpus, &spec, false)?;
    let stats = corpus_stats(&records);
    let csv = format!(
        "total_tweets,unique_users,tweets_with_urls,retweet_count\n{},{},{},{}\n",
        stats.total_tweets, stats.unique_users, stats.tweets_with_urls, stats.retweet_count
    );
    ctx.write("stats.csv", csv)?;
    println!(
        "total_tweets={} unique_users={} tweets_with_urls={} retweet_count={}",
        stats.total_tweets, stats.unique_users, stats.tweets_with_urls, stats.retweet_count
    );
    ctx.finish()
}

fn annotate(out_dir: &Path, annotations: &Path) -> Result<(), CliError> {
    let mut ctx = Ctx::new("annotate", out_dir)?;
    ctx.input_path("annotations", annotations);
    let records = load_annotations(annotations).map_err(validation)?;
    let labels = aggregate_annotations(&records).map_err(validation)?;
    let map = LabelMap::from_labels(labels.clone()).map_err(validation)?;
    let mut buf = Vec::new();
    write_labels(&mut buf, &map).map_err(runtime)?;
    ctx.write("labels.csv", &buf)?;
    let bots = labels.iter().filter(|l| l.label == Label::Bot).count();
    let nonbots = labels.iter().filter(|l| l.label == Label::NonBot).count();
    let unlabeled = labels.len() - bots - nonbots;
    ctx.write(
        "annotate_summary.txt",
        format!("accounts: {}\nbots: {bots}\nnonbots: {nonbots}\nunlabeled: {unlabeled}\n", labels.len()),
    )?;
    ctx.finish()
}

fn features_cmd(
    out_dir: &Path,
    corpus: &Path,
    event: &Path,
    labels: &Path,
    features: &str,
    automation_sources: &Option<PathBuf>,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("features", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input_path("event", event);
    ctx.input_path("labels", labels);
    ctx.input("features", features);
    let set = FeatureSet::parse(features).map_err(validation)?;
    let spec = read_event(event)?;
    let records = read_corpus(corpus, &spec, false)?;
    let label_map = read_labels(labels)?;
    let automation = read_automation_sources(automation_sources)?;
    let matrix = build_design_matrix(&label_map, &records, &spec, &automation, set);
    let mut buf = Vec::new();
    matrix.write_csv(&mut buf).map_err(runtime)?;
    ctx.write("design_matrix.csv", &buf)?;
    ctx.write(
        "skipped_accounts.txt",
        matrix.skipped_accounts.join("\n") + if matrix.skipped_accounts.is_empty() { "" } else { "\n" },
    )?;
    println!(
        "design matrix: {} rows x {} features ({} skipped)",
        matrix.n_rows(),
        matrix.n_cols(),
        matrix.skipped_accounts.len()
    );
    ctx.finish()
}

fn train_cmd(
    out_dir: &Path,
    source: &MatrixSource,
    max_depth: usize,
    min_leaf: usize,
    seed: u64,
    prune_cf: Option<f64>,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("train", out_dir)?;
    ctx.seed = Some(seed);
    let matrix = load_matrix(source, &mut ctx)?;
    let params = TrainParams {
        max_depth,
        min_leaf,
        seed,
        prune_confidence: prune_cf,
    };
    let tree = train(&matrix.rows, &matrix.labels, &params).map_err(validation)?;
    ctx.write("tree.txt", tree.to_text())?;
    let totals = tree.class_totals();
    ctx.write(
        "train_summary.txt",
        format!(
            "rows: {}\nfeatures: {}\ndepth: {}\nclass_totals: nonbot={} bot={}\n",
            matrix.n_rows(),
            matrix.n_cols(),
            tree.depth(),
            totals[0],
            totals[1]
        ),
    )?;
    ctx.finish()
}

#[allow(clippy::too_many_arguments)]
fn crossval_cmd(
    out_dir: &Path,
    source: &MatrixSource,
    k: usize,
    seed: u64,
    max_depth: usize,
    min_leaf: usize,
    prune_cf: Option<f64>,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("crossval", out_dir)?;
    ctx.seed = Some(seed);
    ctx.input("k", k);
    let matrix = load_matrix(source, &mut ctx)?;
    let params = TrainParams {
        max_depth,
        min_leaf,
        seed,
        prune_confidence: prune_cf,
    };
    let cv = cross_validate(&matrix.rows, &matrix.labels, k, seed, &params).map_err(validation)?;
    let mut kv = Vec::new();
    cv.report.write_key_values(&mut kv).map_err(runtime)?;
    ctx.write("eval_report.txt", &kv)?;
    let mut csv = Vec::new();
    cv.report.write_csv(&mut csv).map_err(runtime)?;
    ctx.write("eval_report.csv", &csv)?;
    let mut predictions = String::from("user_id,actual,predicted,bot_score\n");
    for (row_idx, p) in cv.used_rows.iter().zip(&cv.predictions) {
        predictions.push_str(&format!(
            "{},{},{},{}\n",
            matrix.user_ids[*row_idx],
            if p.actual_bot { "bot" } else { "nonbot" },
            if p.predicted_bot { "bot" } else { "nonbot" },
            p.bot_score
        ));
    }
    ctx.write("predictions.csv", predictions)?;
    print!("{}", String::from_utf8_lossy(&kv));
    ctx.finish()
}

fn rank_features_cmd(out_dir: &Path, source: &MatrixSource) -> Result<(), CliError> {
    let mut ctx = Ctx::new("rank-features", out_dir)?;
    let matrix = load_matrix(source, &mut ctx)?;
    if matrix.n_rows() < 2 {
        return Err(validation("feature ranking needs at least two rows"));
    }
    let ranks = rank_features_by_gain(&matrix.rows, &matrix.labels);
    let mut csv = String::from("rank,feature,information_gain\n");
    for (i, r) in ranks.iter().enumerate() {
        csv.push_str(&format!("{},{},{}\n", i + 1, matrix.columns[r.feature_index], r.gain));
    }
    ctx.write("feature_ranking.csv", &csv)?;
    print!("{csv}");
    ctx.finish()
}

fn classify_cmd(out_dir: &Path, tree_path: &Path, source: &MatrixSource) -> Result<(), CliError> {
    let mut ctx = Ctx::new("classify", out_dir)?;
    ctx.input_path("tree", tree_path);
    let raw = std::fs::read_to_string(tree_path)
        .map_err(|e| validation(format!("cannot read {}: {e}", tree_path.display())))?;
    let tree = DecisionTree::parse(&raw).map_err(validation)?;
    let matrix = load_matrix(source, &mut ctx)?;
    let mut csv = String::from("user_id,predicted,probability,bot_score\n");
    for (user, row) in matrix.user_ids.iter().zip(&matrix.rows) {
        let (class, probability) = predict(&tree, row).map_err(validation)?;
        let (_, _, bot_score) = tree.score(row).map_err(validation)?;
        csv.push_str(&format!("{user},{class},{probability},{bot_score}\n"));
    }
    ctx.write("predictions.csv", &csv)?;
    ctx.finish()
}

fn sources_cmd(
    out_dir: &Path,
    corpus: &Path,
    event: &Path,
    labels: &Path,
    class: &str,
    top: usize,
) -> Result<(), CliError> {
    if top == 0 {
        return Err(validation("--top must be at least 1"));
    }
    let mut ctx = Ctx::new("sources", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input_path("event", event);
    ctx.input_path("labels", labels);
    ctx.input("class", class);
    ctx.input("top", top);
    let wanted = parse_class(class)?;
    let spec = read_event(event)?;
    let records = read_corpus(corpus, &spec, false)?;
    let label_map = read_labels(labels)?;
    let class_tweets: Vec<TweetRecord> = records
        .iter()
        .filter(|r| label_map.label_of(&r.author_id) == wanted)
        .cloned()
        .collect();
    let mut tallies = top_sources(&class_tweets, top);
    let verified = verified_map(records.iter().map(|r| &r.author));
    annotate_verified(&mut tallies, &verified);
    let mut buf = Vec::new();
    write_tally_table(&mut buf, &tallies).map_err(runtime)?;
    ctx.write("mention_sources.csv", &buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    ctx.finish()
}

fn verified_cmd(
    out_dir: &Path,
    corpus: &Path,
    event: &Path,
    labels: &Path,
    class: &str,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("verified", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input_path("event", event);
    ctx.input_path("labels", labels);
    ctx.input("class", class);
    let wanted = parse_class(class)?;
    let spec = read_event(event)?;
    let records = read_corpus(corpus, &spec, false)?;
    let label_map = read_labels(labels)?;
    let class_tweets: Vec<TweetRecord> = records
        .iter()
        .filter(|r| label_map.label_of(&r.author_id) == wanted)
        .cloned()
        .collect();
    let tallies = top_sources(&class_tweets, usize::MAX);
    let verified = verified_map(records.iter().map(|r| &r.author));
    let ratio = verified_ratio(&tallies, &verified);
    let text = format!(
        "class: {class}\ndistinct_mentioned_handles: {}\nverified: {}\nunresolved: {}\nratio: {}\n",
        ratio.total_count,
        ratio.verified_count,
        ratio.unresolved_count,
        ratio
            .ratio
            .map(|r| r.to_string())
            .unwrap_or_else(|| "undefined".into())
    );
    ctx.write("verified_ratio.txt", &text)?;
    print!("{text}");
    ctx.finish()
}

fn source_categories_cmd(
    out_dir: &Path,
    corpus: &Path,
    event: &Path,
    labels: &Path,
    category_table: &Option<PathBuf>,
    top: usize,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("source-categories", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input_path("event", event);
    ctx.input_path("labels", labels);
    if let Some(t) = category_table {
        ctx.input_path("category_table", t);
    }
    let spec = read_event(event)?;
    let records = read_corpus(corpus, &spec, false)?;
    let label_map = read_labels(labels)?;
    let table = read_category_table(category_table)?;
    let breakdown = categorize_sources(&records, &label_map, &table);
    let mut csv = String::from("class,category,count,share\n");
    let mut raw = String::from("class,rank,source,count\n");
    for (class, stats) in &breakdown.per_class {
        for (category, count) in &stats.by_category {
            let share = *count as f64 / stats.total_tweets.max(1) as f64;
            csv.push_str(&format!("{class},{category},{count},{share}\n"));
        }
        for (i, (source, count)) in stats.raw_ranking.iter().take(top).enumerate() {
            raw.push_str(&format!("{class},{},{source},{count}\n", i + 1));
        }
    }
    ctx.write("source_categories.csv", &csv)?;
    ctx.write("raw_sources.csv", &raw)?;
    print!("{csv}");
    ctx.finish()
}

fn brokerage_cmd(
    out_dir: &Path,
    edges_path: &Path,
    bots_path: &Path,
    friends_path: &Option<PathBuf>,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("brokerage", out_dir)?;
    ctx.input_path("edges", edges_path);
    ctx.input_path("bots", bots_path);
    let edges = FollowEdgeSet::from_file(edges_path).map_err(validation)?;
    let bots = read_id_set(bots_path)?;
    let friends = match friends_path {
        Some(p) => {
            ctx.input_path("friends", p);
            read_id_set(p)?
        }
        None => friends_of(&bots, &edges),
    };
    let result = brokerage_reach(&bots, &friends, &edges).map_err(validation)?;
    let text = format!(
        "bots: {}\nbot_friends: {}\nbot_followers: {}\nexclusive_followers: {}\nexclusive_fraction: {}\n",
        bots.len(),
        friends.len(),
        result.bot_follower_count,
        result.exclusive_follower_count,
        result.exclusive_fraction
    );
    ctx.write("brokerage.txt", &text)?;
    print!("{text}");
    ctx.finish()
}

fn degree_cmd(
    out_dir: &Path,
    edges_path: &Path,
    nodes_path: &Option<PathBuf>,
    sample: Option<usize>,
    seed: u64,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("degree", out_dir)?;
    ctx.input_path("edges", edges_path);
    ctx.seed = Some(seed);
    let edges = FollowEdgeSet::from_file(edges_path).map_err(validation)?;
    let mut nodes = match nodes_path {
        Some(p) => {
            ctx.input_path("nodes", p);
            read_id_set(p)?
        }
        None => edges.nodes().clone(),
    };
    if let Some(n) = sample {
        ctx.input("sample", n);
        nodes = sample_nodes(&nodes, n, seed);
    }
    let stats = degree_stats(&edges, &nodes).map_err(validation)?;
    let text = format!(
        "node_count: {}\nedge_count: {}\naverage_degree: {}\nundirected_average_degree: {}\n",
        stats.node_count, stats.edge_count, stats.average_degree, stats.undirected_average_degree
    );
    ctx.write("degree_stats.txt", &text)?;
    print!("{text}");
    ctx.finish()
}

fn rumors_cmd(
    out_dir: &Path,
    corpus: &Path,
    event: &Path,
    labels: &Path,
    rumor: &Path,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("rumors", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input_path("event", event);
    ctx.input_path("labels", labels);
    ctx.input_path("rumor", rumor);
    let spec = read_event(event)?;
    let records = read_corpus(corpus, &spec, false)?;
    let label_map = read_labels(labels)?;
    let rumor_spec = RumorSpec::from_json_file(rumor).map_err(validation)?;
    let pickup =
        rumor_pickup(&records, &label_map, &rumor_spec, spec.window_end).map_err(validation)?;
    let mut csv = String::from("class,distinct_users,first_pickup_utc,latency_s,pre_origin_users\n");
    for (class, stats) in &pickup.per_class {
        csv.push_str(&format!(
            "{class},{},{},{},{}\n",
            stats.count_distinct_users,
            stats
                .first_pickup_time
                .map(timeutil::format_utc)
                .unwrap_or_else(|| "absent".into()),
            stats
                .latency_s
                .map(|l| l.to_string())
                .unwrap_or_else(|| "absent".into()),
            stats.pre_origin_users
        ));
    }
    ctx.write("rumor_report.csv", &csv)?;
    print!("{csv}");
    ctx.finish()
}

#[allow(clippy::too_many_arguments)]
fn urls_cmd(
    out_dir: &Path,
    corpus: &Path,
    event: &Path,
    labels: &Path,
    class: &str,
    top: usize,
    resolver: &Option<PathBuf>,
    shorteners: &Option<PathBuf>,
) -> Result<(), CliError> {
    if top == 0 {
        return Err(validation("--top must be at least 1"));
    }
    let mut ctx = Ctx::new("urls", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input_path("event", event);
    ctx.input_path("labels", labels);
    ctx.input("class", class);
    let wanted = parse_class(class)?;
    let spec = read_event(event)?;
    let records = read_corpus(corpus, &spec, false)?;
    let label_map = read_labels(labels)?;
    let mut url_records = urls_of_class(&records, &label_map, wanted);
    let raw_rank = hostname_rank_records(&url_records, top, false);
    let mut csv = String::from("rank,hostname,count\n");
    for (i, (host, count)) in raw_rank.top.iter().enumerate() {
        csv.push_str(&format!("{},{host},{count}\n", i + 1));
    }
    csv.push_str(&format!(
        "# total_occurrences={} invalid={}\n",
        raw_rank.total_occurrences, raw_rank.invalid_occurrences
    ));
    ctx.write("hostname_rank.csv", &csv)?;
    print!("{csv}");
    if let Some(resolver_path) = resolver {
        ctx.input_path("resolver", resolver_path);
        let table = OfflineResolver::from_file(resolver_path).map_err(validation)?;
        let shortener_set = read_shorteners(shorteners)?;
        expand_urls(&mut url_records, &table, &shortener_set);
        let expanded_rank = hostname_rank_records(&url_records, top, true);
        let unresolved = url_records.iter().filter(|r| r.unresolved).count();
        let mut csv = String::from("rank,hostname,count\n");
        for (i, (host, count)) in expanded_rank.top.iter().enumerate() {
            csv.push_str(&format!("{},{host},{count}\n", i + 1));
        }
        csv.push_str(&format!("# unresolved_short_links={unresolved}\n"));
        ctx.write("expanded_hostname_rank.csv", &csv)?;
    }
    ctx.finish()
}

#[allow(clippy::too_many_arguments)]
fn screen_cmd(
    out_dir: &Path,
    corpus: &Path,
    event: &Path,
    labels: &Path,
    blocklist: &Path,
    resolver: &Option<PathBuf>,
    shorteners: &Option<PathBuf>,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("screen", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input_path("event", event);
    ctx.input_path("labels", labels);
    ctx.input_path("blocklist", blocklist);
    let spec = read_event(event)?;
    let records = read_corpus(corpus, &spec, false)?;
    let label_map = read_labels(labels)?;
    let client = OfflineBlocklist::from_file(blocklist).map_err(validation)?;
    let mut by_class: BTreeMap<Label, Vec<crate::content::UrlRecord>> = BTreeMap::new();
    for class in [Label::Bot, Label::NonBot, Label::Unlabeled] {
        by_class.insert(class, urls_of_class(&records, &label_map, class));
    }
    if let Some(resolver_path) = resolver {
        ctx.input_path("resolver", resolver_path);
        let table = OfflineResolver::from_file(resolver_path).map_err(validation)?;
        let shortener_set = read_shorteners(shorteners)?;
        for urls in by_class.values_mut() {
            expand_urls(urls, &table, &shortener_set);
        }
    }
    let report = blocklist_screen(&mut by_class, &client).map_err(runtime)?;
    let mut csv = String::from("class,total_urls,flagged,flagged_fraction,distinct_urls,distinct_flagged\n");
    for (class, screen) in &report.per_class {
        csv.push_str(&format!(
            "{class},{},{},{},{},{}\n",
            screen.total_urls,
            screen.flagged,
            screen
                .flagged_fraction()
                .map(|f| f.to_string())
                .unwrap_or_else(|| "undefined".into()),
            screen.distinct_urls,
            screen.distinct_flagged
        ));
    }
    ctx.write("screen_report.csv", &csv)?;
    print!("{csv}");
    ctx.finish()
}

fn simulate_cmd(out_dir: &Path, config: &Option<PathBuf>, seed: Option<u64>) -> Result<(), CliError> {
    let mut ctx = Ctx::new("simulate", out_dir)?;
    let mut sim_config = match config {
        Some(path) => {
            ctx.input_path("config", path);
            SimConfig::from_json_file(path).map_err(validation)?
        }
        None => {
            let Some(seed) = seed else {
                return Err(validation("--seed is required when no --config is given"));
            };
            SimConfig::with_seed(seed)
        }
    };
    if let Some(seed) = seed {
        sim_config.seed = seed;
    }
    ctx.seed = Some(sim_config.seed);
    let output = simulate(&sim_config).map_err(validation)?;
    let paths = write_output(&output, out_dir).map_err(runtime)?;
    for name in ["corpus.jsonl", "edges.csv", "labels.csv", "truth.json"] {
        ctx.outputs.push(name.to_string());
    }
    println!(
        "simulated {} tweets by {} accounts -> {}",
        output.truth.totals.total_tweets,
        output.truth.totals.unique_users,
        paths.corpus.parent().unwrap_or(out_dir).display()
    );
    ctx.finish()
}

fn audit_cmd(
    out_dir: &Path,
    corpus: &Path,
    daily_cap: usize,
    semi_hour_cap: usize,
) -> Result<(), CliError> {
    let mut ctx = Ctx::new("audit", out_dir)?;
    ctx.input_path("corpus", corpus);
    ctx.input("daily_cap", daily_cap);
    ctx.input("semi_hour_cap", semi_hour_cap);
    let outcome = load_corpus_unfiltered(corpus, LoadOptions::default()).map_err(validation)?;
    let policy = RateLimitPolicy {
        daily_cap,
        semi_hour_cap,
        ..RateLimitPolicy::default()
    };
    let violations = audit_rate_limits(&outcome.records, &policy);
    let mut csv = String::from("kind,account,at_utc,detail\n");
    for v in &violations {
        csv.push_str(&format!(
            "{},{},{},{:?}\n",
            v.kind,
            v.account,
            timeutil::format_utc(v.at),
            v.detail
        ));
    }
    ctx.write("violations.csv", &csv)?;
    println!("{} violation(s) found", violations.len());
    ctx.finish()
}
