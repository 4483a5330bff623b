//! The `botscope` command-line front end.
//!
//! One subcommand per analysis; every run writes its outputs plus a
//! `manifest.json` (inputs, seed, version, timings) under the output
//! directory. Exit codes: 0 success, 1 validation error, 2 runtime
//! failure. Seeded subcommands are reproducible: identical flags produce
//! byte-identical outputs, with wall-clock fields confined to the
//! manifest.

mod ops;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

/// Environment variable that overrides the default output directory when
/// `--out` is not given.
pub const OUT_DIR_ENV: &str = "BOTSCOPE_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "botscope",
    version,
    about = "Event-scoped microblog analytics: bot classification, provenance, brokerage, rumors, URLs, and a ground-truth simulator"
)]
pub struct Cli {
    /// Output directory (default: $BOTSCOPE_OUT or ./botscope-out)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Inputs that identify a design matrix: either a ready-made CSV or the
/// corpus triplet to build one from.
#[derive(Debug, Args)]
pub struct MatrixSource {
    /// Design-matrix CSV produced by `features`
    #[arg(long, conflicts_with_all = ["corpus", "event", "labels"])]
    pub matrix: Option<PathBuf>,
    /// Corpus file (line-delimited records)
    #[arg(long, requires = "event", requires = "labels")]
    pub corpus: Option<PathBuf>,
    /// Event spec JSON (name, RFC 3339 window, keywords)
    #[arg(long)]
    pub event: Option<PathBuf>,
    /// Labels file (`user_id,label`)
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Feature set when building from a corpus
    #[arg(long, default_value = "F1")]
    pub features: String,
    /// Automation client list file (one client string per line); defaults
    /// to the automation platforms of the shipped category table
    #[arg(long)]
    pub automation_sources: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load, filter, and canonicalize an event corpus
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        event: PathBuf,
        /// Fail on the first malformed line instead of skip-and-count
        #[arg(long)]
        strict: bool,
    },
    /// Headline corpus counts
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        event: PathBuf,
    },
    /// Aggregate per-annotator votes into account labels
    Annotate {
        #[arg(long)]
        annotations: PathBuf,
    },
    /// Build and export a per-account design matrix
    Features {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value = "F1")]
        features: String,
        #[arg(long)]
        automation_sources: Option<PathBuf>,
    },
    /// Train a gain-ratio decision tree
    Train {
        #[command(flatten)]
        matrix: MatrixSource,
        #[arg(long, default_value_t = 25)]
        max_depth: usize,
        #[arg(long, default_value_t = 2)]
        min_leaf: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Confidence factor for pessimistic pruning (omit for none)
        #[arg(long)]
        prune_cf: Option<f64>,
    },
    /// Stratified k-fold cross-validation with a weighted-average report
    Crossval {
        #[command(flatten)]
        matrix: MatrixSource,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        max_depth: usize,
        #[arg(long, default_value_t = 2)]
        min_leaf: usize,
        #[arg(long)]
        prune_cf: Option<f64>,
    },
    /// Rank features by best single-split information gain
    RankFeatures {
        #[command(flatten)]
        matrix: MatrixSource,
    },
    /// Classify accounts with a trained tree
    Classify {
        #[arg(long)]
        tree: PathBuf,
        #[command(flatten)]
        matrix: MatrixSource,
    },
    /// Mention-frequency source ranking for one account class
    Sources {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value = "bot")]
        class: String,
        #[arg(long, default_value_t = 15)]
        top: usize,
    },
    /// Verified share of distinct mentioned handles
    Verified {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value = "bot")]
        class: String,
    },
    /// Client-source categorization split by label class
    SourceCategories {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// Category table file (`source = category` lines); defaults to
        /// the shipped table
        #[arg(long)]
        category_table: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Exclusive-reach brokerage over the follower graph
    Brokerage {
        #[arg(long)]
        edges: PathBuf,
        /// Bot ids, one per line
        #[arg(long)]
        bots: PathBuf,
        /// Bot-friend ids, one per line; defaults to everyone the bots
        /// follow
        #[arg(long)]
        friends: Option<PathBuf>,
    },
    /// Node/edge counts and average degree
    Degree {
        #[arg(long)]
        edges: PathBuf,
        /// Restrict to these node ids (one per line); defaults to all
        #[arg(long)]
        nodes: Option<PathBuf>,
        /// Seeded node subsample size
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rumor pickup per account class
    Rumors {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// Rumor spec JSON (name, RFC 3339 origin_time, matchers,
        /// origin_handle)
        #[arg(long)]
        rumor: PathBuf,
    },
    /// URL hostname rankings with optional shortener expansion
    Urls {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value = "bot")]
        class: String,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Offline resolver table (`short<TAB>expanded` lines)
        #[arg(long)]
        resolver: Option<PathBuf>,
        /// Shortener hostname list (one per line); defaults to the
        /// shipped set
        #[arg(long)]
        shorteners: Option<PathBuf>,
    },
    /// Screen final URLs against a blocklist, split by class
    Screen {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// Blocklist file: one URL or hostname pattern per line
        #[arg(long)]
        blocklist: PathBuf,
        #[arg(long)]
        resolver: Option<PathBuf>,
        #[arg(long)]
        shorteners: Option<PathBuf>,
    },
    /// Generate a labeled synthetic event corpus with ground truth
    Simulate {
        /// Simulator config JSON; defaults apply to omitted fields
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed override (required when no config is given)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Audit a corpus against the posting limits
    Audit {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 1000)]
        daily_cap: usize,
        #[arg(long, default_value_t = 21)]
        semi_hour_cap: usize,
    },
    /// One document aggregating every analysis table
    Report {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        rumor: Option<PathBuf>,
        #[arg(long)]
        resolver: Option<PathBuf>,
        #[arg(long)]
        category_table: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
}

/// Validation failures exit 1; runtime failures exit 2.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Runtime(m) => m,
        }
    }
}

pub(crate) fn validation(err: impl std::fmt::Display) -> CliError {
    CliError::Validation(err.to_string())
}

pub(crate) fn runtime(err: impl std::fmt::Display) -> CliError {
    CliError::Runtime(err.to_string())
}

/// Run manifest written next to every subcommand's outputs. The
/// `created_utc` and `timings_ms` fields are the only wall-clock values
/// any output file carries.
#[derive(Debug, serde::Serialize)]
pub struct RunManifest {
    /// Subcommand that produced this run.
    pub subcommand: String,
    /// Crate version the binary was built from.
    pub version: String,
    /// Input flags and paths, keyed by flag name.
    pub inputs: BTreeMap<String, String>,
    /// Seed for seeded subcommands; absent otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// File names written under the output directory, manifest included.
    pub outputs: Vec<String>,
    /// Wall-clock run timestamp (RFC 3339); excluded from reproducibility
    /// comparisons.
    pub created_utc: String,
    /// Wall-clock duration; likewise excluded.
    pub timings_ms: u64,
}

/// Parse argv and execute. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    0
                }
                _ => {
                    eprint!("{err}");
                    1
                }
            }
        }
    };
    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("botscope-out"));
    match ops::dispatch(cli.command, &out_dir) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.exit_code()
        }
    }
}
