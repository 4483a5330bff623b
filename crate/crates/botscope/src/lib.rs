//! Event-scoped microblog stream analytics.
//!
//! `botscope` ingests line-delimited tweet corpora collected around
//! high-impact events, labels accounts from multi-annotator votes, and
//! quantifies automated (bot) activity:
//!
//! - [`corpus`] — canonical data model, corpus loading/filtering, stats,
//!   annotation aggregation.
//! - [`features`] — per-account user-based (F1) and temporal (F2) feature
//!   vectors and design-matrix export.
//! - [`classifier`] — gain-ratio decision tree, stratified cross-validation,
//!   weighted-average evaluation metrics, feature ranking.
//! - [`provenance`] — mention-frequency source ranking, verified-source
//!   ratios, client-source categorization, profile-description word counts.
//! - [`diffusion`] — follower-graph brokerage (exclusive reach) and degree
//!   statistics.
//! - [`content`] — rumor pickup latency per account class, URL hostname
//!   rankings, shortener expansion, blocklist screening.
//! - [`simulator`] — seeded generator of labeled synthetic event corpora
//!   (four bot archetypes plus humans) obeying platform posting limits,
//!   with a ground-truth sidecar; includes a rate-limit auditor.
//! - [`cli`] — the `botscope` command-line front end over all of the above.
//!
//! Each major capability has a runnable example under `examples/`; start
//! with `cargo run --example simulate_event`.

pub mod classifier;
pub mod cli;
pub mod content;
pub mod corpus;
pub mod diffusion;
pub mod features;
pub mod provenance;
pub mod simulator;
pub mod timeutil;
