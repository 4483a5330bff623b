//! Follower-graph brokerage and degree statistics.
//!
//! The brokerage question: of the users following at least one bot, what
//! fraction follow none of the bots' own information sources ("bot
//! friends")? Those users get event updates only through the bots — the
//! bots broker information to them.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Directed follower graph: edges run follower -> followed.
///
/// Stored as an adjacency index keyed by follower id with sorted, deduped
/// neighbor lists, so membership tests are binary searches.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FollowEdgeSet {
    adjacency: BTreeMap<String, Vec<String>>,
    nodes: BTreeSet<String>,
    edge_count: usize,
}

/// Errors from graph construction and brokerage queries.
#[derive(Debug, thiserror::Error)]
pub enum DiffusionError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Edge { line: usize, reason: String },
    #[error("self-loop {0} -> {0} is not allowed")]
    SelfLoop(String),
    #[error("bot set must be non-empty")]
    EmptyBotSet,
    #[error("node subset must be non-empty")]
    EmptyNodeSubset,
}

impl FollowEdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert one edge. Returns `false` when the edge already existed.
    pub fn insert(
        &mut self,
        follower: impl Into<String>,
        followed: impl Into<String>,
    ) -> Result<bool, DiffusionError> {
        let follower = follower.into();
        let followed = followed.into();
        if follower == followed {
            return Err(DiffusionError::SelfLoop(follower));
        }
        self.nodes.insert(follower.clone());
        self.nodes.insert(followed.clone());
        let list = self.adjacency.entry(follower).or_default();
        match list.binary_search(&followed) {
            Ok(_) => Ok(false),
            Err(pos) => {
                list.insert(pos, followed);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    pub fn from_edges<F, T>(edges: impl IntoIterator<Item = (F, T)>) -> Result<Self, DiffusionError>
    where
        F: Into<String>,
        T: Into<String>,
    {
        let mut set = Self::new();
        for (follower, followed) in edges {
            set.insert(follower, followed)?;
        }
        Ok(set)
    }

    /// Parse a `follower_id,followed_id` per-line edge file. Self-loops and
    /// malformed lines are fatal (the format is machine-written).
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, DiffusionError> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|source| DiffusionError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut set = Self::new();
        for (idx, line) in raw.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (follower, followed) = line.split_once(',').ok_or(DiffusionError::Edge {
                line: idx + 1,
                reason: format!("expected follower_id,followed_id, got {line:?}"),
            })?;
            set.insert(follower.trim(), followed.trim())?;
        }
        Ok(set)
    }

    pub fn write(&self, mut w: impl Write) -> std::io::Result<()> {
        for (follower, followed_list) in &self.adjacency {
            for followed in followed_list {
                writeln!(w, "{follower},{followed}")?;
            }
        }
        Ok(())
    }

    pub fn follows(&self, follower: &str, followed: &str) -> bool {
        self.adjacency
            .get(follower)
            .is_some_and(|list| list.binary_search_by(|x| x.as_str().cmp(followed)).is_ok())
    }

    /// Does `follower` follow any id in `targets`?
    pub fn follows_any(&self, follower: &str, targets: &BTreeSet<String>) -> bool {
        match self.adjacency.get(follower) {
            Some(list) if list.len() < targets.len() => {
                list.iter().any(|followed| targets.contains(followed))
            }
            Some(list) => targets
                .iter()
                .any(|t| list.binary_search_by(|x| x.as_str().cmp(t)).is_ok()),
            None => false,
        }
    }

    pub fn followed_by(&self, follower: &str) -> &[String] {
        self.adjacency.get(follower).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn followers(&self) -> impl Iterator<Item = &String> {
        self.adjacency.keys()
    }
}

/// Result of the exclusive-reach computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrokerageResult {
    /// Users following at least one bot, excluding bots themselves.
    pub bot_follower_count: usize,
    /// Bot followers following no member of the bot-friend set.
    pub exclusive_follower_count: usize,
    /// exclusive / total; 0 when there are no bot followers.
    pub exclusive_fraction: f64,
}

/// Compute exclusive reach: among followers of any bot (bots themselves
/// excluded), the share that follow no bot friend and therefore receive
/// event updates only through bots.
pub fn brokerage_reach(
    bots: &BTreeSet<String>,
    bot_friends: &BTreeSet<String>,
    edges: &FollowEdgeSet,
) -> Result<BrokerageResult, DiffusionError> {
    if bots.is_empty() {
        return Err(DiffusionError::EmptyBotSet);
    }
    let mut follower_count = 0usize;
    let mut exclusive_count = 0usize;
    for follower in edges.followers() {
        if bots.contains(follower) {
            continue;
        }
        if !edges.follows_any(follower, bots) {
            continue;
        }
        follower_count += 1;
        if !edges.follows_any(follower, bot_friends) {
            exclusive_count += 1;
        }
    }
    let fraction = if follower_count == 0 {
        0.0
    } else {
        exclusive_count as f64 / follower_count as f64
    };
    Ok(BrokerageResult {
        bot_follower_count: follower_count,
        exclusive_follower_count: exclusive_count,
        exclusive_fraction: fraction,
    })
}

/// Everyone the given accounts follow.
pub fn friends_of(accounts: &BTreeSet<String>, edges: &FollowEdgeSet) -> BTreeSet<String> {
    let mut friends = BTreeSet::new();
    for account in accounts {
        for followed in edges.followed_by(account) {
            friends.insert(followed.clone());
        }
    }
    friends
}

/// Node/edge counts and average degree over a node subset.
///
/// Two degree conventions are reported: the directed value E/N where each
/// edge contributes once, and the undirected-style 2E/N, since external
/// graph tools differ on the default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub node_count: usize,
    /// Edges with both endpoints inside the subset.
    pub edge_count: usize,
    /// E / N.
    pub average_degree: f64,
    /// 2E / N, for comparison with undirected-convention tools.
    pub undirected_average_degree: f64,
}

pub fn degree_stats(
    edges: &FollowEdgeSet,
    node_subset: &BTreeSet<String>,
) -> Result<DegreeStats, DiffusionError> {
    if node_subset.is_empty() {
        return Err(DiffusionError::EmptyNodeSubset);
    }
    let mut edge_count = 0usize;
    for follower in node_subset {
        for followed in edges.followed_by(follower) {
            if node_subset.contains(followed) {
                edge_count += 1;
            }
        }
    }
    let n = node_subset.len() as f64;
    Ok(DegreeStats {
        node_count: node_subset.len(),
        edge_count,
        average_degree: edge_count as f64 / n,
        undirected_average_degree: 2.0 * edge_count as f64 / n,
    })
}

/// Deterministic seeded sample of `n` ids, mirroring the follower
/// subsampling methodology used at desk scale. Returns all ids when `n`
/// exceeds the population.
pub fn sample_nodes(ids: &BTreeSet<String>, n: usize, seed: u64) -> BTreeSet<String> {
    if n >= ids.len() {
        return ids.clone();
    }
    let mut ordered: Vec<&String> = ids.iter().collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    ordered.shuffle(&mut rng);
    ordered.into_iter().take(n).cloned().collect()
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    /// Independent quadratic oracle over the raw edge list.
    fn brute_force(
        bots: &BTreeSet<String>,
        friends: &BTreeSet<String>,
        raw_edges: &[(String, String)],
        all_nodes: &BTreeSet<String>,
    ) -> (usize, usize) {
        let mut follower_count = 0;
        let mut exclusive = 0;
        for node in all_nodes {
            if bots.contains(node) {
                continue;
            }
            let follows_bot = raw_edges
                .iter()
                .any(|(f, t)| f == node && bots.contains(t));
            if !follows_bot {
                continue;
            }
            follower_count += 1;
            let follows_friend = raw_edges
                .iter()
                .any(|(f, t)| f == node && friends.contains(t));
            if !follows_friend {
                exclusive += 1;
            }
        }
        (follower_count, exclusive)
    }

    fn arb_graph() -> impl Strategy<Value = (Vec<(String, String)>, Vec<u8>, Vec<u8>)> {
        (
            prop::collection::vec((0u8..40, 0u8..40), 1..120),
            prop::collection::vec(0u8..40, 1..6),
            prop::collection::vec(0u8..40, 0..6),
        )
            .prop_map(|(pairs, bots, friends)| {
                let edges = pairs
                    .into_iter()
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (format!("n{a}"), format!("n{b}")))
                    .collect();
                (edges, bots, friends)
            })
    }

    proptest! {
        #[test]
        fn brokerage_matches_quadratic_oracle((raw, bot_ids, friend_ids) in arb_graph()) {
            prop_assume!(!raw.is_empty());
            let mut edges = FollowEdgeSet::new();
            for (f, t) in &raw {
                edges.insert(f.clone(), t.clone()).unwrap();
            }
            let bots: BTreeSet<String> = bot_ids.iter().map(|b| format!("n{b}")).collect();
            let friends: BTreeSet<String> = friend_ids.iter().map(|f| format!("n{f}")).collect();
            let result = brokerage_reach(&bots, &friends, &edges).unwrap();
            let (expect_followers, expect_exclusive) =
                brute_force(&bots, &friends, &raw, edges.nodes());
            prop_assert_eq!(result.bot_follower_count, expect_followers);
            prop_assert_eq!(result.exclusive_follower_count, expect_exclusive);
        }

        #[test]
        fn exclusive_fraction_monotone_in_friend_growth((raw, bot_ids, friend_ids) in arb_graph()) {
            prop_assume!(!raw.is_empty());
            let mut edges = FollowEdgeSet::new();
            for (f, t) in &raw {
                edges.insert(f.clone(), t.clone()).unwrap();
            }
            let bots: BTreeSet<String> = bot_ids.iter().map(|b| format!("n{b}")).collect();
            let mut friends: BTreeSet<String> = friend_ids.iter().map(|f| format!("n{f}")).collect();
            let before = brokerage_reach(&bots, &friends, &edges).unwrap();
            // grow the friend set
            friends.extend(edges.nodes().iter().take(5).cloned());
            let after = brokerage_reach(&bots, &friends, &edges).unwrap();
            prop_assert!(after.exclusive_fraction <= before.exclusive_fraction + 1e-12);
        }

        #[test]
        fn brokerage_invariant_under_relabeling((raw, bot_ids, friend_ids) in arb_graph()) {
            prop_assume!(!raw.is_empty());
            let relabel = |s: &str| format!("zz_{s}_renamed");
            let mut edges = FollowEdgeSet::new();
            let mut renamed = FollowEdgeSet::new();
            for (f, t) in &raw {
                edges.insert(f.clone(), t.clone()).unwrap();
                renamed.insert(relabel(f), relabel(t)).unwrap();
            }
            let bots: BTreeSet<String> = bot_ids.iter().map(|b| format!("n{b}")).collect();
            let friends: BTreeSet<String> = friend_ids.iter().map(|f| format!("n{f}")).collect();
            let bots_renamed: BTreeSet<String> = bots.iter().map(|b| relabel(b)).collect();
            let friends_renamed: BTreeSet<String> = friends.iter().map(|f| relabel(f)).collect();
            let a = brokerage_reach(&bots, &friends, &edges).unwrap();
            let b = brokerage_reach(&bots_renamed, &friends_renamed, &renamed).unwrap();
            prop_assert_eq!(a.bot_follower_count, b.bot_follower_count);
            prop_assert_eq!(a.exclusive_follower_count, b.exclusive_follower_count);
        }

        #[test]
        fn subset_edge_count_matches_naive_filter((raw, node_ids, _) in arb_graph()) {
            prop_assume!(!raw.is_empty());
            let mut edges = FollowEdgeSet::new();
            let mut deduped: BTreeSet<(String, String)> = BTreeSet::new();
            for (f, t) in &raw {
                edges.insert(f.clone(), t.clone()).unwrap();
                deduped.insert((f.clone(), t.clone()));
            }
            let subset: BTreeSet<String> = node_ids.iter().map(|n| format!("n{n}")).collect();
            let stats = degree_stats(&edges, &subset).unwrap();
            let naive = deduped
                .iter()
                .filter(|(f, t)| subset.contains(f) && subset.contains(t))
                .count();
            prop_assert_eq!(stats.edge_count, naive);
        }
    }
}
