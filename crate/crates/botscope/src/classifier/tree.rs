//! The gain-ratio decision tree.
//!
//! Numeric splits only: a node tests `value <= threshold`. Candidate
//! thresholds are midpoints between consecutive distinct sorted feature
//! values; the split maximizing gain ratio wins, ties broken by lowest
//! feature index then lowest threshold, which makes training fully
//! deterministic. No pruning — depth and leaf-size caps instead.

use std::io::Write;

use super::ClassifierError;

/// Binary account class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    NonBot,
    Bot,
}

impl std::fmt::Display for Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Class::NonBot => "nonbot",
            Class::Bot => "bot",
        })
    }
}

/// Tree node: an internal threshold test or a leaf with class counts
/// (`[nonbot, bot]`).
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        feature_index: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
    Leaf {
        class_counts: [usize; 2],
    },
}

impl Node {
    fn leaf_totals(&self, acc: &mut [usize; 2]) {
        match self {
            Node::Leaf { class_counts } => {
                acc[0] += class_counts[0];
                acc[1] += class_counts[1];
            }
            Node::Split { left, right, .. } => {
                left.leaf_totals(acc);
                right.leaf_totals(acc);
            }
        }
    }

    /// Preorder (feature index or leaf marker, leaf counts) signature;
    /// thresholds excluded so order-preserving feature transforms leave
    /// the signature unchanged.
    pub fn structure_signature(&self, out: &mut Vec<(Option<usize>, [usize; 2])>) {
        match self {
            Node::Leaf { class_counts } => out.push((None, *class_counts)),
            Node::Split {
                feature_index,
                left,
                right,
                ..
            } => {
                out.push((Some(*feature_index), [0, 0]));
                left.structure_signature(out);
                right.structure_signature(out);
            }
        }
    }
}

/// A trained tree plus the input arity it expects.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    n_features: usize,
    root: Node,
}

/// Training caps. `seed` is carried for reproducibility bookkeeping;
/// training itself is deterministic and does not draw from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainParams {
    pub max_depth: usize,
    pub min_leaf: usize,
    pub seed: u64,
    /// Confidence factor for pessimistic subtree-replacement pruning;
    /// `None` grows the tree to the caps and leaves it unpruned.
    pub prune_confidence: Option<f64>,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            max_depth: 25,
            min_leaf: 2,
            seed: 0,
            prune_confidence: None,
        }
    }
}

fn entropy_from_counts(counts: [usize; 2]) -> f64 {
    let total = (counts[0] + counts[1]) as f64;
    if total == 0.0 {
        return 0.0;
    }
    let mut bits = 0.0;
    for c in counts {
        if c > 0 {
            let p = c as f64 / total;
            bits -= p * p.log2();
        }
    }
    bits
}

fn count_labels(labels: &[bool]) -> [usize; 2] {
    let bots = labels.iter().filter(|&&b| b).count();
    [labels.len() - bots, bots]
}

/// Gain ratio of a proposed split: information gain divided by the entropy
/// of the size partition. Children must be non-empty (the trainer never
/// proposes such a split); returns 0 when split information is 0.
pub fn gain_ratio(parent: &[bool], left: &[bool], right: &[bool]) -> f64 {
    assert!(
        !left.is_empty() && !right.is_empty(),
        "gain_ratio: both children must be non-empty"
    );
    assert_eq!(
        parent.len(),
        left.len() + right.len(),
        "gain_ratio: children must partition the parent"
    );
    gain_ratio_from_counts(
        count_labels(parent),
        count_labels(left),
        count_labels(right),
    )
}

fn information_gain_from_counts(parent: [usize; 2], left: [usize; 2], right: [usize; 2]) -> f64 {
    let n = (parent[0] + parent[1]) as f64;
    let n_left = (left[0] + left[1]) as f64;
    let n_right = (right[0] + right[1]) as f64;
    entropy_from_counts(parent)
        - (n_left / n) * entropy_from_counts(left)
        - (n_right / n) * entropy_from_counts(right)
}

fn gain_ratio_from_counts(parent: [usize; 2], left: [usize; 2], right: [usize; 2]) -> f64 {
    let n = (parent[0] + parent[1]) as f64;
    let n_left = (left[0] + left[1]) as f64;
    let n_right = (right[0] + right[1]) as f64;
    let split_info = entropy_from_counts([n_left as usize, n_right as usize]);
    if split_info == 0.0 {
        return 0.0;
    }
    let gain = entropy_from_counts(parent)
        - (n_left / n) * entropy_from_counts(left)
        - (n_right / n) * entropy_from_counts(right);
    gain / split_info
}

struct BestSplit {
    feature_index: usize,
    threshold: f64,
    ratio: f64,
}

#[allow(clippy::needless_range_loop)]
fn find_best_split(
    rows: &[Vec<f64>],
    labels: &[bool],
    members: &[usize],
    n_features: usize,
    min_leaf: usize,
) -> Option<BestSplit> {
    let parent = count_labels_of(members, labels);
    let mut best: Option<BestSplit> = None;
    let mut order: Vec<usize> = members.to_vec();
    for feature in 0..n_features {
        order.sort_by(|&a, &b| {
            rows[a][feature]
                .partial_cmp(&rows[b][feature])
                .expect("finite feature values")
        });
        // sweep: left grows one row at a time; candidate thresholds are
        // midpoints between consecutive distinct values
        let mut left = [0usize; 2];
        for i in 0..order.len() - 1 {
            let row = order[i];
            left[labels[row] as usize] += 1;
            let here = rows[row][feature];
            let next = rows[order[i + 1]][feature];
            if here == next {
                continue;
            }
            let left_size = i + 1;
            let right_size = order.len() - left_size;
            if left_size < min_leaf || right_size < min_leaf {
                continue;
            }
            let right = [parent[0] - left[0], parent[1] - left[1]];
            let ratio = gain_ratio_from_counts(parent, left, right);
            let threshold = here + (next - here) / 2.0;
            let better = match &best {
                None => ratio > 0.0,
                Some(b) => ratio > b.ratio,
            };
            if better {
                best = Some(BestSplit {
                    feature_index: feature,
                    threshold,
                    ratio,
                });
            }
        }
    }
    best
}

fn count_labels_of(members: &[usize], labels: &[bool]) -> [usize; 2] {
    let bots = members.iter().filter(|&&i| labels[i]).count();
    [members.len() - bots, bots]
}

fn build_node(
    rows: &[Vec<f64>],
    labels: &[bool],
    members: Vec<usize>,
    depth: usize,
    n_features: usize,
    params: &TrainParams,
) -> Node {
    let counts = count_labels_of(&members, labels);
    let pure = counts[0] == 0 || counts[1] == 0;
    if pure || depth >= params.max_depth || members.len() < 2 * params.min_leaf {
        return Node::Leaf {
            class_counts: counts,
        };
    }
    let Some(split) = find_best_split(rows, labels, &members, n_features, params.min_leaf) else {
        return Node::Leaf {
            class_counts: counts,
        };
    };
    let (left_members, right_members): (Vec<usize>, Vec<usize>) = members
        .into_iter()
        .partition(|&i| rows[i][split.feature_index] <= split.threshold);
    Node::Split {
        feature_index: split.feature_index,
        threshold: split.threshold,
        left: Box::new(build_node(
            rows,
            labels,
            left_members,
            depth + 1,
            n_features,
            params,
        )),
        right: Box::new(build_node(
            rows,
            labels,
            right_members,
            depth + 1,
            n_features,
            params,
        )),
    }
}

/// Train a tree. Single-class input yields a single-leaf tree; empty input
/// is an error.
pub fn train(
    rows: &[Vec<f64>],
    labels: &[bool],
    params: &TrainParams,
) -> Result<DecisionTree, ClassifierError> {
    if rows.is_empty() || labels.is_empty() {
        return Err(ClassifierError::EmptyTrainingSet);
    }
    let n_features = rows[0].len();
    for row in rows {
        if row.len() != n_features {
            return Err(ClassifierError::ArityMismatch {
                expected: n_features,
                got: row.len(),
            });
        }
    }
    let members: Vec<usize> = (0..rows.len()).collect();
    let mut root = build_node(rows, labels, members, 0, n_features, params);
    if let Some(cf) = params.prune_confidence {
        root = prune_subtree(root, cf);
    }
    Ok(DecisionTree { n_features, root })
}

/// Upper confidence bound on the true error rate after observing `errors`
/// mistakes in `n` instances: the largest p with
/// `P(Binomial(n, p) <= errors) >= cf`, found by bisection on the exact
/// binomial CDF.
fn pessimistic_error_rate(errors: usize, n: usize, cf: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if errors >= n {
        return 1.0;
    }
    let cdf = |p: f64| -> f64 {
        if p <= 0.0 {
            return 1.0;
        }
        if p >= 1.0 {
            return 0.0;
        }
        let mut total = 0.0;
        let mut log_term = (n as f64) * (1.0 - p).ln();
        // walk the binomial pmf from 0 to `errors` in log space
        for i in 0..=errors {
            if i > 0 {
                log_term += ((n - i + 1) as f64 / i as f64).ln() + (p / (1.0 - p)).ln();
            }
            total += log_term.exp();
        }
        total
    };
    let (mut lo, mut hi) = (errors as f64 / n as f64, 1.0);
    for _ in 0..60 {
        let mid = (lo + hi) / 2.0;
        if cdf(mid) >= cf {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

fn subtree_pessimistic_errors(node: &Node, cf: f64) -> f64 {
    match node {
        Node::Leaf { class_counts } => {
            let n = class_counts[0] + class_counts[1];
            let errors = class_counts[0].min(class_counts[1]);
            pessimistic_error_rate(errors, n, cf) * n as f64
        }
        Node::Split { left, right, .. } => {
            subtree_pessimistic_errors(left, cf) + subtree_pessimistic_errors(right, cf)
        }
    }
}

/// Bottom-up subtree replacement: collapse a split into a leaf whenever
/// the leaf's pessimistic error estimate is no worse than the subtree's.
fn prune_subtree(node: Node, cf: f64) -> Node {
    match node {
        leaf @ Node::Leaf { .. } => leaf,
        Node::Split {
            feature_index,
            threshold,
            left,
            right,
        } => {
            let left = prune_subtree(*left, cf);
            let right = prune_subtree(*right, cf);
            let mut counts = [0usize; 2];
            left.leaf_totals(&mut counts);
            right.leaf_totals(&mut counts);
            let n = counts[0] + counts[1];
            let leaf_errors =
                pessimistic_error_rate(counts[0].min(counts[1]), n, cf) * n as f64;
            let split_errors =
                subtree_pessimistic_errors(&left, cf) + subtree_pessimistic_errors(&right, cf);
            if leaf_errors <= split_errors {
                Node::Leaf {
                    class_counts: counts,
                }
            } else {
                Node::Split {
                    feature_index,
                    threshold,
                    left: Box::new(left),
                    right: Box::new(right),
                }
            }
        }
    }
}

impl DecisionTree {
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Sum of leaf class counts; equals the training-set class totals.
    pub fn class_totals(&self) -> [usize; 2] {
        let mut acc = [0, 0];
        self.root.leaf_totals(&mut acc);
        acc
    }

    pub fn depth(&self) -> usize {
        fn walk(node: &Node) -> usize {
            match node {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(left).max(walk(right)),
            }
        }
        walk(&self.root)
    }

    /// Predicted class, its Laplace-smoothed probability, and the bot
    /// probability used as a ranking score.
    pub fn score(&self, features: &[f64]) -> Result<(Class, f64, f64), ClassifierError> {
        if features.len() != self.n_features {
            return Err(ClassifierError::ArityMismatch {
                expected: self.n_features,
                got: features.len(),
            });
        }
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { class_counts } => {
                    let total = (class_counts[0] + class_counts[1] + 2) as f64;
                    let bot_probability = (class_counts[1] + 1) as f64 / total;
                    // ties go to NonBot: do not accuse on even evidence
                    let class = if bot_probability > 0.5 {
                        Class::Bot
                    } else {
                        Class::NonBot
                    };
                    let probability = if class == Class::Bot {
                        bot_probability
                    } else {
                        1.0 - bot_probability
                    };
                    return Ok((class, probability, bot_probability));
                }
                Node::Split {
                    feature_index,
                    threshold,
                    left,
                    right,
                } => {
                    node = if features[*feature_index] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    /// Plain-text serialization: header line, then one node per line in
    /// preorder (`split <feature> <threshold>` / `leaf <nonbot> <bot>`).
    pub fn write(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "tree v1 n_features={}", self.n_features)?;
        fn walk(node: &Node, w: &mut impl Write) -> std::io::Result<()> {
            match node {
                Node::Leaf { class_counts } => {
                    writeln!(w, "leaf {} {}", class_counts[0], class_counts[1])
                }
                Node::Split {
                    feature_index,
                    threshold,
                    left,
                    right,
                } => {
                    writeln!(w, "split {feature_index} {threshold}")?;
                    walk(left, w)?;
                    walk(right, w)
                }
            }
        }
        walk(&self.root, &mut w)
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf8")
    }

    /// Parse the serialization produced by [`DecisionTree::write`].
    pub fn parse(raw: &str) -> Result<Self, ClassifierError> {
        let mut lines = raw.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| ClassifierError::BadTreeFormat("empty input".into()))?;
        let n_features = header
            .strip_prefix("tree v1 n_features=")
            .and_then(|n| n.trim().parse::<usize>().ok())
            .ok_or_else(|| ClassifierError::BadTreeFormat(format!("bad header {header:?}")))?;

        fn parse_node<'a>(
            lines: &mut impl Iterator<Item = &'a str>,
        ) -> Result<Node, ClassifierError> {
            let line = lines
                .next()
                .ok_or_else(|| ClassifierError::BadTreeFormat("truncated tree".into()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["leaf", nonbot, bot] => {
                    let parse = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|e| ClassifierError::BadTreeFormat(format!("{line:?}: {e}")))
                    };
                    Ok(Node::Leaf {
                        class_counts: [parse(nonbot)?, parse(bot)?],
                    })
                }
                ["split", feature, threshold] => {
                    let feature_index = feature.parse::<usize>().map_err(|e| {
                        ClassifierError::BadTreeFormat(format!("{line:?}: {e}"))
                    })?;
                    let threshold = threshold.parse::<f64>().map_err(|e| {
                        ClassifierError::BadTreeFormat(format!("{line:?}: {e}"))
                    })?;
                    if !threshold.is_finite() {
                        return Err(ClassifierError::BadTreeFormat(format!(
                            "non-finite threshold in {line:?}"
                        )));
                    }
                    let left = parse_node(lines)?;
                    let right = parse_node(lines)?;
                    Ok(Node::Split {
                        feature_index,
                        threshold,
                        left: Box::new(left),
                        right: Box::new(right),
                    })
                }
                _ => Err(ClassifierError::BadTreeFormat(format!(
                    "unrecognized line {line:?}"
                ))),
            }
        }
        let root = parse_node(&mut lines)?;
        if lines.next().is_some() {
            return Err(ClassifierError::BadTreeFormat(
                "trailing lines after tree".into(),
            ));
        }
        Ok(DecisionTree { n_features, root })
    }
}

/// Classify one feature vector: predicted class and the probability of
/// that class (Laplace-smoothed leaf fraction).
pub fn predict(tree: &DecisionTree, features: &[f64]) -> Result<(Class, f64), ClassifierError> {
    let (class, probability, _) = tree.score(features)?;
    Ok((class, probability))
}

/// One feature's best achievable single-split information gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureRank {
    pub feature_index: usize,
    pub gain: f64,
}

/// Rank features by the information gain of their best single split,
/// descending; ties by feature index. Constant columns rank with gain 0.
pub fn rank_features_by_gain(rows: &[Vec<f64>], labels: &[bool]) -> Vec<FeatureRank> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n_features = rows[0].len();
    let parent = count_labels(labels);
    let mut ranks = Vec::with_capacity(n_features);
    for feature in 0..n_features {
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by(|&a, &b| {
            rows[a][feature]
                .partial_cmp(&rows[b][feature])
                .expect("finite feature values")
        });
        let mut left = [0usize; 2];
        let mut best = 0.0f64;
        for i in 0..order.len() - 1 {
            let row = order[i];
            left[labels[row] as usize] += 1;
            if rows[row][feature] == rows[order[i + 1]][feature] {
                continue;
            }
            let right = [parent[0] - left[0], parent[1] - left[1]];
            let gain = information_gain_from_counts(parent, left, right);
            if gain > best {
                best = gain;
            }
        }
        ranks.push(FeatureRank {
            feature_index: feature,
            gain: best,
        });
    }
    ranks.sort_by(|a, b| {
        b.gain
            .partial_cmp(&a.gain)
            .expect("finite gains")
            .then_with(|| a.feature_index.cmp(&b.feature_index))
    });
    ranks
}
