//! Gain-ratio decision tree classifier and its evaluation protocol:
//! balanced classes, stratified k-fold cross-validation, weighted-average
//! metrics, and single-split feature ranking.

mod eval;
mod tree;

pub use eval::{report_from_predictions, roc_auc, EvalReport, PooledPrediction};
pub use tree::{
    gain_ratio, predict, rank_features_by_gain, train, Class, DecisionTree, FeatureRank, Node,
    TrainParams,
};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Errors from training and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum ClassifierError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("feature vector has {got} columns, tree expects {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("class {class} has only {count} members, fewer than k = {k}")]
    ClassSmallerThanK {
        class: Class,
        count: usize,
        k: usize,
    },
    #[error("k must be at least 2, got {0}")]
    BadFoldCount(usize),
    #[error("cannot parse tree: {0}")]
    BadTreeFormat(String),
}

/// Outcome of a cross-validation run: the report plus the pooled
/// per-row predictions it was computed from.
#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub report: EvalReport,
    /// One entry per evaluated row, parallel to `used_rows`.
    pub predictions: Vec<PooledPrediction>,
    /// Indices into the input matrix that survived class balancing.
    pub used_rows: Vec<usize>,
}

/// Downsample the majority class to the minority size with a seeded
/// shuffle, keeping original row order among survivors. Returns indices
/// into the input.
pub fn balance_classes(labels: &[bool], seed: u64) -> Vec<usize> {
    let bots: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let humans: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    let target = bots.len().min(humans.len());
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut pick = |mut side: Vec<usize>| -> Vec<usize> {
        if side.len() > target {
            side.shuffle(&mut rng);
            side.truncate(target);
            side.sort_unstable();
        }
        side
    };
    let mut keep = pick(bots);
    keep.extend(pick(humans));
    keep.sort_unstable();
    keep
}

/// Stratified k-fold cross-validation with pooled predictions.
///
/// Classes are balanced first (majority downsampled with the run seed),
/// then each class is shuffled with the same seeded generator and dealt
/// round-robin into k folds. Each fold is scored by a tree trained on the
/// remaining folds; the report comes from the pooled predictions.
pub fn cross_validate(
    rows: &[Vec<f64>],
    labels: &[bool],
    k: usize,
    seed: u64,
    params: &TrainParams,
) -> Result<CrossValidation, ClassifierError> {
    if k < 2 {
        return Err(ClassifierError::BadFoldCount(k));
    }
    let used_rows = balance_classes(labels, seed);
    let balanced_labels: Vec<bool> = used_rows.iter().map(|&i| labels[i]).collect();

    for (class, is_bot) in [(Class::Bot, true), (Class::NonBot, false)] {
        let count = balanced_labels.iter().filter(|&&l| l == is_bot).count();
        if count < k {
            return Err(ClassifierError::ClassSmallerThanK { class, count, k });
        }
    }

    // Deal each class round-robin into folds after a seeded shuffle.
    let mut rng = ChaCha20Rng::seed_from_u64(seed.wrapping_add(1));
    let mut fold_of = vec![0usize; used_rows.len()];
    for class_is_bot in [true, false] {
        let mut members: Vec<usize> = (0..used_rows.len())
            .filter(|&i| balanced_labels[i] == class_is_bot)
            .collect();
        members.shuffle(&mut rng);
        for (pos, member) in members.into_iter().enumerate() {
            fold_of[member] = pos % k;
        }
    }

    let mut predictions = vec![
        PooledPrediction {
            actual_bot: false,
            predicted_bot: false,
            bot_score: 0.0
        };
        used_rows.len()
    ];
    for fold in 0..k {
        let mut train_rows = Vec::new();
        let mut train_labels = Vec::new();
        for (i, &row_idx) in used_rows.iter().enumerate() {
            if fold_of[i] != fold {
                train_rows.push(rows[row_idx].clone());
                train_labels.push(balanced_labels[i]);
            }
        }
        let model = train(&train_rows, &train_labels, params)?;
        for (i, &row_idx) in used_rows.iter().enumerate() {
            if fold_of[i] == fold {
                let (class, _prob, bot_score) = model.score(&rows[row_idx])?;
                predictions[i] = PooledPrediction {
                    actual_bot: balanced_labels[i],
                    predicted_bot: class == Class::Bot,
                    bot_score,
                };
            }
        }
    }
    let report = report_from_predictions(&predictions);
    Ok(CrossValidation {
        report,
        predictions,
        used_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn separable(n_per_class: usize) -> (Vec<Vec<f64>>, Vec<bool>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n_per_class {
            rows.push(vec![1.0 + (i % 7) as f64 * 0.01, (i % 13) as f64]);
            labels.push(true);
            rows.push(vec![-1.0 - (i % 5) as f64 * 0.01, (i % 11) as f64]);
            labels.push(false);
        }
        (rows, labels)
    }

    #[test]
    fn perfectly_separable_set_scores_one() {
        let (rows, labels) = separable(30);
        let cv = cross_validate(&rows, &labels, 10, 7, &TrainParams::default()).unwrap();
        assert_eq!(cv.report.accuracy, 1.0);
        assert_eq!(cv.report.roc_auc, 1.0);
        assert_eq!(cv.predictions.len(), 60);
    }

    #[test]
    fn class_smaller_than_k_is_named_in_error() {
        let (rows, labels) = separable(4);
        let err = cross_validate(&rows, &labels, 10, 7, &TrainParams::default());
        match err {
            Err(ClassifierError::ClassSmallerThanK { count, k, .. }) => {
                assert_eq!(count, 4);
                assert_eq!(k, 10);
            }
            other => panic!("expected ClassSmallerThanK, got {other:?}"),
        }
    }

    #[test]
    fn k_below_two_rejected() {
        let (rows, labels) = separable(10);
        assert!(matches!(
            cross_validate(&rows, &labels, 1, 0, &TrainParams::default()),
            Err(ClassifierError::BadFoldCount(1))
        ));
    }

    #[test]
    fn balancing_downsamples_majority() {
        let labels = vec![true, true, true, true, true, false, false];
        let kept = balance_classes(&labels, 3);
        let bots = kept.iter().filter(|&&i| labels[i]).count();
        let humans = kept.iter().filter(|&&i| !labels[i]).count();
        assert_eq!((bots, humans), (2, 2));
        // survivors keep ascending order
        assert!(kept.windows(2).all(|w| w[0] < w[1]));
        // deterministic per seed
        assert_eq!(kept, balance_classes(&labels, 3));
        assert_eq!(balance_classes(&labels, 4).len(), 4);
    }

    #[test]
    fn label_permutation_sanity_near_chance() {
        // 500 balanced rows with informative column, labels shuffled:
        // accuracy should sit near chance.
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..500usize {
            rows.push(vec![
                if i % 2 == 0 { 1.0 } else { -1.0 },
                ((i * 193) % 101) as f64,
            ]);
            labels.push(i % 2 == 0);
        }
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        labels.shuffle(&mut rng);
        let cv = cross_validate(&rows, &labels, 10, 42, &TrainParams::default()).unwrap();
        assert!(
            (0.4..=0.6).contains(&cv.report.accuracy),
            "shuffled-label accuracy {} outside [0.4, 0.6]",
            cv.report.accuracy
        );
    }

    #[test]
    fn identical_runs_are_byte_identical() {
        let (rows, labels) = separable(20);
        let a = cross_validate(&rows, &labels, 5, 11, &TrainParams::default()).unwrap();
        let b = cross_validate(&rows, &labels, 5, 11, &TrainParams::default()).unwrap();
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        a.report.write_key_values(&mut buf_a).unwrap();
        b.report.write_key_values(&mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b);
        assert_eq!(a.used_rows, b.used_rows);
        assert_eq!(a.predictions.len(), b.predictions.len());
        for (x, y) in a.predictions.iter().zip(&b.predictions) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn report_recomputation_from_pooled_predictions_matches() {
        let (rows, mut labels) = separable(25);
        // inject some noise so metrics are non-trivial
        for flip in [3usize, 9, 14, 20, 33] {
            labels[flip] = !labels[flip];
        }
        let cv = cross_validate(&rows, &labels, 5, 2, &TrainParams::default()).unwrap();
        let recomputed = report_from_predictions(&cv.predictions);
        assert!((recomputed.accuracy - cv.report.accuracy).abs() < 1e-12);
        assert!((recomputed.roc_auc - cv.report.roc_auc).abs() < 1e-12);
        assert!((recomputed.f_measure - cv.report.f_measure).abs() < 1e-12);
    }
}
