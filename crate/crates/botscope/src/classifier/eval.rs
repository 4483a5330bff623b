//! Evaluation metrics over pooled predictions.
//!
//! Per-class true-positive rate, false-positive rate, precision, recall,
//! and F-measure are combined as weighted averages of the two classes
//! (weights = class support). Accuracy and ROC AUC are computed once; AUC
//! is rank-based — the probability a random bot outscores a random
//! non-bot, ties counted half.

use std::io::Write;

/// One evaluated row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PooledPrediction {
    pub actual_bot: bool,
    pub predicted_bot: bool,
    /// Bot-probability score used for ranking (AUC).
    pub bot_score: f64,
}

/// Weighted-average evaluation report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    pub tp_rate: f64,
    pub fp_rate: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub roc_auc: f64,
}

impl EvalReport {
    /// Key:value lines, one metric per line.
    pub fn write_key_values(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "accuracy: {}", self.accuracy)?;
        writeln!(w, "tp_rate: {}", self.tp_rate)?;
        writeln!(w, "fp_rate: {}", self.fp_rate)?;
        writeln!(w, "precision: {}", self.precision)?;
        writeln!(w, "recall: {}", self.recall)?;
        writeln!(w, "f_measure: {}", self.f_measure)?;
        writeln!(w, "roc_auc: {}", self.roc_auc)
    }

    /// Machine-readable header plus one row.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "accuracy,tp_rate,fp_rate,precision,recall,f_measure,roc_auc")?;
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            self.accuracy,
            self.tp_rate,
            self.fp_rate,
            self.precision,
            self.recall,
            self.f_measure,
            self.roc_auc
        )
    }
}

/// Per-class confusion counts with the class under test as positive.
fn class_metrics(predictions: &[PooledPrediction], positive_is_bot: bool) -> (f64, f64, f64, f64, usize) {
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fn_ = 0usize;
    let mut tn = 0usize;
    for p in predictions {
        let actual_pos = p.actual_bot == positive_is_bot;
        let predicted_pos = p.predicted_bot == positive_is_bot;
        match (actual_pos, predicted_pos) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let support = tp + fn_;
    let negatives = fp + tn;
    let tp_rate = if support == 0 { 0.0 } else { tp as f64 / support as f64 };
    let fp_rate = if negatives == 0 { 0.0 } else { fp as f64 / negatives as f64 };
    let precision = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let recall = tp_rate;
    let f = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let _ = f;
    (tp_rate, fp_rate, precision, recall, support)
}

/// Build the report from pooled predictions.
pub fn report_from_predictions(predictions: &[PooledPrediction]) -> EvalReport {
    let total = predictions.len();
    if total == 0 {
        return EvalReport {
            accuracy: 0.0,
            tp_rate: 0.0,
            fp_rate: 0.0,
            precision: 0.0,
            recall: 0.0,
            f_measure: 0.0,
            roc_auc: 0.5,
        };
    }
    let correct = predictions
        .iter()
        .filter(|p| p.actual_bot == p.predicted_bot)
        .count();
    let accuracy = correct as f64 / total as f64;

    let mut tp_rate = 0.0;
    let mut fp_rate = 0.0;
    let mut precision = 0.0;
    let mut recall = 0.0;
    let mut f_measure = 0.0;
    for positive_is_bot in [true, false] {
        let (tpr, fpr, prec, rec, support) = class_metrics(predictions, positive_is_bot);
        let weight = support as f64 / total as f64;
        let f = if prec + rec == 0.0 {
            0.0
        } else {
            2.0 * prec * rec / (prec + rec)
        };
        tp_rate += weight * tpr;
        fp_rate += weight * fpr;
        precision += weight * prec;
        recall += weight * rec;
        f_measure += weight * f;
    }

    let scored: Vec<(f64, bool)> = predictions.iter().map(|p| (p.bot_score, p.actual_bot)).collect();
    EvalReport {
        accuracy,
        tp_rate,
        fp_rate,
        precision,
        recall,
        f_measure,
        roc_auc: roc_auc(&scored),
    }
}

/// Rank-based ROC AUC over `(score, is_positive)` pairs, ties counted
/// half. Degenerate inputs (one class absent) return 0.5 — the score
/// carries no ranking information either way.
pub fn roc_auc(scored: &[(f64, bool)]) -> f64 {
    let positives = scored.iter().filter(|(_, pos)| *pos).count();
    let negatives = scored.len() - positives;
    if positives == 0 || negatives == 0 {
        return 0.5;
    }
    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| scored[a].0.partial_cmp(&scored[b].0).expect("finite scores"));

    // average ranks within tie groups (1-based ranks)
    let mut rank = vec![0.0f64; scored.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scored[order[j + 1]].0 == scored[order[i]].0 {
            j += 1;
        }
        let average = (i + 1 + j + 1) as f64 / 2.0;
        for &slot in &order[i..=j] {
            rank[slot] = average;
        }
        i = j + 1;
    }
    let positive_rank_sum: f64 = scored
        .iter()
        .zip(&rank)
        .filter(|((_, pos), _)| *pos)
        .map(|(_, r)| *r)
        .sum();
    let p = positives as f64;
    let n = negatives as f64;
    (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n)
}
