use serde::{Deserialize, Serialize};

use super::{Label, Prediction};
use crate::error::{Error, Result};

/// Precision, recall and F1 with `positive` as the target class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierReport {
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    pub fraction_scored: f64,
    pub threshold: Option<f64>,
}

/// Scores over scored documents only, and over all documents with every
/// unscored document counted as misclassified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub of_scored: ClassifierReport,
    pub overall: ClassifierReport,
}

impl Evaluation {
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.of_scored.threshold = Some(threshold);
        self.overall.threshold = Some(threshold);
        self
    }
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn report(predictions: &[Prediction], gold: &[Label]) -> Result<Evaluation> {
    if predictions.len() != gold.len() {
        return Err(Error::invalid(format!(
            "{} predictions for {} gold labels",
            predictions.len(),
            gold.len()
        )));
    }
    // (tp, fp, fn) over scored documents, then the unscored penalties.
    let (mut tp, mut fp, mut fneg) = (0, 0, 0);
    let (mut unscored_pos, mut unscored_neg) = (0, 0);
    for (p, g) in predictions.iter().zip(gold) {
        match (p, g) {
            (Prediction::Positive, Label::Positive) => tp += 1,
            (Prediction::Positive, Label::Negative) => fp += 1,
            (Prediction::Negative, Label::Positive) => fneg += 1,
            (Prediction::Negative, Label::Negative) => {}
            (Prediction::Unscored, Label::Positive) => unscored_pos += 1,
            (Prediction::Unscored, Label::Negative) => unscored_neg += 1,
        }
    }
    let total = predictions.len();
    let fraction_scored = ratio(total - unscored_pos - unscored_neg, total);
    let make = |tp: usize, fp: usize, fneg: usize| {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fneg);
        ClassifierReport {
            f1: f1_score(precision, recall),
            precision,
            recall,
            fraction_scored,
            threshold: None,
        }
    };
    Ok(Evaluation {
        of_scored: make(tp, fp, fneg),
        overall: make(tp, fp + unscored_neg, fneg + unscored_pos),
    })
}
