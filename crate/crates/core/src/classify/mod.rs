//! Benchmarking lexicons on labeled corpora.

mod ablation;
mod corpus;
mod metrics;
mod naive_bayes;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::rng;
use crate::scoring::{score_text, WordVector};
use crate::tokenizer::{tokenize, word_frequencies};

pub use ablation::{
    binarization_sweep, coverage_removal_sweep, evaluate_lexicon, AblationPoint, ThresholdRule,
};
pub use corpus::{load_labeled_corpus, load_labeled_csv, load_labeled_dir, write_labeled_csv};
pub use metrics::{f1_score, report, ClassifierReport, Evaluation};
pub use naive_bayes::{most_informative, nb_classify, nb_train, InformativeWords, NbModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Positive, Label::Negative];

    pub fn parse(s: &str) -> Option<Label> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" | "+" | "1" => Some(Label::Positive),
            "negative" | "neg" | "-" | "0" | "-1" => Some(Label::Negative),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prediction {
    Positive,
    Negative,
    Unscored,
}

impl From<Label> for Prediction {
    fn from(l: Label) -> Self {
        match l {
            Label::Positive => Prediction::Positive,
            Label::Negative => Prediction::Negative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDoc {
    pub id: String,
    pub label: Label,
    pub text: String,
}

impl LabeledDoc {
    pub fn new(id: impl Into<String>, label: Label, text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(Error::invalid("labeled document text is empty"));
        }
        Ok(LabeledDoc {
            id: id.into(),
            label,
            text,
        })
    }

    pub fn word_vector(&self) -> WordVector {
        word_frequencies(&tokenize(&self.text))
    }
}

fn decide(score: Option<f64>, threshold: f64) -> Prediction {
    match score {
        None => Prediction::Unscored,
        Some(s) if s > threshold => Prediction::Positive,
        Some(_) => Prediction::Negative,
    }
}

/// Positive above `threshold`, negative at or below it, unscored when no
/// lexicon word matches.
pub fn threshold_classify(doc: &LabeledDoc, lex: &Lexicon, threshold: f64) -> Prediction {
    decide(
        score_text(&doc.word_vector(), lex).ok().map(|s| s.value),
        threshold,
    )
}

/// Best F1 partition of `(score, label)` pairs under the `score > t`
/// rule. Candidates are one point below every score, the midpoints
/// between consecutive distinct scores, and the maximum score.
pub(crate) fn best_threshold(scored: &[(f64, Label)]) -> (f64, f64) {
    let mut values: Vec<f64> = scored.iter().map(|s| s.0).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mut candidates = Vec::with_capacity(values.len() + 1);
    candidates.push(values[0] - 1.0);
    for w in values.windows(2) {
        let mid = w[0] + (w[1] - w[0]) / 2.0;
        candidates.push(if mid >= w[1] { w[0] } else { mid });
    }
    candidates.push(values[values.len() - 1]);
    let gold: Vec<Label> = scored.iter().map(|s| s.1).collect();
    let mut best = (candidates[0], f64::NEG_INFINITY);
    for t in candidates {
        let preds: Vec<Prediction> = scored.iter().map(|s| decide(Some(s.0), t)).collect();
        let f1 = report(&preds, &gold).expect("aligned").of_scored.f1;
        if f1 > best.1 {
            best = (t, f1);
        }
    }
    best
}

/// Draws a seeded `train_fraction` sample of `train` and returns the
/// threshold that maximizes F1 on its scored documents.
pub fn calibrate_threshold(
    train: &[LabeledDoc],
    lex: &Lexicon,
    train_fraction: f64,
    seed: u64,
) -> Result<f64> {
    calibrate_with_f1(train, lex, train_fraction, seed).map(|(t, _)| t)
}

/// As [`calibrate_threshold`], also returning the F1 reached on the sample.
pub fn calibrate_with_f1(
    train: &[LabeledDoc],
    lex: &Lexicon,
    train_fraction: f64,
    seed: u64,
) -> Result<(f64, f64)> {
    if !(train_fraction > 0.0 && train_fraction <= 1.0) {
        return Err(Error::invalid(format!(
            "training fraction must lie in (0, 1], got {train_fraction}"
        )));
    }
    if train.is_empty() {
        return Err(Error::Precondition("no training documents".into()));
    }
    let n = ((train.len() as f64 * train_fraction).round() as usize).clamp(1, train.len());
    let mut rng = rng::substream(seed, &[rng::tag("calibrate")]);
    let mut picked = index::sample(&mut rng, train.len(), n).into_vec();
    picked.sort_unstable();
    let scored: Vec<(f64, Label)> = picked
        .into_iter()
        .filter_map(|i| {
            score_text(&train[i].word_vector(), lex)
                .ok()
                .map(|s| (s.value, train[i].label))
        })
        .collect();
    let has = |l: Label| scored.iter().any(|s| s.1 == l);
    if !has(Label::Positive) || !has(Label::Negative) {
        return Err(Error::Precondition(
            "calibration sample must contain scored documents of both labels".into(),
        ));
    }
    Ok(best_threshold(&scored))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcatResult {
    pub size: usize,
    pub mean_pos: f64,
    pub sd_pos: f64,
    pub mean_neg: f64,
    pub sd_neg: f64,
    /// Share of sampled scores on the wrong side of the midpoint between
    /// the two class means.
    pub overlap_fraction: f64,
    pub scored_trials_pos: usize,
    pub scored_trials_neg: usize,
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Roughly log-spaced integer sizes from `lo` to `hi` inclusive.
pub fn log_sizes(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if count == 0 || lo == 0 || hi < lo {
        return Vec::new();
    }
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<usize> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as usize)
        .collect();
    out.dedup();
    out
}

/// For each size, scores `trials` concatenations of `size` documents drawn
/// without replacement from each class.
pub fn concat_sample_experiment(
    docs: &[LabeledDoc],
    lex: &Lexicon,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<ConcatResult>> {
    let vectors: Vec<WordVector> = docs.par_iter().map(LabeledDoc::word_vector).collect();
    let pool = |label: Label| -> Vec<usize> {
        (0..docs.len())
            .filter(|&i| docs[i].label == label)
            .collect()
    };
    let pools = [pool(Label::Positive), pool(Label::Negative)];
    let mut out = Vec::with_capacity(sizes.len());
    for &size in sizes {
        if size == 0 || pools.iter().any(|p| size > p.len()) {
            return Err(Error::invalid(format!(
                "sample size {size} exceeds a class of {} positive / {} negative documents",
                pools[0].len(),
                pools[1].len()
            )));
        }
        let mut per_class: Vec<Vec<f64>> = Vec::with_capacity(2);
        for (class, members) in pools.iter().enumerate() {
            let scores: Vec<Option<f64>> = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut r = rng::substream(
                        seed,
                        &[rng::tag("concat"), size as u64, class as u64, trial as u64],
                    );
                    let mut combined = WordVector::new();
                    for i in index::sample(&mut r, members.len(), size) {
                        combined.merge(&vectors[members[i]]);
                    }
                    score_text(&combined, lex).ok().map(|s| s.value)
                })
                .collect();
            per_class.push(scores.into_iter().flatten().collect());
        }
        if per_class.iter().any(Vec::is_empty) {
            return Err(Error::UndefinedScore);
        }
        let (mean_pos, sd_pos) = mean_sd(&per_class[0]);
        let (mean_neg, sd_neg) = mean_sd(&per_class[1]);
        let mid = (mean_pos + mean_neg) / 2.0;
        let pos_high = mean_pos >= mean_neg;
        let wrong_pos = per_class[0]
            .iter()
            .filter(|&&s| if pos_high { s <= mid } else { s >= mid })
            .count();
        let wrong_neg = per_class[1]
            .iter()
            .filter(|&&s| if pos_high { s >= mid } else { s <= mid })
            .count();
        let total = per_class[0].len() + per_class[1].len();
        out.push(ConcatResult {
            size,
            mean_pos,
            sd_pos,
            mean_neg,
            sd_neg,
            overlap_fraction: (wrong_pos + wrong_neg) as f64 / total as f64,
            scored_trials_pos: per_class[0].len(),
            scored_trials_neg: per_class[1].len(),
        });
    }
    Ok(out)
}

/// Splits after runs of `.`, `!` or `?` that are followed by whitespace
/// or the end of the text. Abbreviations such as "Mr." also split.
pub fn sentence_split(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let mut end = i + c.len_utf8();
        while let Some(&(j, d)) = chars.peek() {
            if matches!(d, '.' | '!' | '?') {
                end = j + d.len_utf8();
                chars.next();
            } else {
                break;
            }
        }
        let at_boundary = match chars.peek() {
            None => true,
            Some(&(_, d)) => d.is_whitespace(),
        };
        if at_boundary {
            let piece = text[start..i].trim();
            if !piece.is_empty() {
                out.push(piece.to_string());
            }
            start = end;
        }
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        out.push(tail.to_string());
    }
    out
}

/// One labeled document per sentence, ids suffixed with `#<index>`.
pub fn split_into_sentences(docs: &[LabeledDoc]) -> Vec<LabeledDoc> {
    docs.iter()
        .flat_map(|d| {
            sentence_split(&d.text)
                .into_iter()
                .enumerate()
                .map(move |(k, s)| LabeledDoc {
                    id: format!("{}#{k}", d.id),
                    label: d.label,
                    text: s,
                })
        })
        .collect()
}
