//! Lexicon ablations: binarizing scores and removing entries by frequency.

use serde::{Deserialize, Serialize};

use super::{decide, report, Evaluation, LabeledDoc, Prediction};
use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, RemovalStrategy};
use crate::scoring::{score_text, WordVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThresholdRule {
    /// Mean score of the (transformed) lexicon's entries.
    LexiconMean,
    /// The lexicon's neutral score.
    Center,
    Fixed(f64),
}

impl ThresholdRule {
    pub fn resolve(&self, lex: &Lexicon) -> Result<f64> {
        match *self {
            ThresholdRule::LexiconMean => lex
                .mean_score()
                .ok_or_else(|| Error::Precondition("empty lexicon has no mean score".into())),
            ThresholdRule::Center => Ok(lex.center()),
            ThresholdRule::Fixed(t) => Ok(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationPoint {
    /// Binarization fraction or number of removed entries.
    pub parameter: f64,
    pub lexicon_size: usize,
    pub evaluation: Evaluation,
}

fn evaluate_vectors(
    vectors: &[WordVector],
    docs: &[LabeledDoc],
    lex: &Lexicon,
    threshold: f64,
) -> Result<Evaluation> {
    let preds: Vec<Prediction> = vectors
        .iter()
        .map(|wv| decide(score_text(wv, lex).ok().map(|s| s.value), threshold))
        .collect();
    let gold: Vec<_> = docs.iter().map(|d| d.label).collect();
    Ok(report(&preds, &gold)?.with_threshold(threshold))
}

/// Classifies every document against a fixed threshold.
pub fn evaluate_lexicon(docs: &[LabeledDoc], lex: &Lexicon, threshold: f64) -> Result<Evaluation> {
    let vectors: Vec<WordVector> = docs.iter().map(LabeledDoc::word_vector).collect();
    evaluate_vectors(&vectors, docs, lex, threshold)
}

/// Evaluates `lex.binarize(f)` for each fraction. The lexicon must already
/// be stop-filtered with a window of at least 1.
pub fn binarization_sweep(
    docs: &[LabeledDoc],
    lex: &Lexicon,
    fractions: &[f64],
    rule: ThresholdRule,
) -> Result<Vec<AblationPoint>> {
    let vectors: Vec<WordVector> = docs.iter().map(LabeledDoc::word_vector).collect();
    fractions
        .iter()
        .map(|&f| {
            let transformed = lex.binarize(f)?;
            let threshold = rule.resolve(&transformed)?;
            Ok(AblationPoint {
                parameter: f,
                lexicon_size: transformed.len(),
                evaluation: evaluate_vectors(&vectors, docs, &transformed, threshold)?,
            })
        })
        .collect()
}

/// Evaluates the lexicon after removing each count of entries, with entry
/// frequencies taken from the whole corpus.
pub fn coverage_removal_sweep(
    docs: &[LabeledDoc],
    lex: &Lexicon,
    counts: &[usize],
    strategy: RemovalStrategy,
    rule: ThresholdRule,
) -> Result<Vec<AblationPoint>> {
    let vectors: Vec<WordVector> = docs.iter().map(LabeledDoc::word_vector).collect();
    let mut corpus = WordVector::new();
    for v in &vectors {
        corpus.merge(v);
    }
    counts
        .iter()
        .map(|&n| {
            let reduced = lex.remove_by_frequency(&corpus, n, strategy)?;
            let threshold = rule.resolve(&reduced)?;
            Ok(AblationPoint {
                parameter: n as f64,
                lexicon_size: reduced.len(),
                evaluation: evaluate_vectors(&vectors, docs, &reduced, threshold)?,
            })
        })
        .collect()
}
