//! Multinomial Naive Bayes over token counts with add-one smoothing.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{Label, LabeledDoc};
use crate::error::{Error, Result};
use crate::scoring::WordVector;
use crate::tokenizer::{tokenize, word_frequencies};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub class_log_priors: BTreeMap<Label, f64>,
    /// Per word, log P(word | positive) and log P(word | negative).
    pub word_log_likelihoods: BTreeMap<String, [f64; 2]>,
    pub vocabulary: BTreeSet<String>,
    doc_counts: [u64; 2],
    class_tokens: [u64; 2],
    word_counts: BTreeMap<String, [u64; 2]>,
}

fn slot(label: Label) -> usize {
    match label {
        Label::Positive => 0,
        Label::Negative => 1,
    }
}

impl NbModel {
    pub fn log_likelihood(&self, word: &str, label: Label) -> Option<f64> {
        self.word_log_likelihoods
            .get(word)
            .map(|ll| ll[slot(label)])
    }

    pub fn log_prior(&self, label: Label) -> f64 {
        self.class_log_priors[&label]
    }

    /// Training documents carrying `label`.
    pub fn doc_count(&self, label: Label) -> u64 {
        self.doc_counts[slot(label)]
    }

    /// In-vocabulary tokens seen under `label`.
    pub fn class_tokens(&self, label: Label) -> u64 {
        self.class_tokens[slot(label)]
    }

    pub fn word_count(&self, word: &str, label: Label) -> u64 {
        self.word_counts.get(word).map_or(0, |c| c[slot(label)])
    }

    /// Log prior plus count-weighted log likelihoods; out-of-vocabulary
    /// words are ignored.
    pub fn log_posterior(&self, wv: &WordVector, label: Label) -> f64 {
        let s = slot(label);
        let mut total = self.log_prior(label);
        for (word, count) in wv.iter() {
            if let Some(ll) = self.word_log_likelihoods.get(word) {
                total += count as f64 * ll[s];
            }
        }
        total
    }

    /// Ties go to negative.
    pub fn classify_vector(&self, wv: &WordVector) -> Label {
        if self.log_posterior(wv, Label::Positive) > self.log_posterior(wv, Label::Negative) {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

/// Vocabulary is the `vocab_size` most frequent corpus tokens with the top
/// `drop_top` removed.
pub fn nb_train(docs: &[LabeledDoc], vocab_size: usize, drop_top: usize) -> Result<NbModel> {
    let mut doc_counts = [0u64; 2];
    let vectors: Vec<(Label, WordVector)> = docs
        .iter()
        .map(|d| {
            doc_counts[slot(d.label)] += 1;
            (d.label, word_frequencies(&tokenize(&d.text)))
        })
        .collect();
    if doc_counts.contains(&0) {
        return Err(Error::Precondition(
            "Naive Bayes training needs documents of both labels".into(),
        ));
    }
    let mut corpus: HashMap<&str, u64> = HashMap::new();
    for (_, wv) in &vectors {
        for (w, c) in wv.iter() {
            *corpus.entry(w).or_default() += c;
        }
    }
    let mut ranked: Vec<(&str, u64)> = corpus.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let vocabulary: BTreeSet<String> = ranked
        .iter()
        .take(vocab_size)
        .skip(drop_top)
        .map(|(w, _)| w.to_string())
        .collect();
    if vocabulary.is_empty() {
        return Err(Error::Precondition(format!(
            "empty vocabulary: dropping {drop_top} of the top {vocab_size} words leaves nothing"
        )));
    }
    let mut word_counts: BTreeMap<String, [u64; 2]> =
        vocabulary.iter().map(|w| (w.clone(), [0, 0])).collect();
    let mut class_tokens = [0u64; 2];
    for (label, wv) in &vectors {
        let s = slot(*label);
        for (w, c) in wv.iter() {
            if let Some(counts) = word_counts.get_mut(w) {
                counts[s] += c;
                class_tokens[s] += c;
            }
        }
    }
    let v = vocabulary.len() as f64;
    let word_log_likelihoods = word_counts
        .iter()
        .map(|(w, c)| {
            let ll = |s: usize| ((c[s] + 1) as f64 / (class_tokens[s] as f64 + v)).ln();
            (w.clone(), [ll(0), ll(1)])
        })
        .collect();
    let n = docs.len() as f64;
    let class_log_priors = Label::ALL
        .iter()
        .map(|&l| (l, (doc_counts[slot(l)] as f64 / n).ln()))
        .collect();
    Ok(NbModel {
        class_log_priors,
        word_log_likelihoods,
        vocabulary,
        doc_counts,
        class_tokens,
        word_counts,
    })
}

pub fn nb_classify(model: &NbModel, text: &str) -> Label {
    model.classify_vector(&word_frequencies(&tokenize(text)))
}

/// Words ranked by `P(w | numerator) / P(w | denominator)`, keeping only
/// ratios of at least 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformativeWords {
    pub numerator: Label,
    pub denominator: Label,
    pub words: Vec<(String, f64)>,
}

pub fn most_informative(model: &NbModel, k: usize) -> Vec<InformativeWords> {
    let pairs = [
        (Label::Positive, Label::Negative),
        (Label::Negative, Label::Positive),
    ];
    pairs
        .iter()
        .map(|&(num, den)| {
            let mut words: Vec<(String, f64)> = model
                .word_log_likelihoods
                .iter()
                .filter_map(|(w, ll)| {
                    let diff = ll[slot(num)] - ll[slot(den)];
                    (diff >= 0.0).then(|| (w.clone(), diff.exp()))
                })
                .collect();
            words.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            words.truncate(k);
            InformativeWords {
                numerator: num,
                denominator: den,
                words,
            }
        })
        .collect()
}
