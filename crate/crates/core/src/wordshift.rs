//! Word shifts: per-word contributions to the happiness difference
//! between a reference and a comparison text.
//!
//! For a word with score `h`, normalized frequencies `p_ref` and `p_comp`
//! (taken over matched tokens only), and text scores `h_ref`, `h_comp`:
//!
//! ```text
//! contribution = 100 * (h - h_ref) / (h_comp - h_ref) * (p_comp - p_ref)
//! ```
//!
//! The contributions sum to 100. When the two texts score the same the
//! normalization is skipped and the raw product `(h - h_ref)(p_comp - p_ref)`
//! is reported instead.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lexicon::Lexicon;
use crate::scoring::{score_text, WordVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SentimentClass {
    /// Happier than the reference text.
    More,
    /// Sadder than the reference text.
    Less,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyClass {
    Up,
    Down,
    Unchanged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftItem {
    pub word: String,
    pub contribution: f64,
    pub sentiment: SentimentClass,
    pub frequency: FrequencyClass,
    pub p_ref: f64,
    pub p_comp: f64,
    pub score: f64,
}

impl ShiftItem {
    /// `+↑`, `+↓`, `−↑`, `−↓`, or `0` for zero-contribution words.
    pub fn class_label(&self) -> &'static str {
        match (self.sentiment, self.frequency) {
            (SentimentClass::More, FrequencyClass::Up) => "+↑",
            (SentimentClass::More, FrequencyClass::Down) => "+↓",
            (SentimentClass::Less, FrequencyClass::Up) => "−↑",
            (SentimentClass::Less, FrequencyClass::Down) => "−↓",
            _ => "0",
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sentiment == SentimentClass::Neutral || self.frequency == FrequencyClass::Unchanged
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordShift {
    pub h_ref: f64,
    pub h_comp: f64,
    pub normalized: bool,
    /// Item count before any truncation.
    pub total_items: usize,
    /// Sorted by |contribution| descending, then word.
    pub items: Vec<ShiftItem>,
}

impl WordShift {
    pub fn total_contribution(&self) -> f64 {
        self.items.iter().map(|i| i.contribution).sum()
    }

    /// The `k` largest nonzero contributions.
    pub fn top_k(&self, k: usize) -> WordShift {
        WordShift {
            items: self
                .items
                .iter()
                .filter(|i| !i.is_zero())
                .take(k)
                .cloned()
                .collect(),
            ..self.clone()
        }
    }

    pub fn to_emit(&self) -> ShiftEmit {
        ShiftEmit {
            h_ref: self.h_ref,
            h_comp: self.h_comp,
            normalized: self.normalized,
            total_items: self.total_items,
            items: self
                .items
                .iter()
                .enumerate()
                .map(|(i, it)| EmitItem {
                    rank: i + 1,
                    word: it.word.clone(),
                    contribution: it.contribution,
                    class: it.class_label().to_string(),
                    p_ref: it.p_ref,
                    p_comp: it.p_comp,
                    score: it.score,
                })
                .collect(),
        }
    }
}

/// Plot-ready shift: header fields plus 1-based ranked items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftEmit {
    pub h_ref: f64,
    pub h_comp: f64,
    pub normalized: bool,
    pub total_items: usize,
    pub items: Vec<EmitItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmitItem {
    pub rank: usize,
    pub word: String,
    pub contribution: f64,
    pub class: String,
    pub p_ref: f64,
    pub p_comp: f64,
    pub score: f64,
}

pub fn compute_shift(
    reference: &WordVector,
    comparison: &WordVector,
    lex: &Lexicon,
) -> Result<WordShift> {
    let h_ref = score_text(reference, lex)?;
    let h_comp = score_text(comparison, lex)?;
    let (mass_ref, mass_comp) = (h_ref.matched_tokens as f64, h_comp.matched_tokens as f64);
    let (h_ref, h_comp) = (h_ref.value, h_comp.value);
    let normalized = h_comp != h_ref;

    let words: BTreeSet<&str> = reference
        .iter()
        .chain(comparison.iter())
        .map(|(w, _)| w)
        .collect();
    let mut items = Vec::new();
    for word in words {
        let Some(entry) = lex.match_word(word) else {
            continue;
        };
        let p_ref = reference.count(word) as f64 / mass_ref;
        let p_comp = comparison.count(word) as f64 / mass_comp;
        let score = entry.score;
        let sentiment = if score > h_ref {
            SentimentClass::More
        } else if score < h_ref {
            SentimentClass::Less
        } else {
            SentimentClass::Neutral
        };
        let frequency = if p_comp > p_ref {
            FrequencyClass::Up
        } else if p_comp < p_ref {
            FrequencyClass::Down
        } else {
            FrequencyClass::Unchanged
        };
        let contribution =
            if sentiment == SentimentClass::Neutral || frequency == FrequencyClass::Unchanged {
                0.0
            } else if normalized {
                100.0 * (score - h_ref) / (h_comp - h_ref) * (p_comp - p_ref)
            } else {
                (score - h_ref) * (p_comp - p_ref)
            };
        items.push(ShiftItem {
            word: word.to_string(),
            contribution,
            sentiment,
            frequency,
            p_ref,
            p_comp,
            score,
        });
    }
    items.sort_by(|a, b| {
        b.contribution
            .abs()
            .total_cmp(&a.contribution.abs())
            .then_with(|| a.word.cmp(&b.word))
    });
    Ok(WordShift {
        h_ref,
        h_comp,
        normalized,
        total_items: items.len(),
        items,
    })
}

/// Recomputes the shift with the listed surfaces (fixed or stem) removed
/// from the lexicon.
pub fn mask_words<S: AsRef<str>>(
    reference: &WordVector,
    comparison: &WordVector,
    lex: &Lexicon,
    words: &[S],
) -> Result<WordShift> {
    compute_shift(reference, comparison, &lex.without_surfaces(words))
}
