//! Synthetic books with a planted emotional arc, for demos and tests.

use std::f64::consts::PI;

use rand::Rng;

use crate::lexicon::{Lexicon, LexiconEntry};
use crate::rng::{substream, tag};

pub const POSITIVE: [&str; 10] = [
    "joy", "love", "laughter", "happy", "hope", "win", "smile", "peace", "gift", "sunshine",
];
pub const NEGATIVE: [&str; 10] = [
    "war", "grief", "death", "fear", "pain", "loss", "cry", "hate", "storm", "fail",
];
pub const FILLER: [&str; 10] = [
    "the", "and", "of", "to", "a", "in", "was", "he", "she", "it",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Rise,
    Fall,
    RiseFall,
    FallRise,
    Flat,
}

impl Shape {
    pub const ARCS: [Shape; 4] = [Shape::Rise, Shape::Fall, Shape::RiseFall, Shape::FallRise];

    /// Target sentiment in [-1, 1] at relative position `t` in [0, 1].
    pub fn value(self, t: f64) -> f64 {
        match self {
            Shape::Rise => -(PI * t).cos(),
            Shape::Fall => (PI * t).cos(),
            Shape::RiseFall => -(2.0 * PI * t).cos(),
            Shape::FallRise => (2.0 * PI * t).cos(),
            Shape::Flat => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Shape::Rise => "rise",
            Shape::Fall => "fall",
            Shape::RiseFall => "rise-fall",
            Shape::FallRise => "fall-rise",
            Shape::Flat => "flat",
        }
    }

    /// The shape sampled at `n` evenly spaced points.
    pub fn curve(self, n: usize) -> Vec<f64> {
        let d = (n.max(2) - 1) as f64;
        (0..n).map(|i| self.value(i as f64 / d)).collect()
    }
}

/// A 1 to 9 lexicon covering the synthetic vocabulary; filler words are
/// unscored.
pub fn demo_lexicon() -> Lexicon {
    let mut entries = Vec::new();
    for (i, w) in POSITIVE.iter().enumerate() {
        entries.push(LexiconEntry::fixed(*w, 7.0 + 0.2 * i as f64));
    }
    for (i, w) in NEGATIVE.iter().enumerate() {
        entries.push(LexiconEntry::fixed(*w, 3.0 - 0.2 * i as f64));
    }
    Lexicon::new("demo", (1.0, 9.0), 5.0, entries).expect("demo lexicon is valid")
}

/// `tokens` words whose local sentiment follows `shape`. Half the words are
/// filler; the rest are positive with probability `(1 + 0.8 s(t)) / 2`.
pub fn synthetic_book(shape: Shape, tokens: usize, seed: u64) -> String {
    let mut rng = substream(
        seed,
        &[tag("synthetic-book"), tag(shape.name()), tokens as u64],
    );
    let mut words = Vec::with_capacity(tokens);
    for p in 0..tokens {
        let t = p as f64 / tokens.max(1) as f64;
        let w = if rng.gen_bool(0.5) {
            FILLER[rng.gen_range(0..FILLER.len())]
        } else if rng.gen_bool((1.0 + 0.8 * shape.value(t)) / 2.0) {
            POSITIVE[rng.gen_range(0..POSITIVE.len())]
        } else {
            NEGATIVE[rng.gen_range(0..NEGATIVE.len())]
        };
        words.push(w);
    }
    let mut text = String::with_capacity(tokens * 6);
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            text.push(if i % 12 == 0 { '\n' } else { ' ' });
        }
        text.push_str(w);
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::tokenize;

    #[test]
    fn shapes_hit_their_extremes() {
        assert_eq!(Shape::Rise.value(0.0), -1.0);
        assert_eq!(Shape::Rise.value(1.0), 1.0);
        assert_eq!(Shape::RiseFall.value(0.5), 1.0);
        assert_eq!(Shape::Flat.curve(3), vec![0.0; 3]);
    }

    #[test]
    fn book_is_deterministic_and_sized() {
        let a = synthetic_book(Shape::Fall, 500, 3);
        assert_eq!(a, synthetic_book(Shape::Fall, 500, 3));
        assert_ne!(a, synthetic_book(Shape::Fall, 500, 4));
        assert_eq!(tokenize(&a).len(), 500);
        let lex = demo_lexicon();
        let toks = tokenize(&a).tokens;
        let first: f64 = toks[..250]
            .iter()
            .filter_map(|t| lex.match_word(t))
            .map(|e| e.score)
            .sum();
        let last: f64 = toks[250..]
            .iter()
            .filter_map(|t| lex.match_word(t))
            .map(|e| e.score)
            .sum();
        let n1 = toks[..250]
            .iter()
            .filter(|t| lex.match_word(t).is_some())
            .count() as f64;
        let n2 = toks[250..]
            .iter()
            .filter(|t| lex.match_word(t).is_some())
            .count() as f64;
        assert!(first / n1 > last / n2);
    }
}
