//! Word vectors, average-happiness scores and lexicon coverage.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

/// Frequency histogram of a text. Iteration is in lexicographic word
/// order, which fixes the summation order of every score.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordVector {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl WordVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tokens<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Self {
        let mut wv = WordVector::new();
        for t in tokens {
            wv.add(t, 1);
        }
        wv
    }

    /// Zero counts are dropped; repeated words accumulate.
    pub fn from_counts(pairs: impl IntoIterator<Item = (String, u64)>) -> Self {
        let mut wv = WordVector::new();
        for (w, c) in pairs {
            wv.add(&w, c);
        }
        wv
    }

    pub fn add(&mut self, word: &str, count: u64) {
        if count == 0 {
            return;
        }
        match self.counts.get_mut(word) {
            Some(c) => *c += count,
            None => {
                self.counts.insert(word.to_string(), count);
            }
        }
        self.total += count;
    }

    pub fn merge(&mut self, other: &WordVector) {
        for (w, c) in other.iter() {
            self.add(w, c);
        }
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct words.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(w, &c)| (w.as_str(), c))
    }

    /// Every count multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> WordVector {
        WordVector::from_counts(self.iter().map(|(w, c)| (w.to_string(), c * factor)))
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["word", "count"])?;
        for (word, c) in self.iter() {
            w.write_record([word, &c.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("<word vector>", e))?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(input: R) -> Result<WordVector> {
        let mut r = csv::Reader::from_reader(input);
        let mut wv = WordVector::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            if rec.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: "expected `word,count`".into(),
                });
            }
            let count: u64 = rec[1].trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("count `{}` is not a nonnegative integer", &rec[1]),
            })?;
            wv.add(&rec[0], count);
        }
        Ok(wv)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<WordVector> {
        let path = path.as_ref();
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        WordVector::read_csv(std::io::BufReader::new(f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HappinessScore {
    pub value: f64,
    pub matched_tokens: u64,
    pub total_tokens: u64,
    /// Distinct matched tokens (not distinct lexicon entries).
    pub matched_types: u64,
}

/// Frequency-weighted mean score of matched words. Stem matches count at
/// the token's own frequency with the stem's score.
pub fn score_text(wv: &WordVector, lex: &Lexicon) -> Result<HappinessScore> {
    let mut weighted = 0.0;
    let mut matched_tokens = 0u64;
    let mut matched_types = 0u64;
    for (word, count) in wv.iter() {
        if let Some(entry) = lex.match_word(word) {
            weighted += entry.score * count as f64;
            matched_tokens += count;
            matched_types += 1;
        }
    }
    if matched_tokens == 0 {
        return Err(Error::UndefinedScore);
    }
    Ok(HappinessScore {
        value: weighted / matched_tokens as f64,
        matched_tokens,
        total_tokens: wv.total(),
        matched_types,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveragePoint {
    /// 1-based frequency rank.
    pub rank: usize,
    pub matched: bool,
    /// Share of all tokens matched among ranks `1..=rank`.
    pub cumulative: f64,
}

pub fn coverage_curve(wv: &WordVector, lex: &Lexicon) -> Vec<CoveragePoint> {
    let mut words: Vec<(&str, u64)> = wv.iter().collect();
    words.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let total = wv.total() as f64;
    let mut covered = 0u64;
    words
        .into_iter()
        .enumerate()
        .map(|(i, (w, c))| {
            let matched = lex.match_word(w).is_some();
            if matched {
                covered += c;
            }
            CoveragePoint {
                rank: i + 1,
                matched,
                cumulative: covered as f64 / total,
            }
        })
        .collect()
}
