//! Sentiment dictionaries: loading, validation, stop windows, score
//! transforms, and fixed-then-stem word matching.
//!
//! A lexicon holds two kinds of entries. Fixed entries match a token
//! exactly; stem entries (written with a trailing `*` on disk) match any
//! token that starts with the stem surface, including the surface itself.
//! Lookups consult a trie of fixed entries first and fall back to the
//! longest matching stem.
//!
//! On disk a lexicon is UTF-8 text:
//!
//! ```text
//! #lexicon demo range=1,9 center=5
//! # comment
//! laughter<TAB>8.50
//! laugh*<TAB>7.00
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::scoring::WordVector;
use crate::trie::Trie;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub surface: String,
    pub score: f64,
    pub is_stem: bool,
}

impl LexiconEntry {
    pub fn fixed(surface: impl Into<String>, score: f64) -> Self {
        LexiconEntry {
            surface: surface.into(),
            score,
            is_stem: false,
        }
    }

    pub fn stem(surface: impl Into<String>, score: f64) -> Self {
        LexiconEntry {
            surface: surface.into(),
            score,
            is_stem: true,
        }
    }

    /// The surface as written on disk, with `*` appended for stems.
    pub fn pattern(&self) -> String {
        if self.is_stem {
            format!("{}*", self.surface)
        } else {
            self.surface.clone()
        }
    }
}

/// Exclusion band around a lexicon's neutral score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopWindow {
    delta_h: f64,
}

impl StopWindow {
    pub fn new(delta_h: f64) -> Result<Self> {
        if !delta_h.is_finite() || delta_h < 0.0 {
            return Err(Error::invalid(format!(
                "stop window must be a finite nonnegative number, got {delta_h}"
            )));
        }
        Ok(StopWindow { delta_h })
    }

    pub fn delta_h(&self) -> f64 {
        self.delta_h
    }
}

/// How to interpret a lexicon file.
#[derive(Debug, Clone, PartialEq)]
pub enum LexiconFormat {
    /// The file must start with a `#lexicon` header.
    Headed,
    /// Range and center are supplied by the caller; a header, if present,
    /// takes precedence.
    Bare {
        name: String,
        range: (f64, f64),
        center: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalStrategy {
    MostFrequent,
    LeastFrequent,
    Random { seed: u64 },
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    name: String,
    entries: Vec<LexiconEntry>,
    range: (f64, f64),
    center: f64,
    fixed: Trie<usize>,
    stems: Trie<usize>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.entries == other.entries
            && self.range == other.range
            && self.center == other.center
    }
}

impl Lexicon {
    /// Validates the entries and builds the lookup tries.
    pub fn new(
        name: impl Into<String>,
        range: (f64, f64),
        center: f64,
        entries: Vec<LexiconEntry>,
    ) -> Result<Self> {
        let (lo, hi) = range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidRange(format!("need lo < hi, got {lo},{hi}")));
        }
        if !(center >= lo && center <= hi) {
            return Err(Error::InvalidRange(format!(
                "center {center} outside [{lo}, {hi}]"
            )));
        }
        let mut fixed = Trie::new();
        let mut stems = Trie::new();
        for (i, e) in entries.iter().enumerate() {
            validate_entry(e, range)?;
            let trie = if e.is_stem { &mut stems } else { &mut fixed };
            if let Some(prev) = trie.insert(&e.surface, i) {
                let first = entries[prev].score;
                return Err(if (first - center) * (e.score - center) < 0.0 {
                    Error::ConflictingScores {
                        surface: e.pattern(),
                        first,
                        second: e.score,
                    }
                } else {
                    Error::DuplicateEntry {
                        surface: e.surface.clone(),
                        is_stem: e.is_stem,
                    }
                });
            }
        }
        Ok(Lexicon {
            name: name.into(),
            entries,
            range,
            center,
            fixed,
            stems,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Mean of all entry scores, the untrained classification threshold.
    pub fn mean_score(&self) -> Option<f64> {
        if self.entries.is_empty() {
            return None;
        }
        Some(self.entries.iter().map(|e| e.score).sum::<f64>() / self.entries.len() as f64)
    }

    /// True when every score is one of `center - 1`, `center`, `center + 1`.
    pub fn is_binary(&self) -> bool {
        let c = self.center;
        self.entries
            .iter()
            .all(|e| e.score == c || e.score == c - 1.0 || e.score == c + 1.0)
    }

    /// Fixed entry equal to `token`, else the longest stem prefixing it.
    pub fn match_word(&self, token: &str) -> Option<&LexiconEntry> {
        self.fixed
            .get(token)
            .or_else(|| self.stems.longest_prefix(token))
            .map(|&i| &self.entries[i])
    }

    pub fn apply_stop_window(&self, window: StopWindow) -> Lexicon {
        let dh = window.delta_h();
        if dh == 0.0 {
            return self.clone();
        }
        let kept = self
            .entries
            .iter()
            .filter(|e| (e.score - self.center).abs() >= dh)
            .cloned()
            .collect();
        self.derive(format!("{}[dh={}]", self.name, dh), kept)
    }

    /// Compresses scores toward `center ± 1`; `fraction = 1` leaves only
    /// the two binary values.
    pub fn binarize(&self, fraction: f64) -> Result<Lexicon> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::invalid(format!(
                "binarization fraction must lie in [0, 1], got {fraction}"
            )));
        }
        if fraction == 0.0 {
            return Ok(self.clone());
        }
        let c = self.center;
        let keep = 1.0 - fraction;
        let mut out = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let offset = e.score - c;
            if offset.abs() < 1.0 {
                return Err(Error::Precondition(format!(
                    "cannot binarize `{}` with score {}: it lies within 1 of the center {}; apply a stop window first",
                    e.pattern(),
                    e.score,
                    c
                )));
            }
            let score = if offset > 0.0 {
                c + 1.0 + (offset - 1.0) * keep
            } else {
                c - 1.0 + (offset + 1.0) * keep
            };
            out.push(LexiconEntry { score, ..e.clone() });
        }
        Ok(self.derive(format!("{}[binarized={}]", self.name, fraction), out))
    }

    /// Drops `count` entries chosen by `strategy`. An entry's frequency is
    /// the number of tokens in `freq` that it matches.
    pub fn remove_by_frequency(
        &self,
        freq: &WordVector,
        count: usize,
        strategy: RemovalStrategy,
    ) -> Result<Lexicon> {
        if count > self.entries.len() {
            return Err(Error::invalid(format!(
                "cannot remove {count} entries from a lexicon of {}",
                self.entries.len()
            )));
        }
        let removed: BTreeSet<usize> = match strategy {
            RemovalStrategy::Random { seed } => {
                let mut rng = rng::substream(seed, &[rng::tag("lexicon-removal")]);
                index::sample(&mut rng, self.entries.len(), count)
                    .into_iter()
                    .collect()
            }
            RemovalStrategy::MostFrequent | RemovalStrategy::LeastFrequent => {
                let mut mass = vec![0u64; self.entries.len()];
                for (word, n) in freq.iter() {
                    if let Some(i) = self.index_of_match(word) {
                        mass[i] += n;
                    }
                }
                let mut order: Vec<usize> = (0..self.entries.len()).collect();
                let by_name = |a: &usize, b: &usize| {
                    let (ea, eb) = (&self.entries[*a], &self.entries[*b]);
                    ea.surface
                        .cmp(&eb.surface)
                        .then(ea.is_stem.cmp(&eb.is_stem))
                };
                if strategy == RemovalStrategy::MostFrequent {
                    order.sort_by(|a, b| mass[*b].cmp(&mass[*a]).then_with(|| by_name(a, b)));
                } else {
                    order.sort_by(|a, b| mass[*a].cmp(&mass[*b]).then_with(|| by_name(a, b)));
                }
                order.into_iter().take(count).collect()
            }
        };
        let kept = self
            .entries
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, e)| e.clone())
            .collect();
        Ok(self.derive(format!("{}[-{}]", self.name, count), kept))
    }

    /// A copy without any entry (fixed or stem) whose surface is listed.
    pub fn without_surfaces<S: AsRef<str>>(&self, surfaces: &[S]) -> Lexicon {
        let drop: BTreeSet<&str> = surfaces
            .iter()
            .map(|s| s.as_ref().trim_end_matches('*'))
            .collect();
        let kept = self
            .entries
            .iter()
            .filter(|e| !drop.contains(e.surface.as_str()))
            .cloned()
            .collect();
        self.derive(self.name.clone(), kept)
    }

    fn index_of_match(&self, token: &str) -> Option<usize> {
        self.fixed
            .get(token)
            .or_else(|| self.stems.longest_prefix(token))
            .copied()
    }

    // Entries drawn from an already valid lexicon cannot fail validation.
    fn derive(&self, name: String, entries: Vec<LexiconEntry>) -> Lexicon {
        Lexicon::new(name, self.range, self.center, entries)
            .expect("entries of a valid lexicon remain valid")
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!(
            "#lexicon {} range={},{} center={}\n",
            self.name.replace(char::is_whitespace, "_"),
            self.range.0,
            self.range.1,
            self.center
        );
        for e in &self.entries {
            let _ = writeln!(out, "{}\t{}", e.pattern(), e.score);
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_file_string()).map_err(|e| Error::io(path, e))
    }
}

fn validate_entry(e: &LexiconEntry, (lo, hi): (f64, f64)) -> Result<()> {
    if e.surface.is_empty() {
        return Err(Error::InvalidEntry("empty surface".into()));
    }
    if e.surface.chars().any(char::is_whitespace) {
        return Err(Error::InvalidEntry(format!(
            "surface `{}` contains whitespace",
            e.surface
        )));
    }
    if !e.score.is_finite() {
        return Err(Error::InvalidEntry(format!(
            "score of `{}` is not finite",
            e.surface
        )));
    }
    if e.score < lo || e.score > hi {
        return Err(Error::ScoreOutOfRange {
            surface: e.pattern(),
            score: e.score,
            lo,
            hi,
        });
    }
    Ok(())
}

struct Header {
    name: String,
    range: (f64, f64),
    center: f64,
}

fn parse_header(line: &str, line_no: usize) -> Result<Header> {
    let parse_err = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let mut parts = line["#lexicon".len()..].split_whitespace();
    let name = parts
        .next()
        .ok_or_else(|| parse_err("header is missing the lexicon name".into()))?
        .to_string();
    let mut range = None;
    let mut center = None;
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| parse_err(format!("malformed header field `{part}`")))?;
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| parse_err(format!("`{s}` is not a number")))
        };
        match key {
            "range" => {
                let (lo, hi) = value
                    .split_once(',')
                    .ok_or_else(|| parse_err("range must be `lo,hi`".into()))?;
                range = Some((num(lo)?, num(hi)?));
            }
            "center" => center = Some(num(value)?),
            other => return Err(parse_err(format!("unknown header field `{other}`"))),
        }
    }
    Ok(Header {
        name,
        range: range.ok_or_else(|| parse_err("header is missing range=".into()))?,
        center: center.ok_or_else(|| parse_err("header is missing center=".into()))?,
    })
}

/// Parses lexicon text. Scores are checked against the declared range.
pub fn parse_lexicon(text: &str, format: &LexiconFormat) -> Result<Lexicon> {
    let mut header: Option<Header> = match format {
        LexiconFormat::Headed => None,
        LexiconFormat::Bare {
            name,
            range,
            center,
        } => Some(Header {
            name: name.clone(),
            range: *range,
            center: *center,
        }),
    };
    let mut header_seen = false;
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.starts_with("#lexicon") && !header_seen && entries.is_empty() {
            header = Some(parse_header(line, line_no)?);
            header_seen = true;
            continue;
        }
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if header.is_none() {
            return Err(Error::Parse {
                line: line_no,
                message: "entry before the `#lexicon` header".into(),
            });
        }
        let (surface, score) = line.split_once('\t').ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected `surface<TAB>score`".into(),
        })?;
        let score: f64 = score.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("score `{}` is not numeric", score.trim()),
        })?;
        let surface = surface.trim().to_lowercase();
        let (surface, is_stem) = match surface.strip_suffix('*') {
            Some(s) => (s.to_string(), true),
            None => (surface, false),
        };
        let entry = LexiconEntry {
            surface,
            score,
            is_stem,
        };
        entries.push(entry);
    }
    let header = header.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing `#lexicon <name> range=<lo>,<hi> center=<c>` header".into(),
    })?;
    Lexicon::new(header.name, header.range, header.center, entries)
}

pub fn load_lexicon(path: impl AsRef<Path>, format: &LexiconFormat) -> Result<Lexicon> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_lexicon(&text, format)
}
