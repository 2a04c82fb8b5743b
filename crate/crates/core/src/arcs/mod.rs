//! Emotional arcs: fixed-length sentiment time series from a sliding
//! window of words.
//!
//! For a document of `N` tokens, a window of `w` tokens and `n` points,
//! window `k` starts at `floor(k * (N - w - 1) / n)` and spans `w` tokens.
//! Documents need `N > w + n`.

mod null;

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::tokenizer::tokenize;

pub use null::{nonsense, nonsense_with_trace, word_salad, BigramModel, Generated};

pub const DEFAULT_WINDOW: usize = 10_000;
pub const DEFAULT_POINTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionalArc {
    pub doc_id: String,
    pub points: Vec<f64>,
    pub window_words: usize,
    pub mean_centered: bool,
}

/// On-disk form of a single arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ArcFile {
    doc_id: String,
    n: usize,
    window: usize,
    #[serde(default = "yes")]
    centered: bool,
    points: Vec<f64>,
}

fn yes() -> bool {
    true
}

impl EmotionalArc {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn centered(mut self) -> Self {
        center_in_place(&mut self.points);
        self.mean_centered = true;
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ArcFile {
            doc_id: self.doc_id.clone(),
            n: self.points.len(),
            window: self.window_words,
            centered: self.mean_centered,
            points: self.points.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: ArcFile = serde_json::from_str(text)?;
        if f.n != f.points.len() {
            return Err(Error::invalid(format!(
                "arc `{}` declares {} points but holds {}",
                f.doc_id,
                f.n,
                f.points.len()
            )));
        }
        Ok(EmotionalArc {
            doc_id: f.doc_id,
            points: f.points,
            window_words: f.window,
            mean_centered: f.centered,
        })
    }
}

/// Subtracts the mean. A constant series becomes exactly zero.
pub fn center_in_place(points: &mut [f64]) {
    let Some(&first) = points.first() else {
        return;
    };
    let n = points.len() as f64;
    let mean = first + points.iter().map(|p| p - first).sum::<f64>() / n;
    for p in points.iter_mut() {
        *p -= mean;
    }
}

/// Start offset of window `k`.
pub fn window_start(k: usize, tokens: usize, window: usize, n_points: usize) -> usize {
    // Exact floor of k * (N - w - 1) / n.
    ((k as u128 * (tokens - window - 1) as u128) / n_points as u128) as usize
}

pub fn build_arc(
    doc: &Document,
    lex: &Lexicon,
    n_points: usize,
    window: usize,
) -> Result<EmotionalArc> {
    let tokens = tokenize(&doc.text).tokens;
    build_arc_from_tokens(&doc.id, &tokens, lex, n_points, window, true)
}

/// Scores each window by the mean score of its matched tokens.
pub fn build_arc_from_tokens(
    doc_id: &str,
    tokens: &[String],
    lex: &Lexicon,
    n_points: usize,
    window: usize,
    center: bool,
) -> Result<EmotionalArc> {
    if n_points == 0 || window == 0 {
        return Err(Error::invalid(
            "arcs need at least one point and a nonempty window",
        ));
    }
    let required = window + n_points;
    if tokens.len() <= required {
        return Err(Error::DocumentTooShort {
            tokens: tokens.len(),
            required,
        });
    }
    let mut cache: HashMap<&str, Option<f64>> = HashMap::new();
    let scores: Vec<Option<f64>> = tokens
        .iter()
        .map(|t| {
            *cache
                .entry(t.as_str())
                .or_insert_with(|| lex.match_word(t).map(|e| e.score))
        })
        .collect();
    let mut points = Vec::with_capacity(n_points);
    for k in 0..n_points {
        let start = window_start(k, tokens.len(), window, n_points);
        let (mut sum, mut matched) = (0.0, 0u64);
        for s in scores[start..start + window].iter().flatten() {
            sum += s;
            matched += 1;
        }
        if matched == 0 {
            return Err(Error::EmptyWindow { index: k });
        }
        points.push(sum / matched as f64);
    }
    let arc = EmotionalArc {
        doc_id: doc_id.to_string(),
        points,
        window_words: window,
        mean_centered: false,
    };
    Ok(if center { arc.centered() } else { arc })
}

/// Batch form: a header `doc_id,t0,t1,...` then one arc per row.
pub fn write_arcs_csv<W: Write>(out: W, arcs: &[EmotionalArc]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let len = arcs.first().map_or(0, |a| a.len());
    let mut header = vec!["doc_id".to_string()];
    header.extend((0..len).map(|i| format!("t{i}")));
    w.write_record(&header)?;
    for a in arcs {
        if a.len() != len {
            return Err(Error::invalid(format!(
                "arc `{}` has {} points, expected {len}",
                a.doc_id,
                a.len()
            )));
        }
        let mut row = vec![a.doc_id.clone()];
        row.extend(a.points.iter().map(|p| p.to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<arcs>", e))?;
    Ok(())
}

/// Reads arcs written by [`write_arcs_csv`]. Window size is not stored in
/// the batch form and is reported as 0.
pub fn read_arcs_csv<R: Read>(input: R) -> Result<Vec<EmotionalArc>> {
    let mut r = csv::Reader::from_reader(input);
    let mut arcs = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let mut fields = rec.iter();
        let doc_id = fields.next().ok_or_else(|| Error::Parse {
            line,
            message: "missing doc_id".into(),
        })?;
        let points = fields
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("`{f}` is not a number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        arcs.push(EmotionalArc {
            doc_id: doc_id.to_string(),
            points,
            window_words: 0,
            mean_centered: true,
        });
    }
    Ok(arcs)
}

pub fn load_arcs_csv(path: impl AsRef<Path>) -> Result<Vec<EmotionalArc>> {
    let path = path.as_ref();
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_arcs_csv(std::io::BufReader::new(f))
}
