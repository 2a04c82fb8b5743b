//! Null models: word salad (shuffled tokens) and nonsense text drawn from
//! a bigram model of the document.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::rng::{substream, tag, StreamRng};
use crate::tokenizer::raw_tokens;

fn derived(doc: &Document, text: String) -> Document {
    let mut out = Document::new(doc.id.clone(), doc.title.clone(), text);
    out.metadata = doc.metadata.clone();
    out
}

/// Shuffles the document's tokens. The result has the same token multiset.
pub fn word_salad(doc: &Document, seed: u64) -> Document {
    let mut tokens = raw_tokens(&doc.text);
    let mut rng = substream(seed, &[tag("salad"), tag(&doc.id)]);
    tokens.shuffle(&mut rng);
    derived(doc, tokens.join(" "))
}

/// Bigram counts over lowercased tokens. Each token is emitted in the raw
/// form of its first occurrence.
#[derive(Debug, Clone)]
pub struct BigramModel {
    vocab: Vec<String>,
    surfaces: Vec<String>,
    // Per token: successors in index order with cumulative counts.
    successors: Vec<Vec<(u32, u64)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub tokens: Vec<String>,
    /// Positions drawn uniformly rather than from a predecessor: always 0,
    /// plus every position following a token with no successor.
    pub restarts: Vec<usize>,
}

impl BigramModel {
    pub fn train(raw: &[String]) -> Self {
        let mut index: HashMap<String, u32> = HashMap::new();
        let mut vocab: Vec<String> = Vec::new();
        let mut surfaces = Vec::new();
        let mut lowered = Vec::with_capacity(raw.len());
        for t in raw {
            let low = t.to_lowercase();
            let id = *index.entry(low.clone()).or_insert_with(|| {
                vocab.push(low);
                surfaces.push(t.clone());
                (vocab.len() - 1) as u32
            });
            lowered.push(id);
        }
        // Reindex by sorted vocabulary so the model is independent of order.
        let mut order: Vec<u32> = (0..vocab.len() as u32).collect();
        order.sort_by(|&a, &b| vocab[a as usize].cmp(&vocab[b as usize]));
        let mut remap = vec![0u32; vocab.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let vocab_sorted: Vec<String> = order.iter().map(|&o| vocab[o as usize].clone()).collect();
        let surfaces_sorted: Vec<String> = order
            .iter()
            .map(|&o| surfaces[o as usize].clone())
            .collect();

        let mut counts: Vec<HashMap<u32, u64>> = vec![HashMap::new(); vocab.len()];
        for pair in lowered.windows(2) {
            let (a, b) = (remap[pair[0] as usize], remap[pair[1] as usize]);
            *counts[a as usize].entry(b).or_default() += 1;
        }
        let successors = counts
            .into_iter()
            .map(|m| {
                let mut v: Vec<(u32, u64)> = m.into_iter().collect();
                v.sort_unstable();
                let mut acc = 0;
                for e in v.iter_mut() {
                    acc += e.1;
                    e.1 = acc;
                }
                v
            })
            .collect();
        BigramModel {
            vocab: vocab_sorted,
            surfaces: surfaces_sorted,
            successors,
        }
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocab
    }

    /// Number of times `b` follows `a` in the training text.
    pub fn count(&self, a: &str, b: &str) -> u64 {
        let (Some(ia), Some(ib)) = (self.id(a), self.id(b)) else {
            return 0;
        };
        let succ = &self.successors[ia];
        match succ.binary_search_by_key(&(ib as u32), |e| e.0) {
            Ok(i) => succ[i].1 - if i == 0 { 0 } else { succ[i - 1].1 },
            Err(_) => 0,
        }
    }

    fn id(&self, word: &str) -> Option<usize> {
        self.vocab.binary_search_by(|v| v.as_str().cmp(word)).ok()
    }

    pub fn generate(&self, len: usize, rng: &mut StreamRng) -> Generated {
        let mut ids = Vec::with_capacity(len);
        let mut restarts = Vec::new();
        if self.vocab.is_empty() {
            return Generated {
                tokens: Vec::new(),
                restarts,
            };
        }
        let mut current: Option<usize> = None;
        for pos in 0..len {
            let next = match current.map(|c| &self.successors[c]) {
                Some(succ) if !succ.is_empty() => {
                    let total = succ.last().unwrap().1;
                    let r = rng.gen_range(0..total);
                    let i = succ.partition_point(|e| e.1 <= r);
                    succ[i].0 as usize
                }
                _ => {
                    restarts.push(pos);
                    rng.gen_range(0..self.vocab.len())
                }
            };
            ids.push(next);
            current = Some(next);
        }
        Generated {
            tokens: ids.into_iter().map(|i| self.surfaces[i].clone()).collect(),
            restarts,
        }
    }
}

/// Text of the same length drawn from the document's own bigram model.
pub fn nonsense(doc: &Document, seed: u64) -> Result<Document> {
    nonsense_with_trace(doc, seed).map(|(d, _)| d)
}

pub fn nonsense_with_trace(doc: &Document, seed: u64) -> Result<(Document, Generated)> {
    let raw = raw_tokens(&doc.text);
    if raw.len() < 2 {
        return Err(Error::Precondition(format!(
            "document `{}` needs at least two tokens for a bigram model",
            doc.id
        )));
    }
    let model = BigramModel::train(&raw);
    let mut rng = substream(seed, &[tag("nonsense"), tag(&doc.id)]);
    let generated = model.generate(raw.len(), &mut rng);
    Ok((derived(doc, generated.tokens.join(" ")), generated))
}
