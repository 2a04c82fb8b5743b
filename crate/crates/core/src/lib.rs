//! Dictionary-based sentiment analysis.
//!
//! Lexicon loading and matching, average-happiness scores and word shifts,
//! lexicon comparison and classification benchmarks, Project Gutenberg
//! corpus handling, and emotional arcs of long texts with their SVD modes,
//! Ward clusters, self-organizing maps and null models.

pub mod arcs;
pub mod classify;
pub mod cli;
pub mod cluster;
pub mod corpus;
pub mod decompose;
pub mod error;
pub mod lexcompare;
pub mod lexicon;
pub mod rng;
pub mod scoring;
pub mod som;
pub mod synth;
pub mod tokenizer;
pub mod trie;
pub mod wordshift;

pub use error::{Error, Result};
