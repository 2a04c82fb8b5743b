//! Long-form documents: Gutenberg boilerplate stripping and catalog
//! filtering.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tokenizer::tokenize;

pub const DOWNLOADS_KEY: &str = "downloads";

/// Title words that mark collections and anthologies rather than single
/// stories.
pub const DEFAULT_TITLE_BLOCKLIST: [&str; 17] = [
    "stories",
    "collection",
    "poems",
    "complete",
    "essays",
    "fables",
    "tales",
    "papers",
    "poetry",
    "verses",
    "ballads",
    "sketches",
    "vol.",
    "vols.",
    "works",
    "volume",
    "other",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub title: String,
    pub text: String,
    pub word_count: usize,
    pub metadata: BTreeMap<String, i64>,
}

impl Document {
    pub fn new(id: impl Into<String>, title: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        Document {
            id: id.into(),
            title: title.into(),
            word_count: tokenize(&text).len(),
            text,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: i64) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }

    pub fn downloads(&self) -> i64 {
        self.metadata.get(DOWNLOADS_KEY).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripped {
    pub body: String,
    pub front_found: bool,
    pub back_found: bool,
}

const START_MARKERS: [&str; 2] = [
    "START OF THIS PROJECT GUTENBERG EBOOK",
    "START OF THE PROJECT GUTENBERG EBOOK",
];

const END_MARKERS: [&str; 3] = [
    "END OF THIS PROJECT GUTENBERG EBOOK",
    "END OF THE PROJECT GUTENBERG EBOOK",
    "END OF PROJECT GUTENBERG",
];

/// Removes Gutenberg front and back matter.
///
/// Front matter ends after the first line carrying a START marker, or
/// failing that the first line in the first half with both `END` and
/// `SMALL PRINT`. Back matter starts at the first later line carrying an
/// END marker (any case), else a line in the last quarter with `END` and
/// `PROJECT GUTENBERG` (any case), else a line in the last tenth with
/// `THE END` (exact case). The body is the raw text between, byte for byte.
pub fn strip_boilerplate(raw: &str) -> Stripped {
    let lines: Vec<&str> = raw.split_inclusive('\n').collect();
    let n = lines.len();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut at = 0;
    for l in &lines {
        offsets.push(at);
        at += l.len();
    }
    offsets.push(at);

    let front = lines
        .iter()
        .position(|l| START_MARKERS.iter().any(|m| l.contains(m)))
        .or_else(|| {
            lines
                .iter()
                .enumerate()
                .take_while(|(i, _)| 2 * i < n)
                .find(|(_, l)| l.contains("END") && l.contains("SMALL PRINT"))
                .map(|(i, _)| i)
        });
    let first_body = front.map_or(0, |i| i + 1);

    let upper: Vec<String> = lines.iter().map(|l| l.to_uppercase()).collect();
    let back = (first_body..n)
        .find(|&i| END_MARKERS.iter().any(|m| upper[i].contains(m)))
        .or_else(|| {
            (first_body..n)
                .filter(|&i| 4 * i >= 3 * n)
                .find(|&i| upper[i].contains("END") && upper[i].contains("PROJECT GUTENBERG"))
        })
        .or_else(|| {
            (first_body..n)
                .filter(|&i| 10 * i >= 9 * n)
                .find(|&i| lines[i].contains("THE END"))
        });
    let end = back.map_or(n, |i| i);

    Stripped {
        body: raw[offsets[first_body]..offsets[end]].to_string(),
        front_found: front.is_some(),
        back_found: back.is_some(),
    }
}

fn title_words(title: &str) -> Vec<String> {
    title
        .to_lowercase()
        .split_whitespace()
        .map(|w| {
            w.trim_matches(|c: char| !c.is_alphanumeric() && c != '.')
                .to_string()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

fn title_blocked(title: &str, blocklist: &[String]) -> bool {
    let words = title_words(title);
    blocklist.iter().any(|b| {
        let b = b.to_lowercase();
        words
            .iter()
            .any(|w| *w == b || w.trim_end_matches('.') == b.as_str())
    })
}

/// Keeps documents with `min_words <= word_count <= max_words`, more than
/// `min_downloads` downloads, and no blocklisted word in the title
/// (whole-word, case-insensitive). Order is preserved.
pub fn filter_catalog(
    docs: &[Document],
    min_words: usize,
    max_words: usize,
    min_downloads: i64,
    title_blocklist: &[String],
) -> Vec<Document> {
    docs.iter()
        .filter(|d| {
            d.word_count >= min_words
                && d.word_count <= max_words
                && d.downloads() > min_downloads
                && !title_blocked(&d.title, title_blocklist)
        })
        .cloned()
        .collect()
}

/// One row of a catalog CSV: `id,title,downloads,path`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub title: String,
    pub downloads: i64,
    pub path: PathBuf,
}

impl CatalogEntry {
    /// Reads the text, resolving relative paths against `base`.
    pub fn load(&self, base: &Path, strip: bool) -> Result<Document> {
        let path = if self.path.is_absolute() {
            self.path.clone()
        } else {
            base.join(&self.path)
        };
        let raw = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let text = if strip {
            strip_boilerplate(&raw).body
        } else {
            raw
        };
        Ok(Document::new(&self.id, &self.title, text).with_metadata(DOWNLOADS_KEY, self.downloads))
    }
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Vec<CatalogEntry>> {
    let path = path.as_ref();
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(std::io::BufReader::new(f));
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != 4 {
            return Err(Error::Parse {
                line,
                message: "expected `id,title,downloads,path`".into(),
            });
        }
        let downloads = rec[2].trim().parse().map_err(|_| Error::Parse {
            line,
            message: format!("downloads `{}` is not an integer", &rec[2]),
        })?;
        out.push(CatalogEntry {
            id: rec[0].to_string(),
            title: rec[1].to_string(),
            downloads,
            path: PathBuf::from(&rec[3]),
        });
    }
    Ok(out)
}

pub fn write_catalog(path: impl AsRef<Path>, entries: &[CatalogEntry]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["id", "title", "downloads", "path"])?;
    for e in entries {
        w.write_record([
            e.id.as_str(),
            e.title.as_str(),
            &e.downloads.to_string(),
            &e.path.to_string_lossy(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
