//! Labeled corpus loaders: a `pos/` + `neg/` directory of text files, or a
//! CSV with `id,label,text` columns.

use std::path::Path;

use super::{Label, LabeledDoc};
use crate::error::{Error, Result};

pub fn load_labeled_dir(dir: impl AsRef<Path>) -> Result<Vec<LabeledDoc>> {
    let dir = dir.as_ref();
    let mut docs = Vec::new();
    for (sub, label) in [("pos", Label::Positive), ("neg", Label::Negative)] {
        let path = dir.join(sub);
        let mut files: Vec<_> = std::fs::read_dir(&path)
            .map_err(|e| Error::io(&path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();
        for f in files {
            let text = std::fs::read_to_string(&f).map_err(|e| Error::io(&f, e))?;
            if text.trim().is_empty() {
                continue;
            }
            let stem = f.file_stem().unwrap_or_default().to_string_lossy();
            docs.push(LabeledDoc::new(format!("{sub}/{stem}"), label, text)?);
        }
    }
    Ok(docs)
}

pub fn load_labeled_csv(path: impl AsRef<Path>) -> Result<Vec<LabeledDoc>> {
    let path = path.as_ref();
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(std::io::BufReader::new(f));
    let mut docs = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != 3 {
            return Err(Error::Parse {
                line,
                message: "expected `id,label,text`".into(),
            });
        }
        let label = Label::parse(&rec[1]).ok_or_else(|| Error::Parse {
            line,
            message: format!("unknown label `{}`", &rec[1]),
        })?;
        docs.push(
            LabeledDoc::new(&rec[0], label, &rec[2]).map_err(|_| Error::Parse {
                line,
                message: "empty text".into(),
            })?,
        );
    }
    Ok(docs)
}

/// Dispatches on whether `path` is a directory.
pub fn load_labeled_corpus(path: impl AsRef<Path>) -> Result<Vec<LabeledDoc>> {
    let path = path.as_ref();
    if path.is_dir() {
        load_labeled_dir(path)
    } else {
        load_labeled_csv(path)
    }
}

pub fn write_labeled_csv(path: impl AsRef<Path>, docs: &[LabeledDoc]) -> Result<()> {
    let mut w = csv::Writer::from_path(path.as_ref())?;
    w.write_record(["id", "label", "text"])?;
    for d in docs {
        w.write_record([d.id.as_str(), d.label.as_str(), d.text.as_str()])?;
    }
    w.flush().map_err(|e| Error::io(path.as_ref(), e))?;
    Ok(())
}
