use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::args::*;
use super::{EXIT_ANALYSIS, EXIT_OK};
use crate::arcs::{self, build_arc_from_tokens, EmotionalArc};
use crate::classify::{
    self, calibrate_with_f1, concat_sample_experiment, evaluate_lexicon, log_sizes,
    most_informative, nb_classify, nb_train, ConcatResult, Evaluation, InformativeWords,
    LabeledDoc, Prediction, ThresholdRule,
};
use crate::cluster::{self, ClusterSummary};
use crate::corpus::{
    filter_catalog, load_catalog, strip_boilerplate, write_catalog, CatalogEntry, Document,
    DEFAULT_TITLE_BLOCKLIST,
};
use crate::decompose::{self, ArcMatrix, ModeGroup, Polarity};
use crate::error::{Error, Result};
use crate::lexcompare::{compare_lexicons, ComparisonSummary, Mismatch};
use crate::lexicon::{load_lexicon, Lexicon, LexiconFormat, StopWindow};
use crate::rng::{substream, tag};
use crate::scoring::{score_text, HappinessScore, WordVector};
use crate::som::{self, GridEmit, SomGrid};
use crate::tokenizer::{tokenize, word_frequencies};

pub(super) fn execute(cli: &Cli) -> Result<i32> {
    let seed = cli.seed;
    match &cli.command {
        Command::Score(a) => score(a),
        Command::Shift(a) => shift(a),
        Command::Compare(a) => compare(a),
        Command::Bench(a) => bench(a, seed),
        Command::Arcs(a) => build_arcs(a),
        Command::Svd(a) => svd(a),
        Command::Cluster(a) => cluster_cmd(a),
        Command::Som(a) => som_cmd(a, seed),
        Command::Null(a) => null(a, seed),
        Command::CorpusFilter(a) => corpus_filter(a),
    }
}

fn load_lex(a: &LexiconArgs) -> Result<Lexicon> {
    let format = match a.range {
        Some(range) => LexiconFormat::Bare {
            name: a
                .lexicon
                .file_stem()
                .map_or("lexicon".into(), |s| s.to_string_lossy().into_owned()),
            range,
            center: a.center.unwrap_or((range.0 + range.1) / 2.0),
        },
        None => LexiconFormat::Headed,
    };
    let lex = load_lexicon(&a.lexicon, &format)?;
    Ok(lex.apply_stop_window(StopWindow::new(a.delta_h)?))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Writes to `output`, or stdout when absent.
fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    let mut text = content.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match output {
        Some(p) => write_file(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(output: Option<&Path>, value: &T) -> Result<()> {
    emit(output, &serde_json::to_string_pretty(value)?)
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::invalid(e.to_string()))
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn load_word_vector(path: &Path) -> Result<WordVector> {
    if is_csv(path) {
        WordVector::load_csv(path)
    } else {
        Ok(word_frequencies(&tokenize(&read_text(path)?)))
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.to_string_lossy().into_owned(),
        |s| s.to_string_lossy().into_owned(),
    )
}

/// File-system friendly form of a document id.
fn file_name(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn load_documents(src: &TextSource) -> Result<Vec<Document>> {
    let docs: Vec<Document> = match &src.catalog {
        Some(cat) => {
            if !src.inputs.is_empty() {
                return Err(Error::invalid(
                    "give either input files or --catalog, not both",
                ));
            }
            let entries = load_catalog(cat)?;
            let base = src
                .base
                .clone()
                .unwrap_or_else(|| cat.parent().map(Path::to_path_buf).unwrap_or_default());
            entries
                .par_iter()
                .map(|e| e.load(&base, src.strip))
                .collect::<Result<_>>()?
        }
        None => {
            if src.inputs.is_empty() {
                return Err(Error::invalid("no input texts; pass files or --catalog"));
            }
            src.inputs
                .par_iter()
                .map(|p| {
                    let raw = read_text(p)?;
                    let text = if src.strip {
                        strip_boilerplate(&raw).body
                    } else {
                        raw
                    };
                    let id = stem(p);
                    Ok(Document::new(id.clone(), id, text))
                })
                .collect::<Result<_>>()?
        }
    };
    let mut seen = BTreeSet::new();
    for d in &docs {
        if !seen.insert(&d.id) {
            return Err(Error::invalid(format!("duplicate document id `{}`", d.id)));
        }
    }
    Ok(docs)
}

#[derive(Serialize)]
struct ScoreRow {
    input: String,
    score: Option<HappinessScore>,
}

fn score(a: &ScoreArgs) -> Result<i32> {
    let lex = load_lex(&a.lexicon)?;
    let rows: Vec<ScoreRow> = a
        .inputs
        .par_iter()
        .map(|p| {
            let wv = load_word_vector(p)?;
            let score = match score_text(&wv, &lex) {
                Ok(s) => Some(s),
                Err(Error::UndefinedScore) => None,
                Err(e) => return Err(e),
            };
            Ok(ScoreRow {
                input: p.to_string_lossy().into_owned(),
                score,
            })
        })
        .collect::<Result<_>>()?;
    emit_json(a.output.as_deref(), &rows)?;
    let undefined: Vec<&str> = rows
        .iter()
        .filter(|r| r.score.is_none())
        .map(|r| r.input.as_str())
        .collect();
    if !undefined.is_empty() && !a.allow_unscored {
        eprintln!(
            "error: no lexicon words matched in {}; pass --allow-unscored to accept",
            undefined.join(", ")
        );
        return Ok(EXIT_ANALYSIS);
    }
    Ok(EXIT_OK)
}

fn shift(a: &ShiftArgs) -> Result<i32> {
    let lex = load_lex(&a.lexicon)?;
    let reference = load_word_vector(&a.reference)?;
    let comparison = load_word_vector(&a.comparison)?;
    let mut s = crate::wordshift::mask_words(&reference, &comparison, &lex, &a.mask)?;
    if let Some(k) = a.top {
        s = s.top_k(k);
    }
    emit_json(a.output.as_deref(), &s.to_emit())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CompareReport {
    #[serde(flatten)]
    summary: ComparisonSummary,
    mismatches: Vec<Mismatch>,
}

fn compare(a: &CompareArgs) -> Result<i32> {
    let la = load_lexicon(&a.lexicon_a, &LexiconFormat::Headed)?;
    let lb = load_lexicon(&a.lexicon_b, &LexiconFormat::Headed)?;
    let c = compare_lexicons(&la, &lb, a.top);
    if let Some(p) = &a.pairs {
        write_file(p, &csv_bytes(|b| c.write_csv(b))?)?;
    }
    emit_json(
        a.output.as_deref(),
        &CompareReport {
            summary: c.summary.clone(),
            mismatches: c.mismatches.clone(),
        },
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Calibrated {
    threshold: f64,
    train_f1: f64,
    evaluation: Evaluation,
}

#[derive(Serialize)]
struct NaiveBayesReport {
    evaluation: Evaluation,
    informative: Vec<InformativeWords>,
}

#[derive(Serialize)]
struct BenchReport {
    lexicon: String,
    documents: usize,
    train_documents: usize,
    test_documents: usize,
    sentences: bool,
    threshold: Evaluation,
    calibrated: Calibrated,
    naive_bayes: NaiveBayesReport,
    concatenation: Vec<ConcatResult>,
}

fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums: Vec<usize> = parts
        .iter()
        .map(|p| {
            p.parse()
                .map_err(|_| Error::invalid(format!("`{p}` is not a size")))
        })
        .collect::<Result<_>>()?;
    match nums[..] {
        [lo, hi, count] => Ok(log_sizes(lo, hi, count)),
        _ => Err(Error::invalid("--sizes takes `lo,hi,count`")),
    }
}

fn bench(a: &BenchArgs, seed: u64) -> Result<i32> {
    let lex = load_lex(&a.lexicon)?;
    let mut docs = classify::load_labeled_corpus(&a.corpus)?;
    if a.sentences {
        docs = classify::split_into_sentences(&docs);
    }
    if docs.is_empty() {
        return Err(Error::invalid("labeled corpus is empty"));
    }
    if !(a.train_fraction > 0.0 && a.train_fraction <= 1.0) {
        return Err(Error::invalid("--train-fraction must lie in (0, 1]"));
    }
    let rule = match (a.threshold, a.threshold_rule) {
        (Some(t), _) => ThresholdRule::Fixed(t),
        (None, ThresholdChoice::Mean) => ThresholdRule::LexiconMean,
        (None, ThresholdChoice::Center) => ThresholdRule::Center,
    };
    let threshold = evaluate_lexicon(&docs, &lex, rule.resolve(&lex)?)?;

    let mut order: Vec<usize> = (0..docs.len()).collect();
    order.shuffle(&mut substream(seed, &[tag("bench-split")]));
    let n_train = ((docs.len() as f64 * a.train_fraction).round() as usize).clamp(1, docs.len());
    let mut train_idx = order[..n_train].to_vec();
    let mut test_idx = order[n_train..].to_vec();
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    if test_idx.is_empty() {
        test_idx = (0..docs.len()).collect();
    }
    let pick =
        |idx: &[usize]| -> Vec<LabeledDoc> { idx.iter().map(|&i| docs[i].clone()).collect() };
    let (train, test) = (pick(&train_idx), pick(&test_idx));

    let (t, train_f1) = calibrate_with_f1(&train, &lex, 1.0, seed)?;
    let calibrated = Calibrated {
        threshold: t,
        train_f1,
        evaluation: evaluate_lexicon(&test, &lex, t)?,
    };

    let model = nb_train(&train, a.nb_vocab, a.nb_drop_top)?;
    let preds: Vec<Prediction> = test
        .par_iter()
        .map(|d| nb_classify(&model, &d.text).into())
        .collect();
    let gold: Vec<_> = test.iter().map(|d| d.label).collect();
    let naive_bayes = NaiveBayesReport {
        evaluation: classify::report(&preds, &gold)?,
        informative: most_informative(&model, a.informative),
    };

    let concatenation = match &a.sizes {
        Some(s) => concat_sample_experiment(&docs, &lex, &parse_sizes(s)?, a.trials, seed)?,
        None => Vec::new(),
    };
    emit_json(
        a.output.as_deref(),
        &BenchReport {
            lexicon: lex.name().to_string(),
            documents: docs.len(),
            train_documents: train.len(),
            test_documents: test.len(),
            sentences: a.sentences,
            threshold,
            calibrated,
            naive_bayes,
            concatenation,
        },
    )?;
    Ok(EXIT_OK)
}

fn build_arcs(a: &ArcsArgs) -> Result<i32> {
    let lex = load_lex(&a.lexicon)?;
    let docs = load_documents(&a.source)?;
    let arcs: Vec<EmotionalArc> = docs
        .par_iter()
        .map(|d| {
            let tokens = tokenize(&d.text).tokens;
            build_arc_from_tokens(&d.id, &tokens, &lex, a.n_points, a.window, !a.no_center).map_err(|e| match e {
                Error::DocumentTooShort { tokens, required } => Error::invalid(format!(
                    "`{}` has {tokens} tokens; --window {} with --n-points {} needs more than {required}",
                    d.id, a.window, a.n_points
                )),
                Error::EmptyWindow { index } => {
                    Error::Precondition(format!("`{}`: window {index} has no matched tokens", d.id))
                }
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    write_file(&a.output, &csv_bytes(|b| arcs::write_arcs_csv(b, &arcs))?)?;
    if let Some(dir) = &a.json_dir {
        create_dir(dir)?;
        for arc in &arcs {
            write_file(
                &dir.join(format!("{}.json", file_name(&arc.doc_id))),
                &arc.to_json()?,
            )?;
        }
    }
    Ok(EXIT_OK)
}

/// Reads `column` keyed by an `id` (or `doc_id`) column.
fn load_metadata(path: &Path, column: &str) -> Result<BTreeMap<String, i64>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(std::io::BufReader::new(f));
    let headers = r.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let id_col = find("id")
        .or_else(|| find("doc_id"))
        .ok_or_else(|| Error::invalid(format!("{}: no `id` column", path.display())))?;
    let value_col = find(column)
        .ok_or_else(|| Error::invalid(format!("{}: no `{column}` column", path.display())))?;
    let mut out = BTreeMap::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let v = rec.get(value_col).unwrap_or("").trim();
        let v: i64 = v.parse().map_err(|_| Error::Parse {
            line: i + 2,
            message: format!("`{v}` is not an integer"),
        })?;
        out.insert(rec.get(id_col).unwrap_or("").to_string(), v);
    }
    Ok(out)
}

#[derive(Serialize)]
struct ClosestList {
    mode: usize,
    polarity: Polarity,
    stories: Vec<(String, f64)>,
}

#[derive(Serialize)]
struct SvdReport {
    singular_values: Vec<f64>,
    variance_fraction: Vec<f64>,
    closest: Vec<ClosestList>,
    metadata: Option<Vec<ModeGroup>>,
}

fn svd(a: &SvdArgs) -> Result<i32> {
    let arcs = arcs::load_arcs_csv(&a.arcs)?;
    let m = ArcMatrix::new(&arcs)?;
    let k = a.modes.unwrap_or(m.n_rows().min(m.n_cols()));
    let d = decompose::svd_modes(&m, k)?;
    if let Some(p) = &a.coefficients {
        write_file(p, &csv_bytes(|b| d.write_coefficients_csv(b))?)?;
    }
    if let Some(p) = &a.report {
        let mut closest = Vec::new();
        for mode in 0..k {
            for polarity in [Polarity::Positive, Polarity::Negative] {
                closest.push(ClosestList {
                    mode,
                    polarity,
                    stories: decompose::closest_stories(&d, mode, polarity, a.closest)?,
                });
            }
        }
        let metadata = match &a.metadata {
            Some(path) => Some(decompose::mode_metadata_report(
                &d,
                &load_metadata(path, &a.metadata_column)?,
                a.threshold,
            )?),
            None => None,
        };
        let report = SvdReport {
            singular_values: d.singular_values.clone(),
            variance_fraction: d.variance_fraction.clone(),
            closest,
            metadata,
        };
        write_file(p, &serde_json::to_string_pretty(&report)?)?;
    }
    emit(a.output.as_deref(), &d.to_json()?)?;
    Ok(EXIT_OK)
}

fn split_arcs(arcs: Vec<EmotionalArc>) -> (Vec<String>, Vec<Vec<f64>>) {
    arcs.into_iter().map(|a| (a.doc_id, a.points)).unzip()
}

fn cluster_cmd(a: &ClusterArgs) -> Result<i32> {
    let (ids, rows) = split_arcs(arcs::load_arcs_csv(&a.arcs)?);
    let tree = cluster::ward_cluster(&ids, &rows)?;
    let assignment = cluster::cut(&tree, a.k)?;
    if let Some(p) = &a.dendrogram {
        write_file(p, &tree.to_json()?)?;
    }
    if let Some(p) = &a.assignments {
        let text = csv_bytes(|b| {
            let mut w = csv::Writer::from_writer(b);
            w.write_record(["doc_id", "cluster"])?;
            for (id, c) in ids.iter().zip(&assignment) {
                w.write_record([id.as_str(), &c.to_string()])?;
            }
            w.flush().map_err(|e| Error::io("<assignments>", e))?;
            Ok(())
        })?;
        write_file(p, &text)?;
    }
    if a.k >= 2 {
        let s = cluster::silhouette(&rows, &assignment)?;
        eprintln!("mean silhouette over {} clusters: {:.4}", a.k, s.mean);
    }
    let summary: Vec<ClusterSummary> = cluster::summarize(&ids, &rows, &assignment)?;
    emit(
        a.output.as_deref(),
        &csv_bytes(|b| cluster::write_cluster_report(b, &summary))?,
    )?;
    Ok(EXIT_OK)
}

fn som_cmd(a: &SomArgs, seed: u64) -> Result<i32> {
    let (_, rows) = split_arcs(arcs::load_arcs_csv(&a.arcs)?);
    let grid = SomGrid::new(a.side, a.alpha, a.beta, seed)?;
    let iterations = a
        .iterations
        .unwrap_or_else(|| som::default_iterations(rows.len()));
    let trained = som::som_train(&rows, &grid, iterations)?;
    emit(
        a.output.as_deref(),
        &GridEmit::new(&trained, &rows)?.to_json()?,
    )?;
    Ok(EXIT_OK)
}

fn null(a: &NullArgs, seed: u64) -> Result<i32> {
    let docs = load_documents(&a.source)?;
    let generated: Vec<Document> = docs
        .par_iter()
        .map(|d| match a.kind {
            NullKind::Salad => Ok(arcs::word_salad(d, seed)),
            NullKind::Nonsense => arcs::nonsense(d, seed),
        })
        .collect::<Result<_>>()?;
    create_dir(&a.output_dir)?;
    let mut entries = Vec::with_capacity(generated.len());
    for d in &generated {
        let name = format!("{}.txt", file_name(&d.id));
        write_file(&a.output_dir.join(&name), &d.text)?;
        entries.push(CatalogEntry {
            id: d.id.clone(),
            title: d.title.clone(),
            downloads: d.downloads(),
            path: PathBuf::from(name),
        });
    }
    write_catalog(a.output_dir.join("catalog.csv"), &entries)?;
    Ok(EXIT_OK)
}

fn corpus_filter(a: &CorpusFilterArgs) -> Result<i32> {
    let entries = load_catalog(&a.catalog)?;
    let base = a.base.clone().unwrap_or_else(|| {
        a.catalog
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default()
    });
    let docs: Vec<Document> = entries
        .par_iter()
        .map(|e| e.load(&base, !a.no_strip))
        .collect::<Result<_>>()?;
    let blocklist: Vec<String> = match &a.blocklist {
        Some(b) => b.clone(),
        None => DEFAULT_TITLE_BLOCKLIST
            .iter()
            .map(|s| s.to_string())
            .collect(),
    };
    let kept = filter_catalog(&docs, a.min_words, a.max_words, a.min_downloads, &blocklist);
    let kept_ids: BTreeSet<&str> = kept.iter().map(|d| d.id.as_str()).collect();
    let mut out: Vec<CatalogEntry> = entries
        .iter()
        .filter(|e| kept_ids.contains(e.id.as_str()))
        .cloned()
        .collect();
    if let Some(dir) = &a.stripped_dir {
        create_dir(dir)?;
        let dir = std::fs::canonicalize(dir).map_err(|e| Error::io(dir, e))?;
        let by_id: BTreeMap<&str, &Document> = kept.iter().map(|d| (d.id.as_str(), d)).collect();
        for e in out.iter_mut() {
            let path = dir.join(format!("{}.txt", file_name(&e.id)));
            write_file(&path, &by_id[e.id.as_str()].text)?;
            e.path = path;
        }
    }
    write_catalog(&a.output, &out)?;
    eprintln!("kept {} of {} books", out.len(), entries.len());
    Ok(EXIT_OK)
}
