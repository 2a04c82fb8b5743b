//! Pairwise dictionary comparison.
//!
//! Matching is asymmetric: every fixed word of lexicon `a` is looked up
//! in lexicon `b` with `b`'s fixed-then-stem rule. Continuum pairs are fit
//! with reduced major axis regression; the mismatch of a word is its
//! vertical distance to that line. Binary `b` lexicons have no line, so
//! words are grouped by their `b` score and ranked by how far their `a`
//! score sits from `a`'s center.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedWord {
    pub word: String,
    pub score_a: f64,
    pub score_b: f64,
    pub via_stem: bool,
}

pub fn matched_words(a: &Lexicon, b: &Lexicon) -> Vec<MatchedWord> {
    let mut out: Vec<MatchedWord> = a
        .entries()
        .iter()
        .filter(|e| !e.is_stem)
        .filter_map(|e| {
            b.match_word(&e.surface).map(|m| MatchedWord {
                word: e.surface.clone(),
                score_a: e.score,
                score_b: m.score,
                via_stem: m.is_stem,
            })
        })
        .collect();
    out.sort_by(|x, y| x.word.cmp(&y.word));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmaFit {
    pub slope: f64,
    pub intercept: f64,
    pub n: usize,
    /// Vertical offsets `y - (slope * x + intercept)`, aligned with the input.
    pub residuals: Vec<f64>,
}

impl RmaFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Reduced major axis fit: slope `sign(r) * s_y / s_x`, line through the means.
pub fn rma_fit(points: &[(f64, f64)]) -> Result<RmaFit> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Precondition(format!(
            "RMA regression needs at least 2 points, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Precondition(
            "RMA regression needs nonzero variance in both coordinates".into(),
        ));
    }
    let sign = if sxy < 0.0 { -1.0 } else { 1.0 };
    let slope = sign * (syy / sxx).sqrt();
    let intercept = mean_y - slope * mean_x;
    let residuals = points
        .iter()
        .map(|&(x, y)| y - (slope * x + intercept))
        .collect();
    Ok(RmaFit {
        slope,
        intercept,
        n,
        residuals,
    })
}

pub fn fit_matched(pairs: &[MatchedWord]) -> Result<RmaFit> {
    let points: Vec<(f64, f64)> = pairs.iter().map(|p| (p.score_a, p.score_b)).collect();
    rma_fit(&points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub word: String,
    pub score_a: f64,
    pub score_b: f64,
    pub deviation: f64,
}

/// The `k` greatest mismatches. With a fit, ranked by vertical distance to
/// the line. Without one, the top `k` of each `b`-score bucket (ascending
/// bucket order) ranked by `|score_a - center_a|`.
pub fn mismatch_table(
    pairs: &[MatchedWord],
    fit: Option<&RmaFit>,
    center_a: f64,
    k: usize,
) -> Vec<Mismatch> {
    let rank = |mut rows: Vec<Mismatch>| {
        rows.sort_by(|x, y| {
            y.deviation
                .total_cmp(&x.deviation)
                .then_with(|| x.word.cmp(&y.word))
        });
        rows.truncate(k);
        rows
    };
    match fit {
        Some(fit) => rank(
            pairs
                .iter()
                .map(|p| Mismatch {
                    word: p.word.clone(),
                    score_a: p.score_a,
                    score_b: p.score_b,
                    deviation: (p.score_b - fit.predict(p.score_a)).abs(),
                })
                .collect(),
        ),
        None => {
            let mut buckets: Vec<f64> = pairs.iter().map(|p| p.score_b).collect();
            buckets.sort_by(f64::total_cmp);
            buckets.dedup();
            buckets
                .into_iter()
                .flat_map(|b| {
                    rank(
                        pairs
                            .iter()
                            .filter(|p| p.score_b == b)
                            .map(|p| Mismatch {
                                word: p.word.clone(),
                                score_a: p.score_a,
                                score_b: p.score_b,
                                deviation: (p.score_a - center_a).abs(),
                            })
                            .collect(),
                    )
                })
                .collect()
        }
    }
}

/// Extreme `a` scores within each `b`-score bucket of a binary comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketExtremes {
    pub score_b: f64,
    pub count: usize,
    /// Lowest `a` scores, ascending.
    pub lowest: Vec<(String, f64)>,
    /// Highest `a` scores, descending.
    pub highest: Vec<(String, f64)>,
}

pub fn bucket_extremes(pairs: &[MatchedWord], k: usize) -> Vec<BucketExtremes> {
    let mut buckets: Vec<f64> = pairs.iter().map(|p| p.score_b).collect();
    buckets.sort_by(f64::total_cmp);
    buckets.dedup();
    buckets
        .into_iter()
        .map(|b| {
            let mut members: Vec<(String, f64)> = pairs
                .iter()
                .filter(|p| p.score_b == b)
                .map(|p| (p.word.clone(), p.score_a))
                .collect();
            members.sort_by(|x, y| x.1.total_cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
            let lowest = members.iter().take(k).cloned().collect();
            let highest = members.iter().rev().take(k).cloned().collect();
            BucketExtremes {
                score_b: b,
                count: members.len(),
                lowest,
                highest,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub lexicon_a: String,
    pub lexicon_b: String,
    pub n: usize,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub via_stem: usize,
}

/// Everything `compare` reports for one ordered lexicon pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub pairs: Vec<MatchedWord>,
    pub fit: Option<RmaFit>,
    pub mismatches: Vec<Mismatch>,
    pub summary: ComparisonSummary,
    pub center_a: f64,
}

pub fn compare_lexicons(a: &Lexicon, b: &Lexicon, k: usize) -> Comparison {
    let pairs = matched_words(a, b);
    let fit = if b.is_binary() || a.is_binary() {
        None
    } else {
        fit_matched(&pairs).ok()
    };
    let mismatches = mismatch_table(&pairs, fit.as_ref(), a.center(), k);
    let summary = ComparisonSummary {
        lexicon_a: a.name().to_string(),
        lexicon_b: b.name().to_string(),
        n: pairs.len(),
        slope: fit.as_ref().map(|f| f.slope),
        intercept: fit.as_ref().map(|f| f.intercept),
        via_stem: pairs.iter().filter(|p| p.via_stem).count(),
    };
    Comparison {
        pairs,
        fit,
        mismatches,
        summary,
        center_a: a.center(),
    }
}

impl Comparison {
    /// `word,score_a,score_b,via_stem,deviation`, one row per matched word.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["word", "score_a", "score_b", "via_stem", "deviation"])?;
        for p in &self.pairs {
            let deviation = match &self.fit {
                Some(f) => (p.score_b - f.predict(p.score_a)).abs(),
                None => (p.score_a - self.center_a).abs(),
            };
            w.write_record([
                p.word.clone(),
                p.score_a.to_string(),
                p.score_b.to_string(),
                p.via_stem.to_string(),
                deviation.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<comparison>", e))?;
        Ok(())
    }
}

pub fn read_comparison_csv<R: std::io::Read>(input: R) -> Result<Vec<MatchedWord>> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |field: &str| Error::Parse {
            line: i + 2,
            message: format!("bad {field}"),
        };
        out.push(MatchedWord {
            word: rec.get(0).ok_or_else(|| bad("word"))?.to_string(),
            score_a: rec
                .get(1)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("score_a"))?,
            score_b: rec
                .get(2)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("score_b"))?,
            via_stem: rec
                .get(3)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("via_stem"))?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LexiconEntry;
    use proptest::prelude::*;

    fn continuum(entries: Vec<LexiconEntry>) -> Lexicon {
        Lexicon::new("c", (1.0, 9.0), 5.0, entries).unwrap()
    }

    fn binary(entries: Vec<LexiconEntry>) -> Lexicon {
        Lexicon::new("b", (-1.0, 1.0), 0.0, entries).unwrap()
    }

    #[test]
    fn matching_examples() {
        let a = continuum(vec![LexiconEntry::fixed("x", 1.0)]);
        let b = continuum(vec![LexiconEntry::fixed("x", 2.0)]);
        assert_eq!(
            matched_words(&a, &b),
            vec![MatchedWord {
                word: "x".into(),
                score_a: 1.0,
                score_b: 2.0,
                via_stem: false
            }]
        );
        let a = continuum(vec![LexiconEntry::fixed("laughing", 8.2)]);
        let b = binary(vec![LexiconEntry::stem("laugh", -1.0)]);
        let m = matched_words(&a, &b);
        assert_eq!(m[0].score_b, -1.0);
        assert!(m[0].via_stem);
        // Asymmetric: stems of `b` are never looked up in `a`.
        assert!(matched_words(&b, &a).is_empty());
        let c = continuum(vec![LexiconEntry::fixed("y", 3.0)]);
        assert!(matched_words(&a, &c).is_empty());
    }

    #[test]
    fn exact_lines() {
        let pts: Vec<_> = (0..10).map(|i| (i as f64, 2.0 * i as f64 + 1.0)).collect();
        let f = rma_fit(&pts).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        let pts: Vec<_> = (0..10).map(|i| (i as f64, -(i as f64))).collect();
        let f = rma_fit(&pts).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12 && f.intercept.abs() < 1e-12);
        assert!(f.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn degenerate_fits() {
        assert!(rma_fit(&[(1.0, 1.0)]).is_err());
        assert!(rma_fit(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(rma_fit(&[(1.0, 1.0), (2.0, 1.0)]).is_err());
    }

    #[test]
    fn mismatch_on_exact_line_is_zero() {
        let pairs: Vec<_> = (0..5)
            .map(|i| MatchedWord {
                word: format!("w{i}"),
                score_a: 1.0 + i as f64,
                score_b: 2.0 + i as f64,
                via_stem: false,
            })
            .collect();
        let fit = fit_matched(&pairs).unwrap();
        let t = mismatch_table(&pairs, Some(&fit), 5.0, 3);
        assert_eq!(t.len(), 3);
        assert!(t.iter().all(|m| m.deviation < 1e-12));
        assert!(mismatch_table(&pairs, Some(&fit), 5.0, 0).is_empty());
    }

    #[test]
    fn mismatch_outlier_ranks_first() {
        let mut pairs: Vec<_> = (0..6)
            .map(|i| MatchedWord {
                word: format!("w{i}"),
                score_a: 1.0 + i as f64,
                score_b: 1.0 + i as f64,
                via_stem: false,
            })
            .collect();
        pairs[2].score_b = 8.0;
        pairs[2].word = "lust".into();
        let fit = fit_matched(&pairs).unwrap();
        assert_eq!(mismatch_table(&pairs, Some(&fit), 5.0, 1)[0].word, "lust");
    }

    #[test]
    fn binary_buckets() {
        let a = continuum(vec![
            LexiconEntry::fixed("terrified", 1.72),
            LexiconEntry::fixed("meek", 3.87),
            LexiconEntry::fixed("comedy", 8.37),
            LexiconEntry::fixed("laughter", 8.45),
            LexiconEntry::fixed("pressure", 3.38),
        ]);
        let b = binary(vec![
            LexiconEntry::fixed("terrified", 1.0),
            LexiconEntry::fixed("meek", 1.0),
            LexiconEntry::fixed("comedy", -1.0),
            LexiconEntry::fixed("laughter", -1.0),
            LexiconEntry::fixed("pressure", 0.0),
        ]);
        let cmp = compare_lexicons(&a, &b, 1);
        assert!(cmp.fit.is_none());
        let words: Vec<_> = cmp.mismatches.iter().map(|m| m.word.as_str()).collect();
        assert_eq!(words, ["laughter", "pressure", "terrified"]);
        let ext = bucket_extremes(&cmp.pairs, 1);
        assert_eq!(ext.len(), 3);
        assert_eq!(ext[2].lowest[0].0, "terrified");
        assert_eq!(ext[0].highest[0].0, "laughter");
        let mut buf = Vec::new();
        cmp.write_csv(&mut buf).unwrap();
        assert_eq!(read_comparison_csv(buf.as_slice()).unwrap(), cmp.pairs);
    }

    proptest! {
        #[test]
        fn inverse_fit_inverts_slope(pts in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 3..30)) {
            let Ok(f) = rma_fit(&pts) else { return Ok(()); };
            let swapped: Vec<_> = pts.iter().map(|&(x, y)| (y, x)).collect();
            let g = rma_fit(&swapped).unwrap();
            prop_assert!((f.slope * g.slope - 1.0).abs() < 1e-9);
            // Both lines pass through the centroid, so x = (y - b)/a matches.
            prop_assert!((g.intercept + f.intercept / f.slope).abs() < 1e-8 * (1.0 + g.intercept.abs()));
        }

        #[test]
        fn matched_words_respect_fixed_priority(words in prop::collection::btree_set("[a-c]{1,4}", 1..12)) {
            let words: Vec<String> = words.into_iter().collect();
            let a = continuum(words.iter().map(|w| LexiconEntry::fixed(w.as_str(), 6.0)).collect());
            let b = continuum(
                words.iter().enumerate().flat_map(|(i, w)| {
                    let mut v = vec![LexiconEntry::stem(w.as_str(), 2.0)];
                    if i % 2 == 0 { v.push(LexiconEntry::fixed(w.as_str(), 8.0)); }
                    v
                }).collect(),
            );
            for m in matched_words(&a, &b) {
                let direct = b.match_word(&m.word).unwrap();
                prop_assert_eq!(direct.score, m.score_b);
                prop_assert_eq!(direct.is_stem, m.via_stem);
            }
        }
    }
}
