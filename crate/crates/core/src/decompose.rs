//! SVD mode analysis of a matrix whose rows are mean-centered arcs.
//!
//! `A = U Σ Vᵀ = W Vᵀ`: rows of `Vᵀ` are the modes and rows of `W` locate
//! each arc in mode space.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::arcs::{center_in_place, EmotionalArc};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ArcMatrix {
    ids: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl ArcMatrix {
    /// Rows not already flagged as centered are centered here.
    pub fn new(arcs: &[EmotionalArc]) -> Result<Self> {
        let len = arcs.first().map_or(0, |a| a.len());
        let mut rows = Vec::with_capacity(arcs.len());
        for a in arcs {
            if a.len() != len {
                return Err(Error::invalid(format!(
                    "arc `{}` has {} points, expected {len}",
                    a.doc_id,
                    a.len()
                )));
            }
            let mut p = a.points.clone();
            if !a.mean_centered {
                center_in_place(&mut p);
            }
            rows.push(p);
        }
        Ok(ArcMatrix {
            ids: arcs.iter().map(|a| a.doc_id.clone()).collect(),
            rows,
        })
    }

    pub fn from_rows(ids: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if ids.len() != rows.len() {
            return Err(Error::invalid("ids and rows differ in length"));
        }
        let arcs: Vec<EmotionalArc> = ids
            .into_iter()
            .zip(rows)
            .map(|(doc_id, points)| EmotionalArc {
                doc_id,
                points,
                window_words: 0,
                mean_centered: false,
            })
            .collect();
        Self::new(&arcs)
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    fn to_mat(&self) -> Mat<f64> {
        Mat::from_fn(self.n_rows(), self.n_cols(), |i, j| self.rows[i][j])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeDecomposition {
    pub ids: Vec<String>,
    /// Rows of `Vᵀ`, one per retained mode.
    pub modes: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    /// `W = UΣ` restricted to the retained modes; one row per arc.
    pub coefficients: Vec<Vec<f64>>,
    /// `σ²/Σσ²` per retained mode, the denominator taken over all modes.
    pub variance_fraction: Vec<f64>,
}

pub fn svd_modes(a: &ArcMatrix, k: usize) -> Result<ModeDecomposition> {
    let (m, l) = (a.n_rows(), a.n_cols());
    if m < 2 {
        return Err(Error::invalid("SVD needs at least two arcs"));
    }
    if k > m.min(l) {
        return Err(Error::invalid(format!(
            "{k} modes requested but at most {} exist",
            m.min(l)
        )));
    }
    if a.rows.iter().flatten().all(|&x| x == 0.0) {
        return Err(Error::Precondition("arc matrix is all zeros".into()));
    }
    let svd = a
        .to_mat()
        .thin_svd()
        .map_err(|e| Error::Precondition(format!("SVD did not converge: {e:?}")))?;
    let (u, v) = (svd.U(), svd.V());
    let diag = svd.S().column_vector();
    let sv: Vec<f64> = (0..diag.nrows()).map(|j| diag[j]).collect();

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&x, &y| sv[y].total_cmp(&sv[x]).then(x.cmp(&y)));
    let total: f64 = sv.iter().map(|s| s * s).sum();

    let mut modes = Vec::with_capacity(k);
    let mut singular_values = Vec::with_capacity(k);
    let mut coefficients = vec![Vec::with_capacity(k); m];
    for &j in order.iter().take(k) {
        let mut mode: Vec<f64> = (0..l).map(|t| v[(t, j)]).collect();
        let sign = sign_of_largest(&mode);
        mode.iter_mut().for_each(|x| *x *= sign);
        for (i, row) in coefficients.iter_mut().enumerate() {
            row.push(sign * u[(i, j)] * sv[j]);
        }
        modes.push(mode);
        singular_values.push(sv[j]);
    }
    let variance_fraction = singular_values.iter().map(|s| s * s / total).collect();
    Ok(ModeDecomposition {
        ids: a.ids.clone(),
        modes,
        singular_values,
        coefficients,
        variance_fraction,
    })
}

/// +1 if the largest-magnitude entry (first on ties) is positive.
fn sign_of_largest(v: &[f64]) -> f64 {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v {
        if x.abs() > best {
            best = x.abs();
            sign = if x < 0.0 { -1.0 } else { 1.0 };
        }
    }
    sign
}

/// Each row of `W` divided by the sum of its absolute values, signs kept.
pub fn mode_coefficients_normalized(d: &ModeDecomposition) -> Result<Vec<Vec<f64>>> {
    d.coefficients
        .iter()
        .zip(&d.ids)
        .map(|(row, id)| {
            let norm: f64 = row.iter().map(|x| x.abs()).sum();
            if norm == 0.0 {
                return Err(Error::Precondition(format!(
                    "arc `{id}` has all-zero coefficients"
                )));
            }
            Ok(row.iter().map(|x| x / norm).collect())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Polarity {
    pub fn symbol(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

/// Arcs with the largest (or, for `Negative`, smallest) normalized
/// coefficient on `mode`. Ties go to the lower id.
pub fn closest_stories(
    d: &ModeDecomposition,
    mode: usize,
    polarity: Polarity,
    k: usize,
) -> Result<Vec<(String, f64)>> {
    if mode >= d.modes.len() {
        return Err(Error::invalid(format!(
            "mode {mode} out of range; {} retained",
            d.modes.len()
        )));
    }
    let norm = mode_coefficients_normalized(d)?;
    let mut out: Vec<(String, f64)> = d
        .ids
        .iter()
        .zip(&norm)
        .map(|(id, row)| (id.clone(), row[mode]))
        .collect();
    out.sort_by(|a, b| {
        let ord = match polarity {
            Polarity::Positive => b.1.total_cmp(&a.1),
            Polarity::Negative => a.1.total_cmp(&b.1),
        };
        ord.then_with(|| a.0.cmp(&b.0))
    });
    out.truncate(k);
    Ok(out)
}

/// `Σ_{j < using_modes} W[row, j] · Vᵀ[j, :]`.
pub fn reconstruct(d: &ModeDecomposition, row: usize, using_modes: usize) -> Result<Vec<f64>> {
    if row >= d.coefficients.len() || using_modes > d.modes.len() {
        return Err(Error::invalid(format!(
            "row {row} / {using_modes} modes out of range ({} rows, {} modes)",
            d.coefficients.len(),
            d.modes.len()
        )));
    }
    let l = d.modes.first().map_or(0, Vec::len);
    let mut out = vec![0.0; l];
    for j in 0..using_modes {
        let w = d.coefficients[row][j];
        for (o, v) in out.iter_mut().zip(&d.modes[j]) {
            *o += w * v;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeGroup {
    pub mode: usize,
    pub polarity: Polarity,
    pub count: usize,
    pub median: f64,
    pub mean: f64,
    pub ids: Vec<String>,
}

/// Dominant signed mode of each arc: the mode with the largest |coefficient|
/// (lowest index on ties) and that coefficient's sign.
pub fn dominant_modes(d: &ModeDecomposition) -> Result<Vec<(usize, Polarity)>> {
    d.coefficients
        .iter()
        .zip(&d.ids)
        .map(|(row, id)| {
            let mut best: Option<(usize, f64)> = None;
            for (j, &w) in row.iter().enumerate() {
                if best.is_none_or(|(_, b)| w.abs() > b.abs()) {
                    best = Some((j, w));
                }
            }
            match best {
                Some((j, w)) if w != 0.0 => Ok((
                    j,
                    if w > 0.0 {
                        Polarity::Positive
                    } else {
                        Polarity::Negative
                    },
                )),
                _ => Err(Error::Precondition(format!(
                    "arc `{id}` has all-zero coefficients"
                ))),
            }
        })
        .collect()
}

/// Groups arcs by dominant signed mode and summarizes the metadata value of
/// each group. Only groups holding more than `threshold_fraction` of all
/// arcs are reported, ordered by mode then polarity.
pub fn mode_metadata_report(
    d: &ModeDecomposition,
    metadata: &BTreeMap<String, i64>,
    threshold_fraction: f64,
) -> Result<Vec<ModeGroup>> {
    let dom = dominant_modes(d)?;
    let mut groups: BTreeMap<(usize, Polarity), Vec<(String, i64)>> = BTreeMap::new();
    for (id, key) in d.ids.iter().zip(dom) {
        let v = *metadata
            .get(id)
            .ok_or_else(|| Error::invalid(format!("no metadata for `{id}`")))?;
        groups.entry(key).or_default().push((id.clone(), v));
    }
    let total = d.ids.len() as f64;
    Ok(groups
        .into_iter()
        .filter(|(_, members)| members.len() as f64 / total > threshold_fraction)
        .map(|((mode, polarity), members)| {
            let mut values: Vec<i64> = members.iter().map(|m| m.1).collect();
            values.sort_unstable();
            let n = values.len();
            let median = if n % 2 == 1 {
                values[n / 2] as f64
            } else {
                (values[n / 2 - 1] as f64 + values[n / 2] as f64) / 2.0
            };
            let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
            ModeGroup {
                mode,
                polarity,
                count: n,
                median,
                mean,
                ids: members.into_iter().map(|m| m.0).collect(),
            }
        })
        .collect())
}

impl ModeDecomposition {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: ModeDecomposition = serde_json::from_str(text)?;
        let k = d.modes.len();
        if d.singular_values.len() != k
            || d.variance_fraction.len() != k
            || d.coefficients.len() != d.ids.len()
            || d.coefficients.iter().any(|r| r.len() != k)
        {
            return Err(Error::invalid("inconsistent mode decomposition"));
        }
        Ok(d)
    }

    /// Coefficient matrix: header `doc_id,w0,w1,...`, one row per arc.
    pub fn write_coefficients_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["doc_id".to_string()];
        header.extend((0..self.modes.len()).map(|j| format!("w{j}")));
        w.write_record(&header)?;
        for (id, row) in self.ids.iter().zip(&self.coefficients) {
            let mut rec = vec![id.clone()];
            rec.extend(row.iter().map(|x| x.to_string()));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<coefficients>", e))?;
        Ok(())
    }
}

/// Reads a coefficient matrix written by
/// [`ModeDecomposition::write_coefficients_csv`].
pub fn read_coefficients_csv<R: Read>(input: R) -> Result<Vec<(String, Vec<f64>)>> {
    crate::arcs::read_arcs_csv(input)
        .map(|arcs| arcs.into_iter().map(|a| (a.doc_id, a.points)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn matrix(rows: &[&[f64]]) -> ArcMatrix {
        ArcMatrix::from_rows(
            (0..rows.len()).map(|i| format!("b{i:02}")).collect(),
            rows.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    fn random_matrix(m: usize, l: usize, seed: u64) -> ArcMatrix {
        let mut rng = crate::rng::substream(seed, &[]);
        ArcMatrix::from_rows(
            (0..m).map(|i| format!("b{i:02}")).collect(),
            (0..m)
                .map(|_| (0..l).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn frob(a: &[Vec<f64>]) -> f64 {
        a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn rows_are_centered() {
        let a = matrix(&[&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]]);
        assert_eq!(a.rows()[0], vec![-1.0, 0.0, 1.0]);
        assert_eq!(a.rows()[1], vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn rank_one() {
        let base = [1.0, -2.0, 0.5, 0.5];
        let rows: Vec<Vec<f64>> = [1.0, -3.0, 2.0]
            .iter()
            .map(|c| base.iter().map(|b| b * c).collect())
            .collect();
        let a = ArcMatrix::from_rows(vec!["a".into(), "b".into(), "c".into()], rows).unwrap();
        let d = svd_modes(&a, 3).unwrap();
        assert!(d.singular_values[0] > 1.0);
        assert!(d.singular_values[1] < 1e-12 && d.singular_values[2] < 1e-12);
        assert!((d.variance_fraction[0] - 1.0).abs() < 1e-12);
        // Largest-magnitude entry of the mode is positive: -2 flips to +.
        assert!(d.modes[0][1] > 0.0);
    }

    #[test]
    fn orthonormal_and_full_reconstruction() {
        let a = random_matrix(12, 9, 5);
        let d = svd_modes(&a, 9).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let dot: f64 = d.modes[i].iter().zip(&d.modes[j]).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10, "{i},{j}");
            }
        }
        let rec: Vec<Vec<f64>> = (0..12).map(|r| reconstruct(&d, r, 9).unwrap()).collect();
        let diff: Vec<Vec<f64>> = rec
            .iter()
            .zip(a.rows())
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect())
            .collect();
        assert!(frob(&diff) / frob(a.rows()) < 1e-10);
        assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
        assert!((d.variance_fraction.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_error_nonincreasing() {
        let a = random_matrix(8, 6, 9);
        let d = svd_modes(&a, 6).unwrap();
        for r in 0..8 {
            assert!(reconstruct(&d, r, 0).unwrap().iter().all(|&x| x == 0.0));
            let mut prev = f64::INFINITY;
            for m in 0..=6 {
                let rec = reconstruct(&d, r, m).unwrap();
                let err: f64 = rec
                    .iter()
                    .zip(&a.rows()[r])
                    .map(|(x, y)| (x - y).powi(2))
                    .sum();
                assert!(err <= prev + 1e-12);
                prev = err;
            }
        }
    }

    #[test]
    fn precondition_errors() {
        let a = random_matrix(3, 4, 1);
        assert!(svd_modes(&a, 4).is_err());
        assert!(svd_modes(&random_matrix(1, 4, 1), 1).is_err());
        let z = matrix(&[&[1.0, 1.0], &[2.0, 2.0]]);
        assert!(svd_modes(&z, 1).is_err());
        assert!(ArcMatrix::from_rows(
            vec!["a".into(), "b".into()],
            vec![vec![1.0], vec![1.0, 2.0]]
        )
        .is_err());
    }

    #[test]
    fn normalization_examples() {
        let d = ModeDecomposition {
            ids: vec!["a".into(), "b".into(), "c".into()],
            modes: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            singular_values: vec![2.0, 1.0],
            coefficients: vec![vec![3.0, 1.0], vec![-1.0, 1.0], vec![0.75, 0.25]],
            variance_fraction: vec![0.8, 0.2],
        };
        let n = mode_coefficients_normalized(&d).unwrap();
        assert_eq!(n[0], vec![0.75, 0.25]);
        assert_eq!(n[1], vec![-0.5, 0.5]);
        assert_eq!(n[2], vec![0.75, 0.25]);
        let mut zero = d.clone();
        zero.coefficients[0] = vec![0.0, 0.0];
        assert!(mode_coefficients_normalized(&zero).is_err());
    }

    #[test]
    fn closest_stories_find_the_mode() {
        let mut a = random_matrix(10, 8, 3);
        let d0 = svd_modes(&a, 3).unwrap();
        let m0 = d0.modes[0].clone();
        a.ids.push("plus".into());
        a.rows.push(m0.iter().map(|x| 5.0 * x).collect());
        a.ids.push("minus".into());
        a.rows.push(m0.iter().map(|x| -5.0 * x).collect());
        let d = svd_modes(&a, 3).unwrap();
        let top = closest_stories(&d, 0, Polarity::Positive, 1).unwrap();
        let bottom = closest_stories(&d, 0, Polarity::Negative, 1).unwrap();
        let ids = [top[0].0.as_str(), bottom[0].0.as_str()];
        // The planted pair dominates mode 0; which sign the mode takes is fixed
        // by the sign convention.
        assert!(ids == ["plus", "minus"] || ids == ["minus", "plus"]);
        let all = closest_stories(&d, 0, Polarity::Positive, 100).unwrap();
        assert_eq!(all.len(), 12);
        assert!(all.windows(2).all(|w| w[0].1 >= w[1].1));
        assert!(closest_stories(&d, 3, Polarity::Positive, 1).is_err());
    }

    #[test]
    fn metadata_report() {
        let base = [1.0, -1.0, 2.0, -2.0];
        let rows: Vec<Vec<f64>> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|c| base.iter().map(|b| b * c).collect())
            .collect();
        let ids: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let a = ArcMatrix::from_rows(ids.clone(), rows).unwrap();
        let d = svd_modes(&a, 1).unwrap();
        let meta: BTreeMap<String, i64> = ids.iter().cloned().zip([10, 40, 20, 30]).collect();
        let r = mode_metadata_report(&d, &meta, 0.025).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].count, 4);
        assert_eq!(r[0].median, 25.0);
        assert_eq!(r[0].mean, 25.0);
        assert!(mode_metadata_report(&d, &meta, 1.0).unwrap().is_empty());
        let mut missing = meta.clone();
        missing.remove("c");
        assert!(mode_metadata_report(&d, &missing, 0.0).is_err());
    }

    #[test]
    fn metadata_groups_match_brute_force() {
        let a = random_matrix(30, 10, 21);
        let d = svd_modes(&a, 4).unwrap();
        let meta: BTreeMap<String, i64> = a
            .ids()
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), (i as i64 * 37) % 101))
            .collect();
        let report = mode_metadata_report(&d, &meta, 0.0).unwrap();
        let norm = mode_coefficients_normalized(&d).unwrap();
        for g in &report {
            let mut vals: Vec<i64> = Vec::new();
            for (id, row) in a.ids().iter().zip(&norm) {
                let (mut bj, mut bv) = (0, row[0]);
                for (j, &v) in row.iter().enumerate() {
                    if v.abs() > bv.abs() {
                        bj = j;
                        bv = v;
                    }
                }
                let pol = if bv > 0.0 {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                };
                if bj == g.mode && pol == g.polarity {
                    vals.push(meta[id]);
                }
            }
            vals.sort();
            assert_eq!(vals.len(), g.count);
            let n = vals.len();
            let med = if n % 2 == 1 {
                vals[n / 2] as f64
            } else {
                (vals[n / 2 - 1] + vals[n / 2]) as f64 / 2.0
            };
            assert_eq!(med, g.median);
        }
        assert_eq!(report.iter().map(|g| g.count).sum::<usize>(), 30);
    }

    #[test]
    fn emit_round_trips() {
        let d = svd_modes(&random_matrix(5, 4, 2), 3).unwrap();
        assert_eq!(
            ModeDecomposition::from_json(&d.to_json().unwrap()).unwrap(),
            d
        );
        let mut buf = Vec::new();
        d.write_coefficients_csv(&mut buf).unwrap();
        let back = read_coefficients_csv(buf.as_slice()).unwrap();
        for ((id, row), (id0, row0)) in back.iter().zip(d.ids.iter().zip(&d.coefficients)) {
            assert_eq!(id, id0);
            assert_eq!(row, row0);
        }
    }

    proptest! {
        #[test]
        fn prop_row_permutation(seed in any::<u64>(), shift in 1usize..7) {
            let a = random_matrix(7, 5, seed);
            let mut ids = a.ids().to_vec();
            let mut rows = a.rows().to_vec();
            ids.rotate_left(shift);
            rows.rotate_left(shift);
            let b = ArcMatrix::from_rows(ids, rows).unwrap();
            let da = svd_modes(&a, 3).unwrap();
            let db = svd_modes(&b, 3).unwrap();
            // Modes are compared only where the spectrum is well separated.
            for j in 0..3 {
                let gap = (da.singular_values[j] - da.singular_values.get(j + 1).copied().unwrap_or(0.0))
                    .min(if j == 0 { f64::INFINITY } else { da.singular_values[j - 1] - da.singular_values[j] });
                if gap > 1e-3 {
                    for (x, y) in da.modes[j].iter().zip(&db.modes[j]) {
                        prop_assert!((x - y).abs() < 1e-6);
                    }
                    for i in 0..7 {
                        let bi = (i + 7 - shift) % 7;
                        prop_assert!((da.coefficients[i][j] - db.coefficients[bi][j]).abs() < 1e-6);
                    }
                }
            }
        }
    }
}
