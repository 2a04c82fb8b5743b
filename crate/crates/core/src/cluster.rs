//! Ward hierarchical clustering of arcs under the mean absolute difference.
//!
//! Cluster ids follow the usual linkage-matrix numbering: leaves are
//! `0..n`, and the cluster formed by merge `i` is `n + i`.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `l⁻¹ Σ |a(t) − b(t)|`.
pub fn arc_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "arc lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(mean_abs(a, b))
}

fn mean_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
}

fn check_rows(rows: &[Vec<f64>]) -> Result<()> {
    let len = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != len) {
        return Err(Error::invalid(format!(
            "arc {i} has {} points, expected {len}",
            rows[i].len()
        )));
    }
    Ok(())
}

/// Condensed pairwise distances, row-major over `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        check_rows(rows)?;
        let n = rows.len();
        let d: Vec<f64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                if rows[i].is_empty() {
                    0.0
                } else {
                    mean_abs(&rows[i], &rows[j])
                }
            })
            .collect();
        Ok(DistanceMatrix { n, d })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.d[self.index(i, j)]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.index(i, j);
        self.d[k] = v;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub cost: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterTree {
    pub leaf_ids: Vec<String>,
    pub merges: Vec<Merge>,
}

/// Ward's recurrence: distance from `v` to the union of `s` and `t`.
pub fn ward_update(d_vs: f64, d_vt: f64, d_st: f64, nv: usize, ns: usize, nt: usize) -> f64 {
    let t = (nv + ns + nt) as f64;
    let sq = ((nv + ns) as f64 / t) * d_vs * d_vs + ((nv + nt) as f64 / t) * d_vt * d_vt
        - (nv as f64 / t) * d_st * d_st;
    sq.max(0.0).sqrt()
}

/// Agglomerates from singletons, always merging the globally closest pair.
///
/// Each active cluster lives in the slot of its lowest leaf. Ties are broken
/// by the lowest `(slot, slot)` pair.
pub fn ward_cluster(ids: &[String], rows: &[Vec<f64>]) -> Result<ClusterTree> {
    if rows.len() < 2 || ids.len() != rows.len() {
        return Err(Error::invalid(
            "clustering needs at least two arcs with aligned ids",
        ));
    }
    let n = rows.len();
    let mut d = DistanceMatrix::new(rows)?;
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut label: Vec<usize> = (0..n).collect();
    // Nearest later slot for each slot, and its distance.
    let mut nn = vec![usize::MAX; n];
    let mut nnd = vec![f64::INFINITY; n];

    let refresh =
        |i: usize, d: &DistanceMatrix, active: &[bool], nn: &mut [usize], nnd: &mut [f64]| {
            nn[i] = usize::MAX;
            nnd[i] = f64::INFINITY;
            for (j, _) in active.iter().enumerate().skip(i + 1).filter(|(_, &a)| a) {
                let v = d.get(i, j);
                if v < nnd[i] {
                    nnd[i] = v;
                    nn[i] = j;
                }
            }
        };
    for i in 0..n {
        refresh(i, &d, &active, &mut nn, &mut nnd);
    }

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut s = usize::MAX;
        for i in 0..n {
            if active[i] && nn[i] != usize::MAX && (s == usize::MAX || nnd[i] < nnd[s]) {
                s = i;
            }
        }
        let t = nn[s];
        let cost = d.get(s, t);
        for v in 0..n {
            if active[v] && v != s && v != t {
                let nd = ward_update(d.get(v, s), d.get(v, t), cost, size[v], size[s], size[t]);
                d.set(v, s, nd);
            }
        }
        let (a, b) = (label[s].min(label[t]), label[s].max(label[t]));
        merges.push(Merge {
            left: a,
            right: b,
            cost,
            size: size[s] + size[t],
        });
        active[t] = false;
        size[s] += size[t];
        label[s] = n + step;

        refresh(s, &d, &active, &mut nn, &mut nnd);
        for i in 0..t {
            if !active[i] || i == s {
                continue;
            }
            if nn[i] == s || nn[i] == t {
                refresh(i, &d, &active, &mut nn, &mut nnd);
            } else if i < s {
                let v = d.get(i, s);
                if v < nnd[i] || (v == nnd[i] && s < nn[i]) {
                    nnd[i] = v;
                    nn[i] = s;
                }
            }
        }
    }
    Ok(ClusterTree {
        leaf_ids: ids.to_vec(),
        merges,
    })
}

impl ClusterTree {
    pub fn n_leaves(&self) -> usize {
        self.leaf_ids.len()
    }

    /// Leaf indices under each cluster id (leaves then merges).
    fn members(&self) -> Vec<Vec<usize>> {
        let n = self.n_leaves();
        let mut out: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for m in &self.merges {
            let mut v = out[m.left].clone();
            v.extend_from_slice(&out[m.right]);
            v.sort_unstable();
            out.push(v);
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&DendrogramFile {
            leaf_ids: self.leaf_ids.clone(),
            linkage: self
                .merges
                .iter()
                .map(|m| (m.left, m.right, m.cost, m.size))
                .collect(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: DendrogramFile = serde_json::from_str(text)?;
        let n = f.leaf_ids.len();
        if f.linkage.len() + 1 != n.max(1) {
            return Err(Error::invalid(
                "dendrogram must hold one merge fewer than leaves",
            ));
        }
        for (i, &(l, r, _, _)) in f.linkage.iter().enumerate() {
            if l >= n + i || r >= n + i {
                return Err(Error::invalid(format!(
                    "merge {i} references a later cluster"
                )));
            }
        }
        Ok(ClusterTree {
            leaf_ids: f.leaf_ids,
            merges: f
                .linkage
                .into_iter()
                .map(|(left, right, cost, size)| Merge {
                    left,
                    right,
                    cost,
                    size,
                })
                .collect(),
        })
    }
}

/// Linkage rows are `[left, right, cost, size]`.
#[derive(Serialize, Deserialize)]
struct DendrogramFile {
    leaf_ids: Vec<String>,
    linkage: Vec<(usize, usize, f64, usize)>,
}

/// Cluster index of every leaf after undoing the last `k − 1` merges.
/// Clusters are numbered by size descending, ties by lowest leaf.
pub fn cut(tree: &ClusterTree, k: usize) -> Result<Vec<usize>> {
    let n = tree.n_leaves();
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "cannot cut {n} leaves into {k} clusters"
        )));
    }
    let members = tree.members();
    let kept = n - k;
    let mut roots: Vec<usize> = (0..n).collect();
    for (i, m) in tree.merges.iter().take(kept).enumerate() {
        roots.retain(|&r| r != m.left && r != m.right);
        roots.push(n + i);
    }
    let mut groups: Vec<&Vec<usize>> = roots.iter().map(|&r| &members[r]).collect();
    groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut assignment = vec![0; n];
    for (c, g) in groups.iter().enumerate() {
        for &leaf in g.iter() {
            assignment[leaf] = c;
        }
    }
    Ok(assignment)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Silhouette {
    pub per_doc: Vec<f64>,
    pub mean: f64,
}

pub fn silhouette(rows: &[Vec<f64>], assignment: &[usize]) -> Result<Silhouette> {
    if rows.len() != assignment.len() {
        return Err(Error::invalid("assignment does not cover every arc"));
    }
    let k = assignment.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &c in assignment {
        sizes[c] += 1;
    }
    if sizes.contains(&0) {
        return Err(Error::invalid("cluster indices must be contiguous from 0"));
    }
    if k < 2 {
        return Err(Error::Precondition(
            "silhouette needs at least two clusters".into(),
        ));
    }
    let d = DistanceMatrix::new(rows)?;
    let per_doc: Vec<f64> = (0..rows.len())
        .into_par_iter()
        .map(|i| {
            let own = assignment[i];
            if sizes[own] == 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for j in 0..rows.len() {
                if j != i {
                    sums[assignment[j]] += d.get(i, j);
                }
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let m = a.max(b);
            if m == 0.0 {
                0.0
            } else {
                (b - a) / m
            }
        })
        .collect();
    let mean = per_doc.iter().sum::<f64>() / per_doc.len() as f64;
    Ok(Silhouette { per_doc, mean })
}

/// The member with the least total distance to the others; ties go to the
/// lowest doc id. Returns an index into `members`.
pub fn central_book(ids: &[String], rows: &[Vec<f64>], members: &[usize]) -> Result<usize> {
    if members.is_empty() {
        return Err(Error::invalid("empty cluster has no central book"));
    }
    check_rows(rows)?;
    let mut best: Option<(f64, usize)> = None;
    for (pos, &i) in members.iter().enumerate() {
        let total: f64 = members
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| mean_abs(&rows[i], &rows[j]))
            .sum();
        let better = match best {
            None => true,
            Some((bt, bp)) => total < bt || (total == bt && ids[i] < ids[members[bp]]),
        };
        if better {
            best = Some((total, pos));
        }
    }
    Ok(best.unwrap().1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub cluster: usize,
    pub size: usize,
    pub central_book: String,
}

pub fn summarize(
    ids: &[String],
    rows: &[Vec<f64>],
    assignment: &[usize],
) -> Result<Vec<ClusterSummary>> {
    let k = assignment.iter().max().map_or(0, |m| m + 1);
    (0..k)
        .map(|c| {
            let members: Vec<usize> = (0..ids.len()).filter(|&i| assignment[i] == c).collect();
            let centre = central_book(ids, rows, &members)?;
            Ok(ClusterSummary {
                cluster: c,
                size: members.len(),
                central_book: ids[members[centre]].clone(),
            })
        })
        .collect()
}

pub fn write_cluster_report<W: Write>(out: W, summary: &[ClusterSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in summary {
        w.serialize(s)?;
    }
    w.flush().map_err(|e| Error::io("<clusters>", e))?;
    Ok(())
}

pub fn read_cluster_report<R: Read>(input: R) -> Result<Vec<ClusterSummary>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .map(|rec| rec.map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("b{i:02}")).collect()
    }

    fn random_rows(n: usize, l: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = crate::rng::substream(seed, &[7]);
        (0..n)
            .map(|_| (0..l).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect()
    }

    /// Scans every pair of live clusters at each step.
    fn naive_ward(rows: &[Vec<f64>]) -> Vec<Merge> {
        let n = rows.len();
        let mut clusters: Vec<(Vec<usize>, usize)> = (0..n).map(|i| (vec![i], i)).collect();
        let mut dist: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| arc_distance(&rows[i], &rows[j]).unwrap())
                    .collect()
            })
            .collect();
        let mut alive: Vec<bool> = vec![true; n];
        let mut out = Vec::new();
        for step in 0..n - 1 {
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..n {
                for j in i + 1..n {
                    if alive[i] && alive[j] && best.is_none_or(|b| dist[i][j] < b.0) {
                        best = Some((dist[i][j], i, j));
                    }
                }
            }
            let (c, s, t) = best.unwrap();
            let (ns, nt) = (clusters[s].0.len(), clusters[t].0.len());
            for v in 0..n {
                if alive[v] && v != s && v != t {
                    let nv = clusters[v].0.len();
                    let tt = (nv + ns + nt) as f64;
                    let sq = (nv + ns) as f64 / tt * dist[v][s].powi(2)
                        + (nv + nt) as f64 / tt * dist[v][t].powi(2)
                        - nv as f64 / tt * c * c;
                    let nd = sq.max(0.0).sqrt();
                    dist[v][s] = nd;
                    dist[s][v] = nd;
                }
            }
            let (ls, lt) = (clusters[s].1, clusters[t].1);
            out.push(Merge {
                left: ls.min(lt),
                right: ls.max(lt),
                cost: c,
                size: ns + nt,
            });
            let moved = std::mem::take(&mut clusters[t].0);
            clusters[s].0.extend(moved);
            clusters[s].1 = n + step;
            alive[t] = false;
        }
        out
    }

    fn same_tree(a: &[Merge], b: &[Merge]) -> bool {
        a.len() == b.len()
            && a.iter().zip(b).all(|(x, y)| {
                x.left == y.left
                    && x.right == y.right
                    && x.size == y.size
                    && (x.cost - y.cost).abs() < 1e-9
            })
    }

    #[test]
    fn distance_examples() {
        assert_eq!(arc_distance(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(arc_distance(&[1.0, 1.0], &[0.0, 0.0]).unwrap(), 1.0);
        assert!(arc_distance(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn two_arcs_single_merge() {
        let rows = vec![vec![0.0, 1.0], vec![2.0, 1.0]];
        let t = ward_cluster(&ids(2), &rows).unwrap();
        assert_eq!(
            t.merges,
            vec![Merge {
                left: 0,
                right: 1,
                cost: 1.0,
                size: 2
            }]
        );
    }

    #[test]
    fn three_points_on_a_line() {
        // Distances 1, 3 and 4: the close pair merges first, then Ward's
        // update gives sqrt((2/3)·9 + (2/3)·16 − (1/3)·1).
        let rows = vec![vec![0.0], vec![1.0], vec![4.0]];
        let t = ward_cluster(&ids(3), &rows).unwrap();
        assert_eq!((t.merges[0].left, t.merges[0].right), (0, 1));
        assert_eq!(t.merges[0].cost, 1.0);
        assert_eq!((t.merges[1].left, t.merges[1].right), (2, 3));
        let want = ((2.0 / 3.0) * 9.0 + (2.0 / 3.0) * 16.0 - 1.0 / 3.0f64).sqrt();
        assert!((t.merges[1].cost - want).abs() < 1e-12);
        // Every alternative first merge costs more.
        let d = DistanceMatrix::new(&rows).unwrap();
        for (i, j) in [(0, 2), (1, 2)] {
            assert!(d.get(i, j) > t.merges[0].cost);
        }
    }

    #[test]
    fn ties_take_lowest_pair() {
        let rows = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
        let t = ward_cluster(&ids(4), &rows).unwrap();
        assert_eq!((t.merges[0].left, t.merges[0].right), (0, 1));
        assert_eq!((t.merges[1].left, t.merges[1].right), (2, 3));
    }

    #[test]
    fn matches_naive_on_fixtures() {
        for seed in 0..40 {
            let rows = random_rows(6 + (seed as usize % 5), 5, seed);
            let t = ward_cluster(&ids(rows.len()), &rows).unwrap();
            assert!(same_tree(&t.merges, &naive_ward(&rows)), "seed {seed}");
            assert!(t.merges.windows(2).all(|w| w[0].cost <= w[1].cost + 1e-12));
        }
    }

    #[test]
    fn cut_examples() {
        let rows = vec![vec![0.0], vec![0.1], vec![10.0], vec![10.2], vec![10.1]];
        let t = ward_cluster(&ids(5), &rows).unwrap();
        assert_eq!(cut(&t, 1).unwrap(), vec![0; 5]);
        let two = cut(&t, 2).unwrap();
        assert_eq!(two, vec![1, 1, 0, 0, 0]);
        let mut single = cut(&t, 5).unwrap();
        single.sort();
        assert_eq!(single, vec![0, 1, 2, 3, 4]);
        assert!(cut(&t, 0).is_err() && cut(&t, 6).is_err());
        let s = silhouette(&rows, &two).unwrap();
        assert!(s.mean > 0.9);
    }

    #[test]
    fn silhouette_hand_example() {
        // Points 0, 1 | 5, 7 on a line.
        let rows = vec![vec![0.0], vec![1.0], vec![5.0], vec![7.0]];
        let s = silhouette(&rows, &[0, 0, 1, 1]).unwrap();
        let want = [
            (6.0 - 1.0) / 6.0,
            (5.0 - 1.0) / 5.0,
            (4.5 - 2.0) / 4.5,
            (6.5 - 2.0) / 6.5,
        ];
        for (g, w) in s.per_doc.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
        assert!(silhouette(&rows, &[0, 0, 0, 0]).is_err());
        let same = vec![vec![1.0]; 4];
        assert_eq!(silhouette(&same, &[0, 0, 1, 1]).unwrap().mean, 0.0);
        let single = silhouette(&rows, &[0, 1, 1, 1]).unwrap();
        assert_eq!(single.per_doc[0], 0.0);
    }

    #[test]
    fn central_book_examples() {
        let rows = vec![vec![0.0], vec![1.0], vec![2.0], vec![9.0]];
        let id = ids(4);
        assert_eq!(central_book(&id, &rows, &[3]).unwrap(), 0);
        assert_eq!(central_book(&id, &rows, &[0, 1, 2]).unwrap(), 1);
        // Two members tie; the lower id wins.
        assert_eq!(central_book(&id, &rows, &[2, 1]).unwrap(), 1);
    }

    #[test]
    fn emit_round_trips() {
        let rows = random_rows(7, 4, 3);
        let t = ward_cluster(&ids(7), &rows).unwrap();
        assert_eq!(ClusterTree::from_json(&t.to_json().unwrap()).unwrap(), t);
        let a = cut(&t, 3).unwrap();
        let s = summarize(&ids(7), &rows, &a).unwrap();
        assert_eq!(s.iter().map(|c| c.size).sum::<usize>(), 7);
        let mut buf = Vec::new();
        write_cluster_report(&mut buf, &s).unwrap();
        assert_eq!(read_cluster_report(buf.as_slice()).unwrap(), s);
    }

    proptest! {
        #[test]
        fn prop_metric(a in proptest::collection::vec(-5.0f64..5.0, 4), b in proptest::collection::vec(-5.0f64..5.0, 4), c in proptest::collection::vec(-5.0f64..5.0, 4)) {
            let ab = arc_distance(&a, &b).unwrap();
            prop_assert_eq!(ab, arc_distance(&b, &a).unwrap());
            prop_assert!(ab <= arc_distance(&a, &c).unwrap() + arc_distance(&c, &b).unwrap() + 1e-12);
        }

        #[test]
        fn prop_ward_matches_naive(seed in any::<u64>(), n in 2usize..12) {
            let rows = random_rows(n, 3, seed);
            let t = ward_cluster(&ids(n), &rows).unwrap();
            prop_assert!(same_tree(&t.merges, &naive_ward(&rows)));
        }

        #[test]
        fn prop_ward_matches_naive_with_ties(rows in proptest::collection::vec(proptest::collection::vec(0i32..3, 2), 2..10)) {
            let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
            let t = ward_cluster(&ids(rows.len()), &rows).unwrap();
            prop_assert!(same_tree(&t.merges, &naive_ward(&rows)));
        }

        #[test]
        fn prop_cut_partitions(seed in any::<u64>(), n in 2usize..12, k in 1usize..12) {
            let k = k.min(n);
            let rows = random_rows(n, 3, seed);
            let t = ward_cluster(&ids(n), &rows).unwrap();
            let a = cut(&t, k).unwrap();
            let mut sizes = vec![0usize; k];
            for &c in &a { sizes[c] += 1; }
            prop_assert!(sizes.iter().all(|&s| s > 0));
            prop_assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
