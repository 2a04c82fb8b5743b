//! Kohonen self-organizing map over arcs on a square grid with a hard,
//! shrinking neighborhood.
//!
//! At iteration `i` the winner's neighborhood is every node within grid
//! distance `< √N (i+1)^α` (`N` nodes), and those nodes move toward the
//! sample by `f(i) = (i+1)^β`.

use serde::{Deserialize, Serialize};

use rand::Rng;

use crate::cluster::arc_distance;
use crate::error::{Error, Result};
use crate::rng::{substream, tag};

pub const DEFAULT_SIDE: usize = 8;
pub const DEFAULT_ALPHA: f64 = -0.15;
pub const DEFAULT_BETA: f64 = -0.15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SomGrid {
    pub side: usize,
    pub node_vectors: Vec<Vec<f64>>,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
}

impl SomGrid {
    pub fn new(side: usize, alpha: f64, beta: f64, seed: u64) -> Result<Self> {
        if side == 0 {
            return Err(Error::invalid("grid side must be at least 1"));
        }
        if !(alpha < 0.0 && beta < 0.0) {
            return Err(Error::invalid("alpha and beta must be negative"));
        }
        Ok(SomGrid {
            side,
            node_vectors: Vec::new(),
            alpha,
            beta,
            seed,
        })
    }

    pub fn with_seed(seed: u64) -> Self {
        Self::new(DEFAULT_SIDE, DEFAULT_ALPHA, DEFAULT_BETA, seed).expect("defaults are valid")
    }

    pub fn n_nodes(&self) -> usize {
        self.side * self.side
    }

    pub fn is_initialized(&self) -> bool {
        !self.node_vectors.is_empty()
    }

    /// (row, column) of a node.
    pub fn coords(&self, node: usize) -> (usize, usize) {
        (node / self.side, node % self.side)
    }

    pub fn grid_distance(&self, a: usize, b: usize) -> f64 {
        let (ra, ca) = self.coords(a);
        let (rb, cb) = self.coords(b);
        let dr = ra as f64 - rb as f64;
        let dc = ca as f64 - cb as f64;
        (dr * dr + dc * dc).sqrt()
    }

    pub fn radius(&self, iteration: usize) -> f64 {
        (self.n_nodes() as f64).sqrt() * ((iteration + 1) as f64).powf(self.alpha)
    }

    pub fn learning_rate(&self, iteration: usize) -> f64 {
        ((iteration + 1) as f64).powf(self.beta)
    }

    /// Nodes updated when `winner` wins at `iteration`, in index order.
    pub fn neighborhood(&self, winner: usize, iteration: usize) -> Vec<usize> {
        let r = self.radius(iteration);
        (0..self.n_nodes())
            .filter(|&j| self.grid_distance(winner, j) < r)
            .collect()
    }

    /// Draws each coordinate uniformly within that time index's range over
    /// the training arcs.
    pub fn initialize(&mut self, rows: &[Vec<f64>]) -> Result<()> {
        let l = check(rows)?;
        let mut lo = vec![f64::INFINITY; l];
        let mut hi = vec![f64::NEG_INFINITY; l];
        for r in rows {
            for (t, &x) in r.iter().enumerate() {
                lo[t] = lo[t].min(x);
                hi[t] = hi[t].max(x);
            }
        }
        let mut rng = substream(self.seed, &[tag("som-init")]);
        self.node_vectors = (0..self.n_nodes())
            .map(|_| {
                (0..l)
                    .map(|t| {
                        if lo[t] < hi[t] {
                            rng.gen_range(lo[t]..=hi[t])
                        } else {
                            lo[t]
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(())
    }

    /// Node nearest to `x`; ties go to the lowest index.
    pub fn winner(&self, x: &[f64]) -> Result<usize> {
        let mut best = (f64::INFINITY, 0);
        for (j, v) in self.node_vectors.iter().enumerate() {
            let d = arc_distance(v, x)?;
            if d < best.0 {
                best = (d, j);
            }
        }
        Ok(best.1)
    }
}

fn check(rows: &[Vec<f64>]) -> Result<usize> {
    let l = rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::invalid("SOM training needs at least one arc"))?;
    if rows.iter().any(|r| r.len() != l) {
        return Err(Error::invalid("all arcs must have the same length"));
    }
    Ok(l)
}

/// Default iteration count: ten passes' worth of draws.
pub fn default_iterations(corpus: usize) -> usize {
    10 * corpus
}

/// Trains from the grid's current vectors, initializing them first if the
/// grid is empty.
pub fn som_train(rows: &[Vec<f64>], grid: &SomGrid, iterations: usize) -> Result<SomGrid> {
    if iterations == 0 {
        return Err(Error::invalid("iterations must be at least 1"));
    }
    let l = check(rows)?;
    let mut g = grid.clone();
    if !g.is_initialized() {
        g.initialize(rows)?;
    } else if g.node_vectors.len() != g.n_nodes() || g.node_vectors.iter().any(|v| v.len() != l) {
        return Err(Error::invalid("grid vectors do not match the arcs"));
    }
    let mut rng = substream(g.seed, &[tag("som-train")]);
    for i in 0..iterations {
        let x = &rows[rng.gen_range(0..rows.len())];
        let k = g.winner(x)?;
        let f = g.learning_rate(i);
        for j in g.neighborhood(k, i) {
            for (v, xt) in g.node_vectors[j].iter_mut().zip(x) {
                *v += f * (xt - *v);
            }
        }
    }
    Ok(g)
}

/// Winning node of each arc.
pub fn winners(rows: &[Vec<f64>], grid: &SomGrid) -> Result<Vec<usize>> {
    rows.iter().map(|r| grid.winner(r)).collect()
}

pub fn winner_counts(rows: &[Vec<f64>], grid: &SomGrid) -> Result<Vec<usize>> {
    let mut counts = vec![0; grid.n_nodes()];
    for w in winners(rows, grid)? {
        counts[w] += 1;
    }
    Ok(counts)
}

/// Doc ids won by each node, in corpus order.
pub fn winner_map(ids: &[String], rows: &[Vec<f64>], grid: &SomGrid) -> Result<Vec<Vec<String>>> {
    let mut out = vec![Vec::new(); grid.n_nodes()];
    for (id, w) in ids.iter().zip(winners(rows, grid)?) {
        out[w].push(id.clone());
    }
    Ok(out)
}

/// Mean arc distance from each node to its 4-connected neighbors.
pub fn b_matrix(grid: &SomGrid) -> Result<Vec<Vec<f64>>> {
    let s = grid.side;
    let mut out = vec![vec![0.0; s]; s];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            let me = &grid.node_vectors[r * s + c];
            let mut neighbours = Vec::with_capacity(4);
            if r > 0 {
                neighbours.push((r - 1) * s + c);
            }
            if r + 1 < s {
                neighbours.push((r + 1) * s + c);
            }
            if c > 0 {
                neighbours.push(r * s + c - 1);
            }
            if c + 1 < s {
                neighbours.push(r * s + c + 1);
            }
            if neighbours.is_empty() {
                continue;
            }
            let mut total = 0.0;
            for &n in &neighbours {
                total += arc_distance(me, &grid.node_vectors[n])?;
            }
            *cell = total / neighbours.len() as f64;
        }
    }
    Ok(out)
}

/// Mean over nodes of the variance of each node vector's entries.
pub fn node_variance(grid: &SomGrid) -> f64 {
    let per: Vec<f64> = grid
        .node_vectors
        .iter()
        .filter(|v| !v.is_empty())
        .map(|v| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64
        })
        .collect();
    if per.is_empty() {
        0.0
    } else {
        per.iter().sum::<f64>() / per.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEmit {
    pub side: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub node_vectors: Vec<Vec<f64>>,
    pub winner_counts: Vec<usize>,
    pub b_matrix: Vec<Vec<f64>>,
}

impl GridEmit {
    pub fn new(grid: &SomGrid, rows: &[Vec<f64>]) -> Result<Self> {
        Ok(GridEmit {
            side: grid.side,
            alpha: grid.alpha,
            beta: grid.beta,
            seed: grid.seed,
            node_vectors: grid.node_vectors.clone(),
            winner_counts: winner_counts(rows, grid)?,
            b_matrix: b_matrix(grid)?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let e: GridEmit = serde_json::from_str(text)?;
        let n = e.side * e.side;
        if e.node_vectors.len() != n || e.winner_counts.len() != n || e.b_matrix.len() != e.side {
            return Err(Error::invalid(
                "grid emit dimensions disagree with its side",
            ));
        }
        Ok(e)
    }

    pub fn grid(&self) -> SomGrid {
        SomGrid {
            side: self.side,
            node_vectors: self.node_vectors.clone(),
            alpha: self.alpha,
            beta: self.beta,
            seed: self.seed,
        }
    }
}
