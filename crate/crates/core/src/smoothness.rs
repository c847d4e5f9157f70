//! Feature- and label-smoothness diagnostics over first- and second-order
//! edges.
//!
//! The edge set `E′` holds every directed edge `(i, j)` of the graph plus,
//! in both orientations, every pair `i ≠ j` that shares a predecessor or a
//! successor. Self-pairs are never included.

use std::collections::BTreeSet;

use crate::error::{DgcnError, Result};
use crate::graph::{DenseMatrix, DirectedGraph, LabelVector};

/// Ordered node pairs of `E′`, sorted and free of duplicates and self-pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSetPrime {
    pairs: Vec<(usize, usize)>,
}

impl EdgeSetPrime {
    /// First-order edges together with both orientations of every
    /// shared-neighbor pair.
    pub fn build(g: &DirectedGraph) -> Self {
        let a = g.adjacency();
        let mut pairs: BTreeSet<(usize, usize)> = first_order_pairs(g).collect();
        let mut add_clique = |members: &[usize]| {
            for &i in members {
                for &j in members {
                    if i != j {
                        pairs.insert((i, j));
                    }
                }
            }
        };
        // shared predecessor k: both i and j are successors of k
        for k in 0..a.n_rows() {
            add_clique(a.row(k).0);
        }
        // shared successor k: both i and j are predecessors of k
        let at = a.transpose();
        for k in 0..at.n_rows() {
            add_clique(at.row(k).0);
        }
        Self {
            pairs: pairs.into_iter().collect(),
        }
    }

    /// Only the directed edges of the graph, without self-loops.
    pub fn first_order_only(g: &DirectedGraph) -> Self {
        Self {
            pairs: first_order_pairs(g).collect(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<_> = pairs.into_iter().filter(|(i, j)| i != j).collect();
        Self {
            pairs: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.binary_search(&(i, j)).is_ok()
    }
}

fn first_order_pairs(g: &DirectedGraph) -> impl Iterator<Item = (usize, usize)> + '_ {
    g.adjacency()
        .iter()
        .filter(|&(i, j, _)| i != j)
        .map(|(i, j, _)| (i, j))
}

/// Per-column min-max scaling into `[0, 1]`; constant columns become 0.
pub fn normalize_features(x: &DenseMatrix) -> DenseMatrix {
    let (n, d) = x.shape();
    let mut out = x.clone();
    for j in 0..d {
        let (lo, hi) = (0..n)
            .map(|i| x.get(i, j))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        let span = hi - lo;
        for i in 0..n {
            let v = if span > 0.0 {
                (x.get(i, j) - lo) / span
            } else {
                0.0
            };
            out.set(i, j, v);
        }
    }
    out
}

/// `λ_f`: Manhattan norm of the summed squared feature differences over
/// `E′`, divided by `|E′| · d`. Expects features already in `[0, 1]`.
pub fn feature_smoothness(x: &DenseMatrix, edges: &EdgeSetPrime) -> Result<f64> {
    if edges.is_empty() {
        return Err(DgcnError::UndefinedMetric(
            "feature smoothness over an empty edge set".into(),
        ));
    }
    let d = x.n_cols();
    if d == 0 {
        return Err(DgcnError::UndefinedMetric(
            "feature smoothness with zero feature dimensions".into(),
        ));
    }
    if let Some(&(i, j)) = edges.pairs().iter().find(|&&(i, j)| i.max(j) >= x.n_rows()) {
        return Err(DgcnError::Bounds(format!(
            "pair ({i}, {j}) with {} feature rows",
            x.n_rows()
        )));
    }
    let mut total = vec![0.0; d];
    for &(i, j) in edges.pairs() {
        for ((t, a), b) in total.iter_mut().zip(x.row(i)).zip(x.row(j)) {
            *t += (a - b) * (a - b);
        }
    }
    let l1: f64 = total.iter().map(|v| v.abs()).sum();
    Ok(l1 / (edges.len() as f64 * d as f64))
}

/// `λ_l`: fraction of `E′` pairs whose endpoints carry the same label.
pub fn label_smoothness(y: &LabelVector, edges: &EdgeSetPrime) -> Result<f64> {
    if edges.is_empty() {
        return Err(DgcnError::UndefinedMetric(
            "label smoothness over an empty edge set".into(),
        ));
    }
    let mut unlabeled = BTreeSet::new();
    let mut same = 0usize;
    for &(i, j) in edges.pairs() {
        match (y.get(i), y.get(j)) {
            (Some(a), Some(b)) => same += usize::from(a == b),
            (a, b) => {
                if a.is_none() {
                    unlabeled.insert(i);
                }
                if b.is_none() {
                    unlabeled.insert(j);
                }
            }
        }
    }
    if !unlabeled.is_empty() {
        return Err(DgcnError::Unlabeled {
            nodes: unlabeled.into_iter().collect(),
        });
    }
    Ok(same as f64 / edges.len() as f64)
}

/// One row of the smoothness table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessRow {
    pub n_pairs: usize,
    pub feature: f64,
    pub label: f64,
}

/// `(first-order only, first and second order)` smoothness, with features
/// min-max normalized first.
pub fn smoothness_table(
    g: &DirectedGraph,
    x: &DenseMatrix,
    y: &LabelVector,
) -> Result<(SmoothnessRow, SmoothnessRow)> {
    if x.n_rows() != g.n_nodes() || y.len() != g.n_nodes() {
        return Err(DgcnError::Shape(format!(
            "graph has {} nodes, features {}, labels {}",
            g.n_nodes(),
            x.n_rows(),
            y.len()
        )));
    }
    let xn = normalize_features(x);
    let row = |edges: EdgeSetPrime| -> Result<SmoothnessRow> {
        Ok(SmoothnessRow {
            n_pairs: edges.len(),
            feature: feature_smoothness(&xn, &edges)?,
            label: label_smoothness(y, &edges)?,
        })
    };
    Ok((row(EdgeSetPrime::first_order_only(g))?, row(EdgeSetPrime::build(g))?))
}
