//! Directed weighted graphs, node labels, and the matrix substrate.

mod dense;
pub mod io;
mod sparse;

pub use dense::DenseMatrix;
pub use sparse::SparseMatrix;

use crate::error::{DgcnError, Result};

/// A directed graph over nodes `0..n_nodes` with positive edge weights.
/// `adjacency[(i, j)]` is the weight of the edge `i -> j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    adjacency: SparseMatrix,
    node_ids: Option<Vec<String>>,
}

impl DirectedGraph {
    pub fn new(adjacency: SparseMatrix) -> Result<Self> {
        if !adjacency.is_square() {
            return Err(DgcnError::Shape(format!(
                "adjacency is {}x{}",
                adjacency.n_rows(),
                adjacency.n_cols()
            )));
        }
        Ok(Self {
            adjacency,
            node_ids: None,
        })
    }

    pub fn from_edges(
        n_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        Self::new(SparseMatrix::from_triplets(n_nodes, n_nodes, edges)?)
    }

    /// Attaches an external-id vocabulary (`ids[i]` names node `i`).
    pub fn with_node_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.n_nodes() {
            return Err(DgcnError::Shape(format!(
                "{} ids for {} nodes",
                ids.len(),
                self.n_nodes()
            )));
        }
        self.node_ids = Some(ids);
        Ok(self)
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.n_rows()
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.nnz()
    }

    pub fn adjacency(&self) -> &SparseMatrix {
        &self.adjacency
    }

    pub fn node_ids(&self) -> Option<&[String]> {
        self.node_ids.as_deref()
    }

    /// `Ã = A + I`. A self-loop of weight `w` already in the input becomes `w + 1`.
    pub fn add_self_loops(&self) -> SparseMatrix {
        self.adjacency
            .add(&SparseMatrix::identity(self.n_nodes()))
            .expect("square adjacency")
    }
}

/// Per-node class ids; `None` marks an unlabeled node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    labels: Vec<Option<usize>>,
    n_classes: usize,
}

impl LabelVector {
    /// The class count is `1 + max label`, or 0 when nothing is labeled.
    pub fn new(labels: Vec<Option<usize>>) -> Self {
        let n_classes = labels.iter().flatten().max().map_or(0, |m| m + 1);
        Self { labels, n_classes }
    }

    pub fn with_classes(labels: Vec<Option<usize>>, n_classes: usize) -> Result<Self> {
        if let Some(bad) = labels.iter().flatten().find(|&&c| c >= n_classes) {
            return Err(DgcnError::Bounds(format!(
                "label {bad} with only {n_classes} classes"
            )));
        }
        Ok(Self { labels, n_classes })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn get(&self, node: usize) -> Option<usize> {
        self.labels[node]
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn labeled_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.map(|c| (i, c)))
    }
}
