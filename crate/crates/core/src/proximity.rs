//! First- and second-order proximity operators of a directed graph.
//!
//! Given the self-looped adjacency `Ã = A + I`:
//!
//! ```text
//! first       A_F      = (Ã + Ãᵀ) / 2
//! second in   A_S_in   = Ãᵀ · diag(row sums of Ã)⁻¹ · Ã
//! second out  A_S_out  = Ã · diag(col sums of Ã)⁻¹ · Ãᵀ
//! ```
//!
//! `A_S_in(i, j)` sums, over every node `k` pointing at both `i` and `j`,
//! `Ã(k,i)·Ã(k,j)` divided by the out-weight of `k`; `A_S_out` is the same
//! over shared successors divided by their in-weight. Each matrix is then
//! renormalized as `D^{-1/2} M D^{-1/2}`.
//!
//! All kernels produce bit-exact symmetric output: every entry pair `(i,j)`,
//! `(j,i)` is accumulated from identical terms in identical order.

use crate::error::{DgcnError, Result};
use crate::graph::{DirectedGraph, SparseMatrix};

fn require_square(m: &SparseMatrix, what: &str) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(DgcnError::Shape(format!(
            "{what} needs a square matrix, got {}x{}",
            m.n_rows(),
            m.n_cols()
        )))
    }
}

/// `A_F = (Ã + Ãᵀ) / 2`.
pub fn first_order(a_tilde: &SparseMatrix) -> Result<SparseMatrix> {
    require_square(a_tilde, "first_order")?;
    a_tilde.add(&a_tilde.transpose())?.scale(0.5)
}

/// Second-order in-degree proximity: similarity through shared predecessors.
pub fn second_order_in(a_tilde: &SparseMatrix) -> Result<SparseMatrix> {
    require_square(a_tilde, "second_order_in")?;
    let n = a_tilde.n_rows();
    let out_weight = a_tilde.row_sums();
    for (k, &s) in out_weight.iter().enumerate() {
        if !a_tilde.row(k).0.is_empty() && !(s > 0.0) {
            return Err(DgcnError::Internal(format!(
                "row {k} has stored entries but sum {s}"
            )));
        }
    }
    // predecessors[i] lists (k, Ã(k,i)) with k ascending
    let predecessors = a_tilde.transpose();

    let mut row_offsets = Vec::with_capacity(n + 1);
    row_offsets.push(0);
    let mut col_indices = Vec::new();
    let mut values = Vec::new();
    let mut acc = vec![0.0f64; n];
    let mut touched = vec![false; n];
    let mut cols: Vec<usize> = Vec::new();
    for i in 0..n {
        let (ks, a_ki) = predecessors.row(i);
        for (&k, &w_ki) in ks.iter().zip(a_ki) {
            let (js, a_kj) = a_tilde.row(k);
            for (&j, &w_kj) in js.iter().zip(a_kj) {
                if !touched[j] {
                    touched[j] = true;
                    cols.push(j);
                }
                acc[j] += (w_ki * w_kj) / out_weight[k];
            }
        }
        cols.sort_unstable();
        for &j in &cols {
            if acc[j] != 0.0 {
                col_indices.push(j);
                values.push(acc[j]);
            }
            acc[j] = 0.0;
            touched[j] = false;
        }
        cols.clear();
        row_offsets.push(col_indices.len());
    }
    Ok(SparseMatrix::from_csr_unchecked(
        n,
        n,
        row_offsets,
        col_indices,
        values,
    ))
}

/// Second-order out-degree proximity: similarity through shared successors.
/// Equal to `second_order_in` of the transpose.
pub fn second_order_out(a_tilde: &SparseMatrix) -> Result<SparseMatrix> {
    require_square(a_tilde, "second_order_out")?;
    second_order_in(&a_tilde.transpose())
}

/// Symmetric renormalization `D^{-1/2} M D^{-1/2}` with `D` the row sums.
pub fn sym_normalize(m: &SparseMatrix) -> Result<SparseMatrix> {
    require_square(m, "sym_normalize")?;
    let sums = m.row_sums();
    if let Some(node) = sums.iter().position(|&s| !(s > 0.0)) {
        return Err(DgcnError::IsolatedNode { node });
    }
    // d_i·d_j is commutative, so (i,j) and (j,i) get bit-identical results
    Ok(m.map_entries(|i, j, v| v / (sums[i] * sums[j]).sqrt()))
}

/// The three normalized propagation operators of a graph, plus the raw
/// proximity matrices they were derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximitySet {
    first: SparseMatrix,
    second_in: SparseMatrix,
    second_out: SparseMatrix,
    raw_first: SparseMatrix,
    raw_second_in: SparseMatrix,
    raw_second_out: SparseMatrix,
}

impl ProximitySet {
    /// Adds self-loops, builds the three proximities and normalizes each.
    pub fn build(g: &DirectedGraph) -> Result<Self> {
        let a_tilde = g.add_self_loops();
        let raw_first = first_order(&a_tilde)?;
        let raw_second_in = second_order_in(&a_tilde)?;
        let raw_second_out = second_order_out(&a_tilde)?;
        Ok(Self {
            first: sym_normalize(&raw_first)?,
            second_in: sym_normalize(&raw_second_in)?,
            second_out: sym_normalize(&raw_second_out)?,
            raw_first,
            raw_second_in,
            raw_second_out,
        })
    }

    /// Like [`ProximitySet::build`], then drops normalized entries below `eps`.
    pub fn build_pruned(g: &DirectedGraph, eps: Option<f64>) -> Result<Self> {
        let mut p = Self::build(g)?;
        if let Some(eps) = eps {
            if !(eps >= 0.0) {
                return Err(DgcnError::Domain(format!("prox-eps {eps} must be >= 0")));
            }
            p.first = p.first.prune(eps);
            p.second_in = p.second_in.prune(eps);
            p.second_out = p.second_out.prune(eps);
        }
        Ok(p)
    }

    /// Wraps caller-supplied normalized operators (raw matrices set equal to
    /// them). Operators must be square, the same size, and symmetric.
    pub fn from_operators(
        first: SparseMatrix,
        second_in: SparseMatrix,
        second_out: SparseMatrix,
    ) -> Result<Self> {
        let n = first.n_rows();
        for m in [&first, &second_in, &second_out] {
            require_square(m, "proximity operator")?;
            if m.n_rows() != n {
                return Err(DgcnError::Shape("operators differ in size".into()));
            }
            if m.max_asymmetry() > 1e-12 {
                return Err(DgcnError::Domain("proximity operator is not symmetric".into()));
            }
        }
        Ok(Self {
            raw_first: first.clone(),
            raw_second_in: second_in.clone(),
            raw_second_out: second_out.clone(),
            first,
            second_in,
            second_out,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.first.n_rows()
    }

    /// Normalized first-order operator `Â_F`.
    pub fn first(&self) -> &SparseMatrix {
        &self.first
    }

    /// Normalized second-order in-degree operator `Â_S_in`.
    pub fn second_in(&self) -> &SparseMatrix {
        &self.second_in
    }

    /// Normalized second-order out-degree operator `Â_S_out`.
    pub fn second_out(&self) -> &SparseMatrix {
        &self.second_out
    }

    pub fn raw_first(&self) -> &SparseMatrix {
        &self.raw_first
    }

    pub fn raw_second_in(&self) -> &SparseMatrix {
        &self.raw_second_in
    }

    pub fn raw_second_out(&self) -> &SparseMatrix {
        &self.raw_second_out
    }

    /// `[Â_F, Â_S_in, Â_S_out]` in fusion order.
    pub fn operators(&self) -> [&SparseMatrix; 3] {
        [&self.first, &self.second_in, &self.second_out]
    }

    /// All six matrices with their conventional names.
    pub fn named(&self) -> [(&'static str, &SparseMatrix); 6] {
        [
            ("raw_first", &self.raw_first),
            ("raw_second_in", &self.raw_second_in),
            ("raw_second_out", &self.raw_second_out),
            ("first", &self.first),
            ("second_in", &self.second_in),
            ("second_out", &self.second_out),
        ]
    }
}
