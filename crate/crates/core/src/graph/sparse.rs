//! Compressed sparse row storage for nonnegative weighted matrices.
//!
//! Every `SparseMatrix` is kept in canonical form: column indices strictly
//! increase within a row, duplicates are summed at construction, and
//! explicit zeros are dropped.

use rayon::prelude::*;

use super::dense::DenseMatrix;
use crate::error::{DgcnError, Result};

// Rows per rayon task in spmm; below this the kernel stays sequential.
const PAR_ROW_THRESHOLD: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            row_offsets: vec![0; n_rows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Builds a canonical matrix from `(row, col, value)` triplets.
    ///
    /// Duplicate coordinates are summed in input order; entries that end up
    /// exactly zero are dropped. Negative or non-finite values are rejected.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(DgcnError::Bounds(format!(
                    "entry ({r}, {c}) outside {n_rows}x{n_cols}"
                )));
            }
            if !v.is_finite() || v < 0.0 {
                return Err(DgcnError::Domain(format!(
                    "entry ({r}, {c}) has invalid weight {v}"
                )));
            }
            entries.push((r, c, v));
        }
        // stable sort keeps the summation order of duplicates deterministic
        entries.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_offsets = vec![0usize; n_rows + 1];
        let mut col_indices = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut i = 0;
        while i < entries.len() {
            let (r, c, mut v) = entries[i];
            i += 1;
            while i < entries.len() && entries[i].0 == r && entries[i].1 == c {
                v += entries[i].2;
                i += 1;
            }
            if v != 0.0 {
                row_offsets[r + 1] += 1;
                col_indices.push(c);
                values.push(v);
            }
        }
        for r in 0..n_rows {
            row_offsets[r + 1] += row_offsets[r];
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    // Caller guarantees canonical form: sorted unique columns, positive values.
    pub(crate) fn from_csr_unchecked(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(row_offsets.len(), n_rows + 1);
        debug_assert_eq!(col_indices.len(), values.len());
        Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Dense to sparse, keeping nonzero entries.
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        let (r, c) = m.shape();
        Self::from_triplets(
            r,
            c,
            (0..r).flat_map(|i| (0..c).map(move |j| (i, j))).filter_map(|(i, j)| {
                let v = m.get(i, j);
                (v != 0.0).then_some((i, j, v))
            }),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        (&self.col_indices[span.clone()], &self.values[span])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    /// Stored entries as `(row, col, value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &c in &self.col_indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.n_cols {
            counts[c + 1] += counts[c];
        }
        let row_offsets = counts.clone();
        let mut next = counts;
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        // rows visited in ascending order, so columns of the transpose stay sorted
        for (i, j, v) in self.iter() {
            let p = next[j];
            col_indices[p] = i;
            values[p] = v;
            next[j] += 1;
        }
        SparseMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.n_rows != other.n_rows || self.n_cols != other.n_cols {
            return Err(DgcnError::Shape(format!(
                "add {}x{} and {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut row_offsets = Vec::with_capacity(self.n_rows + 1);
        row_offsets.push(0);
        let mut col_indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.n_rows {
            let (ac, av) = self.row(i);
            let (bc, bv) = other.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ac.len() || q < bc.len() {
                let (c, v) = if q == bc.len() || (p < ac.len() && ac[p] < bc[q]) {
                    p += 1;
                    (ac[p - 1], av[p - 1])
                } else if p == ac.len() || bc[q] < ac[p] {
                    q += 1;
                    (bc[q - 1], bv[q - 1])
                } else {
                    p += 1;
                    q += 1;
                    (ac[p - 1], av[p - 1] + bv[q - 1])
                };
                if v != 0.0 {
                    col_indices.push(c);
                    values.push(v);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Ok(SparseMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Applies `f(row, col, value)` to every stored entry, dropping entries
    /// mapped to zero. `f` must return a nonnegative finite value.
    pub(crate) fn map_entries(&self, f: impl Fn(usize, usize, f64) -> f64) -> SparseMatrix {
        let mut row_offsets = Vec::with_capacity(self.n_rows + 1);
        row_offsets.push(0);
        let mut col_indices = Vec::with_capacity(self.nnz());
        let mut values = Vec::with_capacity(self.nnz());
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let w = f(i, j, v);
                debug_assert!(w.is_finite() && w >= 0.0);
                if w != 0.0 {
                    col_indices.push(j);
                    values.push(w);
                }
            }
            row_offsets.push(col_indices.len());
        }
        SparseMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn scale(&self, s: f64) -> Result<SparseMatrix> {
        if !s.is_finite() || s < 0.0 {
            return Err(DgcnError::Domain(format!("invalid scale factor {s}")));
        }
        Ok(self.map_entries(|_, _, v| v * s))
    }

    /// Drops stored entries strictly below `eps`.
    pub fn prune(&self, eps: f64) -> SparseMatrix {
        self.map_entries(|_, _, v| if v < eps { 0.0 } else { v })
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.row(i).1.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_cols];
        for (_, j, v) in self.iter() {
            sums[j] += v;
        }
        sums
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n_rows, self.n_cols);
        for (i, j, v) in self.iter() {
            d.set(i, j, v);
        }
        d
    }

    /// Largest relative asymmetry `|a_ij - a_ji| / max(|a_ij|, |a_ji|)` over
    /// all stored entries; 0 for an exactly symmetric matrix.
    pub fn max_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.iter()
            .map(|(i, j, v)| {
                let w = self.get(j, i);
                let diff = (v - w).abs();
                if diff == 0.0 {
                    0.0
                } else {
                    diff / v.abs().max(w.abs())
                }
            })
            .fold(0.0, f64::max)
    }

    /// Sparse-dense product `self * d`.
    ///
    /// Each output row accumulates in ascending column order, so the result
    /// is identical whether rows run sequentially or in parallel.
    pub fn spmm(&self, d: &DenseMatrix) -> Result<DenseMatrix> {
        if self.n_cols != d.n_rows() {
            return Err(DgcnError::Shape(format!(
                "spmm {}x{} by {}x{}",
                self.n_rows,
                self.n_cols,
                d.n_rows(),
                d.n_cols()
            )));
        }
        let width = d.n_cols();
        let mut out = vec![0.0; self.n_rows * width];
        if width == 0 {
            return Ok(DenseMatrix::from_raw(self.n_rows, 0, out));
        }
        let kernel = |(i, out_row): (usize, &mut [f64])| {
            let (cols, vals) = self.row(i);
            for (&k, &a) in cols.iter().zip(vals) {
                for (o, &b) in out_row.iter_mut().zip(d.row(k)) {
                    *o += a * b;
                }
            }
        };
        if self.n_rows >= PAR_ROW_THRESHOLD {
            out.par_chunks_mut(width).enumerate().for_each(kernel);
        } else {
            out.chunks_mut(width).enumerate().for_each(kernel);
        }
        Ok(DenseMatrix::from_raw(self.n_rows, width, out))
    }
}
