//! Independent oracles shared by the integration and acceptance tests.
//!
//! Nothing here calls the sparse kernels it is used to check: proximities
//! are evaluated with dense triple loops straight from their definitions,
//! gradients with central finite differences, spectra with nalgebra.

#![allow(dead_code)]

use dgcn::graph::{DenseMatrix, DirectedGraph, LabelVector, SparseMatrix};
use dgcn::nn::{DgcnModel, Mode, ModelDims, ModelKind};
use dgcn::proximity::ProximitySet;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random directed graph: each ordered pair (self-loops included) is an
/// edge with probability `density`, weight uniform in `(0, 5]`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> DirectedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen::<f64>() < density {
                edges.push((i, j, 5.0 - 5.0 * rng.gen::<f64>()));
            }
        }
    }
    DirectedGraph::from_edges(n, edges).unwrap()
}

/// Random undirected graph stored as two opposite equal-weight edges.
pub fn random_symmetric_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> DirectedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i..n {
            if rng.gen::<f64>() < density {
                let w = 5.0 - 5.0 * rng.gen::<f64>();
                edges.push((i, j, w));
                if i != j {
                    edges.push((j, i, w));
                }
            }
        }
    }
    DirectedGraph::from_edges(n, edges).unwrap()
}

pub fn dense_of(m: &SparseMatrix) -> Vec<Vec<f64>> {
    (0..m.n_rows())
        .map(|i| (0..m.n_cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// `Σ_k A[k][i]·A[k][j] / Σ_v A[k][v]` over every `k` pointing at both.
pub fn brute_second_in(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut sum = 0.0;
            for k in 0..n {
                if a[k][i] != 0.0 && a[k][j] != 0.0 {
                    let out_weight: f64 = a[k].iter().sum();
                    sum += a[k][i] * a[k][j] / out_weight;
                }
            }
            out[i][j] = sum;
        }
    }
    out
}

/// `Σ_k A[i][k]·A[j][k] / Σ_v A[v][k]` over every `k` reached from both.
pub fn brute_second_out(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut sum = 0.0;
            for k in 0..n {
                if a[i][k] != 0.0 && a[j][k] != 0.0 {
                    let in_weight: f64 = (0..n).map(|v| a[v][k]).sum();
                    sum += a[i][k] * a[j][k] / in_weight;
                }
            }
            out[i][j] = sum;
        }
    }
    out
}

pub fn max_abs_diff(a: &[Vec<f64>], b: &SparseMatrix) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            worst = worst.max((v - b.get(i, j)).abs());
        }
    }
    worst
}

/// Renormalized GCN operator `D̃^{-1/2}(A + I)D̃^{-1/2}` of an undirected graph.
pub fn gcn_operator(g: &DirectedGraph) -> Vec<Vec<f64>> {
    let n = g.n_nodes();
    let mut a = dense_of(g.adjacency());
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += 1.0;
    }
    let deg: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    (0..n)
        .map(|i| (0..n).map(|j| a[i][j] / (deg[i].sqrt() * deg[j].sqrt())).collect())
        .collect()
}

pub fn eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let dm = DMatrix::from_fn(n, n, |i, j| m[i][j]);
    dm.symmetric_eigen().eigenvalues.iter().copied().collect()
}

/// Combinatorial Laplacian `diag(row sums) − M`.
pub fn laplacian(m: &SparseMatrix) -> Vec<Vec<f64>> {
    let mut l: Vec<Vec<f64>> = dense_of(m).into_iter().map(|r| r.iter().map(|v| -v).collect()).collect();
    for (i, s) in m.row_sums().into_iter().enumerate() {
        l[i][i] += s;
    }
    l
}

pub fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> DenseMatrix {
    DenseMatrix::from_vec(
        rows,
        cols,
        (0..rows * cols).map(|_| scale * (2.0 * rng.gen::<f64>() - 1.0)).collect(),
    )
    .unwrap()
}

/// Eval-mode training objective of `model` on a prepared input.
pub fn objective(
    model: &DgcnModel,
    p: &ProximitySet,
    input: &DenseMatrix,
    y: &LabelVector,
    mask: &[usize],
    l2: f64,
) -> f64 {
    let trace = model.forward(p, input, Mode::Eval).unwrap();
    model.loss(&trace, y, mask, l2).unwrap()
}

/// Central finite differences of the objective for every parameter entry.
pub fn numeric_gradients(
    model: &DgcnModel,
    p: &ProximitySet,
    input: &DenseMatrix,
    y: &LabelVector,
    mask: &[usize],
    l2: f64,
    h: f64,
) -> Vec<DenseMatrix> {
    let mut probe = model.clone();
    let shapes: Vec<_> = model.parameters().iter().map(|m| m.shape()).collect();
    let mut grads = Vec::new();
    for (k, &(r, c)) in shapes.iter().enumerate() {
        let mut g = DenseMatrix::zeros(r, c);
        for idx in 0..r * c {
            let orig = probe.parameters()[k].data()[idx];
            probe.parameters_mut()[k].data_mut()[idx] = orig + h;
            let plus = objective(&probe, p, input, y, mask, l2);
            probe.parameters_mut()[k].data_mut()[idx] = orig - h;
            let minus = objective(&probe, p, input, y, mask, l2);
            probe.parameters_mut()[k].data_mut()[idx] = orig;
            g.data_mut()[idx] = (plus - minus) / (2.0 * h);
        }
        grads.push(g);
    }
    grads
}

/// Relative error of one parameter matrix, `‖a − n‖₂ / max(‖a‖₂, ‖n‖₂)`
/// (0 when both are 0).
pub fn relative_error(analytic: &DenseMatrix, numeric: &DenseMatrix) -> f64 {
    let diff: f64 = analytic
        .data()
        .iter()
        .zip(numeric.data())
        .map(|(a, n)| (a - n) * (a - n))
        .sum::<f64>()
        .sqrt();
    let scale = analytic.frobenius_sq().sqrt().max(numeric.frobenius_sq().sqrt());
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

/// Largest entrywise `|a − n| / max(|a|, |n|)` (0 when both are 0).
pub fn max_entry_relative_error(analytic: &DenseMatrix, numeric: &DenseMatrix) -> f64 {
    analytic
        .data()
        .iter()
        .zip(numeric.data())
        .map(|(&a, &n)| {
            let scale = a.abs().max(n.abs());
            if scale == 0.0 {
                0.0
            } else {
                (a - n).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

/// One random gradient-check instance (N ≤ 8, C ≤ 5, H ≤ 4, F ≤ 3,
/// L ∈ {1, 2}, eval mode). Returns the worst per-parameter relative error
/// and the analytic/numeric gradient pairs at step `h`.
pub fn gradient_check(seed: u64, kind: ModelKind, h: f64) -> (f64, Vec<(DenseMatrix, DenseMatrix)>) {
    let mut r = rng(seed);
    let n = r.gen_range(4..=8);
    let dims = ModelDims {
        input: r.gen_range(2..=5),
        hidden: r.gen_range(2..=4),
        classes: r.gen_range(2..=3),
        layers: r.gen_range(1..=2),
    };
    let g = random_graph(&mut r, n, 0.3);
    let p = ProximitySet::build(&g).unwrap();
    let x = random_dense(&mut r, n, dims.input, 1.0);
    let y = LabelVector::with_classes(
        (0..n).map(|_| Some(r.gen_range(0..dims.classes))).collect(),
        dims.classes,
    )
    .unwrap();
    let mask: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.7)).collect();
    let alpha = r.gen_range(0.2..1.8);
    let beta = r.gen_range(0.2..1.8);
    let model = DgcnModel::init(kind, dims, alpha, beta, &mut r).unwrap();
    let input = model.prepare_input(&p, &x).unwrap().into_owned();
    let l2 = 5e-4;
    let trace = model.forward(&p, &input, Mode::Eval).unwrap();
    let analytic = model.backward(&p, &trace, &y, &mask, l2).unwrap();
    let numeric = numeric_gradients(&model, &p, &input, &y, &mask, l2, h);
    let worst = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| relative_error(a, n))
        .fold(0.0, f64::max);
    (worst, analytic.into_iter().zip(numeric).collect())
}

