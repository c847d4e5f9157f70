//! Directed stochastic block model datasets for tests and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DgcnError, Result};
use crate::graph::{DenseMatrix, DirectedGraph, LabelVector};
use crate::train::Dataset;

#[derive(Debug, Clone, PartialEq)]
pub struct SbmParams {
    pub n_per_class: usize,
    pub classes: usize,
    /// Probability of each ordered same-class pair being an edge.
    pub p_in: f64,
    /// Probability of each ordered cross-class pair being an edge.
    pub p_out: f64,
    pub feat_dim: usize,
    /// Width of the uniform noise added to every feature.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SbmParams {
    fn default() -> Self {
        Self {
            n_per_class: 100,
            classes: 3,
            p_in: 0.2,
            p_out: 0.02,
            feat_dim: 16,
            noise: 1.0,
            seed: 0,
        }
    }
}

/// Samples a labeled directed SBM.
///
/// Node `i` belongs to class `i / n_per_class`. Every ordered pair `(i, j)`,
/// `i ≠ j`, is an edge of weight 1 independently with probability `p_in` or
/// `p_out`. Feature `d` of a class-`c` node is `1[d mod classes == c]` plus
/// `U[0, noise)`.
pub fn generate_sbm(params: &SbmParams) -> Result<Dataset> {
    let SbmParams { n_per_class, classes, p_in, p_out, feat_dim, noise, seed } = *params;
    for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(DgcnError::Domain(format!("{name}={p} outside [0, 1]")));
        }
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(DgcnError::Domain(format!("noise={noise} must be >= 0")));
    }
    if n_per_class == 0 || classes == 0 || feat_dim == 0 {
        return Err(DgcnError::Domain(
            "n_per_class, classes and feat_dim must be positive".into(),
        ));
    }
    let n = n_per_class * classes;
    let class_of = |i: usize| i / n_per_class;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let p = if class_of(i) == class_of(j) { p_in } else { p_out };
            if rng.gen::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    let graph = DirectedGraph::from_edges(n, edges)?;

    let mut data = Vec::with_capacity(n * feat_dim);
    for i in 0..n {
        for d in 0..feat_dim {
            let signal = if d % classes == class_of(i) { 1.0 } else { 0.0 };
            let jitter = if noise > 0.0 { rng.gen::<f64>() * noise } else { 0.0 };
            data.push(signal + jitter);
        }
    }
    let features = DenseMatrix::from_vec(n, feat_dim, data)?;
    let labels = LabelVector::new((0..n).map(|i| Some(class_of(i))).collect());
    Dataset::new(graph, features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_probabilities() {
        let d = generate_sbm(&SbmParams {
            n_per_class: 4,
            classes: 2,
            p_in: 1.0,
            p_out: 0.0,
            ..Default::default()
        })
        .unwrap();
        let a = d.graph.adjacency();
        assert_eq!(a.nnz(), 2 * 4 * 3);
        for (i, j, _) in a.iter() {
            assert_eq!(i / 4, j / 4);
            assert_ne!(i, j);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let p = SbmParams { n_per_class: 10, ..Default::default() };
        let a = generate_sbm(&p).unwrap();
        let b = generate_sbm(&p).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.features, b.features);
        let c = generate_sbm(&SbmParams { seed: 1, ..p }).unwrap();
        assert_ne!(a.graph, c.graph);
    }

    #[test]
    fn edge_count_within_binomial_bound() {
        let p = SbmParams::default();
        let d = generate_sbm(&p).unwrap();
        let n = (p.n_per_class * p.classes) as f64;
        let same = p.classes as f64 * (p.n_per_class * (p.n_per_class - 1)) as f64;
        let cross = n * (n - 1.0) - same;
        let mean = same * p.p_in + cross * p.p_out;
        let var = same * p.p_in * (1.0 - p.p_in) + cross * p.p_out * (1.0 - p.p_out);
        let got = d.graph.n_edges() as f64;
        assert!((got - mean).abs() <= 5.0 * var.sqrt(), "{got} vs {mean}");
    }

    #[test]
    fn invalid_probabilities() {
        assert!(generate_sbm(&SbmParams { p_in: 1.5, ..Default::default() }).is_err());
        assert!(generate_sbm(&SbmParams { p_out: -0.1, ..Default::default() }).is_err());
    }
}
