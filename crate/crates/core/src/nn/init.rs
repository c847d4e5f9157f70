//! Weight initialization and dropout masks.

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DgcnError, Result};
use crate::graph::DenseMatrix;

/// Glorot/Xavier uniform: i.i.d. `U[-√(6/(rows+cols)), +√(6/(rows+cols))]`.
pub fn glorot_init<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<DenseMatrix> {
    if rows == 0 || cols == 0 {
        return Err(DgcnError::Shape(format!(
            "glorot_init needs positive dimensions, got {rows}x{cols}"
        )));
    }
    let bound = (6.0 / (rows + cols) as f64).sqrt();
    let dist = Uniform::new_inclusive(-bound, bound);
    let data = (0..rows * cols).map(|_| dist.sample(rng)).collect();
    DenseMatrix::from_vec(rows, cols, data)
}

pub fn glorot_init_seeded(rows: usize, cols: usize, seed: u64) -> Result<DenseMatrix> {
    glorot_init(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Inverted-dropout mask: each entry is 0 with probability `rate`, else
/// `1 / (1 - rate)`. Returns `None` for `rate == 0`.
pub fn dropout_mask(
    rows: usize,
    cols: usize,
    rate: f64,
    rng: &mut dyn RngCore,
) -> Result<Option<DenseMatrix>> {
    if !(0.0..1.0).contains(&rate) {
        return Err(DgcnError::Domain(format!(
            "dropout rate {rate} outside [0, 1)"
        )));
    }
    if rate == 0.0 {
        return Ok(None);
    }
    let keep = 1.0 / (1.0 - rate);
    let data = (0..rows * cols)
        .map(|_| if rng.gen::<f64>() < rate { 0.0 } else { keep })
        .collect();
    Ok(Some(DenseMatrix::from_raw(rows, cols, data)))
}
