//! Softmax and masked cross-entropy.

use crate::error::{DgcnError, Result};
use crate::graph::{DenseMatrix, LabelVector};

/// Row-wise softmax with the row maximum subtracted first.
pub fn softmax_rows(logits: &DenseMatrix) -> DenseMatrix {
    let mut out = logits.clone();
    for i in 0..out.n_rows() {
        let row = out.row_mut(i);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        for v in row.iter_mut() {
            *v = (*v - max).exp();
            z += *v;
        }
        for v in row.iter_mut() {
            *v /= z;
        }
    }
    out
}

fn check_mask(n_rows: usize, y: &LabelVector, mask: &[usize]) -> Result<()> {
    if y.len() != n_rows {
        return Err(DgcnError::Shape(format!(
            "{} label slots for {n_rows} rows",
            y.len()
        )));
    }
    let unlabeled: Vec<usize> = mask.iter().copied().filter(|&i| y.get(i).is_none()).collect();
    if unlabeled.is_empty() {
        Ok(())
    } else {
        Err(DgcnError::Unlabeled { nodes: unlabeled })
    }
}

/// `-Σ_{l ∈ mask} ln ŷ[l, y_l]`, summed (not averaged) over masked nodes.
pub fn masked_cross_entropy(y_hat: &DenseMatrix, y: &LabelVector, mask: &[usize]) -> Result<f64> {
    check_mask(y_hat.n_rows(), y, mask)?;
    Ok(mask
        .iter()
        .map(|&i| -y_hat.get(i, y.get(i).expect("checked")).ln())
        .sum())
}

/// The same loss evaluated from logits via log-sum-exp, which stays finite
/// when a softmax probability underflows.
pub fn cross_entropy_from_logits(
    logits: &DenseMatrix,
    y: &LabelVector,
    mask: &[usize],
) -> Result<f64> {
    check_mask(logits.n_rows(), y, mask)?;
    Ok(mask
        .iter()
        .map(|&i| {
            let row = logits.row(i);
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = max + row.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
            lse - row[y.get(i).expect("checked")]
        })
        .sum())
}

/// Gradient of the summed cross-entropy w.r.t. the logits: `ŷ - onehot(y)`
/// on masked rows, zero elsewhere.
pub fn cross_entropy_grad(y_hat: &DenseMatrix, y: &LabelVector, mask: &[usize]) -> Result<DenseMatrix> {
    check_mask(y_hat.n_rows(), y, mask)?;
    let mut g = DenseMatrix::zeros(y_hat.n_rows(), y_hat.n_cols());
    for &i in mask {
        let c = y.get(i).expect("checked");
        let row = g.row_mut(i);
        row.copy_from_slice(y_hat.row(i));
        row[c] -= 1.0;
    }
    Ok(g)
}
