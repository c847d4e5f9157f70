//! Full-batch training with validation-accuracy early stopping.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::TrainConfig;
use super::split::SplitAssignment;
use crate::error::{DgcnError, Result};
use crate::graph::{DenseMatrix, LabelVector};
use crate::nn::{AdamConfig, AdamState, DgcnModel, Mode, ModelDims};
use crate::proximity::ProximitySet;

/// Fraction of `nodes` whose arg-max prediction (ties to the lowest class)
/// matches the label.
pub fn accuracy(probs: &DenseMatrix, y: &LabelVector, nodes: &[usize]) -> Result<f64> {
    if nodes.is_empty() {
        return Err(DgcnError::Protocol("accuracy over an empty node set".into()));
    }
    let mut correct = 0usize;
    for &n in nodes {
        let truth = y
            .get(n)
            .ok_or_else(|| DgcnError::Unlabeled { nodes: vec![n] })?;
        correct += usize::from(probs.row_argmax(n) == truth);
    }
    Ok(correct as f64 / nodes.len() as f64)
}

pub fn evaluate(
    model: &DgcnModel,
    p: &ProximitySet,
    x: &DenseMatrix,
    y: &LabelVector,
    nodes: &[usize],
) -> Result<f64> {
    accuracy(&model.predict(p, x)?, y, nodes)
}

/// Result of one training run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Best-validation parameters, or the final ones with `restore_best` off.
    pub model: DgcnModel,
    pub best_epoch: usize,
    pub stop_epoch: usize,
    pub val_acc: f64,
    pub test_acc: f64,
    /// Summed training cross-entropy (plus L2) of the last epoch.
    pub final_loss: f64,
    /// Validation accuracy after every epoch.
    pub val_history: Vec<f64>,
    pub wall_time: Duration,
}

/// Trains one model from `init_seed`. Validation accuracy is checked after
/// every epoch; only a strict improvement resets the patience counter.
pub fn train_once(
    p: &ProximitySet,
    x: &DenseMatrix,
    y: &LabelVector,
    split: &SplitAssignment,
    cfg: &TrainConfig,
    init_seed: u64,
) -> Result<RunOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(init_seed);
    let dims = ModelDims {
        input: x.n_cols(),
        hidden: cfg.hidden,
        classes: y.n_classes(),
        layers: cfg.layers,
    };
    let mut model = DgcnModel::init(cfg.model, dims, cfg.alpha, cfg.beta, &mut rng)?;
    let input = model.prepare_input(p, x)?;
    let mut adam = AdamState::new(
        AdamConfig {
            lr: cfg.lr,
            ..AdamConfig::default()
        },
        &model.parameters(),
    );

    let mut best = (f64::NEG_INFINITY, 0usize, model.clone());
    let mut since_best = 0;
    let mut stop_epoch = 0;
    let mut final_loss = f64::NAN;
    let mut val_history = Vec::new();
    for epoch in 1..=cfg.max_epochs {
        stop_epoch = epoch;
        let trace = model.forward(
            p,
            &input,
            Mode::Train {
                dropout: cfg.dropout,
                rng: &mut rng,
            },
        )?;
        let loss = model.loss(&trace, y, &split.train, cfg.l2)?;
        if !loss.is_finite() {
            return Err(DgcnError::Divergence { epoch, loss });
        }
        final_loss = loss;
        let grads = model.backward(p, &trace, y, &split.train, cfg.l2)?;
        adam.step(&mut model.parameters_mut(), &grads)?;

        let probs = model.forward(p, &input, Mode::Eval)?.probs;
        let val_acc = accuracy(&probs, y, &split.val)?;
        val_history.push(val_acc);
        log::debug!("epoch {epoch}: loss {loss:.6} ({:.6}/node) val {val_acc:.4}",
            loss / split.train.len() as f64);
        if val_acc > best.0 {
            best = (val_acc, epoch, model.clone());
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= cfg.patience {
                break;
            }
        }
    }

    let (val_acc, best_epoch, best_model) = best;
    let model = if cfg.restore_best { best_model } else { model };
    let test_acc = evaluate(&model, p, x, y, &split.test)?;
    Ok(RunOutcome {
        model,
        best_epoch,
        stop_epoch,
        val_acc,
        test_acc,
        final_loss,
        val_history,
        wall_time: start.elapsed(),
    })
}
