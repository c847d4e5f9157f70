use std::fmt;

use crate::error::{DgcnError, Result};
use crate::nn::ModelKind;

/// Hyperparameters and protocol settings of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub lr: f64,
    pub max_epochs: usize,
    pub patience: usize,
    pub dropout: f64,
    pub l2: f64,
    pub hidden: usize,
    pub alpha: f64,
    pub beta: f64,
    pub layers: usize,
    pub per_class: usize,
    pub val_size: usize,
    pub n_splits: usize,
    pub n_inits: usize,
    pub seed: u64,
    pub model: ModelKind,
    pub restore_best: bool,
    pub prox_eps: Option<f64>,
    pub jobs: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lr: 0.01,
            max_epochs: 500,
            patience: 50,
            dropout: 0.5,
            l2: 5e-4,
            hidden: 64,
            alpha: 1.0,
            beta: 1.0,
            layers: 1,
            per_class: 20,
            val_size: 500,
            n_splits: 10,
            n_inits: 5,
            seed: 0,
            model: ModelKind::Dgcn,
            restore_best: true,
            prox_eps: None,
            jobs: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("max_epochs", self.max_epochs),
            ("patience", self.patience),
            ("hidden", self.hidden),
            ("layers", self.layers),
            ("per_class", self.per_class),
            ("val_size", self.val_size),
            ("splits", self.n_splits),
            ("inits", self.n_inits),
            ("jobs", self.jobs),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(DgcnError::Usage(format!("{name} must be positive")));
        }
        if self.patience > self.max_epochs {
            return Err(DgcnError::Usage(format!(
                "patience {} exceeds max_epochs {}",
                self.patience, self.max_epochs
            )));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(DgcnError::Usage(format!("lr {} must be positive", self.lr)));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(DgcnError::Usage(format!("dropout {} outside [0, 1)", self.dropout)));
        }
        for (name, v) in [("l2", self.l2), ("alpha", self.alpha), ("beta", self.beta)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(DgcnError::Usage(format!("{name} {v} must be >= 0")));
            }
        }
        if let Some(eps) = self.prox_eps {
            if !(eps >= 0.0 && eps.is_finite()) {
                return Err(DgcnError::Usage(format!("prox-eps {eps} must be >= 0")));
            }
        }
        Ok(())
    }

    /// Seed of the `i`-th split.
    pub fn split_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_add(1000 * i as u64)
    }

    /// Seed of the `j`-th weight initialization.
    pub fn init_seed(&self, j: usize) -> u64 {
        self.seed.wrapping_add(2000 * j as u64)
    }
}

impl fmt::Display for TrainConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "model={} hidden={} layers={} alpha={} beta={} lr={} dropout={} l2={} \
             max_epochs={} patience={} per_class={} val_size={} splits={} inits={} \
             seed={} restore_best={} prox_eps={} jobs={}",
            self.model.name(),
            self.hidden,
            self.layers,
            self.alpha,
            self.beta,
            self.lr,
            self.dropout,
            self.l2,
            self.max_epochs,
            self.patience,
            self.per_class,
            self.val_size,
            self.n_splits,
            self.n_inits,
            self.seed,
            self.restore_best,
            self.prox_eps.map_or("none".to_string(), |e| e.to_string()),
            self.jobs
        )
    }
}
