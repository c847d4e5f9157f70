//! Experimental protocol: splits, early-stopped training, repeated runs and
//! hyperparameter sweeps.

mod config;
mod experiment;
mod split;
mod trainer;

pub use config::TrainConfig;
pub use experiment::{
    format_depth, format_sweep, mean_std, parse_report, run_experiment, run_experiment_on,
    sweep_alpha_beta, sweep_depth, Dataset, DepthRow, ExperimentResult, RunRecord, RunReport,
    SweepRow,
};
pub use split::{format_split, make_split, parse_split, SplitAssignment};
pub use trainer::{accuracy, evaluate, train_once, RunOutcome};
