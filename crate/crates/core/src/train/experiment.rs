//! Repeated runs over splits × initializations, reports, and sweeps.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use rayon::prelude::*;

use super::config::TrainConfig;
use super::split::{make_split, SplitAssignment};
use super::trainer::{train_once, RunOutcome};
use crate::error::{DgcnError, Result};
use crate::graph::io::{body_lines, field, load_features, load_graph, load_labels};
use crate::graph::{DenseMatrix, DirectedGraph, LabelVector};
use crate::nn::DgcnModel;
use crate::proximity::ProximitySet;

/// Graph, node features and labels over the same node set.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: DirectedGraph,
    pub features: DenseMatrix,
    pub labels: LabelVector,
}

impl Dataset {
    pub fn new(graph: DirectedGraph, features: DenseMatrix, labels: LabelVector) -> Result<Self> {
        let n = graph.n_nodes();
        if features.n_rows() != n || labels.len() != n {
            return Err(DgcnError::Shape(format!(
                "graph has {n} nodes, features {}, labels {}",
                features.n_rows(),
                labels.len()
            )));
        }
        Ok(Self {
            graph,
            features,
            labels,
        })
    }

    pub fn load(graph: &Path, features: &Path, labels: &Path) -> Result<Self> {
        let g = load_graph(graph)?;
        let n = g.n_nodes();
        Self::new(g, load_features(features, n)?, load_labels(labels, n)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: usize,
    pub split_seed: u64,
    pub init_seed: u64,
    pub best_epoch: usize,
    pub stop_epoch: usize,
    pub val_acc: f64,
    pub test_acc: f64,
    pub wall_time: Duration,
}

/// Per-run results and their aggregate test accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub runs: Vec<RunRecord>,
    pub mean: f64,
    /// Population standard deviation of the test accuracies.
    pub std: f64,
    pub mean_val: f64,
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl RunReport {
    /// Runs must already be sorted by `run_id`; aggregation follows that order.
    pub fn from_runs(runs: Vec<RunRecord>) -> Self {
        let test: Vec<f64> = runs.iter().map(|r| r.test_acc).collect();
        let val: Vec<f64> = runs.iter().map(|r| r.val_acc).collect();
        let (mean, std) = mean_std(&test);
        Self {
            runs,
            mean,
            std,
            mean_val: mean_std(&val).0,
        }
    }

    /// Report file text. Wall times are left out so identical seeds give
    /// identical bytes.
    pub fn format(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str("# run_id\tsplit_seed\tinit_seed\tstop_epoch\ttest_acc\n");
        for r in &self.runs {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.run_id, r.split_seed, r.init_seed, r.stop_epoch, r.test_acc
            );
        }
        let _ = writeln!(out, "# mean={} std={}", self.mean, self.std);
        out
    }
}

/// `(run_id, split_seed, init_seed, stop_epoch, test_acc)` rows and the
/// trailing `(mean, std)` of a report file.
pub fn parse_report(text: &str, source: &str) -> Result<(Vec<(usize, u64, u64, usize, f64)>, f64, f64)> {
    let mut rows = Vec::new();
    for (line, l) in body_lines(text) {
        let f: Vec<&str> = l.split('\t').collect();
        if f.len() != 5 {
            return Err(DgcnError::Parse {
                path: source.to_string(),
                line,
                msg: "expected 5 columns".into(),
            });
        }
        rows.push((
            field(f[0], "run_id", source, line)?,
            field(f[1], "split_seed", source, line)?,
            field(f[2], "init_seed", source, line)?,
            field(f[3], "stop_epoch", source, line)?,
            field(f[4], "test_acc", source, line)?,
        ));
    }
    let trailer = text
        .lines()
        .rev()
        .find(|l| l.starts_with("# mean="))
        .ok_or_else(|| DgcnError::Format(format!("{source}: missing '# mean=' trailer")))?;
    let h = crate::graph::io::parse_header(trailer, source)?;
    let mean = crate::graph::io::header_value(&h, "mean", source, 0)?;
    let std = crate::graph::io::header_value(&h, "std", source, 0)?;
    Ok((rows, mean, std))
}

/// Everything an experiment produces.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub report: RunReport,
    /// Model of the highest-numbered run.
    pub final_model: DgcnModel,
    pub final_split: SplitAssignment,
    pub proximity: ProximitySet,
}

/// `n_splits × n_inits` training runs. Run `i·n_inits + j` uses split seed
/// `seed + 1000·i` and init seed `seed + 2000·j`. With `jobs > 1` runs
/// execute on a thread pool; results are still gathered in run order.
pub fn run_experiment_on(data: &Dataset, cfg: &TrainConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let proximity = ProximitySet::build_pruned(&data.graph, cfg.prox_eps)?;
    let splits = (0..cfg.n_splits)
        .map(|i| make_split(&data.labels, cfg.per_class, cfg.val_size, cfg.split_seed(i)))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..cfg.n_splits)
        .flat_map(|i| (0..cfg.n_inits).map(move |j| (i, j)))
        .collect();
    let run = |&(i, j): &(usize, usize)| -> Result<RunOutcome> {
        let out = train_once(
            &proximity,
            &data.features,
            &data.labels,
            &splits[i],
            cfg,
            cfg.init_seed(j),
        )?;
        log::info!(
            "run {} (split {i}, init {j}): test {:.4} val {:.4} best epoch {} stopped {} in {:.2?}",
            i * cfg.n_inits + j,
            out.test_acc,
            out.val_acc,
            out.best_epoch,
            out.stop_epoch,
            out.wall_time
        );
        Ok(out)
    };
    let outcomes: Vec<RunOutcome> = if cfg.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| DgcnError::Internal(format!("thread pool: {e}")))?;
        pool.install(|| jobs.par_iter().map(run).collect::<Result<Vec<_>>>())?
    } else {
        jobs.iter().map(run).collect::<Result<Vec<_>>>()?
    };

    let runs = jobs
        .iter()
        .zip(&outcomes)
        .enumerate()
        .map(|(run_id, (&(i, j), o))| RunRecord {
            run_id,
            split_seed: cfg.split_seed(i),
            init_seed: cfg.init_seed(j),
            best_epoch: o.best_epoch,
            stop_epoch: o.stop_epoch,
            val_acc: o.val_acc,
            test_acc: o.test_acc,
            wall_time: o.wall_time,
        })
        .collect();
    let final_model = outcomes.last().expect("at least one run").model.clone();
    Ok(ExperimentResult {
        report: RunReport::from_runs(runs),
        final_model,
        final_split: splits.last().expect("at least one split").clone(),
        proximity,
    })
}

pub fn run_experiment(
    graph: &Path,
    features: &Path,
    labels: &Path,
    cfg: &TrainConfig,
) -> Result<RunReport> {
    let data = Dataset::load(graph, features, labels)?;
    Ok(run_experiment_on(&data, cfg)?.report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub val_acc: f64,
    pub test_acc: f64,
}

/// One experiment per `(α, β)` grid point, rows sorted by `(α, β)`. Grid
/// values must lie in `(0, 2]`.
pub fn sweep_alpha_beta(
    data: &Dataset,
    cfg: &TrainConfig,
    alphas: &[f64],
    betas: &[f64],
) -> Result<Vec<SweepRow>> {
    if let Some(bad) = alphas.iter().chain(betas).find(|&&v| !(v > 0.0 && v <= 2.0)) {
        return Err(DgcnError::Usage(format!("grid value {bad} outside (0, 2]")));
    }
    if alphas.is_empty() || betas.is_empty() {
        return Err(DgcnError::Usage("empty sweep grid".into()));
    }
    let mut grid: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
        .collect();
    grid.sort_by(|x, y| x.partial_cmp(y).expect("finite grid"));
    grid.dedup();
    grid.into_iter()
        .map(|(alpha, beta)| {
            let point = TrainConfig { alpha, beta, ..cfg.clone() };
            let report = run_experiment_on(data, &point)?.report;
            Ok(SweepRow {
                alpha,
                beta,
                val_acc: report.mean_val,
                test_acc: report.mean,
            })
        })
        .collect()
}

pub fn format_sweep(rows: &[SweepRow], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    out.push_str("alpha\tbeta\tval_acc\ttest_acc\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", r.alpha, r.beta, r.val_acc, r.test_acc);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthRow {
    pub layers: usize,
    pub val_acc: f64,
    pub test_acc: f64,
}

/// One experiment per conv depth, rows in ascending depth.
pub fn sweep_depth(data: &Dataset, cfg: &TrainConfig, depths: &[usize]) -> Result<Vec<DepthRow>> {
    let mut depths = depths.to_vec();
    depths.sort_unstable();
    depths.dedup();
    if depths.is_empty() || depths[0] == 0 {
        return Err(DgcnError::Usage("depths must be positive and non-empty".into()));
    }
    depths
        .into_iter()
        .map(|layers| {
            let report = run_experiment_on(data, &TrainConfig { layers, ..cfg.clone() })?.report;
            Ok(DepthRow {
                layers,
                val_acc: report.mean_val,
                test_acc: report.mean,
            })
        })
        .collect()
}

pub fn format_depth(rows: &[DepthRow], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    out.push_str("layers\tval_acc\ttest_acc\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{}", r.layers, r.val_acc, r.test_acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(run_id: usize, acc: f64) -> RunRecord {
        RunRecord {
            run_id,
            split_seed: 1,
            init_seed: 2,
            best_epoch: 3,
            stop_epoch: 4,
            val_acc: acc,
            test_acc: acc,
            wall_time: Duration::from_millis(run_id as u64),
        }
    }

    #[test]
    fn aggregates() {
        assert_eq!(mean_std(&[0.5, 0.5, 0.5]), (0.5, 0.0));
        let (m, s) = mean_std(&[0.0, 1.0]);
        assert_eq!((m, s), (0.5, 0.5));
        let r = RunReport::from_runs((0..4).map(|i| record(i, 0.25 * i as f64)).collect());
        assert_eq!(r.runs.len(), 4);
        assert_eq!(r.mean, 0.375);
    }

    #[test]
    fn report_round_trip_ignores_wall_time() {
        let a = RunReport::from_runs(vec![record(0, 0.9), record(1, 0.8)]);
        let mut b = a.clone();
        b.runs[0].wall_time = Duration::from_secs(99);
        let text = a.format(&["dgcn test".into()]);
        assert_eq!(text, b.format(&["dgcn test".into()]));
        let (rows, mean, std) = parse_report(&text, "t").unwrap();
        assert_eq!(rows[1], (1, 1, 2, 4, 0.8));
        assert_eq!(mean, a.mean);
        assert_eq!(std, a.std);
        assert!(text.trim_end().ends_with(&format!("# mean={} std={}", a.mean, a.std)));
    }
}
