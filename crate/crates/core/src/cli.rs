//! Command-line front end for the `dgcn` binary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{DgcnError, Result};
use crate::graph::io::{
    format_features, format_graph, format_labels, load_graph, read_text, save_dense, save_graph,
    write_text,
};
use crate::nn::{load_checkpoint, save_checkpoint, ModelKind};
use crate::proximity::ProximitySet;
use crate::smoothness::smoothness_table;
use crate::synth::{generate_sbm, SbmParams};
use crate::train::{
    evaluate, format_depth, format_split, format_sweep, parse_split, run_experiment_on,
    sweep_alpha_beta, sweep_depth, Dataset, TrainConfig,
};

#[derive(Debug, Parser)]
#[command(name = "dgcn", version, about = "Directed graph convolutional networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the raw and normalized proximity matrices of a graph.
    Prox(ProxArgs),
    /// Print feature and label smoothness for first- and second-order edges.
    Smooth(SmoothArgs),
    /// Train over splits × initializations and write a report.
    Train(TrainArgs),
    /// Accuracy of a saved checkpoint on one set of a split.
    Eval(EvalArgs),
    /// Grid search over the branch weights alpha and beta.
    Sweep(SweepArgs),
    /// Accuracy as a function of the number of conv layers.
    Depth(DepthArgs),
    /// Generate a directed stochastic block model dataset.
    GenSbm(GenSbmArgs),
}

#[derive(Debug, Args)]
pub struct ProxArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Drop written entries smaller than this.
    #[arg(long)]
    pub prox_eps: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
}

#[derive(Debug, Args)]
pub struct SmoothArgs {
    #[command(flatten)]
    pub data: DataArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Dgcn,
    Sgc,
}

#[derive(Debug, Args)]
pub struct TrainFlags {
    #[arg(long, default_value_t = 64)]
    pub hidden: usize,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 0.5)]
    pub dropout: f64,
    #[arg(long, default_value_t = 5e-4)]
    pub l2: f64,
    #[arg(long, default_value_t = 500)]
    pub max_epochs: usize,
    #[arg(long, default_value_t = 50)]
    pub patience: usize,
    #[arg(long, default_value_t = 20)]
    pub per_class: usize,
    #[arg(long, default_value_t = 500)]
    pub val_size: usize,
    #[arg(long, default_value_t = 10)]
    pub splits: usize,
    #[arg(long, default_value_t = 5)]
    pub inits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModelArg::Dgcn)]
    pub model: ModelArg,
    /// Evaluate with the best-validation parameters instead of the last ones.
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub restore_best: Switch,
    /// Drop normalized proximity entries smaller than this.
    #[arg(long)]
    pub prox_eps: Option<f64>,
    /// Worker threads for independent runs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl TrainFlags {
    pub fn config(&self) -> TrainConfig {
        TrainConfig {
            lr: self.lr,
            max_epochs: self.max_epochs,
            patience: self.patience,
            dropout: self.dropout,
            l2: self.l2,
            hidden: self.hidden,
            alpha: self.alpha,
            beta: self.beta,
            layers: self.layers,
            per_class: self.per_class,
            val_size: self.val_size,
            n_splits: self.splits,
            n_inits: self.inits,
            seed: self.seed,
            model: match self.model {
                ModelArg::Dgcn => ModelKind::Dgcn,
                ModelArg::Sgc => ModelKind::Sgc,
            },
            restore_best: self.restore_best == Switch::On,
            prox_eps: self.prox_eps,
            jobs: self.jobs,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub flags: TrainFlags,
    /// Also write the first-layer node embeddings of the final run.
    #[arg(long)]
    pub emit_embeddings: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    Train,
    Val,
    Test,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long)]
    pub split: PathBuf,
    #[arg(long, value_enum, default_value_t = SetArg::Test)]
    pub set: SetArg,
    #[arg(long)]
    pub prox_eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub flags: TrainFlags,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5,2")]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5,2")]
    pub betas: Vec<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub flags: TrainFlags,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub depths: Vec<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenSbmArgs {
    #[arg(long, default_value_t = 100)]
    pub n_per_class: usize,
    #[arg(long, default_value_t = 3)]
    pub classes: usize,
    #[arg(long, default_value_t = 0.2)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.02)]
    pub p_out: f64,
    #[arg(long, default_value_t = 16)]
    pub feat_dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// `# dgcn <version> <subcommand> seed=<seed>` plus the resolved settings.
fn provenance(subcommand: &str, seed: Option<u64>, settings: String) -> Vec<String> {
    let seed = seed.map_or("none".to_string(), |s| s.to_string());
    vec![
        format!("dgcn {} {subcommand} seed={seed}", env!("CARGO_PKG_VERSION")),
        settings,
    ]
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(DgcnError::Usage(format!("input file {} not found", path.display())))
    }
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| DgcnError::io(path, e))
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        for p in [&self.graph, &self.features, &self.labels] {
            require_file(p)?;
        }
        Dataset::load(&self.graph, &self.features, &self.labels)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Prox(a) => cmd_prox(&a),
        Command::Smooth(a) => cmd_smooth(&a),
        Command::Train(a) => cmd_train(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Depth(a) => cmd_depth(&a),
        Command::GenSbm(a) => cmd_gen_sbm(&a),
    }
}

pub fn cmd_prox(a: &ProxArgs) -> Result<()> {
    log::info!("prox: {a:?}");
    require_file(&a.graph)?;
    if let Some(eps) = a.prox_eps {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(DgcnError::Usage(format!("prox-eps {eps} must be >= 0")));
        }
    }
    let g = load_graph(&a.graph)?;
    let p = ProximitySet::build_pruned(&g, a.prox_eps)?;
    create_dir(&a.out)?;
    let eps = a.prox_eps.map_or("none".to_string(), |e| e.to_string());
    let header = provenance(
        "prox",
        None,
        format!("graph={} prox_eps={eps}", a.graph.display()),
    );
    for (name, m) in p.named() {
        let m = match a.prox_eps {
            Some(eps) => m.prune(eps),
            None => m.clone(),
        };
        let mut comments = header.clone();
        comments.push(format!("matrix={name}"));
        save_graph(&a.out.join(format!("{name}.tsv")), &m, &comments)?;
    }
    Ok(())
}

pub fn cmd_smooth(a: &SmoothArgs) -> Result<()> {
    log::info!("smooth: {a:?}");
    let data = a.data.load()?;
    let (first, both) = smoothness_table(&data.graph, &data.features, &data.labels)?;
    println!("edges\tlambda_f\tlambda_l\tn_pairs");
    for (name, row) in [("first", first), ("first+second", both)] {
        println!("{name}\t{}\t{}\t{}", row.feature, row.label, row.n_pairs);
    }
    Ok(())
}

pub fn cmd_train(a: &TrainArgs) -> Result<()> {
    let cfg = a.flags.config();
    log::info!("train: {cfg}");
    cfg.validate()?;
    let data = a.data.load()?;
    let result = run_experiment_on(&data, &cfg)?;
    create_dir(&a.out)?;
    let header = provenance("train", Some(cfg.seed), cfg.to_string());

    write_text(&a.out.join("report.tsv"), &result.report.format(&header))?;
    save_checkpoint(&a.out.join("checkpoint.txt"), &result.final_model, &header)?;
    write_text(
        &a.out.join("split.tsv"),
        &format_split(&result.final_split, &header),
    )?;
    if a.emit_embeddings {
        let emb = result.final_model.embeddings(&result.proximity, &data.features)?;
        save_dense(&a.out.join("embeddings.tsv"), &emb, &header)?;
    }
    println!("mean={} std={}", result.report.mean, result.report.std);
    Ok(())
}

pub fn cmd_eval(a: &EvalArgs) -> Result<()> {
    log::info!("eval: {a:?}");
    require_file(&a.checkpoint)?;
    require_file(&a.split)?;
    let data = a.data.load()?;
    let model = load_checkpoint(&a.checkpoint)?;
    let split = parse_split(
        &read_text(&a.split)?,
        data.graph.n_nodes(),
        &a.split.display().to_string(),
    )?;
    let p = ProximitySet::build_pruned(&data.graph, a.prox_eps)?;
    let nodes = match a.set {
        SetArg::Train => &split.train,
        SetArg::Val => &split.val,
        SetArg::Test => &split.test,
    };
    println!("{}", evaluate(&model, &p, &data.features, &data.labels, nodes)?);
    Ok(())
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let cfg = a.flags.config();
    log::info!("sweep: {cfg} alphas={:?} betas={:?}", a.alphas, a.betas);
    cfg.validate()?;
    let data = a.data.load()?;
    let rows = sweep_alpha_beta(&data, &cfg, &a.alphas, &a.betas)?;
    let header = provenance("sweep", Some(cfg.seed), cfg.to_string());
    emit(a.out.as_deref(), &format_sweep(&rows, &header))
}

pub fn cmd_depth(a: &DepthArgs) -> Result<()> {
    let cfg = a.flags.config();
    log::info!("depth: {cfg} depths={:?}", a.depths);
    cfg.validate()?;
    let data = a.data.load()?;
    let rows = sweep_depth(&data, &cfg, &a.depths)?;
    let header = provenance("depth", Some(cfg.seed), cfg.to_string());
    emit(a.out.as_deref(), &format_depth(&rows, &header))
}

pub fn cmd_gen_sbm(a: &GenSbmArgs) -> Result<()> {
    log::info!("gen-sbm: {a:?}");
    let params = SbmParams {
        n_per_class: a.n_per_class,
        classes: a.classes,
        p_in: a.p_in,
        p_out: a.p_out,
        feat_dim: a.feat_dim,
        noise: a.noise,
        seed: a.seed,
    };
    let data = generate_sbm(&params)?;
    create_dir(&a.out)?;
    let header = provenance(
        "gen-sbm",
        Some(a.seed),
        format!(
            "n_per_class={} classes={} p_in={} p_out={} feat_dim={} noise={}",
            a.n_per_class, a.classes, a.p_in, a.p_out, a.feat_dim, a.noise
        ),
    );
    write_text(
        &a.out.join("graph.tsv"),
        &format_graph(data.graph.adjacency(), &header),
    )?;
    write_text(
        &a.out.join("features.tsv"),
        &format_features(&data.features, &header),
    )?;
    write_text(
        &a.out.join("labels.tsv"),
        &format_labels(&data.labels, &header),
    )?;
    Ok(())
}
