//! Command-line front end: `train`, `reconstruct`, `scatter`, `pca` and
//! `gradcheck`.
//!
//! Every command that writes files also writes `run.txt`, a `key=value`
//! manifest of the resolved settings.

pub mod render;

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::activations::Activation;
use crate::corruption::{Corruption, DEFAULT_MASKING_FRACTION};
use crate::data::{self, CsvOptions, Dataset, MnistSplit, NormalizeMode};
use crate::error::{Error, Result};
use crate::linalg::Rng;
use crate::losses::{Loss, DEFAULT_KERNEL_SIGMA};
use crate::network::{
    self, build_autoencoder, gradient_check_suite, load_model, save_model, AeConfig, GradCheckOptions, Network,
    TrainConfig,
};
use crate::optim::OptimizerKind;
use crate::pca;
use crate::regularizers::{
    RegularizerConfig, Sparsity, DEFAULT_CONTRACTIVE_WEIGHT, DEFAULT_SPARSE_WEIGHT, DEFAULT_SPARSITY_TARGET,
    DEFAULT_WEIGHT_DECAY,
};

use render::{reconstruction_grid, scatter_svg};

#[derive(Debug, Parser)]
#[command(name = "aefuse", version, about = "Autoencoders for feature fusion")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Train an autoencoder and save it with its loss curve.
    Train(TrainArgs),
    /// Render originals, codes and reconstructions as a PGM grid.
    Reconstruct(ReconstructArgs),
    /// Plot 2-D codes of a labelled dataset as SVG.
    Scatter(ScatterArgs),
    /// Fit the PCA baseline and render its reconstructions.
    Pca(PcaArgs),
    /// Check backpropagation against finite differences.
    Gradcheck(GradcheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// `mnist`, `wdbc`, or a path to a numeric CSV file.
    #[arg(long, default_value = "mnist")]
    pub data: String,

    /// Directory holding `mnist/` and `wdbc.csv` [default: the bundled
    /// `data/` directory].
    #[arg(long, env = "AEFUSE_DATA_DIR")]
    pub data_dir: Option<PathBuf>,

    /// MNIST split to use (`train` or `t10k`); defaults per command.
    #[arg(long)]
    pub split: Option<String>,

    /// Keep only this many randomly chosen samples.
    #[arg(long)]
    pub subsample: Option<usize>,

    /// The CSV file has a header row.
    #[arg(long)]
    pub csv_header: bool,

    /// Class column of a CSV file, by header name or zero-based index.
    #[arg(long)]
    pub label_column: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Expected input width; checked against the data when given.
    #[arg(long)]
    pub input_dim: Option<usize>,

    #[arg(long, default_value_t = 36)]
    pub encoding_dim: usize,

    /// Comma-separated hidden widths between input and encoding.
    #[arg(long, value_delimiter = ',')]
    pub hidden_dims: Vec<usize>,

    /// Activation of hidden and encoding layers.
    #[arg(long, default_value = "tanh")]
    pub activation: String,

    #[arg(long, default_value = "sigmoid")]
    pub output_activation: String,

    #[arg(long)]
    pub tied: bool,

    #[arg(long)]
    pub weight_decay: bool,

    #[arg(long, default_value_t = DEFAULT_WEIGHT_DECAY)]
    pub decay_lambda: f64,

    #[arg(long)]
    pub sparse: bool,

    /// Target mean activation in the encoding activation's own units
    /// (e.g. -0.7 for tanh); defaults to 0.15 on the rescaled [0, 1] scale.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,

    #[arg(long, default_value_t = DEFAULT_SPARSE_WEIGHT)]
    pub sparse_weight: f64,

    #[arg(long)]
    pub contractive: bool,

    #[arg(long, default_value_t = DEFAULT_CONTRACTIVE_WEIGHT)]
    pub contractive_weight: f64,

    #[arg(long)]
    pub denoising: bool,

    /// `masking`, `gaussian` or `saltpepper`.
    #[arg(long, default_value = "masking")]
    pub corruption: String,

    /// Fraction of corrupted components, or noise deviation for `gaussian`.
    #[arg(long, default_value_t = DEFAULT_MASKING_FRACTION)]
    pub corruption_level: f64,

    /// Use the correntropy loss.
    #[arg(long)]
    pub robust: bool,

    #[arg(long, default_value_t = DEFAULT_KERNEL_SIGMA)]
    pub kernel_sigma: f64,

    /// `xent` (default), `mse` or `corr`.
    #[arg(long)]
    pub loss: Option<String>,

    #[arg(long, default_value = "rmsprop")]
    pub optimizer: String,

    /// Overrides the optimizer's default learning rate.
    #[arg(long)]
    pub lr: Option<f64>,

    #[arg(long, default_value_t = network::DEFAULT_EPOCHS)]
    pub epochs: usize,

    #[arg(long, default_value_t = network::DEFAULT_BATCH_SIZE)]
    pub batch_size: usize,

    #[arg(long, env = "AEFUSE_SEED", default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[arg(long)]
    pub model: PathBuf,

    /// Number of samples shown.
    #[arg(long, default_value_t = 10)]
    pub count: usize,

    #[arg(long, env = "AEFUSE_SEED", default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ScatterArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[arg(long)]
    pub model: PathBuf,

    #[arg(long, env = "AEFUSE_SEED", default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PcaArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Number of principal components kept.
    #[arg(long, default_value_t = 36)]
    pub components: usize,

    #[arg(long, default_value_t = 10)]
    pub count: usize,

    #[arg(long, env = "AEFUSE_SEED", default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct GradcheckArgs {
    #[arg(long, default_value_t = network::DEFAULT_GRADCHECK_EPS)]
    pub eps: f64,

    #[arg(long, default_value_t = network::DEFAULT_GRADCHECK_TOLERANCE)]
    pub tolerance: f64,

    #[arg(long, default_value_t = 20)]
    pub input_dim: usize,

    #[arg(long, default_value_t = 8)]
    pub encoding_dim: usize,

    /// Number of random networks per configuration.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,

    /// Writes `gradcheck.txt` and `run.txt` here when given.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Adds this offset to every analytic gradient component.
    #[arg(long, hide = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub inject_error: f64,
}

/// Ordered `key=value` record of a run.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Manifest(Vec<(String, String)>);

impl Manifest {
    pub fn new(command: &str) -> Self {
        let mut m = Manifest::default();
        m.set("command", command);
        m.set("version", env!("CARGO_PKG_VERSION"));
        m
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    fn add_data(&mut self, args: &DataArgs, split: &str) {
        self.set("data", &args.data);
        self.set("data_dir", args.data_dir().display());
        self.set("split", split);
        self.set("subsample", args.subsample.map_or("all".to_string(), |n| n.to_string()));
        self.set("csv_header", args.csv_header);
        self.set("label_column", args.label_column.as_deref().unwrap_or("none"));
    }
}

impl DataArgs {
    pub fn data_dir(&self) -> PathBuf {
        self.data_dir.clone().unwrap_or_else(data::bundled_data_dir)
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn parse_split(args: &DataArgs, default: MnistSplit) -> Result<MnistSplit> {
    match args.split.as_deref() {
        None => Ok(default),
        Some("train") => Ok(MnistSplit::Train),
        Some("t10k") | Some("test") => Ok(MnistSplit::Test),
        Some(other) => Err(Error::InvalidArgument(format!("unknown split '{other}' (expected train or t10k)"))),
    }
}

fn split_name(split: MnistSplit) -> &'static str {
    match split {
        MnistSplit::Train => "train",
        MnistSplit::Test => "t10k",
    }
}

/// Loads the dataset selected by `args`, scaled to `[0, 1]`.
pub fn load_data(args: &DataArgs, default_split: MnistSplit, seed: u64) -> Result<(Dataset, String)> {
    let split = parse_split(args, default_split)?;
    let ds = match args.data.as_str() {
        "mnist" => {
            let nested = args.data_dir().join("mnist");
            let dir = if nested.is_dir() { nested } else { args.data_dir() };
            data::load_mnist(dir, split)?
        }
        "wdbc" => data::load_wdbc(args.data_dir().join("wdbc.csv"))?,
        path if path.to_ascii_lowercase().ends_with(".csv") => {
            let opts = CsvOptions {
                has_header: args.csv_header,
                label_column: args.label_column.clone(),
            };
            data::normalize(&data::load_csv(path, &opts)?, NormalizeMode::PerColumn, None)?
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown dataset '{other}' (expected mnist, wdbc or a .csv path)"
            )))
        }
    };
    let ds = match args.subsample {
        Some(n) => ds.subsample(n, seed)?,
        None => ds,
    };
    if ds.is_empty() {
        return Err(Error::Empty(format!("dataset '{}' has no samples", ds.name)));
    }
    let split = if args.data == "mnist" { split_name(split) } else { "all" };
    Ok((ds, split.to_string()))
}

/// Resolves the objective and architecture flags of `train`.
pub fn resolve_ae_config(args: &TrainArgs, input_dim: usize) -> Result<AeConfig> {
    if let Some(expected) = args.input_dim {
        if expected != input_dim {
            return Err(Error::Config(format!("--input-dim {expected} but the data has {input_dim} columns")));
        }
    }
    let encoder: Activation = args.activation.parse()?;
    let output: Activation = args.output_activation.parse()?;
    let explicit: Option<Loss> = args.loss.as_deref().map(str::parse).transpose()?;
    let loss = match explicit {
        _ if args.robust => {
            match explicit {
                Some(Loss::Correntropy { .. }) => {}
                Some(other) => log::warn!("--robust overrides --loss {other}; using the correntropy loss"),
                None => log::warn!("--robust forces the correntropy loss"),
            }
            Loss::Correntropy { sigma: args.kernel_sigma }
        }
        Some(Loss::Correntropy { .. }) => Loss::Correntropy { sigma: args.kernel_sigma },
        Some(other) => other,
        None => Loss::CrossEntropy,
    };
    let sparsity = if args.sparse {
        Some(match args.rho {
            Some(rho) => Sparsity::from_activation_target(rho, &encoder, args.sparse_weight)?,
            None => Sparsity {
                target: DEFAULT_SPARSITY_TARGET,
                weight: args.sparse_weight,
            },
        })
    } else {
        None
    };
    let regularizers = RegularizerConfig {
        weight_decay: if args.weight_decay { args.decay_lambda } else { 0.0 },
        sparsity,
        contraction: args.contractive.then_some(args.contractive_weight),
    };
    let corruption = if args.denoising {
        Corruption::from_name(&args.corruption, args.corruption_level)?
    } else {
        Corruption::None
    };
    let cfg = AeConfig {
        input_dim,
        encoding_dim: args.encoding_dim,
        hidden_dims: args.hidden_dims.clone(),
        encoder_activation: encoder,
        output_activation: output,
        tied: args.tied,
        regularizers,
        corruption,
        loss,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn resolve_train_config(args: &TrainArgs) -> Result<TrainConfig> {
    let mut optimizer: OptimizerKind = args.optimizer.parse()?;
    if let Some(lr) = args.lr {
        optimizer = optimizer.with_learning_rate(lr);
    }
    let cfg = TrainConfig {
        optimizer,
        epochs: args.epochs,
        batch_size: args.batch_size,
        seed: args.seed,
        shuffle: true,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn describe_optimizer(kind: &OptimizerKind) -> String {
    match *kind {
        OptimizerKind::Sgd { lr } => format!("sgd lr={lr:?}"),
        OptimizerKind::AdaGrad { lr, eps } => format!("adagrad lr={lr:?} eps={eps:?}"),
        OptimizerKind::RmsProp { lr, decay, eps } => format!("rmsprop lr={lr:?} decay={decay:?} eps={eps:?}"),
        OptimizerKind::Adam { lr, beta1, beta2, eps } => {
            format!("adam lr={lr:?} beta1={beta1:?} beta2={beta2:?} eps={eps:?}")
        }
    }
}

pub fn cmd_train(args: &TrainArgs) -> Result<()> {
    let tc = resolve_train_config(args)?;
    let (ds, split) = load_data(&args.data, MnistSplit::Train, args.seed)?;
    let ae = resolve_ae_config(args, ds.dim())?;
    ensure_dir(&args.out)?;

    let mut net = build_autoencoder(&ae, &mut Rng::new(args.seed))?;
    log::info!(
        "training {} on {} samples of '{}' for {} epochs",
        ae.layer_dims().iter().map(usize::to_string).collect::<Vec<_>>().join("-"),
        ds.len(),
        ds.name,
        tc.epochs
    );
    let report = network::train(&mut net, &ds.features, &ae, &tc)?;

    let model_path = args.out.join("model.aef");
    save_model(&net, &model_path)?;
    let mut curve = String::from("epoch,loss,penalty\n");
    for (i, (l, p)) in report.epoch_loss.iter().zip(&report.epoch_penalty).enumerate() {
        curve.push_str(&format!("{},{l:?},{p:?}\n", i + 1));
    }
    write_file(&args.out.join("loss.csv"), curve)?;

    let mut m = Manifest::new("train");
    m.add_data(&args.data, &split);
    m.set("samples", ds.len());
    m.set("input_dim", ae.input_dim);
    m.set("encoding_dim", ae.encoding_dim);
    m.set("hidden_dims", ae.hidden_dims.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    m.set("activation", ae.encoder_activation);
    m.set("output_activation", ae.output_activation);
    m.set("tied", ae.tied);
    m.set("weight_decay", format!("{:?}", ae.regularizers.weight_decay));
    match ae.regularizers.sparsity {
        Some(s) => m.set("sparsity", format!("target={:?} weight={:?}", s.target, s.weight)),
        None => m.set("sparsity", "none"),
    }
    match ae.regularizers.contraction {
        Some(c) => m.set("contraction", format!("{c:?}")),
        None => m.set("contraction", "none"),
    }
    m.set("corruption", ae.corruption);
    match ae.loss {
        Loss::Correntropy { sigma } => m.set("loss", format!("corr sigma={sigma:?}")),
        other => m.set("loss", other),
    }
    m.set("optimizer", describe_optimizer(&tc.optimizer));
    m.set("epochs", tc.epochs);
    m.set("batch_size", tc.batch_size);
    m.set("seed", tc.seed);
    m.set("model", model_path.display());
    if let Some(last) = report.final_loss() {
        m.set("final_loss", format!("{last:?}"));
    }
    write_file(&args.out.join("run.txt"), m.render())?;

    match report.final_loss() {
        Some(l) => println!("final training loss: {l:.6}"),
        None => println!("no epochs run; model holds its initial weights"),
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn first_rows(ds: &Dataset, count: usize) -> Dataset {
    ds.select(&(0..count.min(ds.len())).collect::<Vec<_>>())
}

fn check_model_input(net: &Network, ds: &Dataset) -> Result<()> {
    if net.input_dim() != ds.dim() {
        return Err(Error::Config(format!(
            "model expects {} inputs but dataset '{}' has {} columns",
            net.input_dim(),
            ds.name,
            ds.dim()
        )));
    }
    Ok(())
}

pub fn cmd_reconstruct(args: &ReconstructArgs) -> Result<()> {
    let net = load_model(&args.model)?;
    let (ds, split) = load_data(&args.data, MnistSplit::Test, args.seed)?;
    check_model_input(&net, &ds)?;
    let shown = first_rows(&ds, args.count);
    let codes = net.encode(&shown.features)?;
    let recon = net.reconstruct(&shown.features)?;
    let image = reconstruction_grid(&shown.features, &codes, &recon, net.encoding_activation().bounds())?;
    ensure_dir(&args.out)?;
    let path = args.out.join("reconstruction.pgm");
    write_file(&path, image.to_pgm())?;

    let mut m = Manifest::new("reconstruct");
    m.add_data(&args.data, &split);
    m.set("model", args.model.display());
    m.set("count", shown.len());
    m.set("seed", args.seed);
    write_file(&args.out.join("run.txt"), m.render())?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_scatter(args: &ScatterArgs) -> Result<()> {
    let net = load_model(&args.model)?;
    if net.encoding_dim() != 2 {
        return Err(Error::Config(format!(
            "scatter needs a model with a 2-unit code, this one has {}; train with --encoding-dim 2",
            net.encoding_dim()
        )));
    }
    let (ds, split) = load_data(&args.data, MnistSplit::Test, args.seed)?;
    check_model_input(&net, &ds)?;
    let labels = ds
        .labels
        .clone()
        .ok_or_else(|| Error::InvalidArgument(format!("dataset '{}' has no labels", ds.name)))?;
    let codes = net.encode(&ds.features)?;
    let svg = scatter_svg(&codes, &labels, &format!("{} codes", ds.name))?;
    ensure_dir(&args.out)?;
    let path = args.out.join("scatter.svg");
    write_file(&path, svg)?;

    let accuracy = data::nearest_centroid_accuracy(&codes, &labels)?;
    let mut m = Manifest::new("scatter");
    m.add_data(&args.data, &split);
    m.set("model", args.model.display());
    m.set("seed", args.seed);
    m.set("nearest_centroid_accuracy", format!("{accuracy:?}"));
    write_file(&args.out.join("run.txt"), m.render())?;
    println!("nearest-centroid accuracy on codes: {:.1}%", 100.0 * accuracy);
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_pca(args: &PcaArgs) -> Result<()> {
    let (ds, split) = load_data(&args.data, MnistSplit::Train, args.seed)?;
    let model = pca::fit_pca(&ds.features, args.components)?;
    let net = model.to_network()?;
    let error = pca::reconstruction_error(&model, &ds.features)?;
    ensure_dir(&args.out)?;
    save_model(&net, args.out.join("model.aef"))?;
    let mut eig = String::from("index,eigenvalue\n");
    for (i, v) in model.spectrum.iter().enumerate() {
        eig.push_str(&format!("{},{v:?}\n", i + 1));
    }
    write_file(&args.out.join("eigenvalues.csv"), eig)?;

    let shown = first_rows(&ds, args.count);
    let codes = pca::pca_encode(&model, &shown.features)?;
    let recon = pca::pca_reconstruct(&model, &codes)?;
    let image = reconstruction_grid(&shown.features, &codes, &recon, None)?;
    write_file(&args.out.join("reconstruction.pgm"), image.to_pgm())?;

    let mut m = Manifest::new("pca");
    m.add_data(&args.data, &split);
    m.set("samples", ds.len());
    m.set("components", args.components);
    m.set("seed", args.seed);
    m.set("reconstruction_error", format!("{error:?}"));
    m.set("discarded_variance", format!("{:?}", model.discarded_variance()));
    write_file(&args.out.join("run.txt"), m.render())?;
    println!("PCA({}) reconstruction error: {error:.6}", args.components);
    println!("wrote {}", args.out.display());
    Ok(())
}

pub fn cmd_gradcheck(args: &GradcheckArgs) -> Result<()> {
    let opts = GradCheckOptions {
        eps: args.eps,
        analytic_offset: args.inject_error,
        ..GradCheckOptions::default()
    };
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let cases = gradient_check_suite(args.input_dim, args.encoding_dim, &seeds, &opts)?;
    let mut table = format!(
        "{:<5} {:<13} {:<8} {:>9}  status\n",
        "loss", "penalties", "act", "max err"
    );
    let mut worst = 0.0f64;
    let mut row_start = 0;
    while row_start < cases.len() {
        let group = &cases[row_start..row_start + seeds.len()];
        let err = group.iter().map(|c| c.result.max_error).fold(0.0, f64::max);
        worst = worst.max(err);
        let c = &group[0];
        table.push_str(&format!(
            "{:<5} {:<13} {:<8} {:>9.2e}  {}\n",
            c.loss.name(),
            c.regularizers,
            c.activation.name(),
            err,
            if err <= args.tolerance { "ok" } else { "FAIL" }
        ));
        row_start += seeds.len();
    }
    print!("{table}");
    println!(
        "{} configurations x {} seeds, worst {worst:.3e}, tolerance {:.1e}",
        cases.len() / seeds.len().max(1),
        seeds.len(),
        args.tolerance
    );
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        write_file(&out.join("gradcheck.txt"), &table)?;
        let mut m = Manifest::new("gradcheck");
        m.set("eps", format!("{:?}", args.eps));
        m.set("tolerance", format!("{:?}", args.tolerance));
        m.set("input_dim", args.input_dim);
        m.set("encoding_dim", args.encoding_dim);
        m.set("seeds", args.seeds);
        m.set("worst", format!("{worst:?}"));
        write_file(&out.join("run.txt"), m.render())?;
    }
    if !(worst <= args.tolerance) {
        return Err(Error::GradientCheck {
            max_error: worst,
            tolerance: args.tolerance,
        });
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Reconstruct(a) => cmd_reconstruct(a),
        Command::Scatter(a) => cmd_scatter(a),
        Command::Pca(a) => cmd_pca(a),
        Command::Gradcheck(a) => cmd_gradcheck(a),
    }
}
