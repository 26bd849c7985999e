use std::time::{Duration, Instant};

use crate::activations::Activation;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rng};
use crate::losses::Loss;
use crate::optim::{Optimizer, OptimizerKind};

use super::backprop::backward;
use super::model::{AeConfig, Network};

pub const DEFAULT_BATCH_SIZE: usize = 128;
pub const DEFAULT_EPOCHS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub optimizer: OptimizerKind,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            optimizer: OptimizerKind::rmsprop(),
            epochs: DEFAULT_EPOCHS,
            batch_size: DEFAULT_BATCH_SIZE,
            seed: 0,
            shuffle: true,
        }
    }
}

impl TrainConfig {
    pub fn new(optimizer: OptimizerKind, epochs: usize, seed: u64) -> Self {
        TrainConfig {
            optimizer,
            epochs,
            seed,
            ..TrainConfig::default()
        }
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        self.optimizer.validate()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainReport {
    /// Mean per-sample training loss of each epoch, averaged over its batches.
    pub epoch_loss: Vec<f64>,
    /// Mean penalty value of each epoch.
    pub epoch_penalty: Vec<f64>,
    pub elapsed: Duration,
}

impl TrainReport {
    pub fn epochs(&self) -> usize {
        self.epoch_loss.len()
    }

    pub fn final_loss(&self) -> Option<f64> {
        self.epoch_loss.last().copied()
    }
}

/// Hooks into the training loop.
pub trait TrainObserver {
    /// Called before each optimizer step with the network input and the
    /// reconstruction target of the batch.
    fn on_batch(&mut self, _epoch: usize, _input: &Matrix, _target: &Matrix) {}

    fn on_epoch(&mut self, _epoch: usize, _loss: f64, _penalty: f64) {}
}

impl TrainObserver for () {}

/// Trains `net` in place on the rows of `data`.
pub fn train(net: &mut Network, data: &Matrix, ae: &AeConfig, cfg: &TrainConfig) -> Result<TrainReport> {
    train_observed(net, data, ae, cfg, &mut ())
}

/// [`train`] with an observer.
///
/// One generator seeded from `cfg.seed` drives both the per-epoch shuffle and
/// the corruption, which is redrawn for every batch. Targets are always the
/// clean rows.
pub fn train_observed(
    net: &mut Network,
    data: &Matrix,
    ae: &AeConfig,
    cfg: &TrainConfig,
    observer: &mut dyn TrainObserver,
) -> Result<TrainReport> {
    cfg.validate()?;
    ae.loss.validate()?;
    ae.regularizers.validate()?;
    ae.corruption.validate()?;
    if data.rows() == 0 {
        return Err(Error::Empty("training set has no samples".into()));
    }
    if data.cols() != net.input_dim() {
        return Err(Error::shape("train", data.shape(), (data.rows(), net.input_dim())));
    }
    if net.layers().iter().any(|l| l.activation == Activation::Binary) {
        log::warn!("binary activations have zero gradient almost everywhere; the affected layers will not learn");
    }

    let start = Instant::now();
    let mut report = TrainReport::default();
    if cfg.epochs == 0 {
        return Ok(report);
    }
    let mut rng = Rng::new(cfg.seed);
    let mut optimizer = Optimizer::new(cfg.optimizer);
    let mut order: Vec<usize> = (0..data.rows()).collect();
    let batches = data.rows().div_ceil(cfg.batch_size);

    for epoch in 0..cfg.epochs {
        if cfg.shuffle {
            rng.shuffle(&mut order);
        }
        let mut loss_sum = 0.0;
        let mut penalty_sum = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let target = data.select_rows(chunk);
            let input = ae.corruption.corrupt_batch(&target, &mut rng);
            observer.on_batch(epoch, &input, &target);
            let cache = net.forward(&input)?;
            let (grads, value) = backward(net, &cache, &target, ae.loss, &ae.regularizers)?;
            loss_sum += value.loss;
            penalty_sum += value.penalty;
            let flat = grads.flat(net);
            optimizer.step(&mut net.parameters_mut(), &flat)?;
            net.sync_tied();
        }
        let loss = loss_sum / batches as f64;
        let penalty = penalty_sum / batches as f64;
        if !loss.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "training diverged at epoch {}: loss is {loss}",
                epoch + 1
            )));
        }
        log::debug!("epoch {}: loss {loss:.6} penalty {penalty:.6}", epoch + 1);
        observer.on_epoch(epoch, loss, penalty);
        report.epoch_loss.push(loss);
        report.epoch_penalty.push(penalty);
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Mean per-sample reconstruction loss of `net` on clean `data`, evaluated
/// in chunks to bound memory.
pub fn mean_loss(net: &Network, data: &Matrix, loss: Loss) -> Result<f64> {
    if data.rows() == 0 {
        return Err(Error::Empty("evaluation set has no samples".into()));
    }
    mean_loss_against(net, data, data, loss)
}

/// Mean per-sample loss of reconstructing `targets` from `inputs`.
pub fn mean_loss_against(net: &Network, inputs: &Matrix, targets: &Matrix, loss: Loss) -> Result<f64> {
    if inputs.shape() != targets.shape() {
        return Err(Error::shape("mean_loss", inputs.shape(), targets.shape()));
    }
    if inputs.rows() == 0 {
        return Err(Error::Empty("evaluation set has no samples".into()));
    }
    const CHUNK: usize = 1024;
    let mut total = 0.0;
    let rows: Vec<usize> = (0..inputs.rows()).collect();
    for chunk in rows.chunks(CHUNK) {
        let out = net.reconstruct(&inputs.select_rows(chunk))?;
        total += loss.batch_loss(&targets.select_rows(chunk), &out)?.iter().sum::<f64>();
    }
    Ok(total / inputs.rows() as f64)
}
