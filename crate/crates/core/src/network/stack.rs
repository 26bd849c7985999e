use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rng};
use crate::losses::Loss;

use super::model::{build_autoencoder, AeConfig, Layer, Network};
use super::train::{train, TrainConfig, TrainReport};

/// Result of greedy layer-wise pretraining.
#[derive(Clone, Debug)]
pub struct StackedAutoencoder {
    /// Unrolled deep autoencoder, ready for fine-tuning with [`train`].
    pub network: Network,
    /// The shallow autoencoder trained at each stage.
    pub stages: Vec<Network>,
    pub reports: Vec<TrainReport>,
}

/// Shallow configuration for the stage mapping `dims[k] → dims[k + 1]`.
///
/// Stage 0 uses `template` as given. Later stages reconstruct codes of the
/// previous stage, so their output activation is the encoder activation, and
/// cross-entropy falls back to MSE when those codes leave `[0, 1]`.
pub fn stage_config(template: &AeConfig, dims: &[usize], k: usize) -> AeConfig {
    let mut cfg = template.clone();
    cfg.input_dim = dims[k];
    cfg.encoding_dim = dims[k + 1];
    cfg.hidden_dims.clear();
    if k > 0 {
        cfg.output_activation = cfg.encoder_activation;
        let in_unit = matches!(cfg.encoder_activation.bounds(), Some((lo, hi)) if lo >= 0.0 && hi <= 1.0);
        if cfg.loss == Loss::CrossEntropy && !in_unit {
            cfg.loss = Loss::Mse;
        }
    }
    cfg
}

/// Greedy layer-wise pretraining of the encoder `dims[0] → … → dims[last]`.
///
/// Stage `k` trains a shallow autoencoder on the codes produced by the
/// stages before it, with training seed `cfg.seed + k`. The stages are then
/// unrolled: encoder layers in order, followed by decoder layers whose
/// weights are the transposed encoder weights and whose biases come from the
/// matching stage decoder. With two dims the trained shallow autoencoder is
/// returned as is.
///
/// With an untied `template` the stage decoders drift away from the encoder
/// transposes, and the unrolled network starts far from what the stages
/// learned; tie the template and call [`Network::untied`] on the result to
/// fine-tune with free decoder weights.
pub fn stack_pretrain(
    dims: &[usize],
    data: &Matrix,
    template: &AeConfig,
    cfg: &TrainConfig,
    rng: &mut Rng,
) -> Result<StackedAutoencoder> {
    if dims.len() < 2 {
        return Err(Error::Config(format!("stacking needs at least 2 layer sizes, got {}", dims.len())));
    }
    if dims.contains(&0) {
        return Err(Error::Config("layer sizes must be at least 1".into()));
    }
    if data.cols() != dims[0] {
        return Err(Error::shape("stack_pretrain", data.shape(), (data.rows(), dims[0])));
    }

    let mut stages = Vec::with_capacity(dims.len() - 1);
    let mut reports = Vec::with_capacity(dims.len() - 1);
    let mut representation = data.clone();
    for k in 0..dims.len() - 1 {
        let stage_cfg = stage_config(template, dims, k);
        let mut net = build_autoencoder(&stage_cfg, rng)?;
        let stage_train = TrainConfig {
            seed: cfg.seed.wrapping_add(k as u64),
            ..*cfg
        };
        log::info!("pretraining stage {}: {} -> {}", k + 1, dims[k], dims[k + 1]);
        reports.push(train(&mut net, &representation, &stage_cfg, &stage_train)?);
        if k + 2 < dims.len() {
            representation = net.encode(&representation)?;
        }
        stages.push(net);
    }

    let network = if stages.len() == 1 {
        stages[0].clone()
    } else {
        unroll(&stages, template.tied)?
    };
    Ok(StackedAutoencoder {
        network,
        stages,
        reports,
    })
}

fn unroll(stages: &[Network], tied: bool) -> Result<Network> {
    let mut layers: Vec<Layer> = stages.iter().map(|s| s.layer(0).clone()).collect();
    for stage in stages.iter().rev() {
        let encoder = stage.layer(0);
        let decoder = stage.layer(1);
        layers.push(Layer::new(encoder.weights.transpose(), decoder.bias.clone(), decoder.activation)?);
    }
    Network::new(layers, stages.len(), tied)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activations::Activation;
    use crate::optim::OptimizerKind;

    fn setup() -> (Matrix, AeConfig, TrainConfig) {
        let data = Rng::new(1).uniform(0.0, 1.0, 40, 12).unwrap();
        let cfg = AeConfig::new(12, 3);
        let tc = TrainConfig::new(OptimizerKind::adam(), 3, 5).with_batch_size(8);
        (data, cfg, tc)
    }

    #[test]
    fn unrolled_shape_mirrors_dims() {
        let (data, cfg, tc) = setup();
        let s = stack_pretrain(&[12, 8, 5, 3], &data, &cfg, &tc, &mut Rng::new(2)).unwrap();
        let net = &s.network;
        assert_eq!(net.depth(), 6);
        assert_eq!(net.split(), 3);
        let widths: Vec<usize> = std::iter::once(net.input_dim())
            .chain(net.layers().iter().map(|l| l.outputs()))
            .collect();
        assert_eq!(widths, vec![12, 8, 5, 3, 5, 8, 12]);
        for k in 0..3 {
            assert_eq!(net.layer(5 - k).weights, net.layer(k).weights.transpose());
        }
        assert_eq!(net.layer(5).activation, Activation::Sigmoid);
        assert_eq!(net.layer(4).activation, Activation::Tanh);
        assert_eq!(s.reports.len(), 3);
    }

    #[test]
    fn stages_train_on_previous_codes() {
        let (data, cfg, tc) = setup();
        let s = stack_pretrain(&[12, 6, 3], &data, &cfg, &tc, &mut Rng::new(2)).unwrap();
        let codes = s.stages[0].encode(&data).unwrap();
        // encoder of the unrolled net starts with the stage-1 encoder
        let first = s.network.layer(0).forward(&data).unwrap();
        assert_eq!(first, codes);

        // replay stage 2 from the same initial state on the stage-1 codes
        let mut rng = Rng::new(2);
        let stage0 = stage_config(&cfg, &[12, 6, 3], 0);
        build_autoencoder(&stage0, &mut rng).unwrap();
        let stage1 = stage_config(&cfg, &[12, 6, 3], 1);
        assert_eq!(stage1.loss, Loss::Mse);
        assert_eq!(stage1.output_activation, Activation::Tanh);
        let mut replay = build_autoencoder(&stage1, &mut rng).unwrap();
        train(&mut replay, &codes, &stage1, &TrainConfig { seed: 6, ..tc }).unwrap();
        assert_eq!(replay, s.stages[1]);
    }

    #[test]
    fn two_dims_is_a_shallow_run() {
        let (data, cfg, tc) = setup();
        let s = stack_pretrain(&[12, 3], &data, &cfg, &tc, &mut Rng::new(2)).unwrap();
        let mut net = build_autoencoder(&cfg, &mut Rng::new(2)).unwrap();
        train(&mut net, &data, &cfg, &tc).unwrap();
        assert_eq!(s.network, net);
    }

    #[test]
    fn bad_dims() {
        let (data, cfg, tc) = setup();
        assert!(stack_pretrain(&[12], &data, &cfg, &tc, &mut Rng::new(0)).is_err());
        assert!(stack_pretrain(&[10, 3], &data, &cfg, &tc, &mut Rng::new(0)).is_err());
    }
}
