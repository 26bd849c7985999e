//! A KL sparsity penalty pulls the mean encoding activation toward a target.
//! Targets live on the rescaled [0, 1] scale: 0.15 is -0.7 for tanh.

use aefuse::data::{self, MnistSplit};
use aefuse::network::{build_autoencoder, train};
use aefuse::regularizers::mean_activation;
use aefuse::{AeConfig, Activation, Matrix, Network, OptimizerKind, RegularizerConfig, Rng, Sparsity, TrainConfig};

fn mean_rescaled(net: &Network, x: &Matrix) -> aefuse::Result<f64> {
    let per_unit = mean_activation(&net.encode(x)?, &net.encoding_activation())?;
    Ok(per_unit.iter().sum::<f64>() / per_unit.len() as f64)
}

pub fn run_example() -> aefuse::Result<()> {
    let dir = data::bundled_data_dir().join("mnist");
    let x = data::load_mnist(&dir, MnistSplit::Train)?.subsample(2000, 2)?.features;
    let held_out = data::load_mnist(&dir, MnistSplit::Test)?.subsample(500, 2)?.features;

    let sparsity = Sparsity::from_activation_target(-0.7, &Activation::Tanh, 1.0)?;
    println!("rescaled target {:.3}", sparsity.target);
    let tc = TrainConfig::new(OptimizerKind::rmsprop(), 5, 2);

    let basic_cfg = AeConfig::new(784, 36);
    let sparse_cfg = basic_cfg.clone().with_regularizers(RegularizerConfig {
        sparsity: Some(sparsity),
        ..RegularizerConfig::none()
    });
    for (name, cfg) in [("basic", basic_cfg), ("sparse", sparse_cfg)] {
        let mut net = build_autoencoder(&cfg, &mut Rng::new(2))?;
        let report = train(&mut net, &x, &cfg, &tc)?;
        println!(
            "{name:<6}  mean rescaled activation {:.3}  final penalty {:.4}",
            mean_rescaled(&net, &held_out)?,
            report.epoch_penalty.last().unwrap()
        );
    }
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
