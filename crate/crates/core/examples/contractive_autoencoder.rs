//! Penalising the Frobenius norm of the encoder Jacobian makes the codes less
//! sensitive to small input changes.

use aefuse::data::{self, MnistSplit};
use aefuse::network::{build_autoencoder, train};
use aefuse::regularizers::jacobian_norms;
use aefuse::{AeConfig, Matrix, Network, OptimizerKind, RegularizerConfig, Rng, TrainConfig};

fn mean_jacobian_norm(net: &Network, x: &Matrix) -> aefuse::Result<f64> {
    let cache = net.forward(x)?;
    let encoder = net.layer(0);
    let norms = jacobian_norms(&encoder.weights, &cache.pre[0], &encoder.activation)?;
    Ok(norms.iter().sum::<f64>() / norms.len() as f64)
}

pub fn run_example() -> aefuse::Result<()> {
    let dir = data::bundled_data_dir().join("mnist");
    let x = data::load_mnist(&dir, MnistSplit::Train)?.subsample(2000, 3)?.features;
    let probe = data::load_mnist(&dir, MnistSplit::Test)?.subsample(200, 3)?.features;

    let tc = TrainConfig::new(OptimizerKind::rmsprop(), 5, 3);
    for weight in [0.0, 0.1, 1.0] {
        let regs = RegularizerConfig {
            contraction: (weight > 0.0).then_some(weight),
            ..RegularizerConfig::none()
        };
        let cfg = AeConfig::new(784, 36).with_regularizers(regs);
        let mut net = build_autoencoder(&cfg, &mut Rng::new(3))?;
        train(&mut net, &x, &cfg, &tc)?;
        println!(
            "contractive weight {weight:<4}  mean squared Jacobian norm {:.3}",
            mean_jacobian_norm(&net, &probe)?
        );
    }
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
