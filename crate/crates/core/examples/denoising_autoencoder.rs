//! Trains on masked inputs against clean targets, then compares how well a
//! basic and a denoising autoencoder restore corrupted held-out digits.

use aefuse::data::{self, MnistSplit};
use aefuse::network::{build_autoencoder, mean_loss_against, train};
use aefuse::{AeConfig, Corruption, Loss, OptimizerKind, Rng, TrainConfig};

pub fn run_example() -> aefuse::Result<()> {
    let dir = data::bundled_data_dir().join("mnist");
    let x = data::load_mnist(&dir, MnistSplit::Train)?.subsample(2000, 4)?.features;
    let clean = data::load_mnist(&dir, MnistSplit::Test)?.subsample(1000, 4)?.features;

    let masking = Corruption::masking(0.25);
    let noisy = masking.corrupt_batch(&clean, &mut Rng::new(40));
    let tc = TrainConfig::new(OptimizerKind::rmsprop(), 5, 4);

    let basic = AeConfig::new(784, 36);
    let denoising = basic.clone().with_corruption(masking);
    for (name, cfg) in [("basic", basic), ("denoising", denoising)] {
        let mut net = build_autoencoder(&cfg, &mut Rng::new(4))?;
        train(&mut net, &x, &cfg, &tc)?;
        let ce = mean_loss_against(&net, &noisy, &clean, Loss::CrossEntropy)?;
        println!("{name:<9}  CE of masked inputs vs clean targets {ce:.3}");
    }
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
