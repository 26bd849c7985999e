//! Trains the default shallow autoencoder (tanh encoding, sigmoid output,
//! cross-entropy, RMSProp) on a slice of MNIST and renders a few
//! reconstructions as a PGM image.

use aefuse::cli::render::reconstruction_grid;
use aefuse::data::{self, MnistSplit};
use aefuse::network::{build_autoencoder, mean_loss, train};
use aefuse::{AeConfig, Error, Loss, OptimizerKind, Rng, TrainConfig};

pub fn run_example() -> aefuse::Result<()> {
    let dir = data::bundled_data_dir().join("mnist");
    let train_set = data::load_mnist(&dir, MnistSplit::Train)?.subsample(2000, 1)?;
    let test_set = data::load_mnist(&dir, MnistSplit::Test)?.subsample(1000, 1)?;

    let cfg = AeConfig::new(784, 36);
    let mut net = build_autoencoder(&cfg, &mut Rng::new(1))?;
    let report = train(
        &mut net,
        &train_set.features,
        &cfg,
        &TrainConfig::new(OptimizerKind::rmsprop(), 5, 1),
    )?;
    for (epoch, loss) in report.epoch_loss.iter().enumerate() {
        println!("epoch {:>2}  training CE {loss:.3}", epoch + 1);
    }
    let held_out = mean_loss(&net, &test_set.features, Loss::CrossEntropy)?;
    println!("held-out CE {held_out:.3}");

    let shown = test_set.features.select_rows(&(0..8).collect::<Vec<_>>());
    let grid = reconstruction_grid(&shown, &net.encode(&shown)?, &net.reconstruct(&shown)?, Some((-1.0, 1.0)))?;
    let out = std::env::temp_dir().join("aefuse-basic.pgm");
    std::fs::write(&out, grid.to_pgm()).map_err(|e| Error::io(&out, e))?;
    println!("wrote {}", out.display());
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
