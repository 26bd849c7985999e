//! Training curves of SGD, AdaGrad, RMSProp and Adam from the same start.

use aefuse::data::{self, MnistSplit};
use aefuse::network::{build_autoencoder, train};
use aefuse::{AeConfig, OptimizerKind, Rng, TrainConfig};

pub fn run_example() -> aefuse::Result<()> {
    let x = data::load_mnist(data::bundled_data_dir().join("mnist"), MnistSplit::Train)?
        .subsample(2000, 11)?
        .features;
    let cfg = AeConfig::new(784, 36);
    for opt in [
        OptimizerKind::sgd(),
        OptimizerKind::adagrad(),
        OptimizerKind::rmsprop(),
        OptimizerKind::adam(),
    ] {
        let mut net = build_autoencoder(&cfg, &mut Rng::new(11))?;
        let report = train(&mut net, &x, &cfg, &TrainConfig::new(opt, 5, 11))?;
        let curve: Vec<String> = report.epoch_loss.iter().map(|l| format!("{l:.2}")).collect();
        println!("{:<8} lr {:<6} {}", opt.name(), opt.learning_rate(), curve.join(" "));
    }
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
