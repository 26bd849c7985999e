//! Greedy layer-wise pretraining of a 784-128-36 encoder, unrolled into a
//! deep autoencoder and fine-tuned end to end.

use aefuse::data::{self, MnistSplit};
use aefuse::network::{build_autoencoder, mean_loss, stack_pretrain, train};
use aefuse::{AeConfig, Loss, OptimizerKind, Rng, TrainConfig};

pub fn run_example() -> aefuse::Result<()> {
    let dir = data::bundled_data_dir().join("mnist");
    let x = data::load_mnist(&dir, MnistSplit::Train)?.subsample(2000, 6)?.features;
    let held_out = data::load_mnist(&dir, MnistSplit::Test)?.subsample(1000, 6)?.features;

    let dims = [784, 128, 36];
    // stages with tied weights unroll into exactly what they learned
    let template = AeConfig::new(784, 36).tied(true);
    let stacked = stack_pretrain(&dims, &x, &template, &TrainConfig::new(OptimizerKind::adam(), 3, 6), &mut Rng::new(6))?;
    for (k, report) in stacked.reports.iter().enumerate() {
        println!("stage {}: {} -> {}  final loss {:.4}", k + 1, dims[k], dims[k + 1], report.final_loss().unwrap());
    }

    let deep = AeConfig::new(784, 36).with_hidden(&[128]);
    let mut pretrained = stacked.network.untied();
    println!("before fine-tuning  held-out CE {:.3}", mean_loss(&pretrained, &held_out, Loss::CrossEntropy)?);
    let tc = TrainConfig::new(OptimizerKind::adam(), 3, 6);
    train(&mut pretrained, &x, &deep, &tc)?;
    println!("after fine-tuning   held-out CE {:.3}", mean_loss(&pretrained, &held_out, Loss::CrossEntropy)?);

    let mut scratch = build_autoencoder(&deep, &mut Rng::new(6))?;
    train(&mut scratch, &x, &deep, &TrainConfig::new(OptimizerKind::adam(), 9, 6))?;
    println!("random init, 9 epochs held-out CE {:.3}", mean_loss(&scratch, &held_out, Loss::CrossEntropy)?);
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
