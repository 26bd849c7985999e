//! Correntropy against squared error when some training samples carry
//! outlying components.

use aefuse::losses::DEFAULT_KERNEL_SIGMA;
use aefuse::network::{build_autoencoder, mean_loss_against, train};
use aefuse::{AeConfig, Loss, OptimizerKind, Rng, TrainConfig};

pub fn run_example() -> aefuse::Result<()> {
    let mut rng = Rng::new(5);

    // one component pushed to 1 moves correntropy by at most k(0)
    let u = rng.uniform(0.0, 1.0, 1, 16)?.into_vec();
    let mut v = u.clone();
    v[3] = 1.0;
    let corr = Loss::correntropy();
    println!(
        "outlier in one component: dMSE {:.4}, dCorr {:.4} (bound {:.4})",
        Loss::Mse.loss(&u, &v)? - Loss::Mse.loss(&u, &u)?,
        corr.loss(&u, &v)? - corr.loss(&u, &u)?,
        1.0 / ((2.0 * std::f64::consts::PI).sqrt() * DEFAULT_KERNEL_SIGMA)
    );

    // smooth 3-factor data in [0, 1]^16, then 10% of rows get spikes
    let z = rng.uniform(0.0, 1.0, 600, 3)?;
    let mix = rng.uniform(0.0, 1.0, 3, 16)?;
    let clean = z.matmul(&mix)?.map(|t| t / 3.0);
    let mut noisy = clean.clone();
    for i in (0..noisy.rows()).step_by(10) {
        for _ in 0..4 {
            let j = rng.below(16);
            noisy.set(i, j, 1.0);
        }
    }

    let tc = TrainConfig::new(OptimizerKind::adam().with_learning_rate(0.01), 200, 5).with_batch_size(32);
    for loss in [Loss::Mse, corr] {
        let cfg = AeConfig::new(16, 3).with_loss(loss);
        let mut net = build_autoencoder(&cfg, &mut Rng::new(5))?;
        train(&mut net, &noisy, &cfg, &tc)?;
        let err = mean_loss_against(&net, &clean, &clean, Loss::Mse)?;
        println!("trained with {:<4}  squared error on clean data {err:.4}", loss.name());
    }
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
