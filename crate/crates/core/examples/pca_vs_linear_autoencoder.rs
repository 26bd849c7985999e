//! A linear autoencoder with squared error spans the same subspace as PCA.

use aefuse::network::{build_autoencoder, mean_loss, train};
use aefuse::pca::{fit_pca, pca_encode, pca_reconstruct, reconstruction_error};
use aefuse::{AeConfig, Activation, Loss, OptimizerKind, Rng, TrainConfig};

pub fn run_example() -> aefuse::Result<()> {
    let mut rng = Rng::new(8);
    let (n, d, k) = (400, 10, 3);
    let mut x = rng.normal(0.0, 1.0, n, k)?.matmul(&rng.normal(0.0, 1.0, k, d)?)?;
    x.add_scaled(&rng.normal(0.0, 0.05, n, d)?, 1.0)?;

    let pca = fit_pca(&x, k)?;
    println!("eigenvalues: {:?}", pca.spectrum.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>());
    println!(
        "discarded variance {:.5}, reconstruction error {:.5}",
        pca.discarded_variance(),
        reconstruction_error(&pca, &x)?
    );
    let recon = pca_reconstruct(&pca, &pca_encode(&pca, &x)?)?;
    let pca_sq = Loss::Mse.batch_loss(&x, &recon)?.iter().sum::<f64>() / n as f64;
    // the PCA model as a tied linear network gives the same numbers
    let as_net = pca.to_network()?;
    println!("PCA squared error {pca_sq:.5} (as a network: {:.5})", mean_loss(&as_net, &x, Loss::Mse)?);

    let cfg = AeConfig::new(d, k)
        .with_activations(Activation::Linear, Activation::Linear)
        .with_loss(Loss::Mse)
        .tied(true);
    let mut net = build_autoencoder(&cfg, &mut Rng::new(8))?;
    let tc = TrainConfig::new(OptimizerKind::adam().with_learning_rate(0.01), 1000, 8).with_batch_size(n);
    train(&mut net, &x, &cfg, &tc)?;
    println!("linear AE squared error {:.5}", mean_loss(&net, &x, Loss::Mse)?);
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
