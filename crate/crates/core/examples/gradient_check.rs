//! Compares backpropagated gradients with central finite differences.

use aefuse::network::{build_autoencoder, grad_check, gradient_check_suite, GradCheckOptions};
use aefuse::{AeConfig, Loss, RegularizerConfig, Rng, Sparsity};

pub fn run_example() -> aefuse::Result<()> {
    let regs = RegularizerConfig {
        weight_decay: 0.01,
        sparsity: Some(Sparsity::default()),
        contraction: None,
    };
    let cfg = AeConfig::new(12, 5).with_hidden(&[8]).tied(true).with_regularizers(regs);
    let mut rng = Rng::new(10);
    let net = build_autoencoder(&cfg, &mut rng)?;
    let x = rng.uniform(0.0, 1.0, 4, 12)?;
    let err = grad_check(&net, &x, Loss::CrossEntropy, &regs, 1e-4)?;
    println!("tied 12-8-5-8-12 with decay and sparsity: max relative error {err:.2e}");

    let cases = gradient_check_suite(20, 8, &[0], &GradCheckOptions::default())?;
    for case in &cases {
        println!("{case}");
    }
    let worst = cases.iter().map(|c| c.result.max_error).fold(0.0, f64::max);
    println!("{} configurations, worst {worst:.2e}", cases.len());
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
