use std::fmt;

use crate::activations::Activation;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rng};
use crate::losses::Loss;
use crate::regularizers::{RegularizerConfig, Sparsity};

use super::backprop::{backward, objective};
use super::model::{build_autoencoder, AeConfig, Network};

pub const DEFAULT_GRADCHECK_EPS: f64 = 1e-4;
pub const DEFAULT_GRADCHECK_TOLERANCE: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradCheckOptions {
    /// Central-difference step.
    pub eps: f64,
    /// Denominator floor of the relative error, so that parameters whose
    /// true gradient is zero are compared absolutely.
    pub floor: f64,
    /// Added to every analytic component before comparison. Only useful to
    /// exercise the failure path.
    pub analytic_offset: f64,
}

impl Default for GradCheckOptions {
    fn default() -> Self {
        GradCheckOptions {
            eps: DEFAULT_GRADCHECK_EPS,
            floor: 1e-6,
            analytic_offset: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradCheckResult {
    pub max_error: f64,
    /// Flat index of the worst parameter, in [`Network::parameters_mut`] order.
    pub worst_index: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub parameters: usize,
}

fn total_objective(net: &Network, x: &Matrix, loss: Loss, regs: &RegularizerConfig) -> Result<f64> {
    Ok(objective(net, &net.forward(x)?, x, loss, regs)?.total())
}

fn perturbed(net: &Network, group: usize, index: usize, delta: f64) -> Network {
    let mut copy = net.clone();
    copy.parameters_mut()[group][index] += delta;
    copy.sync_tied();
    copy
}

/// Compares backpropagated gradients with central differences
/// `(J(w + ε) − J(w − ε)) / 2ε` over every free parameter. `x` is both the
/// input and the reconstruction target.
pub fn grad_check(net: &Network, x: &Matrix, loss: Loss, regs: &RegularizerConfig, eps: f64) -> Result<f64> {
    let opts = GradCheckOptions {
        eps,
        ..GradCheckOptions::default()
    };
    Ok(grad_check_with(net, x, loss, regs, &opts)?.max_error)
}

pub fn grad_check_with(
    net: &Network,
    x: &Matrix,
    loss: Loss,
    regs: &RegularizerConfig,
    opts: &GradCheckOptions,
) -> Result<GradCheckResult> {
    if !(opts.eps > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {}", opts.eps)));
    }
    let (grads, _) = backward(net, &net.forward(x)?, x, loss, regs)?;
    let analytic: Vec<Vec<f64>> = grads.flat(net).into_iter().map(<[f64]>::to_vec).collect();

    let mut result = GradCheckResult {
        max_error: 0.0,
        worst_index: 0,
        analytic: 0.0,
        numeric: 0.0,
        parameters: 0,
    };
    let mut flat = 0;
    for (group, values) in analytic.iter().enumerate() {
        for (i, &a) in values.iter().enumerate() {
            let a = a + opts.analytic_offset;
            let plus = total_objective(&perturbed(net, group, i, opts.eps), x, loss, regs)?;
            let minus = total_objective(&perturbed(net, group, i, -opts.eps), x, loss, regs)?;
            let numeric = (plus - minus) / (2.0 * opts.eps);
            let err = (a - numeric).abs() / a.abs().max(numeric.abs()).max(opts.floor);
            if err > result.max_error || !err.is_finite() {
                result.max_error = err;
                result.worst_index = flat;
                result.analytic = a;
                result.numeric = numeric;
            }
            flat += 1;
        }
    }
    result.parameters = flat;
    Ok(result)
}

/// One cell of the gradient-check grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GradCheckCase {
    pub loss: Loss,
    pub regularizers: &'static str,
    pub activation: Activation,
    pub seed: u64,
    pub result: GradCheckResult,
}

impl fmt::Display for GradCheckCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<5} {:<13} {:<8} seed {:<3} max rel err {:.3e}",
            self.loss.name(),
            self.regularizers,
            self.activation.name(),
            self.seed,
            self.result.max_error
        )
    }
}

pub const SUITE_REGULARIZERS: [&str; 5] = ["none", "decay", "sparse", "contractive", "decay+sparse"];

pub fn suite_regularizers(name: &str) -> Option<RegularizerConfig> {
    let decay = 0.01;
    let sparse = Some(Sparsity::default());
    let regs = match name {
        "none" => RegularizerConfig::none(),
        "decay" => RegularizerConfig {
            weight_decay: decay,
            ..RegularizerConfig::none()
        },
        "sparse" => RegularizerConfig {
            sparsity: sparse,
            ..RegularizerConfig::none()
        },
        "contractive" => RegularizerConfig {
            contraction: Some(0.1),
            ..RegularizerConfig::none()
        },
        "decay+sparse" => RegularizerConfig {
            weight_decay: decay,
            sparsity: sparse,
            contraction: None,
        },
        _ => return None,
    };
    Some(regs)
}

/// Runs the gradient check on `d → c → d` networks for every supported
/// combination of loss, penalty set and activation.
///
/// The activation is used by both layers except under cross-entropy, whose
/// reconstruction layer is always a sigmoid. Penalties that need a sigmoid or
/// `tanh` encoding are skipped for other activations.
pub fn gradient_check_suite(
    input_dim: usize,
    encoding_dim: usize,
    seeds: &[u64],
    opts: &GradCheckOptions,
) -> Result<Vec<GradCheckCase>> {
    let losses = [Loss::Mse, Loss::CrossEntropy, Loss::correntropy()];
    let activations = [
        Activation::Linear,
        Activation::Sigmoid,
        Activation::Tanh,
        Activation::Relu,
        Activation::selu(),
    ];
    let mut cases = Vec::new();
    for loss in losses {
        for reg_name in SUITE_REGULARIZERS {
            let regs = suite_regularizers(reg_name).expect("suite names are known");
            for act in activations {
                if (regs.sparsity.is_some() || regs.contraction.is_some()) && !act.is_sigmoidal() {
                    continue;
                }
                let output = if loss == Loss::CrossEntropy { Activation::Sigmoid } else { act };
                let cfg = AeConfig::new(input_dim, encoding_dim)
                    .with_activations(act, output)
                    .with_loss(loss)
                    .with_regularizers(regs);
                for &seed in seeds {
                    let mut rng = Rng::new(seed);
                    let net = build_autoencoder(&cfg, &mut rng)?;
                    let x = rng.uniform(0.0, 1.0, 1, input_dim)?;
                    let result = grad_check_with(&net, &x, loss, &regs, opts)?;
                    cases.push(GradCheckCase {
                        loss,
                        regularizers: reg_name,
                        activation: act,
                        seed,
                        result,
                    });
                }
            }
        }
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::model::AeConfig;

    #[test]
    fn linear_mse_is_near_exact() {
        let cfg = AeConfig::new(6, 3)
            .with_activations(Activation::Linear, Activation::Linear)
            .with_loss(Loss::Mse);
        let mut rng = Rng::new(8);
        let net = build_autoencoder(&cfg, &mut rng).unwrap();
        let x = rng.uniform(0.0, 1.0, 1, 6).unwrap();
        let err = grad_check(&net, &x, Loss::Mse, &RegularizerConfig::none(), 1e-5).unwrap();
        assert!(err <= 1e-7, "{err}");
    }

    #[test]
    fn tanh_sigmoid_ce_decay_sparse() {
        let regs = suite_regularizers("decay+sparse").unwrap();
        let cfg = AeConfig::new(10, 4).with_regularizers(regs);
        let mut rng = Rng::new(9);
        let net = build_autoencoder(&cfg, &mut rng).unwrap();
        let x = rng.uniform(0.0, 1.0, 1, 10).unwrap();
        assert!(grad_check(&net, &x, Loss::CrossEntropy, &regs, 1e-5).unwrap() <= 1e-4);
    }

    #[test]
    fn contractive_and_tied_batches() {
        let regs = RegularizerConfig {
            contraction: Some(0.3),
            weight_decay: 0.02,
            ..RegularizerConfig::none()
        };
        for tied in [false, true] {
            let cfg = AeConfig::new(7, 3)
                .with_activations(Activation::Sigmoid, Activation::Sigmoid)
                .with_regularizers(regs)
                .tied(tied);
            let mut rng = Rng::new(10);
            let net = build_autoencoder(&cfg, &mut rng).unwrap();
            let x = rng.uniform(0.0, 1.0, 4, 7).unwrap();
            let err = grad_check(&net, &x, Loss::CrossEntropy, &regs, 1e-5).unwrap();
            assert!(err <= 1e-4, "tied={tied}: {err}");
        }
    }

    #[test]
    fn deep_tied_network() {
        let regs = suite_regularizers("decay+sparse").unwrap();
        let cfg = AeConfig::new(8, 3).with_hidden(&[5]).tied(true).with_regularizers(regs);
        let mut rng = Rng::new(11);
        let net = build_autoencoder(&cfg, &mut rng).unwrap();
        let x = rng.uniform(0.0, 1.0, 3, 8).unwrap();
        assert!(grad_check(&net, &x, Loss::correntropy(), &regs, 1e-5).unwrap() <= 1e-4);
    }

    #[test]
    fn offset_is_detected() {
        let cfg = AeConfig::new(5, 2);
        let mut rng = Rng::new(12);
        let net = build_autoencoder(&cfg, &mut rng).unwrap();
        let x = rng.uniform(0.0, 1.0, 1, 5).unwrap();
        let opts = GradCheckOptions {
            analytic_offset: 1e-2,
            ..GradCheckOptions::default()
        };
        let r = grad_check_with(&net, &x, Loss::CrossEntropy, &RegularizerConfig::none(), &opts).unwrap();
        assert!(r.max_error > 1e-3);
        assert_eq!(r.parameters, 2 * 5 + 2 + 5 * 2 + 5);
    }
}
