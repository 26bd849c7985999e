use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::losses::Loss;
use crate::regularizers::{self, RegularizerConfig};

use super::model::{ForwardCache, Network};

/// Gradient of the objective with respect to every layer's weights and bias.
///
/// For tied networks the decoder entries of `weights` are zero; their
/// contribution has already been folded into the mirrored encoder matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    /// Views matching the order of [`Network::parameters_mut`].
    pub fn flat<'a>(&'a self, net: &Network) -> Vec<&'a [f64]> {
        let mut out = Vec::with_capacity(2 * self.weights.len());
        for (k, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            if !net.is_tied_copy(k) {
                out.push(w.as_slice());
            }
            out.push(b.as_slice());
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.weights
            .iter()
            .flat_map(|w| w.as_slice().iter())
            .chain(self.biases.iter().flatten())
            .fold(0.0f64, |m, g| m.max(g.abs()))
    }
}

/// Value of the minibatch objective split into its data and penalty parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ObjectiveValue {
    /// Mean per-sample reconstruction loss.
    pub loss: f64,
    /// Sum of every active penalty.
    pub penalty: f64,
}

impl ObjectiveValue {
    pub fn total(&self) -> f64 {
        self.loss + self.penalty
    }
}

fn check_targets(net: &Network, cache: &ForwardCache, targets: &Matrix) -> Result<usize> {
    let n = cache.input.rows();
    if n == 0 {
        return Err(Error::Empty("objective of an empty batch".into()));
    }
    if targets.shape() != (n, net.input_dim()) {
        return Err(Error::shape("backward targets", targets.shape(), cache.input.shape()));
    }
    Ok(n)
}

fn penalties(
    net: &Network,
    cache: &ForwardCache,
    regs: &RegularizerConfig,
) -> Result<f64> {
    let n = cache.input.rows() as f64;
    let mut penalty = 0.0;
    if regs.weight_decay > 0.0 {
        penalty += regularizers::weight_decay(&net.trainable_weights(), regs.weight_decay).0;
    }
    if let Some(s) = regs.sparsity {
        let k = net.split() - 1;
        let rho_hat = regularizers::mean_activation(&cache.post[k], &net.layer(k).activation)?;
        penalty += s.weight * regularizers::kl_sparsity(s.target, &rho_hat)?.0;
    }
    if let Some(gamma) = regs.contraction {
        let norms = regularizers::jacobian_norms(&net.layer(0).weights, &cache.pre[0], &net.layer(0).activation)?;
        penalty += gamma * norms.iter().sum::<f64>() / n;
    }
    Ok(penalty)
}

fn check_contraction(net: &Network, regs: &RegularizerConfig) -> Result<()> {
    if regs.contraction.is_some() && net.split() != 1 {
        return Err(Error::Config("contractive requires shallow sigmoid/tanh encoder".into()));
    }
    Ok(())
}

/// Objective value of a batch without gradients.
///
/// `J = (1/n) Σ L(uₙ, vₙ) + λ Σ w² + β Σᵢ KL(ρ ‖ ρ̂ᵢ) + (γ/n) Σₙ ‖J_f(xₙ)‖²_F`
/// where `ρ̂` is the batch mean of the rescaled encoding activations. Tied
/// weights count once in the decay term.
pub fn objective(
    net: &Network,
    cache: &ForwardCache,
    targets: &Matrix,
    loss: Loss,
    regs: &RegularizerConfig,
) -> Result<ObjectiveValue> {
    let n = check_targets(net, cache, targets)?;
    check_contraction(net, regs)?;
    let data = loss.batch_loss(targets, cache.output())?.iter().sum::<f64>() / n as f64;
    Ok(ObjectiveValue {
        loss: data,
        penalty: penalties(net, cache, regs)?,
    })
}

/// Exact gradients of [`objective`] by backpropagation.
///
/// `cache` comes from a forward pass on the network input, which may be a
/// corrupted copy of `targets`.
pub fn backward(
    net: &Network,
    cache: &ForwardCache,
    targets: &Matrix,
    loss: Loss,
    regs: &RegularizerConfig,
) -> Result<(Gradients, ObjectiveValue)> {
    let value = objective(net, cache, targets, loss, regs)?;
    let n = cache.input.rows() as f64;
    let depth = net.depth();
    let code_layer = net.split() - 1;

    let mut sparsity_grad: Option<Vec<f64>> = None;
    if let Some(s) = regs.sparsity {
        let act = net.layer(code_layer).activation;
        let rho_hat = regularizers::mean_activation(&cache.post[code_layer], &act)?;
        let (_, dkl) = regularizers::kl_sparsity(s.target, &rho_hat)?;
        let scale = s.weight * regularizers::rescale_slope(&act)? / n;
        sparsity_grad = Some(dkl.into_iter().map(|g| g * scale).collect());
    }

    let mut weights = Vec::with_capacity(depth);
    let mut biases = Vec::with_capacity(depth);
    // ∂J/∂a for the current layer's output
    let mut upstream = loss.batch_grad(targets, cache.output())?.scale(1.0 / n);
    for k in (0..depth).rev() {
        let layer = net.layer(k);
        if k == code_layer {
            if let Some(g) = &sparsity_grad {
                for row in 0..upstream.rows() {
                    for (u, gi) in upstream.row_mut(row).iter_mut().zip(g) {
                        *u += gi;
                    }
                }
            }
        }
        let act = layer.activation;
        let mut delta = upstream;
        delta.zip_inplace(&cache.pre[k], |d, z| d * act.derivative(z))?;
        weights.push(delta.t_matmul(cache.layer_input(k))?);
        biases.push(delta.column_sums());
        upstream = if k > 0 {
            delta.matmul(&layer.weights)?
        } else {
            Matrix::zeros(0, 0)
        };
    }
    weights.reverse();
    biases.reverse();

    if let Some(gamma) = regs.contraction {
        let layer = net.layer(0);
        let term = regularizers::contractive_penalty(&layer.weights, &cache.pre[0], &cache.input, &layer.activation)?;
        weights[0].add_scaled(&term.grad_weights, gamma / n)?;
        for (b, g) in biases[0].iter_mut().zip(&term.grad_bias) {
            *b += gamma / n * g;
        }
    }

    if net.is_tied() {
        for k in net.split()..depth {
            let mirror = net.mirror_of(k);
            let folded = weights[k].transpose();
            weights[mirror].add_scaled(&folded, 1.0)?;
            weights[k] = Matrix::zeros(weights[k].rows(), weights[k].cols());
        }
    }

    if regs.weight_decay > 0.0 {
        for (k, g) in weights.iter_mut().enumerate() {
            if !net.is_tied_copy(k) {
                g.add_scaled(&net.layer(k).weights, 2.0 * regs.weight_decay)?;
            }
        }
    }

    Ok((Gradients { weights, biases }, value))
}
