//! Penalty terms added to the reconstruction objective: L2 weight decay,
//! KL-divergence sparsity on the encoding, and the squared Frobenius norm of
//! the encoder Jacobian.
//!
//! Sparsity treats each encoding unit as a Bernoulli variable, so activations
//! are first mapped affinely onto `[0, 1]` using the activation's range
//! (`tanh`: `(a + 1) / 2`, sigmoid: unchanged). A `tanh` target of −0.7
//! therefore becomes 0.15.

use crate::activations::Activation;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Clamp applied to `ρ̂` inside the KL divergence.
pub const KL_EPSILON: f64 = 1e-7;

pub const DEFAULT_WEIGHT_DECAY: f64 = 0.01;
pub const DEFAULT_SPARSE_WEIGHT: f64 = 1.0;
pub const DEFAULT_CONTRACTIVE_WEIGHT: f64 = 0.1;
/// Rescaled counterpart of a `tanh` target activation of −0.7.
pub const DEFAULT_SPARSITY_TARGET: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sparsity {
    /// Desired mean activation `ρ`, on the rescaled `[0, 1]` scale.
    pub target: f64,
    pub weight: f64,
}

impl Default for Sparsity {
    fn default() -> Self {
        Sparsity {
            target: DEFAULT_SPARSITY_TARGET,
            weight: DEFAULT_SPARSE_WEIGHT,
        }
    }
}

impl Sparsity {
    /// Builds a sparsity term from a target expressed in the activation's own
    /// units, e.g. −0.7 for `tanh`.
    pub fn from_activation_target(target: f64, activation: &Activation, weight: f64) -> Result<Self> {
        Ok(Sparsity {
            target: rescale(activation, target)?,
            weight,
        })
    }
}

/// Which penalties are active and how strongly.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RegularizerConfig {
    /// `λ` in `λ Σ w²`; zero disables decay.
    pub weight_decay: f64,
    pub sparsity: Option<Sparsity>,
    /// Multiplier of the contraction penalty; `None` disables it.
    pub contraction: Option<f64>,
}

impl RegularizerConfig {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.weight_decay == 0.0 && self.sparsity.is_none() && self.contraction.is_none()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.weight_decay >= 0.0 && self.weight_decay.is_finite()) {
            return Err(Error::Config(format!(
                "weight decay must be nonnegative, got {}",
                self.weight_decay
            )));
        }
        if let Some(s) = self.sparsity {
            if !(s.target > 0.0 && s.target < 1.0) {
                return Err(Error::Config(format!(
                    "sparsity target must lie strictly inside (0, 1), got {}",
                    s.target
                )));
            }
            if !(s.weight >= 0.0) {
                return Err(Error::Config(format!("sparse weight must be nonnegative, got {}", s.weight)));
            }
        }
        if let Some(c) = self.contraction {
            if !(c >= 0.0) {
                return Err(Error::Config(format!("contractive weight must be nonnegative, got {c}")));
            }
        }
        Ok(())
    }
}

/// `λ Σ w²` over every entry of every matrix, with gradient `2λw`.
pub fn weight_decay(weights: &[&Matrix], lambda: f64) -> (f64, Vec<Matrix>) {
    let penalty = lambda * weights.iter().map(|w| w.frobenius_sq()).sum::<f64>();
    let grads = weights.iter().map(|w| w.scale(2.0 * lambda)).collect();
    (penalty, grads)
}

fn sparsity_range(activation: &Activation) -> Result<(f64, f64)> {
    if !activation.is_sigmoidal() {
        return Err(Error::Config(format!(
            "sparsity requires a sigmoid or tanh encoding activation, got {activation}"
        )));
    }
    Ok(activation.bounds().expect("sigmoidal activations are bounded"))
}

/// Maps an activation value onto `[0, 1]`.
pub fn rescale(activation: &Activation, value: f64) -> Result<f64> {
    let (lo, hi) = sparsity_range(activation)?;
    Ok((value - lo) / (hi - lo))
}

/// Derivative of [`rescale`] with respect to the activation value.
pub fn rescale_slope(activation: &Activation) -> Result<f64> {
    let (lo, hi) = sparsity_range(activation)?;
    Ok(1.0 / (hi - lo))
}

/// Mean rescaled activation `ρ̂ᵢ` of each encoding unit over the batch.
pub fn mean_activation(encodings: &Matrix, activation: &Activation) -> Result<Vec<f64>> {
    if encodings.rows() == 0 {
        return Err(Error::Empty("mean activation of an empty batch".into()));
    }
    let (lo, hi) = sparsity_range(activation)?;
    Ok(encodings
        .column_means()
        .into_iter()
        .map(|m| (m - lo) / (hi - lo))
        .collect())
}

/// `KL(ρ ‖ ρ̂)` between Bernoulli distributions, natural log, `ρ̂` clamped.
pub fn kl_divergence(rho: f64, rho_hat: f64) -> f64 {
    let q = rho_hat.clamp(KL_EPSILON, 1.0 - KL_EPSILON);
    rho * (rho / q).ln() + (1.0 - rho) * ((1.0 - rho) / (1.0 - q)).ln()
}

/// `Σᵢ KL(ρ ‖ ρ̂ᵢ)` and its gradient with respect to each `ρ̂ᵢ`.
pub fn kl_sparsity(rho: f64, rho_hat: &[f64]) -> Result<(f64, Vec<f64>)> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sparsity target must lie strictly inside (0, 1), got {rho}"
        )));
    }
    let penalty = rho_hat.iter().map(|&q| kl_divergence(rho, q)).sum();
    let grad = rho_hat
        .iter()
        .map(|&q| {
            let q = q.clamp(KL_EPSILON, 1.0 - KL_EPSILON);
            -rho / q + (1.0 - rho) / (1.0 - q)
        })
        .collect();
    Ok((penalty, grad))
}

/// Value and parameter gradients of the contraction penalty of a batch.
#[derive(Clone, Debug)]
pub struct ContractiveTerm {
    /// `Σₓ ‖J_f(x)‖²_F` summed over the batch.
    pub penalty: f64,
    pub grad_weights: Matrix,
    pub grad_bias: Vec<f64>,
}

fn check_contractive(weights: &Matrix, pre: &Matrix, activation: &Activation) -> Result<()> {
    if !activation.is_sigmoidal() {
        return Err(Error::Config(format!(
            "contractive requires shallow sigmoid/tanh encoder, got {activation}"
        )));
    }
    if pre.cols() != weights.rows() {
        return Err(Error::shape("contractive_penalty", weights.shape(), pre.shape()));
    }
    Ok(())
}

/// Squared Frobenius norm of the encoder Jacobian for each row of the batch.
///
/// For one dense layer `J_f(x) = diag(s'(z)) · W`, hence
/// `‖J_f(x)‖²_F = Σᵢ s'(zᵢ)² Σⱼ W²ᵢⱼ`.
pub fn jacobian_norms(weights: &Matrix, pre: &Matrix, activation: &Activation) -> Result<Vec<f64>> {
    check_contractive(weights, pre, activation)?;
    let row_norms: Vec<f64> = weights.row_iter().map(|r| r.iter().map(|w| w * w).sum()).collect();
    Ok(pre
        .row_iter()
        .map(|z| {
            z.iter()
                .zip(&row_norms)
                .map(|(&zi, s)| {
                    let d = activation.derivative(zi);
                    d * d * s
                })
                .sum()
        })
        .collect())
}

/// Contraction penalty of a single-layer encoder `z = x Wᵀ + b`.
///
/// `pre` holds the encoder pre-activations for the batch `inputs`. The
/// gradient accounts for both the explicit `W²` factor and the dependence of
/// `s'(z)` on `W` and `b`.
pub fn contractive_penalty(
    weights: &Matrix,
    pre: &Matrix,
    inputs: &Matrix,
    activation: &Activation,
) -> Result<ContractiveTerm> {
    check_contractive(weights, pre, activation)?;
    if inputs.rows() != pre.rows() || inputs.cols() != weights.cols() {
        return Err(Error::shape("contractive_penalty", weights.shape(), inputs.shape()));
    }
    let c = weights.rows();
    let row_norms: Vec<f64> = weights.row_iter().map(|r| r.iter().map(|w| w * w).sum()).collect();

    let mut penalty = 0.0;
    // Σₙ s'(z_ni)² per unit
    let mut slope_sq = vec![0.0; c];
    // q_ni = ∂/∂z_ni of s'(z_ni)² · ‖W_i‖²
    let mut q = Matrix::zeros(pre.rows(), c);
    for (n, z) in pre.row_iter().enumerate() {
        let q_row = q.row_mut(n);
        for i in 0..c {
            let d1 = activation.derivative(z[i]);
            let d2 = activation.second_derivative(z[i]);
            penalty += d1 * d1 * row_norms[i];
            slope_sq[i] += d1 * d1;
            q_row[i] = 2.0 * d1 * d2 * row_norms[i];
        }
    }

    let mut grad_weights = q.t_matmul(inputs)?;
    for (i, (g_row, w_row)) in grad_weights
        .as_mut_slice()
        .chunks_mut(weights.cols().max(1))
        .zip(weights.row_iter())
        .enumerate()
    {
        for (g, w) in g_row.iter_mut().zip(w_row) {
            *g += 2.0 * w * slope_sq[i];
        }
    }
    Ok(ContractiveTerm {
        penalty,
        grad_weights,
        grad_bias: q.column_sums(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rng;

    #[test]
    fn decay_values() {
        let w = Matrix::from_rows(&[[3.0]]).unwrap();
        let (p, g) = weight_decay(&[&w], 0.01);
        assert!((p - 0.09).abs() < 1e-15);
        assert!((g[0].get(0, 0) - 0.06).abs() < 1e-15);

        let (p, g) = weight_decay(&[&w], 0.0);
        assert_eq!(p, 0.0);
        assert_eq!(g[0].get(0, 0), 0.0);

        let bigger = Matrix::from_rows(&[[3.5]]).unwrap();
        assert!(weight_decay(&[&bigger], 0.01).0 > p);
    }

    #[test]
    fn mean_activation_rescales() {
        let tanh = Matrix::filled(4, 3, -0.7);
        let rho = mean_activation(&tanh, &Activation::Tanh).unwrap();
        assert!(rho.iter().all(|r| (r - 0.15).abs() < 1e-15));

        let sig = Matrix::filled(5, 2, 0.3);
        assert_eq!(mean_activation(&sig, &Activation::Sigmoid).unwrap(), vec![0.3, 0.3]);

        let single = Matrix::from_rows(&[[0.2, -0.4]]).unwrap();
        let rho = mean_activation(&single, &Activation::Tanh).unwrap();
        assert!((rho[0] - 0.6).abs() < 1e-15 && (rho[1] - 0.3).abs() < 1e-15);

        assert!(mean_activation(&Matrix::zeros(0, 3), &Activation::Tanh).is_err());
        assert!(mean_activation(&sig, &Activation::Relu).is_err());
    }

    #[test]
    fn kl_values() {
        let (p, g) = kl_sparsity(0.2, &[0.2]).unwrap();
        assert!(p.abs() < 1e-15);
        assert!(g[0].abs() < 1e-12);
        // 0.2 ln 0.4 + 0.8 ln 1.6
        let (p, _) = kl_sparsity(0.2, &[0.5]).unwrap();
        assert!((p - 0.192_744_757_021_757_53).abs() < 1e-12, "{p}");
        // 0.2 ln(0.2/1e-6) + 0.8 ln(0.8/(1 - 1e-6))
        assert!((kl_divergence(0.2, 1e-6) - 2.262_700_488_055_067).abs() < 1e-9);
        assert!(kl_divergence(0.2, 1.0 - 1e-6) > 10.0);
        // unbounded growth towards both ends, up to the clamp
        assert!(kl_divergence(0.2, 1e-7) > kl_divergence(0.2, 1e-6));
        assert!(kl_divergence(0.2, 1e-6) > kl_divergence(0.2, 1e-3));
        assert!(kl_divergence(0.2, 1.0 - 1e-7) > kl_divergence(0.2, 1.0 - 1e-6));
        assert!(kl_sparsity(1.0, &[0.5]).is_err());
    }

    #[test]
    fn kl_gradient_matches_finite_differences() {
        let mut rng = Rng::new(8);
        for _ in 0..50 {
            let rho = 0.05 + 0.9 * rng.next_f64();
            let q = 0.05 + 0.9 * rng.next_f64();
            let (_, g) = kl_sparsity(rho, &[q]).unwrap();
            let h = 1e-6;
            let numeric = (kl_divergence(rho, q + h) - kl_divergence(rho, q - h)) / (2.0 * h);
            assert!((numeric - g[0]).abs() <= 1e-6 * g[0].abs().max(1.0));
        }
    }

    #[test]
    fn contraction_single_unit() {
        let w = Matrix::from_rows(&[[1.0]]).unwrap();
        let z = Matrix::from_rows(&[[0.0]]).unwrap();
        let x = Matrix::from_rows(&[[0.0]]).unwrap();
        let term = contractive_penalty(&w, &z, &x, &Activation::Sigmoid).unwrap();
        assert!((term.penalty - 0.0625).abs() < 1e-15);

        let zero = Matrix::zeros(3, 4);
        let pre = Matrix::zeros(2, 3);
        let x = Matrix::filled(2, 4, 0.5);
        assert_eq!(contractive_penalty(&zero, &pre, &x, &Activation::Tanh).unwrap().penalty, 0.0);
        assert!(contractive_penalty(&zero, &pre, &x, &Activation::Relu).is_err());
    }

    fn encode(w: &Matrix, b: &[f64], x: &Matrix, act: &Activation) -> (Matrix, Matrix) {
        let mut z = x.matmul_t(w).unwrap();
        z.add_row_broadcast(b).unwrap();
        let y = act.activate(&z);
        (z, y)
    }

    fn penalty_of(w: &Matrix, b: &[f64], x: &Matrix, act: &Activation) -> f64 {
        let (z, _) = encode(w, b, x, act);
        contractive_penalty(w, &z, x, act).unwrap().penalty
    }

    #[test]
    fn contraction_gradient_matches_finite_differences() {
        let mut rng = Rng::new(31);
        let h = 1e-6;
        for trial in 0..10 {
            let act = if trial % 2 == 0 { Activation::Sigmoid } else { Activation::Tanh };
            let (d, c, n) = (5, 3, 4);
            let w = rng.uniform(-1.0, 1.0, c, d).unwrap();
            let b: Vec<f64> = (0..c).map(|_| rng.next_f64() - 0.5).collect();
            let x = rng.uniform(0.0, 1.0, n, d).unwrap();
            let (z, _) = encode(&w, &b, &x, &act);
            let term = contractive_penalty(&w, &z, &x, &act).unwrap();
            for k in 0..w.len() {
                let mut wp = w.clone();
                let mut wm = w.clone();
                wp.as_mut_slice()[k] += h;
                wm.as_mut_slice()[k] -= h;
                let numeric = (penalty_of(&wp, &b, &x, &act) - penalty_of(&wm, &b, &x, &act)) / (2.0 * h);
                let analytic = term.grad_weights.as_slice()[k];
                let rel = (numeric - analytic).abs() / numeric.abs().max(analytic.abs()).max(1e-8);
                assert!(rel <= 1e-5, "W[{k}]: {analytic} vs {numeric}");
            }
            for i in 0..c {
                let mut bp = b.clone();
                let mut bm = b.clone();
                bp[i] += h;
                bm[i] -= h;
                let numeric = (penalty_of(&w, &bp, &x, &act) - penalty_of(&w, &bm, &x, &act)) / (2.0 * h);
                let analytic = term.grad_bias[i];
                let rel = (numeric - analytic).abs() / numeric.abs().max(analytic.abs()).max(1e-8);
                assert!(rel <= 1e-5, "b[{i}]: {analytic} vs {numeric}");
            }
        }
    }

    #[test]
    fn closed_form_matches_numeric_jacobian() {
        let mut rng = Rng::new(99);
        let h = 1e-6;
        for trial in 0..10 {
            let act = if trial % 2 == 0 { Activation::Tanh } else { Activation::Sigmoid };
            let (d, c) = (6, 4);
            let w = rng.uniform(-1.0, 1.0, c, d).unwrap();
            let b: Vec<f64> = (0..c).map(|_| rng.next_f64() - 0.5).collect();
            let x = rng.uniform(0.0, 1.0, 1, d).unwrap();
            let (z, _) = encode(&w, &b, &x, &act);
            let closed = jacobian_norms(&w, &z, &act).unwrap()[0];

            // assemble J column by column from finite differences of f
            let mut frob = 0.0;
            for j in 0..d {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp.as_mut_slice()[j] += h;
                xm.as_mut_slice()[j] -= h;
                let (_, yp) = encode(&w, &b, &xp, &act);
                let (_, ym) = encode(&w, &b, &xm, &act);
                for i in 0..c {
                    let dij = (yp.get(0, i) - ym.get(0, i)) / (2.0 * h);
                    frob += dij * dij;
                }
            }
            assert!((closed - frob).abs() <= 1e-5 * closed, "{closed} vs {frob}");
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = RegularizerConfig::none();
        assert!(cfg.validate().is_ok() && cfg.is_empty());
        cfg.sparsity = Some(Sparsity { target: 1.2, weight: 1.0 });
        assert!(cfg.validate().is_err());
        cfg.sparsity = None;
        cfg.weight_decay = -1.0;
        assert!(cfg.validate().is_err());
        let s = Sparsity::from_activation_target(-0.7, &Activation::Tanh, 1.0).unwrap();
        assert!((s.target - 0.15).abs() < 1e-15);
    }
}
