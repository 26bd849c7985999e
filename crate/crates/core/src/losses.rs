//! Per-instance reconstruction losses `L(u, v)` where `u` is the target and
//! `v` the reconstruction, together with `∂L/∂v`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Clamp keeping cross-entropy away from `log(0)`.
pub const CE_EPSILON: f64 = 1e-7;

pub const DEFAULT_KERNEL_SIGMA: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Loss {
    /// Squared Euclidean distance `‖u − v‖²`.
    Mse,
    /// Bernoulli negative log-likelihood, natural log.
    CrossEntropy,
    /// Negative correntropy with a Gaussian kernel of width `sigma`.
    Correntropy { sigma: f64 },
}

/// Gaussian kernel `exp(−α²/2σ²) / (√(2π) σ)`.
#[inline]
pub fn gaussian_kernel(alpha: f64, sigma: f64) -> f64 {
    (-(alpha * alpha) / (2.0 * sigma * sigma)).exp() / ((2.0 * PI).sqrt() * sigma)
}

#[inline]
fn clamp_prob(v: f64) -> f64 {
    v.clamp(CE_EPSILON, 1.0 - CE_EPSILON)
}

impl Loss {
    pub fn correntropy() -> Self {
        Loss::Correntropy {
            sigma: DEFAULT_KERNEL_SIGMA,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Loss::Correntropy { sigma } = *self {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::Config(format!(
                    "correntropy kernel width must be positive, got {sigma}"
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Loss::Mse => "mse",
            Loss::CrossEntropy => "xent",
            Loss::Correntropy { .. } => "corr",
        }
    }

    pub fn loss(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        self.check(u, v)?;
        Ok(self.loss_unchecked(u, v))
    }

    pub fn grad(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        self.check(u, v)?;
        let mut out = vec![0.0; u.len()];
        self.grad_into(u, v, &mut out);
        Ok(out)
    }

    /// Per-row losses of a batch.
    pub fn batch_loss(&self, targets: &Matrix, outputs: &Matrix) -> Result<Vec<f64>> {
        self.check_batch(targets, outputs)?;
        Ok(targets
            .row_iter()
            .zip(outputs.row_iter())
            .map(|(u, v)| self.loss_unchecked(u, v))
            .collect())
    }

    /// Row-wise `∂L/∂v` of a batch.
    pub fn batch_grad(&self, targets: &Matrix, outputs: &Matrix) -> Result<Matrix> {
        self.check_batch(targets, outputs)?;
        let mut out = Matrix::zeros(outputs.rows(), outputs.cols());
        let cols = outputs.cols();
        if cols > 0 {
            for (i, (u, v)) in targets.row_iter().zip(outputs.row_iter()).enumerate() {
                self.grad_into(u, v, &mut out.as_mut_slice()[i * cols..(i + 1) * cols]);
            }
        }
        Ok(out)
    }

    fn loss_unchecked(&self, u: &[f64], v: &[f64]) -> f64 {
        match *self {
            Loss::Mse => u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum(),
            Loss::CrossEntropy => -u
                .iter()
                .zip(v)
                .map(|(&a, &b)| {
                    let b = clamp_prob(b);
                    a * b.ln() + (1.0 - a) * (1.0 - b).ln()
                })
                .sum::<f64>(),
            Loss::Correntropy { sigma } => -u
                .iter()
                .zip(v)
                .map(|(a, b)| gaussian_kernel(a - b, sigma))
                .sum::<f64>(),
        }
    }

    fn grad_into(&self, u: &[f64], v: &[f64], out: &mut [f64]) {
        match *self {
            Loss::Mse => {
                for ((o, a), b) in out.iter_mut().zip(u).zip(v) {
                    *o = 2.0 * (b - a);
                }
            }
            Loss::CrossEntropy => {
                for ((o, &a), &b) in out.iter_mut().zip(u).zip(v) {
                    let b = clamp_prob(b);
                    *o = -a / b + (1.0 - a) / (1.0 - b);
                }
            }
            Loss::Correntropy { sigma } => {
                let s2 = sigma * sigma;
                for ((o, a), b) in out.iter_mut().zip(u).zip(v) {
                    let alpha = a - b;
                    *o = -alpha * gaussian_kernel(alpha, sigma) / s2;
                }
            }
        }
    }

    fn check(&self, u: &[f64], v: &[f64]) -> Result<()> {
        if u.len() != v.len() {
            return Err(Error::shape("loss", (1, u.len()), (1, v.len())));
        }
        self.check_targets(u)
    }

    fn check_batch(&self, targets: &Matrix, outputs: &Matrix) -> Result<()> {
        if targets.shape() != outputs.shape() {
            return Err(Error::shape("loss", targets.shape(), outputs.shape()));
        }
        self.check_targets(targets.as_slice())
    }

    fn check_targets(&self, u: &[f64]) -> Result<()> {
        if *self == Loss::CrossEntropy {
            if let Some(bad) = u.iter().find(|a| !(0.0..=1.0).contains(*a)) {
                return Err(Error::InvalidArgument(format!(
                    "cross-entropy targets must lie in [0, 1], found {bad}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Loss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mse" => Ok(Loss::Mse),
            "xent" | "ce" | "crossentropy" | "cross-entropy" => Ok(Loss::CrossEntropy),
            "corr" | "correntropy" | "mcc" => Ok(Loss::correntropy()),
            _ => Err(Error::InvalidArgument(format!(
                "unknown loss '{s}' (expected mse, xent or corr)"
            ))),
        }
    }
}
