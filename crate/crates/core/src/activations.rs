//! Elementwise activation functions and their derivatives.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const SELU_LAMBDA: f64 = 1.0507;
pub const SELU_ALPHA: f64 = 1.6733;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Activation {
    Linear,
    /// Iverson bracket `[z > 0]`. Forward only: the derivative is zero.
    Binary,
    Relu,
    Selu { lambda: f64, alpha: f64 },
    Sigmoid,
    Tanh,
}

impl Activation {
    /// SELU with the usual constants.
    pub fn selu() -> Self {
        Activation::Selu {
            lambda: SELU_LAMBDA,
            alpha: SELU_ALPHA,
        }
    }

    pub fn selu_with(lambda: f64, alpha: f64) -> Result<Self> {
        if !(lambda > 1.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "SELU needs lambda > 1 and finite alpha, got lambda={lambda}, alpha={alpha}"
            )));
        }
        Ok(Activation::Selu { lambda, alpha })
    }

    #[inline]
    pub fn apply(&self, z: f64) -> f64 {
        match *self {
            Activation::Linear => z,
            Activation::Binary => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Relu => {
                if z > 0.0 {
                    z
                } else {
                    0.0
                }
            }
            Activation::Selu { lambda, alpha } => {
                if z > 0.0 {
                    lambda * z
                } else {
                    lambda * alpha * z.exp_m1()
                }
            }
            Activation::Sigmoid => sigmoid(z),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative with respect to the pre-activation. At the ReLU/SELU kink
    /// the right-hand limit is returned.
    #[inline]
    pub fn derivative(&self, z: f64) -> f64 {
        match *self {
            Activation::Linear => 1.0,
            Activation::Binary => 0.0,
            Activation::Relu => {
                if z >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Selu { lambda, alpha } => {
                if z >= 0.0 {
                    lambda
                } else {
                    lambda * alpha * z.exp()
                }
            }
            Activation::Sigmoid => {
                let s = sigmoid(z);
                s * (1.0 - s)
            }
            Activation::Tanh => {
                let t = z.tanh();
                1.0 - t * t
            }
        }
    }

    /// Second derivative, needed by the contraction penalty's gradient.
    #[inline]
    pub fn second_derivative(&self, z: f64) -> f64 {
        match *self {
            Activation::Linear | Activation::Binary | Activation::Relu => 0.0,
            Activation::Selu { lambda, alpha } => {
                if z >= 0.0 {
                    0.0
                } else {
                    lambda * alpha * z.exp()
                }
            }
            Activation::Sigmoid => {
                let s = sigmoid(z);
                s * (1.0 - s) * (1.0 - 2.0 * s)
            }
            Activation::Tanh => {
                let t = z.tanh();
                -2.0 * t * (1.0 - t * t)
            }
        }
    }

    pub fn activate(&self, z: &Matrix) -> Matrix {
        z.map(|v| self.apply(v))
    }

    pub fn activate_deriv(&self, z: &Matrix) -> Matrix {
        z.map(|v| self.derivative(v))
    }

    /// Closed output interval for bounded activations.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match self {
            Activation::Sigmoid | Activation::Binary => Some((0.0, 1.0)),
            Activation::Tanh => Some((-1.0, 1.0)),
            _ => None,
        }
    }

    /// True for the saturating activations that sparsity and contraction
    /// penalties are defined for.
    pub fn is_sigmoidal(&self) -> bool {
        matches!(self, Activation::Sigmoid | Activation::Tanh)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Activation::Linear => "linear",
            Activation::Binary => "binary",
            Activation::Relu => "relu",
            Activation::Selu { .. } => "selu",
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Activation::Selu { lambda, alpha }
                if lambda != SELU_LAMBDA || alpha != SELU_ALPHA =>
            {
                write!(f, "selu:{lambda:?}:{alpha:?}")
            }
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Activation {
    type Err = Error;

    /// Accepts the plain names plus `selu:<lambda>:<alpha>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(Activation::Linear),
            "binary" => Ok(Activation::Binary),
            "relu" => Ok(Activation::Relu),
            "selu" => Ok(Activation::selu()),
            "sigmoid" => Ok(Activation::Sigmoid),
            "tanh" => Ok(Activation::Tanh),
            other => {
                if let Some(params) = other.strip_prefix("selu:") {
                    let mut it = params.split(':').map(str::parse::<f64>);
                    if let (Some(Ok(lambda)), Some(Ok(alpha)), None) = (it.next(), it.next(), it.next())
                    {
                        return Activation::selu_with(lambda, alpha);
                    }
                }
                Err(Error::InvalidArgument(format!(
                    "unknown activation '{s}' (expected linear, binary, relu, selu, sigmoid or tanh)"
                )))
            }
        }
    }
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rng;

    const ALL: [Activation; 6] = [
        Activation::Linear,
        Activation::Binary,
        Activation::Relu,
        Activation::Selu {
            lambda: SELU_LAMBDA,
            alpha: SELU_ALPHA,
        },
        Activation::Sigmoid,
        Activation::Tanh,
    ];

    fn central_diff(f: impl Fn(f64) -> f64, z: f64) -> f64 {
        let h = 1e-6;
        (f(z + h) - f(z - h)) / (2.0 * h)
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(Activation::Sigmoid.apply(0.0), 0.5);
        assert_eq!(Activation::Tanh.apply(0.0), 0.0);
        assert_eq!(Activation::selu().apply(0.0), 0.0);
        assert_eq!(Activation::Relu.apply(0.0), 0.0);
    }

    #[test]
    fn piecewise_cases() {
        assert_eq!(Activation::Relu.apply(-2.0), 0.0);
        assert_eq!(Activation::Relu.apply(3.0), 3.0);
        assert_eq!(Activation::Binary.apply(-0.1), 0.0);
        assert_eq!(Activation::Binary.apply(0.1), 1.0);
    }

    #[test]
    fn selu_negative_asymptote() {
        // lambda * alpha = 1.0507 * 1.6733 = 1.75813631
        let v = Activation::selu().apply(-30.0);
        assert!((v + 1.7581).abs() < 1e-4, "{v}");
    }

    #[test]
    fn derivative_at_zero() {
        assert_eq!(Activation::Sigmoid.derivative(0.0), 0.25);
        assert_eq!(Activation::Tanh.derivative(0.0), 1.0);
        assert_eq!(Activation::Relu.derivative(0.0), 1.0);
        assert_eq!(Activation::selu().derivative(0.0), SELU_LAMBDA);
        assert_eq!(Activation::Binary.derivative(0.3), 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = Rng::new(2024);
        for kind in ALL.iter().filter(|k| **k != Activation::Binary) {
            for _ in 0..100 {
                let mut z = 8.0 * rng.next_f64() - 4.0;
                if z.abs() < 1e-3 {
                    z += 0.01;
                }
                let numeric = central_diff(|t| kind.apply(t), z);
                let analytic = kind.derivative(z);
                let rel = (numeric - analytic).abs() / analytic.abs().max(numeric.abs()).max(1e-12);
                assert!(rel <= 1e-6, "{kind} at {z}: {analytic} vs {numeric}");

                let numeric2 = central_diff(|t| kind.derivative(t), z);
                let analytic2 = kind.second_derivative(z);
                assert!(
                    (numeric2 - analytic2).abs() <= 1e-6 * analytic2.abs().max(1.0),
                    "{kind}'' at {z}"
                );
            }
        }
    }

    #[test]
    fn output_ranges() {
        let mut rng = Rng::new(1);
        for _ in 0..1000 {
            let z = 40.0 * rng.next_f64() - 20.0;
            let s = Activation::Sigmoid.apply(z);
            assert!(s > 0.0 && s < 1.0);
            let t = Activation::Tanh.apply(z / 10.0);
            assert!(t > -1.0 && t < 1.0);
            assert!(Activation::Relu.apply(z) >= 0.0);
            assert!(Activation::selu().apply(z) >= -SELU_LAMBDA * SELU_ALPHA * (1.0 + 1e-12));
            assert!((Activation::Tanh.apply(-z) + Activation::Tanh.apply(z)).abs() <= 1e-15);
        }
    }

    #[test]
    fn names_round_trip() {
        for kind in ALL {
            assert_eq!(kind.to_string().parse::<Activation>().unwrap(), kind);
        }
        let custom = Activation::selu_with(1.5, 2.0).unwrap();
        assert_eq!(custom.to_string().parse::<Activation>().unwrap(), custom);
        assert!(Activation::selu_with(0.9, 1.0).is_err());
        assert!("softplus".parse::<Activation>().is_err());
    }

    #[test]
    fn sigmoid_is_increasing_and_stable() {
        assert!(Activation::Sigmoid.apply(1.0) > Activation::Sigmoid.apply(-1.0));
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(800.0) <= 1.0);
        assert!(sigmoid(-800.0).is_finite());
    }
}
