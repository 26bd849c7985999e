//! Stochastic input corruption for denoising autoencoders.
//!
//! Only training inputs are corrupted; the trainer always scores the
//! reconstruction against the clean sample.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rng};

pub const DEFAULT_MASKING_FRACTION: f64 = 0.25;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Corruption {
    #[default]
    None,
    /// Zeroes exactly `⌊fraction·d⌋` distinct positions of each sample.
    Masking { fraction: f64 },
    /// Adds independent `N(0, sd²)` noise to every component.
    Gaussian { sd: f64 },
    /// Sets exactly `⌊fraction·d⌋` distinct positions to `min` or `max`
    /// with equal probability.
    SaltPepper { fraction: f64, min: f64, max: f64 },
}

impl Corruption {
    pub fn masking(fraction: f64) -> Self {
        Corruption::Masking { fraction }
    }

    pub fn salt_pepper(fraction: f64) -> Self {
        Corruption::SaltPepper {
            fraction,
            min: 0.0,
            max: 1.0,
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Corruption::None)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Corruption::Masking { fraction } | Corruption::SaltPepper { fraction, .. }
                if !(0.0..=1.0).contains(&fraction) =>
            {
                Err(Error::Config(format!("corruption fraction must lie in [0, 1], got {fraction}")))
            }
            Corruption::Gaussian { sd } if !(sd >= 0.0) => {
                Err(Error::Config(format!("noise deviation must be nonnegative, got {sd}")))
            }
            _ => Ok(()),
        }
    }

    /// Corrupts one sample in place.
    pub fn corrupt_in_place(&self, x: &mut [f64], rng: &mut Rng) {
        let d = x.len();
        match *self {
            Corruption::None => {}
            Corruption::Masking { fraction } => {
                let count = ((fraction * d as f64).floor() as usize).min(d);
                for i in rng.sample_indices(d, count) {
                    x[i] = 0.0;
                }
            }
            Corruption::Gaussian { sd } => {
                if sd > 0.0 {
                    for v in x.iter_mut() {
                        *v += sd * rng.standard_normal();
                    }
                }
            }
            Corruption::SaltPepper { fraction, min, max } => {
                let count = ((fraction * d as f64).floor() as usize).min(d);
                for i in rng.sample_indices(d, count) {
                    x[i] = if rng.coin() { max } else { min };
                }
            }
        }
    }

    pub fn corrupt(&self, x: &[f64], rng: &mut Rng) -> Vec<f64> {
        let mut out = x.to_vec();
        self.corrupt_in_place(&mut out, rng);
        out
    }

    /// Corrupts every row of a batch independently.
    pub fn corrupt_batch(&self, batch: &Matrix, rng: &mut Rng) -> Matrix {
        let mut out = batch.clone();
        if !self.is_none() {
            for i in 0..out.rows() {
                self.corrupt_in_place(out.row_mut(i), rng);
            }
        }
        out
    }

    pub fn name(&self) -> &'static str {
        match self {
            Corruption::None => "none",
            Corruption::Masking { .. } => "masking",
            Corruption::Gaussian { .. } => "gaussian",
            Corruption::SaltPepper { .. } => "saltpepper",
        }
    }

    /// Fraction for masking/salt-and-pepper, deviation for Gaussian noise.
    pub fn level(&self) -> f64 {
        match *self {
            Corruption::None => 0.0,
            Corruption::Masking { fraction } | Corruption::SaltPepper { fraction, .. } => fraction,
            Corruption::Gaussian { sd } => sd,
        }
    }

    /// Builds a corruption from its CLI name and level.
    pub fn from_name(name: &str, level: f64) -> Result<Self> {
        let c = match name.trim().to_ascii_lowercase().as_str() {
            "none" => Corruption::None,
            "masking" => Corruption::masking(level),
            "gaussian" => Corruption::Gaussian { sd: level },
            "saltpepper" | "salt-pepper" => Corruption::salt_pepper(level),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown corruption '{other}' (expected masking, gaussian or saltpepper)"
                )))
            }
        };
        c.validate()?;
        Ok(c)
    }
}

impl fmt::Display for Corruption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Corruption::None => f.write_str("none"),
            other => write!(f, "{}:{}", other.name(), other.level()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(d: usize) -> Vec<f64> {
        // strictly inside (0, 1) so salt, pepper and masking always change a value
        (0..d).map(|i| 0.05 + 0.9 * i as f64 / d as f64).collect()
    }

    #[test]
    fn masking_extremes() {
        let x = sample(8);
        let mut rng = Rng::new(0);
        assert_eq!(Corruption::masking(0.0).corrupt(&x, &mut rng), x);
        assert_eq!(Corruption::masking(1.0).corrupt(&x, &mut rng), vec![0.0; 8]);
    }

    #[test]
    fn masking_half_of_four() {
        let x = sample(4);
        let mut rng = Rng::new(12);
        let mut hits = [0usize; 4];
        for _ in 0..1000 {
            let y = Corruption::masking(0.5).corrupt(&x, &mut rng);
            let zeroed: Vec<usize> = (0..4).filter(|&i| y[i] == 0.0).collect();
            assert_eq!(zeroed.len(), 2);
            for i in zeroed {
                hits[i] += 1;
            }
        }
        // each position is chosen with probability 1/2
        assert!(hits.iter().all(|&h| (400..600).contains(&h)), "{hits:?}");
    }

    #[test]
    fn untouched_positions_are_bit_identical() {
        let x = sample(10);
        let mut rng = Rng::new(4);
        for kind in [Corruption::masking(0.35), Corruption::salt_pepper(0.35)] {
            for _ in 0..50 {
                let y = kind.corrupt(&x, &mut rng);
                let changed = x.iter().zip(&y).filter(|(a, b)| a.to_bits() != b.to_bits()).count();
                // ⌊0.35·10⌋ = 3
                assert_eq!(changed, 3);
            }
        }
    }

    #[test]
    fn salt_pepper_values() {
        let x = sample(20);
        let y = Corruption::salt_pepper(0.5).corrupt(&x, &mut Rng::new(2));
        for (a, b) in x.iter().zip(&y) {
            assert!(a == b || *b == 0.0 || *b == 1.0);
        }
    }

    #[test]
    fn gaussian_zero_noise_is_identity() {
        let x = sample(6);
        assert_eq!(Corruption::Gaussian { sd: 0.0 }.corrupt(&x, &mut Rng::new(1)), x);
        let y = Corruption::Gaussian { sd: 0.1 }.corrupt(&x, &mut Rng::new(1));
        assert!(x.iter().zip(&y).all(|(a, b)| a != b));
    }

    #[test]
    fn validation() {
        assert!(Corruption::masking(1.5).validate().is_err());
        assert!(Corruption::Gaussian { sd: -0.1 }.validate().is_err());
        assert!(Corruption::from_name("masking", 0.25).is_ok());
        assert!(Corruption::from_name("blur", 0.25).is_err());
    }

    #[test]
    fn batch_rows_corrupted_independently() {
        let batch = Matrix::from_rows(&[sample(8), sample(8)]).unwrap();
        let out = Corruption::masking(0.5).corrupt_batch(&batch, &mut Rng::new(3));
        for i in 0..2 {
            assert_eq!(out.row(i).iter().filter(|v| **v == 0.0).count(), 4);
        }
    }
}
