use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Matrix;
use crate::error::{Error, Result};

/// Seedable pseudo-random source.
///
/// Backed by ChaCha8 seeded through `seed_from_u64`; uniform draws take the
/// top 53 bits of a `u64`, normal draws use the Box-Muller transform on two
/// uniforms (the spare value is cached). Streams are reproducible from the
/// seed on every platform this crate builds for.
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.inner.gen::<u64>() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.gen()
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.next_f64() < 0.5
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // 1 - u keeps the log argument in (0, 1]
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(radius * angle.sin());
        radius * angle.cos()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64, rows: usize, cols: usize) -> Result<Matrix> {
        if !(lo <= hi) {
            return Err(Error::InvalidArgument(format!(
                "uniform bounds out of order: lo={lo} > hi={hi}"
            )));
        }
        let width = hi - lo;
        let data = (0..rows * cols)
            .map(|_| lo + width * self.next_f64())
            .collect();
        Matrix::from_vec(rows, cols, data)
    }

    pub fn normal(&mut self, mean: f64, sd: f64, rows: usize, cols: usize) -> Result<Matrix> {
        if !(sd >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "standard deviation must be nonnegative, got {sd}"
            )));
        }
        let data = (0..rows * cols)
            .map(|_| mean + sd * self.standard_normal())
            .collect();
        Matrix::from_vec(rows, cols, data)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.inner);
    }

    /// `k` distinct indices from `0..n`, uniformly without replacement.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        rand::seq::index::sample(&mut self.inner, n, k).into_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_uniform_is_zero() {
        let m = Rng::new(1).uniform(0.0, 0.0, 3, 4).unwrap();
        assert_eq!(m, Matrix::zeros(3, 4));
    }

    #[test]
    fn uniform_rejects_reversed_bounds() {
        assert!(Rng::new(1).uniform(1.0, 0.0, 1, 1).is_err());
    }

    #[test]
    fn same_seed_same_stream() {
        let a = Rng::new(42).uniform(-1.0, 1.0, 5, 5).unwrap();
        let b = Rng::new(42).uniform(-1.0, 1.0, 5, 5).unwrap();
        assert_eq!(a, b);
        let a = Rng::new(7).normal(0.0, 1.0, 3, 7).unwrap();
        let b = Rng::new(7).normal(0.0, 1.0, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(Rng::new(8).normal(0.0, 1.0, 3, 7).unwrap(), a);
    }

    #[test]
    fn uniform_range_and_mean() {
        let m = Rng::new(3).uniform(0.0, 1.0, 100, 100).unwrap();
        assert!(m.as_slice().iter().all(|&v| (0.0..1.0).contains(&v)));
        let mean = m.sum() / m.len() as f64;
        // standard error sqrt(1/12 / 1e4) ~ 0.003
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn normal_moments() {
        let m = Rng::new(5).normal(0.0, 1.0, 100, 100).unwrap();
        let n = m.len() as f64;
        let mean = m.sum() / n;
        let var = m.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((var - 1.0).abs() < 0.1, "variance {var}");
        assert!(mean.abs() < 0.05);
    }

    #[test]
    fn zero_sd_is_constant() {
        let m = Rng::new(9).normal(2.5, 0.0, 2, 3).unwrap();
        assert_eq!(m, Matrix::filled(2, 3, 2.5));
        assert!(Rng::new(9).normal(0.0, -1.0, 1, 1).is_err());
    }

    #[test]
    fn sampled_indices_are_distinct() {
        let mut idx = Rng::new(11).sample_indices(50, 20);
        idx.sort_unstable();
        idx.dedup();
        assert_eq!(idx.len(), 20);
        assert!(idx.iter().all(|&i| i < 50));
    }
}
