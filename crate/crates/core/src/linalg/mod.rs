//! Dense matrices and the seedable random source everything else draws from.

mod matrix;
mod rng;

pub use matrix::Matrix;
pub use rng::Rng;
