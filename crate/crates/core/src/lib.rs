//! Autoencoders for feature fusion.
//!
//! Dense autoencoders with the usual regularized and noise-tolerant variants
//! (weight decay, sparse, contractive, denoising, robust), tied weights,
//! greedy layer-wise stacking, and an exact PCA baseline to compare against.

// `!(x > y)` guards also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod activations;
pub mod cli;
pub mod corruption;
pub mod data;
pub mod error;
pub mod linalg;
pub mod losses;
pub mod network;
pub mod optim;
pub mod pca;
pub mod regularizers;

pub use activations::Activation;
pub use corruption::Corruption;
pub use data::Dataset;
pub use error::{Error, Result};
pub use linalg::{Matrix, Rng};
pub use losses::Loss;
pub use network::{AeConfig, Network, TrainConfig, TrainReport};
pub use optim::{Optimizer, OptimizerKind};
pub use pca::PcaModel;
pub use regularizers::{RegularizerConfig, Sparsity};
