//! Dense autoencoders: assembly, backpropagation, training, greedy stacking,
//! gradient checking and persistence.

mod backprop;
mod gradcheck;
mod io;
mod model;
mod stack;
mod train;

pub use backprop::{backward, objective, Gradients, ObjectiveValue};
pub use gradcheck::{
    grad_check, grad_check_with, gradient_check_suite, suite_regularizers, GradCheckCase, GradCheckOptions,
    GradCheckResult, DEFAULT_GRADCHECK_EPS, DEFAULT_GRADCHECK_TOLERANCE, SUITE_REGULARIZERS,
};
pub use io::{load_model, model_to_string, parse_model, save_model, MAGIC};
pub use model::{build_autoencoder, AeConfig, ForwardCache, Layer, Network};
pub use stack::{stack_pretrain, stage_config, StackedAutoencoder};
pub use train::{
    mean_loss, mean_loss_against, train, train_observed, TrainConfig, TrainObserver, TrainReport,
    DEFAULT_BATCH_SIZE, DEFAULT_EPOCHS,
};
