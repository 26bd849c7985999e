#[allow(dead_code)]
#[path = "../examples/basic_autoencoder.rs"]
mod basic_autoencoder;

#[test]
fn basic_autoencoder_runs() {
    basic_autoencoder::run_example().expect("basic_autoencoder example should run");
}

#[allow(dead_code)]
#[path = "../examples/sparse_autoencoder.rs"]
mod sparse_autoencoder;

#[test]
fn sparse_autoencoder_runs() {
    sparse_autoencoder::run_example().expect("sparse_autoencoder example should run");
}

#[allow(dead_code)]
#[path = "../examples/contractive_autoencoder.rs"]
mod contractive_autoencoder;

#[test]
fn contractive_autoencoder_runs() {
    contractive_autoencoder::run_example().expect("contractive_autoencoder example should run");
}

#[allow(dead_code)]
#[path = "../examples/denoising_autoencoder.rs"]
mod denoising_autoencoder;

#[test]
fn denoising_autoencoder_runs() {
    denoising_autoencoder::run_example().expect("denoising_autoencoder example should run");
}

#[allow(dead_code)]
#[path = "../examples/robust_autoencoder.rs"]
mod robust_autoencoder;

#[test]
fn robust_autoencoder_runs() {
    robust_autoencoder::run_example().expect("robust_autoencoder example should run");
}

#[allow(dead_code)]
#[path = "../examples/stacked_autoencoder.rs"]
mod stacked_autoencoder;

#[test]
fn stacked_autoencoder_runs() {
    stacked_autoencoder::run_example().expect("stacked_autoencoder example should run");
}

#[allow(dead_code)]
#[path = "../examples/pca_vs_linear_autoencoder.rs"]
mod pca_vs_linear_autoencoder;

#[test]
fn pca_vs_linear_autoencoder_runs() {
    pca_vs_linear_autoencoder::run_example().expect("pca_vs_linear_autoencoder example should run");
}

#[allow(dead_code)]
#[path = "../examples/wdbc_scatter.rs"]
mod wdbc_scatter;

#[test]
fn wdbc_scatter_runs() {
    wdbc_scatter::run_example().expect("wdbc_scatter example should run");
}

#[allow(dead_code)]
#[path = "../examples/gradient_check.rs"]
mod gradient_check;

#[test]
fn gradient_check_runs() {
    gradient_check::run_example().expect("gradient_check example should run");
}

#[allow(dead_code)]
#[path = "../examples/optimizers.rs"]
mod optimizers;

#[test]
fn optimizers_runs() {
    optimizers::run_example().expect("optimizers example should run");
}

#[allow(dead_code)]
#[path = "../examples/model_io.rs"]
mod model_io;

#[test]
fn model_io_runs() {
    model_io::run_example().expect("model_io example should run");
}
