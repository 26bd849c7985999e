//! Two-dimensional codes of the breast cancer data, drawn as an SVG scatter
//! plot and scored with a nearest-centroid classifier.

use aefuse::cli::render::scatter_svg;
use aefuse::data;
use aefuse::network::{build_autoencoder, train};
use aefuse::{AeConfig, Error, OptimizerKind, RegularizerConfig, Rng, TrainConfig};

pub fn run_example() -> aefuse::Result<()> {
    let ds = data::load_wdbc(data::bundled_data_dir().join("wdbc.csv"))?;
    let labels = ds.labels.clone().unwrap_or_default();
    println!("{} samples, {} features, majority class {:.1}%", ds.len(), ds.dim(), 100.0 * data::majority_fraction(&labels));

    let cfg = AeConfig::new(ds.dim(), 2).with_regularizers(RegularizerConfig {
        weight_decay: 0.01,
        ..RegularizerConfig::none()
    });
    let mut net = build_autoencoder(&cfg, &mut Rng::new(9))?;
    train(&mut net, &ds.features, &cfg, &TrainConfig::new(OptimizerKind::rmsprop(), 200, 9).with_batch_size(32))?;

    let codes = net.encode(&ds.features)?;
    println!("nearest-centroid accuracy on codes {:.1}%", 100.0 * data::nearest_centroid_accuracy(&codes, &labels)?);
    let out = std::env::temp_dir().join("aefuse-wdbc.svg");
    std::fs::write(&out, scatter_svg(&codes, &labels, "WDBC codes")?).map_err(|e| Error::io(&out, e))?;
    println!("wrote {}", out.display());
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
