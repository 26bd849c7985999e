//! Saving and loading models in the AEFv1 text format, and writing IDX files.

use aefuse::data::{self, IDX_IMAGES_MAGIC};
use aefuse::network::{build_autoencoder, load_model, model_to_string, save_model};
use aefuse::{AeConfig, Error, Rng};

pub fn run_example() -> aefuse::Result<()> {
    let dir = std::env::temp_dir().join(format!("aefuse-model-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;

    let net = build_autoencoder(&AeConfig::new(6, 2).with_hidden(&[4]).tied(true), &mut Rng::new(12))?;
    let path = dir.join("model.aef");
    save_model(&net, &path)?;
    let loaded = load_model(&path)?;
    assert_eq!(loaded, net);
    let text = model_to_string(&loaded);
    println!("{} parameters, {} bytes; header:", net.parameter_count(), text.len());
    for line in text.lines().take(4) {
        println!("  {line}");
    }

    // three 2x2 images
    let pixels: Vec<u8> = (0..12).map(|i| i * 20).collect();
    let idx = dir.join("tiny-images-idx3-ubyte");
    data::write_idx(&idx, &[3, 2, 2], &pixels)?;
    let t = data::read_idx(&idx, IDX_IMAGES_MAGIC)?;
    println!("IDX dims {:?}, first pixels {:?}", t.dims, &t.data[..4]);

    std::fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(())
}

fn main() -> aefuse::Result<()> {
    run_example()
}
