//! Regenerates the files under `tests/fixtures`.
//!
//! ```text
//! cargo run -p freqvqa-cli --example make_fixtures
//! ```
//!
//! The golden score is pinned separately by running `freqvqa score
//! --no-timing` on the result; regenerating fixtures invalidates it.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use freqvqa::media::write_y4m;
use freqvqa::predictor::ModelBundle;
use freqvqa::synth::{synthetic_clip, synthetic_features};
use freqvqa::tensor::write_tensor_file;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    std::fs::create_dir_all(&dir)?;

    let clip = synthetic_clip(64, 48, 24, 7);
    write_y4m(&clip, BufWriter::new(File::create(dir.join("clip.y4m"))?))?;
    write_tensor_file(&synthetic_features(16, 16, 42), dir.join("features.fgt"))?;
    ModelBundle::random(42, 16, 64, 16).save(dir.join("model.fgb"))?;
    println!("fixtures written to {}", dir.display());
    Ok(())
}
