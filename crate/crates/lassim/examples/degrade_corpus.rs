//! Generate a small synthetic corpus and materialize the clean, blurred
//! and deformed-then-blurred image sets on disk, with a manifest
//! recording every spec and per-image seed.
//!
//! ```bash
//! cargo run --release --example degrade_corpus [out_dir]
//! ```

use std::path::PathBuf;

use lassim::degrade::{make_triplet_sets, TripletConfig};
use lassim::synth::generate_corpus;

fn main() -> lassim::Result<()> {
    let root: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("lassim_degrade"));
    let src = root.join("src");
    let out = root.join("sets");

    generate_corpus(&src, 8, 480, 272, 11)?;
    let manifest = make_triplet_sets(&src, &out, &TripletConfig::preset(11))?;

    println!(
        "wrote {} images into each of {} sets:",
        manifest.images.len(),
        manifest.set_dirs.len()
    );
    for dir in &manifest.set_dirs {
        println!("  {}", out.join(dir).display());
    }
    println!("manifest: {}", out.join("manifest.json").display());
    Ok(())
}
