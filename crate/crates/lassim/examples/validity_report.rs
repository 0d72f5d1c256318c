//! Run the complete validity experiment on a generated corpus and print
//! the per-combination report table. With default intensities the
//! residual-metric divergence dominates the pixel-metric divergence in
//! every row.
//!
//! ```bash
//! cargo run --release --example validity_report [image_dir]
//! ```
//!
//! Pass a directory of your own PNG/PPM images to run on real data.

use std::path::PathBuf;

use lassim::harness::{render_markdown, run_validity_experiment, ExperimentConfig};
use lassim::synth::generate_corpus;

fn main() -> lassim::Result<()> {
    let root = std::env::temp_dir().join("lassim_validity");
    let source_dir: PathBuf = match std::env::args().nth(1) {
        Some(dir) => dir.into(),
        None => {
            let src = root.join("src");
            generate_corpus(&src, 40, 480, 272, 5)?;
            src
        }
    };

    let cfg = ExperimentConfig {
        source_dir,
        output_dir: root.join("out"),
        sample_count: 40,
        ..ExperimentConfig::default()
    };
    let report = run_validity_experiment(&cfg)?;
    print!("{}", render_markdown(&report));
    println!(
        "\nseparation (JS_LaSSIM >= JS_SSIM in every row): {}",
        report.separation_holds()
    );
    println!("artifacts under {}", cfg.output_dir.display());
    Ok(())
}
