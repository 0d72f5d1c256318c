//! Score a clean image against a blurred and a deformed-then-blurred
//! version with both metrics, then print a per-level profile.
//!
//! The blurred pair keeps a high residual-space score while the pixel
//! SSIM collapses; the deformed pair drops in residual space too.
//!
//! ```bash
//! cargo run --release --example compare_metrics
//! ```

use lassim::degrade::{
    elastic_transform, gaussian_blur, make_displacement_field, BlurSpec, ElasticSpec, Intensity,
};
use lassim::synth::natural_image;
use lassim::{lassim, lassim_profile, ssim, PyramidParams, SsimParams};

fn main() -> lassim::Result<()> {
    let clean = natural_image(480, 272, 7);
    let blur = BlurSpec::preset(Intensity::H);
    let blurred = gaussian_blur(&clean, &blur)?;
    let elastic = ElasticSpec::preset(Intensity::M, 42);
    let field = make_displacement_field(480, 272, &elastic)?;
    let deformed_blurred = gaussian_blur(&elastic_transform(&clean, &field)?, &blur)?;

    let pyr = PyramidParams::with_levels(5);
    let params = SsimParams::default();

    println!("pair                      ssim      lassim@3");
    for (name, other) in [("clean vs blurred", &blurred), ("clean vs deform+blur", &deformed_blurred)] {
        let s = ssim(&clean, other, &params)?;
        let l = lassim(&clean, other, 3, &pyr, &params)?;
        println!("{name:<25} {s}  {l}");
    }

    println!("\nper-level profile of clean vs blurred (level 0 = pixel-space SSIM):");
    for (level, score) in lassim_profile(&clean, &blurred, 0..=4, &pyr, &params)? {
        println!("  level {level}: {score}");
    }
    Ok(())
}
