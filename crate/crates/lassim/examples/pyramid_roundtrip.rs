//! Build a Laplacian pyramid, inspect the residual planes, verify the
//! exact-reconstruction property, and export viewable residual PNGs.
//!
//! ```bash
//! cargo run --release --example pyramid_roundtrip [out_dir]
//! ```

use std::path::PathBuf;

use lassim::pyramid::{build_pyramid, reconstruct, residual_display_image};
use lassim::synth::natural_image;
use lassim::{io, PyramidParams};

fn main() -> lassim::Result<()> {
    let out_dir: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("lassim_pyramid"));
    std::fs::create_dir_all(&out_dir)?;

    let img = natural_image(480, 272, 3);
    let params = PyramidParams::with_levels(4);
    let pyr = build_pyramid(&img, &params)?;

    println!("level  size        residual rms");
    for (l, res) in pyr.residuals.iter().enumerate() {
        let rms = (res.as_slice().iter().map(|v| v * v).sum::<f64>()
            / res.as_slice().len() as f64)
            .sqrt();
        println!(
            "{l:<6} {:>4}x{:<6} {rms:.3}",
            res.width(),
            res.height()
        );
        io::save_image(
            &out_dir.join(format!("residual_{l}.png")),
            &residual_display_image(res),
        )?;
    }
    io::save_image(&out_dir.join("top.png"), &pyr.top.clone().into_image()?)?;

    let back = reconstruct(&pyr, &params.kernel)?;
    let max_err = img
        .as_slice()
        .iter()
        .zip(back.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    println!("max reconstruction error: {max_err:.2e}");
    println!("residual planes written to {}", out_dir.display());
    Ok(())
}
