//! A global luminance offset lives entirely in the pyramid top, so the
//! residual metric ignores it while pixel-space SSIM is penalized.
//!
//! ```bash
//! cargo run --release --example offset_invariance
//! ```

use lassim::synth::natural_image;
use lassim::{lassim, ssim, PyramidParams, SsimParams};

fn main() -> lassim::Result<()> {
    let img = natural_image(480, 272, 1);
    let pyr = PyramidParams::default();
    let params = SsimParams::default();

    println!("offset    ssim      lassim@1  lassim@3");
    for c in [-50.0, -10.0, 10.0, 50.0] {
        let shifted = img.offset(c);
        let s = ssim(&img, &shifted, &params)?;
        let l1 = lassim(&img, &shifted, 1, &pyr, &params)?;
        let l3 = lassim(&img, &shifted, 3, &pyr, &params)?;
        println!("{c:<+9} {s}  {l1}  {l3}");
    }
    Ok(())
}
