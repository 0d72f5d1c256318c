//! Build the two score distributions the validity experiment compares -
//! metric(GT, blur) and metric(GT, deform+blur) - and measure how far
//! apart they are with the Jensen-Shannon divergence. Exports both
//! histograms as CSV for plotting overlays.
//!
//! ```bash
//! cargo run --release --example score_distributions [out_dir]
//! ```

use std::path::PathBuf;

use lassim::degrade::{
    elastic_transform, gaussian_blur, make_displacement_field, derive_seed, BlurSpec,
    ElasticSpec, Intensity,
};
use lassim::stats::{js_divergence, ScoreDistribution};
use lassim::synth::natural_image;
use lassim::{lassim, ssim, PyramidParams, SsimParams};

fn main() -> lassim::Result<()> {
    let out_dir: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("lassim_distributions"));
    std::fs::create_dir_all(&out_dir)?;

    let blur = BlurSpec::preset(Intensity::H);
    let elastic = ElasticSpec::preset(Intensity::M, 0);
    let pyr = PyramidParams::default();
    let params = SsimParams::default();

    let n = 60;
    let mut ssim_blur = Vec::new();
    let mut ssim_def = Vec::new();
    let mut lassim_blur = Vec::new();
    let mut lassim_def = Vec::new();
    for i in 0..n {
        let gt = natural_image(480, 272, derive_seed(5, i));
        let blurred = gaussian_blur(&gt, &blur)?;
        let field = make_displacement_field(480, 272, &elastic.with_seed(derive_seed(99, i)))?;
        let degraded = gaussian_blur(&elastic_transform(&gt, &field)?, &blur)?;

        ssim_blur.push(ssim(&gt, &blurred, &params)?.value());
        ssim_def.push(ssim(&gt, &degraded, &params)?.value());
        lassim_blur.push(lassim(&gt, &blurred, 3, &pyr, &params)?.value());
        lassim_def.push(lassim(&gt, &degraded, 3, &pyr, &params)?.value());
    }

    for (name, blur_scores, def_scores) in [
        ("ssim", &ssim_blur, &ssim_def),
        ("lassim", &lassim_blur, &lassim_def),
    ] {
        let p = ScoreDistribution::from_scores(blur_scores)?;
        let q = ScoreDistribution::from_scores(def_scores)?;
        let js = js_divergence(&p, &q)?;
        println!("{name:<7} JS(blur vs deform+blur) = {js:.3}");
        std::fs::write(out_dir.join(format!("{name}_blur.csv")), p.to_csv())?;
        std::fs::write(out_dir.join(format!("{name}_deform_blur.csv")), q.to_csv())?;
    }
    println!("histogram CSVs written to {}", out_dir.display());
    Ok(())
}
