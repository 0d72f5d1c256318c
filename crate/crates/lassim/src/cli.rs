//! Command-line front end. Scores go to stdout in fixed formats;
//! warnings and progress go to stderr.
//!
//! Exit codes: 0 on success, 1 on usage/IO/decode errors, and 2 when
//! `validate` ran but the divergence separation property did not hold.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::degrade::{self, BlurSpec, ElasticSpec, Intensity, TripletConfig};
use crate::error::Error;
use crate::harness::{self, ExperimentConfig, MetricKind};
use crate::image::to_luma;
use crate::io;
use crate::metrics::{self, ChannelPolicy, SsimParams, WindowKind};
use crate::pyramid::{self, PyramidParams};
use crate::synth;

#[derive(Parser, Debug)]
#[command(
    name = "lassim",
    version,
    about = "Structure-preservation scoring on Laplacian-pyramid residuals",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the SSIM score of two same-sized images
    Ssim(SsimCmd),
    /// Print the residual-space SSIM score of two same-sized images
    Lassim(LassimCmd),
    /// Export pyramid residual planes of an image as PNGs
    Pyramid(PyramidCmd),
    /// Build blurred and deformed-then-blurred copies of an image directory
    Degrade(DegradeCmd),
    /// Run the full blur/deform validity experiment and write a report
    Validate(ValidateCmd),
    /// Score same-named images from two directories as CSV
    ScorePairs(ScorePairsCmd),
    /// Generate a synthetic test corpus of natural-looking images
    Synth(SynthCmd),
}

#[derive(Args, Debug, Clone)]
struct SsimOpts {
    /// SSIM window size in pixels (odd)
    #[arg(long, default_value_t = 11)]
    window_size: usize,
    /// Gaussian window sigma in pixels
    #[arg(long, default_value_t = 1.5)]
    window_sigma: f64,
    /// Luminance stability constant k1
    #[arg(long, default_value_t = 0.01)]
    k1: f64,
    /// Contrast stability constant k2
    #[arg(long, default_value_t = 0.03)]
    k2: f64,
    /// Dynamic range of the samples
    #[arg(long, default_value_t = 255.0)]
    data_range: f64,
    /// Use uniform (box) window weights instead of Gaussian
    #[arg(long, default_value_t = false)]
    uniform_window: bool,
    /// Channel handling for color inputs: luma or mean
    #[arg(long, default_value = "luma")]
    channels: ChannelPolicy,
}

impl SsimOpts {
    fn params(&self) -> SsimParams {
        SsimParams {
            window_size: self.window_size,
            window_sigma: self.window_sigma,
            k1: self.k1,
            k2: self.k2,
            data_range: self.data_range,
            window: if self.uniform_window {
                WindowKind::Uniform
            } else {
                WindowKind::Gaussian
            },
        }
    }
}

#[derive(Args, Debug)]
struct SsimCmd {
    /// First image (PNG/PPM/PGM)
    image_a: PathBuf,
    /// Second image, same dimensions
    image_b: PathBuf,
    #[command(flatten)]
    opts: SsimOpts,
}

#[derive(Args, Debug)]
struct LassimCmd {
    /// First image (PNG/PPM/PGM)
    image_a: PathBuf,
    /// Second image, same dimensions
    image_b: PathBuf,
    /// Residual level to compare
    #[arg(long, default_value_t = 3)]
    level: usize,
    /// Print `level,score` lines for a level range such as 0..5 instead
    /// of a single score (level 0 is the pixel-space SSIM)
    #[arg(long, value_name = "LO..HI")]
    profile: Option<String>,
    #[command(flatten)]
    opts: SsimOpts,
}

#[derive(Args, Debug)]
struct PyramidCmd {
    /// Input image
    image: PathBuf,
    /// Directory for residual_<l>.png and top.png
    out_dir: PathBuf,
    /// Number of residual levels
    #[arg(long, default_value_t = 4)]
    levels: usize,
}

#[derive(Args, Debug)]
struct DegradeCmd {
    /// Directory of source images
    src_dir: PathBuf,
    /// Output root for gt/, blur_<X>/ and def_<X>_blur_<Y>/ sets
    out_dir: PathBuf,
    /// Blur intensities to build, comma-separated from L,M,H, or none
    #[arg(long, default_value = "L,M,H")]
    blur: String,
    /// Deform intensities to build, comma-separated from L,M,H, or none
    #[arg(long, default_value = "L,M,H")]
    deform: String,
    /// Global seed for the per-image displacement fields
    #[arg(long, env = "LASSIM_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ValidateCmd {
    /// JSON config file; explicit flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory of clean source images
    #[arg(long)]
    source: Option<PathBuf>,
    /// Directory for report artifacts
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of source images to use
    #[arg(long)]
    samples: Option<usize>,
    /// Residual level for the structure metric
    #[arg(long)]
    level: Option<usize>,
    /// Blur intensities, comma-separated from L,M,H
    #[arg(long, value_name = "LEVELS")]
    blur_levels: Option<String>,
    /// Deform intensities, comma-separated from L,M,H
    #[arg(long, value_name = "LEVELS")]
    deform_levels: Option<String>,
    /// Global seed recorded in the report
    #[arg(long, env = "LASSIM_SEED")]
    seed: Option<u64>,
    /// Histogram bin count over [0, 1]
    #[arg(long)]
    bins: Option<usize>,
    /// Channel handling for color inputs: luma or mean
    #[arg(long)]
    channels: Option<ChannelPolicy>,
    /// Worker threads (0 = one per core); the report is identical for any value
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct ScorePairsCmd {
    /// First directory
    dir_a: PathBuf,
    /// Second directory with same-named images
    dir_b: PathBuf,
    /// Metric: ssim, lassim, or lassim@<level>
    #[arg(long, default_value = "ssim")]
    metric: String,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    opts: SsimOpts,
}

#[derive(Args, Debug)]
struct SynthCmd {
    /// Output directory
    out_dir: PathBuf,
    /// Number of images to generate
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Image width in pixels
    #[arg(long, default_value_t = 480)]
    width: usize,
    /// Image height in pixels
    #[arg(long, default_value_t = 272)]
    height: usize,
    /// Generator seed
    #[arg(long, env = "LASSIM_SEED", default_value_t = 0)]
    seed: u64,
}

/// Entry point used by the binary. Returns the process exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            // help/version requests are successes, usage mistakes are not
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> crate::error::Result<u8> {
    match command {
        Command::Ssim(cmd) => {
            let a = io::load_image(&cmd.image_a)?;
            let b = io::load_image(&cmd.image_b)?;
            let score = metrics::ssim_image(&a, &b, &cmd.opts.params(), cmd.opts.channels)?;
            println!("{score}");
            Ok(0)
        }
        Command::Lassim(cmd) => {
            let a = io::load_image(&cmd.image_a)?;
            let b = io::load_image(&cmd.image_b)?;
            let params = cmd.opts.params();
            if let Some(range) = &cmd.profile {
                let (lo, hi) = parse_level_range(range)?;
                let la = to_luma(&a);
                let lb = to_luma(&b);
                let profile = metrics::lassim_profile(
                    &la,
                    &lb,
                    lo..=hi,
                    &PyramidParams::with_levels(hi.max(1)),
                    &params,
                )?;
                for (level, score) in profile {
                    println!("{level},{score}");
                }
            } else {
                let pyr = PyramidParams::with_levels(cmd.level + 1);
                let score = metrics::lassim_image(
                    &a,
                    &b,
                    cmd.level,
                    &pyr,
                    &params,
                    cmd.opts.channels,
                )?;
                println!("{score}");
            }
            Ok(0)
        }
        Command::Pyramid(cmd) => {
            let img = to_luma(&io::load_image(&cmd.image)?);
            let pyr = pyramid::build_pyramid(&img, &PyramidParams::with_levels(cmd.levels))?;
            std::fs::create_dir_all(&cmd.out_dir)?;
            for (l, res) in pyr.residuals.iter().enumerate() {
                let path = cmd.out_dir.join(format!("residual_{l}.png"));
                io::save_image(&path, &pyramid::residual_display_image(res))?;
                println!("{}", path.display());
            }
            let top_path = cmd.out_dir.join("top.png");
            io::save_image(&top_path, &pyr.top.clone().into_image()?)?;
            println!("{}", top_path.display());
            Ok(0)
        }
        Command::Degrade(cmd) => {
            let cfg = TripletConfig {
                blur_levels: parse_intensities(&cmd.blur)?
                    .into_iter()
                    .map(BlurSpec::preset)
                    .collect(),
                deform_levels: parse_intensities(&cmd.deform)?
                    .into_iter()
                    .map(|l| ElasticSpec::preset(l, cmd.seed))
                    .collect(),
                seed: cmd.seed,
            };
            let manifest = degrade::make_triplet_sets(&cmd.src_dir, &cmd.out_dir, &cfg)?;
            for failure in &manifest.skipped {
                eprintln!("warning: {failure}");
            }
            eprintln!(
                "wrote {} sets x {} images under {}",
                manifest.set_dirs.len(),
                manifest.images.len(),
                cmd.out_dir.display()
            );
            Ok(0)
        }
        Command::Validate(cmd) => {
            let mut cfg: ExperimentConfig = match &cmd.config {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                None => ExperimentConfig::default(),
            };
            // flags override the config file, which overrides defaults
            if let Some(v) = cmd.source {
                cfg.source_dir = v;
            }
            if let Some(v) = cmd.out {
                cfg.output_dir = v;
            }
            if let Some(v) = cmd.samples {
                cfg.sample_count = v;
            }
            if let Some(v) = cmd.level {
                cfg.level = v;
                cfg.pyramid.levels = cfg.pyramid.levels.max(v + 1);
            }
            if let Some(v) = &cmd.blur_levels {
                cfg.blur_levels = parse_intensities(v)?
                    .into_iter()
                    .map(BlurSpec::preset)
                    .collect();
            }
            if let Some(v) = cmd.seed {
                cfg.seed = v;
            }
            if let Some(v) = &cmd.deform_levels {
                cfg.deform_levels = parse_intensities(v)?
                    .into_iter()
                    .map(|l| ElasticSpec::preset(l, cfg.seed))
                    .collect();
            }
            if let Some(v) = cmd.bins {
                cfg.bins = v;
            }
            if let Some(v) = cmd.channels {
                cfg.channels = v;
            }
            if let Some(v) = cmd.jobs {
                cfg.jobs = v;
            }
            let report = harness::run_validity_experiment(&cfg)?;
            print!("{}", harness::render_markdown(&report));
            if report.separation_holds() {
                Ok(0)
            } else {
                eprintln!("separation property failed: some row has JS_LaSSIM < JS_SSIM");
                Ok(2)
            }
        }
        Command::ScorePairs(cmd) => {
            let metric: MetricKind = cmd.metric.parse()?;
            let scores = harness::score_pairs(
                &cmd.dir_a,
                &cmd.dir_b,
                metric,
                &PyramidParams::default(),
                &cmd.opts.params(),
                cmd.opts.channels,
            )?;
            for name in scores.unmatched_a.iter().chain(&scores.unmatched_b) {
                eprintln!("warning: no pair for {name}");
            }
            let csv = scores.to_csv();
            match &cmd.out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
        Command::Synth(cmd) => {
            let paths = synth::generate_corpus(
                &cmd.out_dir,
                cmd.count,
                cmd.width,
                cmd.height,
                cmd.seed,
            )?;
            eprintln!("wrote {} images under {}", paths.len(), cmd.out_dir.display());
            Ok(0)
        }
    }
}

fn parse_level_range(s: &str) -> crate::error::Result<(usize, usize)> {
    let parts: Vec<&str> = s.split("..").collect();
    let err = || Error::InvalidParams(format!("bad level range {s:?} (expected LO..HI)"));
    if parts.len() != 2 {
        return Err(err());
    }
    let lo: usize = parts[0].parse().map_err(|_| err())?;
    let hi: usize = parts[1].parse().map_err(|_| err())?;
    if hi < lo {
        return Err(err());
    }
    Ok((lo, hi))
}

fn parse_intensities(s: &str) -> crate::error::Result<Vec<Intensity>> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let level: Intensity = part.trim().parse()?;
        if out.contains(&level) {
            return Err(Error::InvalidParams(format!(
                "duplicate intensity {level} in {s:?}"
            )));
        }
        out.push(level);
    }
    Ok(out)
}
