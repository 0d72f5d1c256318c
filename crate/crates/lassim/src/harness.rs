//! Orchestration of the validity experiment: degrade a corpus at every
//! intensity combination, score all pairs with SSIM and the residual
//! metric, histogram the scores, and compare the blur-only distribution
//! against the deform-plus-blur distribution with the Jensen-Shannon
//! divergence.
//!
//! All randomness flows from one global seed; reruns of the same
//! configuration reproduce the report body byte for byte. The per-image
//! loop parallelizes freely because results are reduced in file order.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degrade::{
    self, gaussian_blur, list_image_files, make_displacement_field, BlurSpec, ElasticSpec,
};
use crate::error::{Error, Result};
use crate::image::{to_luma, LumaImage};
use crate::io;
use crate::metrics::{self, ChannelPolicy, SsimParams};
use crate::pyramid::PyramidParams;
use crate::stats::{self, build_distribution, summarize, ScoreDistribution, Summary};

fn default_sample_count() -> usize {
    1000
}
fn default_level() -> usize {
    3
}
fn default_bins() -> usize {
    100
}
fn default_blur_levels() -> Vec<BlurSpec> {
    degrade::Intensity::ALL.iter().map(|&l| BlurSpec::preset(l)).collect()
}
fn default_deform_levels() -> Vec<ElasticSpec> {
    degrade::Intensity::ALL
        .iter()
        .map(|&l| ElasticSpec::preset(l, 0))
        .collect()
}

/// Full configuration of a validity run. Every field has a default, so a
/// JSON config may specify only what it overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub source_dir: PathBuf,
    pub output_dir: PathBuf,
    /// Number of source images to use (the first N in name order).
    pub sample_count: usize,
    /// Residual level the structure metric is evaluated at.
    pub level: usize,
    pub pyramid: PyramidParams,
    pub ssim: SsimParams,
    pub blur_levels: Vec<BlurSpec>,
    pub deform_levels: Vec<ElasticSpec>,
    pub seed: u64,
    pub bins: usize,
    pub channels: ChannelPolicy,
    /// Worker threads; 0 means one per core. The report is identical for
    /// any value.
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            source_dir: PathBuf::from("."),
            output_dir: PathBuf::from("out"),
            sample_count: default_sample_count(),
            level: default_level(),
            pyramid: PyramidParams::default(),
            ssim: SsimParams::default(),
            blur_levels: default_blur_levels(),
            deform_levels: default_deform_levels(),
            seed: 0,
            bins: default_bins(),
            channels: ChannelPolicy::default(),
            jobs: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_count < 1 {
            return Err(Error::InvalidParams("sample_count must be >= 1".into()));
        }
        if self.bins < 1 {
            return Err(Error::InvalidParams("bins must be >= 1".into()));
        }
        if self.blur_levels.is_empty() {
            return Err(Error::InvalidParams("need at least one blur level".into()));
        }
        self.ssim.validate()?;
        self.pyramid.validate()?;
        if self.level >= self.pyramid.levels {
            return Err(Error::LevelOutOfRange {
                level: self.level,
                levels: self.pyramid.levels,
            });
        }
        for b in &self.blur_levels {
            b.validate()?;
        }
        for d in &self.deform_levels {
            d.validate()?;
        }
        Ok(())
    }
}

/// One row of the report: a `[deform, blur]` combination with both metric
/// summaries and both divergences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub deform: String,
    pub blur: String,
    pub ssim_blur: Summary,
    pub ssim_deform_blur: Summary,
    pub js_ssim: f64,
    pub lassim_blur: Summary,
    pub lassim_deform_blur: Summary,
    pub js_lassim: f64,
}

/// Run metadata carried in the JSON report and the manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMetadata {
    pub seed: u64,
    pub sample_count_requested: usize,
    pub images_used: usize,
    pub images_skipped: Vec<String>,
    pub level: usize,
    pub bins: usize,
    pub channels: ChannelPolicy,
    pub ssim: SsimParams,
    pub pyramid: PyramidParams,
    pub blur_levels: Vec<BlurSpec>,
    pub deform_levels: Vec<ElasticSpec>,
    pub wall_time_secs: f64,
}

/// Outcome of a validity run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidityReport {
    pub metadata: RunMetadata,
    pub rows: Vec<ReportRow>,
}

/// Per-image scores for every combination, in a fixed order.
struct ImageScores {
    name: String,
    /// per blur level: (ssim, lassim)
    blur: Vec<(f64, f64)>,
    /// per (deform, blur) pair, deform-major: (ssim, lassim)
    deform_blur: Vec<(f64, f64)>,
}

enum ImageOutcome {
    Scored(Box<ImageScores>),
    Skipped { name: String, reason: String },
}

fn score_one_image(cfg: &ExperimentConfig, index: usize, path: &Path) -> ImageOutcome {
    let name = path
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("image")
        .to_string();
    let skip = |reason: String| ImageOutcome::Skipped {
        name: name.clone(),
        reason,
    };

    let img = match io::load_image(path) {
        Ok(img) => img,
        Err(e) => return skip(e.to_string()),
    };
    // channel policy is applied up front; Mean averages plane scores
    let planes: Vec<LumaImage> = match cfg.channels {
        ChannelPolicy::Luma => vec![to_luma(&img)],
        ChannelPolicy::Mean => (0..img.channels()).map(|c| img.channel_plane(c)).collect(),
    };
    let gt = &planes[0];
    let seed_i = degrade::derive_seed(cfg.seed, index as u64);

    // fields depend only on size, spec and seed, not on plane content
    let mut fields: Vec<degrade::DisplacementField> = Vec::new();
    for d in &cfg.deform_levels {
        match make_displacement_field(gt.width(), gt.height(), &d.with_seed(seed_i)) {
            Ok(f) => fields.push(f),
            Err(e) => return skip(e.to_string()),
        }
    }

    let mut blur_scores = vec![(0.0, 0.0); cfg.blur_levels.len()];
    let mut deform_scores = vec![(0.0, 0.0); cfg.deform_levels.len() * cfg.blur_levels.len()];

    for plane_gt in &planes {
        let warped: Vec<LumaImage> = match fields
            .iter()
            .map(|f| degrade::elastic_transform(plane_gt, f))
            .collect::<Result<_>>()
        {
            Ok(v) => v,
            Err(e) => return skip(e.to_string()),
        };

        for (bi, b) in cfg.blur_levels.iter().enumerate() {
            let blurred = match gaussian_blur(plane_gt, b) {
                Ok(v) => v,
                Err(e) => return skip(e.to_string()),
            };
            let s = match metrics::ssim(plane_gt, &blurred, &cfg.ssim) {
                Ok(v) => v.value(),
                Err(e) => return skip(e.to_string()),
            };
            let la = match metrics::lassim(plane_gt, &blurred, cfg.level, &cfg.pyramid, &cfg.ssim)
            {
                Ok(v) => v.value(),
                Err(e) => return skip(e.to_string()),
            };
            blur_scores[bi].0 += s;
            blur_scores[bi].1 += la;

            for (di, w) in warped.iter().enumerate() {
                let degraded = match gaussian_blur(w, b) {
                    Ok(v) => v,
                    Err(e) => return skip(e.to_string()),
                };
                let s = match metrics::ssim(plane_gt, &degraded, &cfg.ssim) {
                    Ok(v) => v.value(),
                    Err(e) => return skip(e.to_string()),
                };
                let la = match metrics::lassim(
                    plane_gt,
                    &degraded,
                    cfg.level,
                    &cfg.pyramid,
                    &cfg.ssim,
                ) {
                    Ok(v) => v.value(),
                    Err(e) => return skip(e.to_string()),
                };
                let slot = di * cfg.blur_levels.len() + bi;
                deform_scores[slot].0 += s;
                deform_scores[slot].1 += la;
            }
        }
    }
    let k = planes.len() as f64;
    for v in blur_scores.iter_mut().chain(deform_scores.iter_mut()) {
        v.0 /= k;
        v.1 /= k;
    }
    ImageOutcome::Scored(Box::new(ImageScores {
        name,
        blur: blur_scores,
        deform_blur: deform_scores,
    }))
}

/// Run the complete experiment and write every report artifact under
/// `cfg.output_dir`: `report.md`, `report.csv`, `report.json`,
/// `scores/<combination>.csv`, and `manifest.json`.
pub fn run_validity_experiment(cfg: &ExperimentConfig) -> Result<ValidityReport> {
    cfg.validate()?;
    let started = Instant::now();
    let files = list_image_files(&cfg.source_dir)?;
    if files.is_empty() {
        return Err(Error::Ingest {
            dir: cfg.source_dir.clone(),
            failures: vec!["directory contains no image files".into()],
        });
    }
    if files.len() < cfg.sample_count {
        eprintln!(
            "warning: requested {} images but {} has only {}",
            cfg.sample_count,
            cfg.source_dir.display(),
            files.len()
        );
    }
    let files: Vec<PathBuf> = files.into_iter().take(cfg.sample_count).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    let outcomes: Vec<ImageOutcome> = pool.install(|| {
        files
            .par_iter()
            .enumerate()
            .map(|(i, path)| score_one_image(cfg, i, path))
            .collect()
    });

    let mut scored: Vec<Box<ImageScores>> = Vec::new();
    let mut skipped = Vec::new();
    for outcome in outcomes {
        match outcome {
            ImageOutcome::Scored(s) => scored.push(s),
            ImageOutcome::Skipped { name, reason } => {
                eprintln!("warning: skipping {name}: {reason}");
                skipped.push(format!("{name}: {reason}"));
            }
        }
    }
    if scored.is_empty() {
        return Err(Error::Ingest {
            dir: cfg.source_dir.clone(),
            failures: skipped,
        });
    }

    let collect_blur = |bi: usize, pick: fn(&(f64, f64)) -> f64| -> Vec<f64> {
        scored.iter().map(|s| pick(&s.blur[bi])).collect()
    };
    let collect_deform = |slot: usize, pick: fn(&(f64, f64)) -> f64| -> Vec<f64> {
        scored.iter().map(|s| pick(&s.deform_blur[slot])).collect()
    };

    let dist = |scores: &[f64]| -> Result<ScoreDistribution> {
        build_distribution(scores, cfg.bins, (0.0, 1.0))
    };

    // rows in the paper's order: blur-major blocks, deform varying inside
    let mut rows = Vec::new();
    let mut score_csvs: Vec<(String, String)> = Vec::new();
    for (bi, b) in cfg.blur_levels.iter().enumerate() {
        let ssim_blur: Vec<f64> = collect_blur(bi, |v| v.0);
        let lassim_blur: Vec<f64> = collect_blur(bi, |v| v.1);
        for (di, d) in cfg.deform_levels.iter().enumerate() {
            let slot = di * cfg.blur_levels.len() + bi;
            let ssim_db: Vec<f64> = collect_deform(slot, |v| v.0);
            let lassim_db: Vec<f64> = collect_deform(slot, |v| v.1);
            let js_ssim = stats::js_divergence(&dist(&ssim_blur)?, &dist(&ssim_db)?)?;
            let js_lassim = stats::js_divergence(&dist(&lassim_blur)?, &dist(&lassim_db)?)?;
            rows.push(ReportRow {
                deform: d.label.to_string(),
                blur: b.label.to_string(),
                ssim_blur: summarize(&ssim_blur)?,
                ssim_deform_blur: summarize(&ssim_db)?,
                js_ssim,
                lassim_blur: summarize(&lassim_blur)?,
                lassim_deform_blur: summarize(&lassim_db)?,
                js_lassim,
            });

            let mut csv = String::from(
                "file,ssim_gt_blur,ssim_gt_deform_blur,lassim_gt_blur,lassim_gt_deform_blur\n",
            );
            for (i, s) in scored.iter().enumerate() {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    s.name, ssim_blur[i], ssim_db[i], lassim_blur[i], lassim_db[i]
                ));
            }
            score_csvs.push((
                format!("def_{}_blur_{}.csv", d.label, b.label),
                csv,
            ));
        }
        if cfg.deform_levels.is_empty() {
            // degenerate config: still report the blur-only columns
            rows.push(ReportRow {
                deform: String::new(),
                blur: b.label.to_string(),
                ssim_blur: summarize(&ssim_blur)?,
                ssim_deform_blur: Summary {
                    mean: f64::NAN,
                    std: 0.0,
                    n: 0,
                    degenerate_std: true,
                },
                js_ssim: f64::NAN,
                lassim_blur: summarize(&lassim_blur)?,
                lassim_deform_blur: Summary {
                    mean: f64::NAN,
                    std: 0.0,
                    n: 0,
                    degenerate_std: true,
                },
                js_lassim: f64::NAN,
            });
            let mut csv = String::from("file,ssim_gt_blur,lassim_gt_blur\n");
            for (i, s) in scored.iter().enumerate() {
                csv.push_str(&format!("{},{},{}\n", s.name, ssim_blur[i], lassim_blur[i]));
            }
            score_csvs.push((format!("blur_{}.csv", b.label), csv));
        }
    }

    let report = ValidityReport {
        metadata: RunMetadata {
            seed: cfg.seed,
            sample_count_requested: cfg.sample_count,
            images_used: scored.len(),
            images_skipped: skipped,
            level: cfg.level,
            bins: cfg.bins,
            channels: cfg.channels,
            ssim: cfg.ssim.clone(),
            pyramid: cfg.pyramid.clone(),
            blur_levels: cfg.blur_levels.clone(),
            deform_levels: cfg.deform_levels.clone(),
            wall_time_secs: started.elapsed().as_secs_f64(),
        },
        rows,
    };

    write_artifacts(cfg, &report, &score_csvs)?;
    Ok(report)
}

fn write_artifacts(
    cfg: &ExperimentConfig,
    report: &ValidityReport,
    score_csvs: &[(String, String)],
) -> Result<()> {
    let out = &cfg.output_dir;
    std::fs::create_dir_all(out.join("scores"))?;
    std::fs::write(out.join("report.md"), render_markdown(report))?;
    std::fs::write(out.join("report.csv"), render_csv(report))?;
    std::fs::write(out.join("report.json"), render_json(report)?)?;
    for (name, csv) in score_csvs {
        std::fs::write(out.join("scores").join(name), csv)?;
    }
    std::fs::write(
        out.join("manifest.json"),
        serde_json::to_string_pretty(cfg)?,
    )?;
    Ok(())
}

impl ValidityReport {
    /// The headline property: the residual-metric divergence matches or
    /// exceeds the pixel-metric divergence in every combination.
    pub fn separation_holds(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.js_ssim.is_finite() && r.js_lassim.is_finite())
            .all(|r| r.js_lassim >= r.js_ssim)
    }
}

fn fmt_summary(s: &Summary) -> String {
    if s.n == 0 {
        "-".to_string()
    } else {
        format!("{:.3}\u{00b1}{:.3}", s.mean, s.std)
    }
}

fn fmt_js(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3}")
    } else {
        "-".to_string()
    }
}

/// Markdown table mirroring the blur / deform+blur / divergence columns.
pub fn render_markdown(report: &ValidityReport) -> String {
    let mut out = String::new();
    out.push_str("| intensity [def, blur] | SSIM(GT, blur) | SSIM(GT, def+blur) | JS_SSIM | LaSSIM(GT, blur) | LaSSIM(GT, def+blur) | JS_LaSSIM |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for r in &report.rows {
        let label = if r.deform.is_empty() {
            format!("[-, {}]", r.blur)
        } else {
            format!("[{}_def, {}_blur]", r.deform, r.blur)
        };
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            label,
            fmt_summary(&r.ssim_blur),
            fmt_summary(&r.ssim_deform_blur),
            fmt_js(r.js_ssim),
            fmt_summary(&r.lassim_blur),
            fmt_summary(&r.lassim_deform_blur),
            fmt_js(r.js_lassim),
        ));
    }
    out
}

const CSV_HEADER: &str = "deform,blur,ssim_blur_mean,ssim_blur_std,ssim_deform_blur_mean,ssim_deform_blur_std,js_ssim,lassim_blur_mean,lassim_blur_std,lassim_deform_blur_mean,lassim_deform_blur_std,js_lassim,n";

/// Row-oriented CSV with full-precision floats (lossless round trip).
pub fn render_csv(report: &ValidityReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.deform,
            r.blur,
            r.ssim_blur.mean,
            r.ssim_blur.std,
            r.ssim_deform_blur.mean,
            r.ssim_deform_blur.std,
            r.js_ssim,
            r.lassim_blur.mean,
            r.lassim_blur.std,
            r.lassim_deform_blur.mean,
            r.lassim_deform_blur.std,
            r.js_lassim,
            r.ssim_blur.n,
        ));
    }
    out
}

/// Pretty JSON of the full report (rows plus run metadata).
pub fn render_json(report: &ValidityReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

/// Parse rows back out of `render_csv` output.
pub fn rows_from_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(Error::InvalidParams(format!(
                "unexpected csv header: {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 13 {
            return Err(Error::InvalidParams(format!(
                "csv line {}: expected 13 fields, got {}",
                lineno + 2,
                f.len()
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::InvalidParams(format!("csv line {}: {e}", lineno + 2)))
        };
        let n: usize = f[12]
            .parse()
            .map_err(|e| Error::InvalidParams(format!("csv line {}: {e}", lineno + 2)))?;
        let summary = |mean: f64, std: f64, n: usize| Summary {
            mean,
            std,
            n,
            degenerate_std: n < 2,
        };
        let deform = f[0].to_string();
        let deform_n = if deform.is_empty() { 0 } else { n };
        rows.push(ReportRow {
            deform,
            blur: f[1].to_string(),
            ssim_blur: summary(num(f[2])?, num(f[3])?, n),
            ssim_deform_blur: summary(num(f[4])?, num(f[5])?, deform_n),
            js_ssim: num(f[6])?,
            lassim_blur: summary(num(f[7])?, num(f[8])?, n),
            lassim_deform_blur: summary(num(f[9])?, num(f[10])?, deform_n),
            js_lassim: num(f[11])?,
        });
    }
    Ok(rows)
}

/// Which metric `score_pairs` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Ssim,
    Lassim { level: usize },
}

impl std::str::FromStr for MetricKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "ssim" {
            return Ok(MetricKind::Ssim);
        }
        if s == "lassim" {
            return Ok(MetricKind::Lassim { level: 3 });
        }
        if let Some(level) = s.strip_prefix("lassim@") {
            let level = level
                .parse()
                .map_err(|e| Error::InvalidParams(format!("bad metric level: {e}")))?;
            return Ok(MetricKind::Lassim { level });
        }
        Err(Error::InvalidParams(format!(
            "unknown metric {s:?} (expected ssim, lassim or lassim@<level>)"
        )))
    }
}

/// Result of scoring two directories pairwise by file name.
#[derive(Debug, Clone)]
pub struct PairScores {
    /// (file name, score), sorted by name.
    pub rows: Vec<(String, f64)>,
    pub unmatched_a: Vec<String>,
    pub unmatched_b: Vec<String>,
}

impl PairScores {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("file,score\n");
        for (name, score) in &self.rows {
            out.push_str(&format!("{name},{score:.6}\n"));
        }
        out
    }
}

/// Score same-named images from two directories against each other.
pub fn score_pairs(
    dir_a: &Path,
    dir_b: &Path,
    metric: MetricKind,
    pyr: &PyramidParams,
    ssim_params: &SsimParams,
    policy: ChannelPolicy,
) -> Result<PairScores> {
    let names = |dir: &Path| -> Result<Vec<String>> {
        Ok(list_image_files(dir)?
            .into_iter()
            .filter_map(|p| p.file_name().and_then(|s| s.to_str()).map(String::from))
            .collect())
    };
    let a_names = names(dir_a)?;
    let b_names = names(dir_b)?;
    let b_set: std::collections::BTreeSet<&String> = b_names.iter().collect();
    let a_set: std::collections::BTreeSet<&String> = a_names.iter().collect();

    let common: Vec<&String> = a_names.iter().filter(|n| b_set.contains(n)).collect();
    if common.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no common file names between {} and {}",
            dir_a.display(),
            dir_b.display()
        )));
    }
    let unmatched_a: Vec<String> = a_names
        .iter()
        .filter(|n| !b_set.contains(n))
        .cloned()
        .collect();
    let unmatched_b: Vec<String> = b_names
        .iter()
        .filter(|n| !a_set.contains(n))
        .cloned()
        .collect();

    let mut pyr = pyr.clone();
    if let MetricKind::Lassim { level } = metric {
        pyr.levels = pyr.levels.max(level + 1);
    }
    let mut rows = Vec::with_capacity(common.len());
    for name in common {
        let a = io::load_image(&dir_a.join(name))?;
        let b = io::load_image(&dir_b.join(name))?;
        let score = match metric {
            MetricKind::Ssim => metrics::ssim_image(&a, &b, ssim_params, policy)?,
            MetricKind::Lassim { level } => {
                metrics::lassim_image(&a, &b, level, &pyr, ssim_params, policy)?
            }
        };
        rows.push((name.clone(), score.value()));
    }
    Ok(PairScores {
        rows,
        unmatched_a,
        unmatched_b,
    })
}
