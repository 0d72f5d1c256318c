//! Windowed SSIM and its Laplacian-residual variant.
//!
//! `lassim` scores two images by running SSIM on the residual plane of
//! their Laplacian pyramids at a chosen level. Low-pass degradations
//! (blur, global luminance shifts) barely touch deep residuals, so the
//! residual-space score stays high where pixel-space SSIM collapses,
//! while geometric changes still register.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter;
use crate::image::{Image, LumaImage, to_luma};
use crate::pyramid::{self, PyramidParams};

/// Window weighting for the local statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    #[default]
    Gaussian,
    Uniform,
}

/// SSIM parameters. Defaults follow the common reference configuration:
/// 11x11 Gaussian window with sigma 1.5, k1 = 0.01, k2 = 0.03, and a data
/// range of 255.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SsimParams {
    pub window_size: usize,
    pub window_sigma: f64,
    pub k1: f64,
    pub k2: f64,
    pub data_range: f64,
    #[serde(default)]
    pub window: WindowKind,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            window_size: 11,
            window_sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            data_range: 255.0,
            window: WindowKind::Gaussian,
        }
    }
}

impl SsimParams {
    pub fn validate(&self) -> Result<()> {
        if self.window_size < 3 || self.window_size.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "window size must be odd and >= 3, got {}",
                self.window_size
            )));
        }
        if self.window_sigma <= 0.0 {
            return Err(Error::InvalidParams("window sigma must be > 0".into()));
        }
        if self.k1 <= 0.0 || self.k2 <= 0.0 {
            return Err(Error::InvalidParams("k1 and k2 must be > 0".into()));
        }
        if self.data_range <= 0.0 {
            return Err(Error::InvalidParams("data range must be > 0".into()));
        }
        Ok(())
    }

    /// Normalized 1-D window taps; the 2-D window is their outer product.
    pub fn window_weights(&self) -> Vec<f64> {
        match self.window {
            WindowKind::Gaussian => filter::gaussian_kernel_1d(self.window_sigma, self.window_size),
            WindowKind::Uniform => {
                vec![1.0 / self.window_size as f64; self.window_size]
            }
        }
    }
}

/// How to reduce a color pair to a scalar score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ChannelPolicy {
    /// Convert to Rec.601 luma first (the default).
    #[default]
    Luma,
    /// Score each channel independently and average.
    Mean,
}

impl std::str::FromStr for ChannelPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "luma" => Ok(ChannelPolicy::Luma),
            "mean" => Ok(ChannelPolicy::Mean),
            other => Err(Error::InvalidParams(format!(
                "unknown channel policy {other:?} (expected luma or mean)"
            ))),
        }
    }
}

/// A similarity score in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MetricScore(f64);

impl MetricScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for MetricScore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.6}", self.0)
    }
}

/// Mean SSIM index over all fully interior window positions.
///
/// Windows are Gaussian-weighted by default; border positions where the
/// window would leave the image are not evaluated.
pub fn ssim(a: &LumaImage, b: &LumaImage, p: &SsimParams) -> Result<MetricScore> {
    p.validate()?;
    a.check_dims(b)?;
    let (w, h) = (a.width(), a.height());
    if w < p.window_size || h < p.window_size {
        return Err(Error::WindowTooLarge {
            width: w,
            height: h,
            extent: p.window_size,
        });
    }
    let k = p.window_weights();
    let c1 = (p.k1 * p.data_range).powi(2);
    let c2 = (p.k2 * p.data_range).powi(2);

    let xs = a.as_slice();
    let ys = b.as_slice();
    let xx: Vec<f64> = xs.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = ys.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| x * y).collect();

    let (mu_x, ow, oh) = filter::conv_separable_valid(xs, w, h, &k);
    let (mu_y, _, _) = filter::conv_separable_valid(ys, w, h, &k);
    let (m_xx, _, _) = filter::conv_separable_valid(&xx, w, h, &k);
    let (m_yy, _, _) = filter::conv_separable_valid(&yy, w, h, &k);
    let (m_xy, _, _) = filter::conv_separable_valid(&xy, w, h, &k);

    let mut sum = 0.0;
    for i in 0..ow * oh {
        let mx = mu_x[i];
        let my = mu_y[i];
        let var_x = m_xx[i] - mx * mx;
        let var_y = m_yy[i] - my * my;
        let cov = m_xy[i] - mx * my;
        let num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
        let den = (mx * mx + my * my + c1) * (var_x + var_y + c2);
        sum += num / den;
    }
    Ok(MetricScore(sum / (ow * oh) as f64))
}

/// Largest residual level whose plane still fits the SSIM window, given
/// the image size (and keeping every pyramid level at least 2x2).
pub fn max_admissible_level(width: usize, height: usize, p: &SsimParams) -> Option<usize> {
    let depth = pyramid::max_levels(width, height);
    let mut best = None;
    for l in 0..depth {
        let (w, h) = pyramid::level_dims(width, height, l);
        if w >= p.window_size && h >= p.window_size {
            best = Some(l);
        } else {
            break;
        }
    }
    best
}

/// SSIM between the level-`level` Laplacian residuals of the two images.
///
/// The data range of `p` is applied unchanged to the residual planes so
/// that scores stay comparable across images.
pub fn lassim(
    a: &LumaImage,
    b: &LumaImage,
    level: usize,
    pyr: &PyramidParams,
    p: &SsimParams,
) -> Result<MetricScore> {
    p.validate()?;
    a.check_dims(b)?;
    if level >= pyr.levels {
        return Err(Error::LevelOutOfRange {
            level,
            levels: pyr.levels,
        });
    }
    let (rw, rh) = pyramid::level_dims(a.width(), a.height(), level);
    if rw < p.window_size || rh < p.window_size {
        return Err(Error::LevelTooDeep {
            level,
            width: rw,
            height: rh,
            window: p.window_size,
            max_level: max_admissible_level(a.width(), a.height(), p).unwrap_or(0),
        });
    }
    let ra = pyramid::residual_at(a, level, pyr)?;
    let rb = pyramid::residual_at(b, level, pyr)?;
    ssim(&ra, &rb, p)
}

/// Score profile across levels: level 0 reports the plain pixel-space
/// SSIM, deeper entries report the residual-plane score at that level.
pub fn lassim_profile(
    a: &LumaImage,
    b: &LumaImage,
    levels: impl IntoIterator<Item = usize>,
    pyr: &PyramidParams,
    p: &SsimParams,
) -> Result<Vec<(usize, MetricScore)>> {
    let mut out = Vec::new();
    for l in levels {
        let score = if l == 0 {
            ssim(a, b, p)?
        } else {
            // deep levels may need a deeper pyramid than the caller passed
            let mut pyr = pyr.clone();
            pyr.levels = pyr.levels.max(l + 1);
            lassim(a, b, l, &pyr, p)?
        };
        out.push((l, score));
    }
    Ok(out)
}

fn mean_over_channels(
    a: &Image,
    b: &Image,
    mut score_one: impl FnMut(&LumaImage, &LumaImage) -> Result<MetricScore>,
    policy: ChannelPolicy,
) -> Result<MetricScore> {
    if a.channels() != b.channels() {
        return Err(Error::InvalidParams(format!(
            "channel count mismatch: {} vs {}",
            a.channels(),
            b.channels()
        )));
    }
    match policy {
        ChannelPolicy::Luma => score_one(&to_luma(a), &to_luma(b)),
        ChannelPolicy::Mean => {
            let mut sum = 0.0;
            for c in 0..a.channels() {
                sum += score_one(&a.channel_plane(c), &b.channel_plane(c))?.value();
            }
            Ok(MetricScore(sum / a.channels() as f64))
        }
    }
}

/// SSIM on decoded images under a channel policy.
pub fn ssim_image(a: &Image, b: &Image, p: &SsimParams, policy: ChannelPolicy) -> Result<MetricScore> {
    mean_over_channels(a, b, |x, y| ssim(x, y, p), policy)
}

/// LaSSIM on decoded images under a channel policy.
pub fn lassim_image(
    a: &Image,
    b: &Image,
    level: usize,
    pyr: &PyramidParams,
    p: &SsimParams,
    policy: ChannelPolicy,
) -> Result<MetricScore> {
    mean_over_channels(a, b, |x, y| lassim(x, y, level, pyr, p), policy)
}
