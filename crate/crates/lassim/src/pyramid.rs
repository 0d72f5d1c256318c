//! Laplacian pyramid: 2x downsampling with a low-pass filter, residual
//! extraction, and exact reconstruction.
//!
//! Each level stores the high-frequency residual `h_l = I_l - up(I_{l+1})`
//! where `I_{l+1} = down(I_l)`; the final low-pass level is kept so that
//! folding the recursion back together reproduces the input exactly.
//! Odd dimensions ceil-halve on the way down, and `up` crops to explicit
//! target dimensions, so no power-of-two sizes are required.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter;
use crate::image::{Image, LumaImage};

/// The classic 5-tap binomial generating kernel [1 4 6 4 1]/16.
pub const BINOMIAL_5: [f64; 5] = [
    1.0 / 16.0,
    4.0 / 16.0,
    6.0 / 16.0,
    4.0 / 16.0,
    1.0 / 16.0,
];

/// Pyramid depth and generating kernel.
///
/// `levels` is the number of residual planes; a pyramid of depth L holds
/// residuals `h_0..h_{L-1}` plus the low-pass top level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PyramidParams {
    pub levels: usize,
    pub kernel: Vec<f64>,
}

impl Default for PyramidParams {
    fn default() -> Self {
        Self {
            levels: 4,
            kernel: BINOMIAL_5.to_vec(),
        }
    }
}

impl PyramidParams {
    pub fn new(levels: usize, kernel: Vec<f64>) -> Result<Self> {
        let p = Self { levels, kernel };
        p.validate()?;
        Ok(p)
    }

    /// Depth `levels` with the default binomial kernel.
    pub fn with_levels(levels: usize) -> Self {
        Self {
            levels,
            kernel: BINOMIAL_5.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels < 1 {
            return Err(Error::InvalidParams("pyramid needs at least 1 level".into()));
        }
        let k = &self.kernel;
        if k.len() < 3 || k.len().is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "kernel length must be odd and >= 3, got {}",
                k.len()
            )));
        }
        if !k.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams("kernel tap not finite".into()));
        }
        for i in 0..k.len() / 2 {
            if (k[i] - k[k.len() - 1 - i]).abs() > 1e-12 {
                return Err(Error::InvalidParams("kernel not symmetric".into()));
            }
        }
        let sum: f64 = k.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "kernel taps sum to {sum}, expected 1"
            )));
        }
        Ok(())
    }
}

/// Residual planes `h_0..h_{L-1}` (signed, unclamped) plus the low-pass top.
#[derive(Debug, Clone)]
pub struct LaplacianPyramid {
    pub residuals: Vec<LumaImage>,
    pub top: LumaImage,
}

impl LaplacianPyramid {
    /// Number of residual levels.
    pub fn levels(&self) -> usize {
        self.residuals.len()
    }
}

fn ceil_half(n: usize) -> usize {
    n.div_ceil(2)
}

/// Dimensions of level `l` for an input of the given size.
pub fn level_dims(width: usize, height: usize, level: usize) -> (usize, usize) {
    let mut w = width;
    let mut h = height;
    for _ in 0..level {
        w = ceil_half(w);
        h = ceil_half(h);
    }
    (w, h)
}

/// Deepest admissible residual count for an input size: every level down
/// to and including the top must keep both dimensions >= 2.
pub fn max_levels(width: usize, height: usize) -> usize {
    let mut levels = 0;
    let (mut w, mut h) = (width, height);
    while w >= 2 && h >= 2 && ceil_half(w) >= 2 && ceil_half(h) >= 2 {
        w = ceil_half(w);
        h = ceil_half(h);
        levels += 1;
    }
    levels
}

/// Low-pass with the kernel (mirror borders), then keep every even-indexed
/// row and column. Output is ceil(w/2) x ceil(h/2).
pub fn downsample(img: &LumaImage, kernel: &[f64]) -> Result<LumaImage> {
    let (w, h) = (img.width(), img.height());
    if w < 2 || h < 2 {
        return Err(Error::DegenerateSize {
            width: w,
            height: h,
            context: "downsample".into(),
        });
    }
    let blurred = filter::conv_separable_mirror(img.as_slice(), w, h, kernel);
    let ow = ceil_half(w);
    let oh = ceil_half(h);
    let mut data = Vec::with_capacity(ow * oh);
    for y in (0..h).step_by(2) {
        for x in (0..w).step_by(2) {
            data.push(blurred[y * w + x]);
        }
    }
    Ok(LumaImage::from_raw(ow, oh, data))
}

/// Zero-insert to a 2x grid, convolve with the kernel scaled by 2 per axis
/// to restore DC gain, then crop to the requested pre-downsample size.
pub fn upsample(img: &LumaImage, target_w: usize, target_h: usize, kernel: &[f64]) -> Result<LumaImage> {
    if ceil_half(target_w) != img.width() || ceil_half(target_h) != img.height() {
        return Err(Error::DimensionMismatch {
            expected_w: img.width() * 2,
            expected_h: img.height() * 2,
            actual_w: target_w,
            actual_h: target_h,
        });
    }
    let (w2, h2) = (img.width() * 2, img.height() * 2);
    let mut stuffed = vec![0.0; w2 * h2];
    for y in 0..img.height() {
        for x in 0..img.width() {
            stuffed[(2 * y) * w2 + 2 * x] = img.get(x, y);
        }
    }
    let scaled: Vec<f64> = kernel.iter().map(|k| k * 2.0).collect();
    let blurred = filter::conv_separable_mirror(&stuffed, w2, h2, &scaled);
    let mut data = Vec::with_capacity(target_w * target_h);
    for y in 0..target_h {
        data.extend_from_slice(&blurred[y * w2..y * w2 + target_w]);
    }
    Ok(LumaImage::from_raw(target_w, target_h, data))
}

/// Build the full pyramid: residuals `h_l = I_l - up(down(I_l))` for each
/// level plus the final low-pass top.
pub fn build_pyramid(img: &LumaImage, params: &PyramidParams) -> Result<LaplacianPyramid> {
    params.validate()?;
    let admissible = max_levels(img.width(), img.height());
    if params.levels > admissible {
        let (w, h) = level_dims(img.width(), img.height(), admissible);
        return Err(Error::DegenerateSize {
            width: ceil_half(w),
            height: ceil_half(h),
            context: format!(
                "pyramid level {} of a {}x{} image (max {} levels)",
                admissible + 1,
                img.width(),
                img.height(),
                admissible
            ),
        });
    }
    let mut residuals = Vec::with_capacity(params.levels);
    let mut cur = img.clone();
    for _ in 0..params.levels {
        let next = downsample(&cur, &params.kernel)?;
        let up = upsample(&next, cur.width(), cur.height(), &params.kernel)?;
        residuals.push(cur.sub(&up)?);
        cur = next;
    }
    Ok(LaplacianPyramid {
        residuals,
        top: cur,
    })
}

/// Residual plane `h_l` alone, without materializing the other residuals.
pub fn residual_at(img: &LumaImage, level: usize, params: &PyramidParams) -> Result<LumaImage> {
    params.validate()?;
    if level >= params.levels {
        return Err(Error::LevelOutOfRange {
            level,
            levels: params.levels,
        });
    }
    let admissible = max_levels(img.width(), img.height());
    if level + 1 > admissible {
        let (w, h) = level_dims(img.width(), img.height(), admissible);
        return Err(Error::DegenerateSize {
            width: ceil_half(w),
            height: ceil_half(h),
            context: format!(
                "pyramid level {} of a {}x{} image (max {} levels)",
                admissible + 1,
                img.width(),
                img.height(),
                admissible
            ),
        });
    }
    let mut cur = img.clone();
    for _ in 0..level {
        cur = downsample(&cur, &params.kernel)?;
    }
    let next = downsample(&cur, &params.kernel)?;
    let up = upsample(&next, cur.width(), cur.height(), &params.kernel)?;
    cur.sub(&up)
}

/// Fold the pyramid back together from the top: `I_l = h_l + up(I_{l+1})`.
pub fn reconstruct(pyr: &LaplacianPyramid, kernel: &[f64]) -> Result<LumaImage> {
    if pyr.residuals.is_empty() {
        return Err(Error::CorruptPyramid("no residual planes".into()));
    }
    let mut cur = pyr.top.clone();
    for (l, res) in pyr.residuals.iter().enumerate().rev() {
        let expect_w = ceil_half(res.width());
        let expect_h = ceil_half(res.height());
        if cur.width() != expect_w || cur.height() != expect_h {
            return Err(Error::CorruptPyramid(format!(
                "level {l} residual is {}x{} but the level above is {}x{} (expected {expect_w}x{expect_h})",
                res.width(),
                res.height(),
                cur.width(),
                cur.height()
            )));
        }
        cur = res.add(&upsample(&cur, res.width(), res.height(), kernel)?)?;
    }
    Ok(cur)
}

/// Remap a signed residual plane for visual inspection: `x -> x/2 + 128`,
/// clamped to `[0, 255]`.
pub fn residual_display_image(res: &LumaImage) -> Image {
    let data = res
        .as_slice()
        .iter()
        .map(|v| (v / 2.0 + 128.0).clamp(0.0, 255.0))
        .collect();
    Image::new(res.width(), res.height(), 1, data).expect("residual plane is a valid image")
}
