//! Raster types: interleaved multi-channel [`Image`] and single-plane
//! [`LumaImage`], plus channel conversion and bilinear resampling.
//!
//! Samples are stored as `f64` in the `[0, 255]` convention of 8-bit
//! sources, so the usual SSIM data range of 255 applies unchanged.
//! Pyramid residuals reuse [`LumaImage`] with signed, unclamped samples.

use crate::error::{Error, Result};

/// Rec.601 luma weights.
const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// Row-major interleaved raster with 1 or 3 channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DegenerateSize {
                width,
                height,
                context: "image".into(),
            });
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidParams(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return Err(Error::InvalidParams(format!(
                "data length {} does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams("non-finite sample".into()));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Sample at (x, y) for channel c.
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// Extract one channel as a plane.
    pub fn channel_plane(&self, c: usize) -> LumaImage {
        assert!(c < self.channels);
        let data = self
            .data
            .chunks_exact(self.channels)
            .map(|px| px[c])
            .collect();
        LumaImage {
            width: self.width,
            height: self.height,
            data,
        }
    }

    /// Reassemble an interleaved image from equally sized planes.
    pub fn from_planes(planes: &[LumaImage]) -> Result<Self> {
        let first = planes
            .first()
            .ok_or_else(|| Error::EmptyInput("no planes".into()))?;
        for p in planes {
            if p.width != first.width || p.height != first.height {
                return Err(Error::DimensionMismatch {
                    expected_w: first.width,
                    expected_h: first.height,
                    actual_w: p.width,
                    actual_h: p.height,
                });
            }
        }
        let channels = planes.len();
        let mut data = Vec::with_capacity(first.width * first.height * channels);
        for i in 0..first.width * first.height {
            for p in planes {
                data.push(p.data[i]);
            }
        }
        Image::new(first.width, first.height, channels, data)
    }
}

/// Single-channel plane. Decoded content lives in `[0, 255]`; pyramid
/// residuals and displacement fields hold signed values.
#[derive(Debug, Clone, PartialEq)]
pub struct LumaImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl LumaImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DegenerateSize {
                width,
                height,
                context: "plane".into(),
            });
        }
        if data.len() != width * height {
            return Err(Error::InvalidParams(format!(
                "data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams("non-finite sample".into()));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Plane filled with a constant value.
    pub fn constant(width: usize, height: usize, value: f64) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Build a plane from a per-pixel function.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    /// Elementwise difference, used for pyramid residuals.
    pub fn sub(&self, other: &LumaImage) -> Result<LumaImage> {
        self.check_dims(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(LumaImage::from_raw(self.width, self.height, data))
    }

    /// Elementwise sum, used for pyramid reconstruction.
    pub fn add(&self, other: &LumaImage) -> Result<LumaImage> {
        self.check_dims(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(LumaImage::from_raw(self.width, self.height, data))
    }

    /// Add a constant to every sample without clamping.
    pub fn offset(&self, c: f64) -> LumaImage {
        LumaImage::from_raw(self.width, self.height, self.data.iter().map(|v| v + c).collect())
    }

    /// View this plane as a single-channel [`Image`].
    pub fn into_image(self) -> Result<Image> {
        Image::new(self.width, self.height, 1, self.data)
    }

    pub(crate) fn check_dims(&self, other: &LumaImage) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch {
                expected_w: self.width,
                expected_h: self.height,
                actual_w: other.width,
                actual_h: other.height,
            });
        }
        Ok(())
    }

    /// Bilinear sample at a fractional position, clamped to the edges.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        let fx = x.clamp(0.0, (self.width - 1) as f64);
        let fy = y.clamp(0.0, (self.height - 1) as f64);
        let x0 = fx.floor() as usize;
        let y0 = fy.floor() as usize;
        let tx = fx - x0 as f64;
        let ty = fy - y0 as f64;
        let v00 = self.get(x0, y0);
        if tx == 0.0 && ty == 0.0 {
            return v00;
        }
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let v10 = self.get(x1, y0);
        let v01 = self.get(x0, y1);
        let v11 = self.get(x1, y1);
        let top = v00 * (1.0 - tx) + v10 * tx;
        let bot = v01 * (1.0 - tx) + v11 * tx;
        top * (1.0 - ty) + bot * ty
    }
}

/// Collapse to a single luma plane. RGB uses Rec.601 weights
/// (Y = 0.299 R + 0.587 G + 0.114 B); grayscale input is copied.
pub fn to_luma(img: &Image) -> LumaImage {
    match img.channels() {
        1 => LumaImage::from_raw(img.width(), img.height(), img.data().to_vec()),
        3 => {
            let data = img
                .data()
                .chunks_exact(3)
                .map(|px| (LUMA_R * px[0] + LUMA_G * px[1] + LUMA_B * px[2]).clamp(0.0, 255.0))
                .collect();
            LumaImage::from_raw(img.width(), img.height(), data)
        }
        _ => unreachable!("Image invariant allows 1 or 3 channels"),
    }
}

/// Bilinear resize with edge-clamped, pixel-center sampling. Resizing to
/// the same dimensions returns a bitwise-equal copy.
pub fn resize_bilinear(img: &LumaImage, new_w: usize, new_h: usize) -> Result<LumaImage> {
    if new_w == 0 || new_h == 0 {
        return Err(Error::DegenerateSize {
            width: new_w,
            height: new_h,
            context: "resize target".into(),
        });
    }
    if new_w == img.width() && new_h == img.height() {
        return Ok(img.clone());
    }
    let sx = img.width() as f64 / new_w as f64;
    let sy = img.height() as f64 / new_h as f64;
    Ok(LumaImage::from_fn(new_w, new_h, |x, y| {
        let src_x = (x as f64 + 0.5) * sx - 0.5;
        let src_y = (y as f64 + 0.5) * sy - 0.5;
        img.sample_bilinear(src_x, src_y)
    }))
}
