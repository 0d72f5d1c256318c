//! Image decoding and encoding: 8-bit PNG (gray/RGB) and binary PPM/PGM.
//!
//! Samples map byte value `v` to `f64(v)` on read. On write, samples are
//! clamped to `[0, 255]` and rounded half-to-even to 8 bits, so a
//! decode(encode(x)) round trip is within 0.5 per sample for in-range
//! input.

use std::io::Cursor;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat};

use crate::error::{Error, Result};
use crate::image::Image;

/// Output container format. `Ppm` writes binary PNM: P5 for one channel,
/// P6 for three.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Png,
    Ppm,
}

impl Format {
    /// Pick a format from a file extension.
    pub fn from_path(path: &Path) -> Result<Format> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("png") => Ok(Format::Png),
            Some("ppm" | "pgm" | "pnm") => Ok(Format::Ppm),
            other => Err(Error::UnsupportedFormat(format!(
                "unknown extension {other:?} (expected png, ppm, pgm or pnm)"
            ))),
        }
    }
}

/// Decode a PNG or PNM byte stream into an [`Image`].
pub fn decode_image(bytes: &[u8]) -> Result<Image> {
    let format = image::guess_format(bytes)
        .map_err(|e| Error::Decode(format!("unrecognized stream: {e}")))?;
    match format {
        ImageFormat::Png | ImageFormat::Pnm => {}
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "container {other:?} not supported (expected PNG or PNM)"
            )))
        }
    }
    let dynimg = image::load_from_memory_with_format(bytes, format)
        .map_err(|e| Error::Decode(e.to_string()))?;
    let w = dynimg.width() as usize;
    let h = dynimg.height() as usize;
    match dynimg {
        DynamicImage::ImageLuma8(buf) => {
            let data = buf.into_raw().into_iter().map(f64::from).collect();
            Image::new(w, h, 1, data)
        }
        DynamicImage::ImageRgb8(buf) => {
            let data = buf.into_raw().into_iter().map(f64::from).collect();
            Image::new(w, h, 3, data)
        }
        DynamicImage::ImageLuma16(_) | DynamicImage::ImageRgb16(_) => Err(
            Error::UnsupportedFormat("16-bit samples not supported".into()),
        ),
        DynamicImage::ImageLumaA8(_)
        | DynamicImage::ImageRgba8(_)
        | DynamicImage::ImageLumaA16(_)
        | DynamicImage::ImageRgba16(_) => Err(Error::UnsupportedFormat(
            "alpha channels not supported".into(),
        )),
        other => Err(Error::UnsupportedFormat(format!(
            "color type {:?} not supported",
            other.color()
        ))),
    }
}

/// Quantize to 8 bits: clamp then round half-to-even.
fn quantize(data: &[f64]) -> Vec<u8> {
    data.iter()
        .map(|&v| v.clamp(0.0, 255.0).round_ties_even() as u8)
        .collect()
}

/// Encode an [`Image`] into a PNG or binary PNM byte stream.
pub fn encode_image(img: &Image, format: Format) -> Result<Vec<u8>> {
    let bytes = quantize(img.data());
    let color = match img.channels() {
        1 => ExtendedColorType::L8,
        3 => ExtendedColorType::Rgb8,
        _ => unreachable!("Image invariant allows 1 or 3 channels"),
    };
    let mut out = Vec::new();
    match format {
        Format::Png => {
            PngEncoder::new(Cursor::new(&mut out))
                .write_image(&bytes, img.width() as u32, img.height() as u32, color)
                .map_err(|e| Error::Decode(format!("png encode failed: {e}")))?;
        }
        Format::Ppm => {
            let subtype = match img.channels() {
                1 => PnmSubtype::Graymap(SampleEncoding::Binary),
                _ => PnmSubtype::Pixmap(SampleEncoding::Binary),
            };
            PnmEncoder::new(Cursor::new(&mut out))
                .with_subtype(subtype)
                .write_image(&bytes, img.width() as u32, img.height() as u32, color)
                .map_err(|e| Error::Decode(format!("pnm encode failed: {e}")))?;
        }
    }
    Ok(out)
}

/// Read and decode an image file.
pub fn load_image(path: &Path) -> Result<Image> {
    let bytes = std::fs::read(path)?;
    decode_image(&bytes).map_err(|e| match e {
        Error::Decode(msg) => Error::Decode(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Encode and write an image file; the format comes from the extension.
pub fn save_image(path: &Path, img: &Image) -> Result<()> {
    let format = Format::from_path(path)?;
    let bytes = encode_image(img, format)?;
    std::fs::write(path, bytes)?;
    Ok(())
}
