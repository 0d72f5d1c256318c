//! Structure-preservation evaluation without reference images.
//!
//! The core idea: compare two images by running SSIM on a chosen residual
//! level of their Laplacian pyramids instead of on raw pixels. Deep
//! residuals carry the coarse structure of a picture and survive
//! low-pass degradations such as heavy blur, so the residual-space score
//! keeps tracking geometric change where plain SSIM has already
//! collapsed.
//!
//! The crate bundles everything needed to check that claim on your own
//! data:
//!
//! - [`image`] / [`io`] - `f64` rasters in the `[0, 255]` convention,
//!   PNG/PPM/PGM codecs, luma conversion, bilinear resizing
//! - [`pyramid`] - Laplacian pyramid build, per-level residuals, exact
//!   reconstruction
//! - [`metrics`] - windowed SSIM, the residual metric, level profiles
//! - [`degrade`] - seeded Gaussian blur and elastic deformation, plus the
//!   clean/blurred/deformed-set builder
//! - [`stats`] - score histograms and Jensen-Shannon divergence
//! - [`harness`] - the end-to-end validity experiment with report output
//! - [`synth`] - a seeded generator of natural-looking test images
//!
//! The `lassim` binary exposes all of it as subcommands; the `examples/`
//! directory shows one runnable walkthrough per capability.
//!
//! ```
//! use lassim::{lassim, ssim, PyramidParams, SsimParams};
//! use lassim::synth::natural_image;
//!
//! let clean = natural_image(128, 96, 7);
//! let same = clean.clone();
//! let pyr = PyramidParams::default();
//! let params = SsimParams::default();
//! assert_eq!(ssim(&clean, &same, &params).unwrap().value(), 1.0);
//! assert_eq!(lassim(&clean, &same, 3, &pyr, &params).unwrap().value(), 1.0);
//! ```

pub mod cli;
pub mod degrade;
pub mod error;
mod filter;
pub mod harness;
pub mod image;
pub mod io;
pub mod metrics;
pub mod pyramid;
pub mod stats;
pub mod synth;

pub use self::error::{Error, Result};
pub use self::image::{resize_bilinear, to_luma, Image, LumaImage};
pub use self::metrics::{
    lassim, lassim_profile, ssim, ChannelPolicy, MetricScore, SsimParams, WindowKind,
};
pub use self::pyramid::{
    build_pyramid, reconstruct, residual_at, LaplacianPyramid, PyramidParams,
};
