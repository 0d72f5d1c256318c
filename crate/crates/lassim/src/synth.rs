//! Seeded generator for natural-looking test images.
//!
//! Produces grayscale scenes with the multi-scale statistics the metrics
//! care about: fractal value noise across octaves, soft-edged elliptical
//! objects, an illumination gradient, and light per-pixel grain. Handy
//! for examples, benchmarks, and running the validity experiment without
//! shipping a dataset.

use std::path::{Path, PathBuf};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degrade::derive_seed;
use crate::error::Result;
use crate::image::{Image, LumaImage};
use crate::io;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64) / 9007199254740992.0
}

fn uniform_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

/// One octave of value noise: random lattice values interpolated with a
/// smoothstep kernel.
fn value_noise(rng: &mut ChaCha8Rng, w: usize, h: usize, cell: f64) -> Vec<f64> {
    let gw = (w as f64 / cell).ceil() as usize + 2;
    let gh = (h as f64 / cell).ceil() as usize + 2;
    let lattice: Vec<f64> = (0..gw * gh).map(|_| 2.0 * uniform(rng) - 1.0).collect();
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        let fy = y as f64 / cell;
        let y0 = fy.floor() as usize;
        let ty = smoothstep(fy - y0 as f64);
        for x in 0..w {
            let fx = x as f64 / cell;
            let x0 = fx.floor() as usize;
            let tx = smoothstep(fx - x0 as f64);
            let v00 = lattice[y0 * gw + x0];
            let v10 = lattice[y0 * gw + x0 + 1];
            let v01 = lattice[(y0 + 1) * gw + x0];
            let v11 = lattice[(y0 + 1) * gw + x0 + 1];
            let top = v00 * (1.0 - tx) + v10 * tx;
            let bot = v01 * (1.0 - tx) + v11 * tx;
            out.push(top * (1.0 - ty) + bot * ty);
        }
    }
    out
}

/// Generate one grayscale scene for the given seed.
pub fn natural_image(width: usize, height: usize, seed: u64) -> LumaImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = width * height;
    let mut acc = vec![0.0_f64; n];

    // fractal background with a gently falling amplitude spectrum, so the
    // scenes carry real texture at fine scales like photographs do
    let falloff = uniform_in(&mut rng, 1.10, 1.24);
    for (i, cell) in [96.0, 48.0, 24.0, 12.0, 6.0].into_iter().enumerate() {
        let amp = 24.0 / falloff.powi(i as i32);
        let octave = value_noise(&mut rng, width, height, cell);
        for (a, o) in acc.iter_mut().zip(&octave) {
            *a += amp * o;
        }
    }

    // elliptical objects with a sigmoid boundary a few pixels wide
    let blobs = 8 + (rng.next_u64() % 12) as usize;
    for _ in 0..blobs {
        let cx = uniform_in(&mut rng, 0.0, width as f64);
        let cy = uniform_in(&mut rng, 0.0, height as f64);
        let ax = uniform_in(&mut rng, 9.0, 60.0);
        let ay = uniform_in(&mut rng, 9.0, 60.0);
        let theta = uniform_in(&mut rng, 0.0, std::f64::consts::PI);
        let amp = uniform_in(&mut rng, 15.0, 50.0) * if uniform(&mut rng) < 0.5 { -1.0 } else { 1.0 };
        let edge = uniform_in(&mut rng, 5.0, 12.0);
        let (sin_t, cos_t) = theta.sin_cos();
        // render only where the shell is non-negligible
        let reach = 2.0 * ax.max(ay);
        let x_min = ((cx - reach).floor().max(0.0)) as usize;
        let x_max = ((cx + reach).ceil().min(width as f64 - 1.0)) as usize;
        let y_min = ((cy - reach).floor().max(0.0)) as usize;
        let y_max = ((cy + reach).ceil().min(height as f64 - 1.0)) as usize;
        for y in y_min..=y_max {
            for x in x_min..=x_max {
                let rx = x as f64 - cx;
                let ry = y as f64 - cy;
                let u = (rx * cos_t + ry * sin_t) / ax;
                let v = (-rx * sin_t + ry * cos_t) / ay;
                let d = (u * u + v * v).sqrt();
                acc[y * width + x] += amp / (1.0 + ((d - 1.0) * edge).exp());
            }
        }
    }

    // gentle illumination gradient
    let gx = uniform_in(&mut rng, -18.0, 18.0) / width as f64;
    let gy = uniform_in(&mut rng, -18.0, 18.0) / height as f64;
    for y in 0..height {
        for x in 0..width {
            acc[y * width + x] += gx * x as f64 + gy * y as f64;
        }
    }

    // sensor-like grain
    let grain = uniform_in(&mut rng, 4.0, 8.0);
    for a in acc.iter_mut() {
        *a += grain * (2.0 * uniform(&mut rng) - 1.0);
    }

    // map into a comfortable value range without hard clipping
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &a in &acc {
        lo = lo.min(a);
        hi = hi.max(a);
    }
    let span = (hi - lo).max(1e-9);
    let out_lo = uniform_in(&mut rng, 8.0, 30.0);
    let out_hi = uniform_in(&mut rng, 215.0, 247.0);
    for a in acc.iter_mut() {
        *a = out_lo + (out_hi - out_lo) * (*a - lo) / span;
    }
    LumaImage::from_raw(width, height, acc)
}

/// Write `count` generated scenes into `dir` as 8-bit grayscale PNGs named
/// `synth_0000.png`, `synth_0001.png`, ... Returns the written paths.
pub fn generate_corpus(
    dir: &Path,
    count: usize,
    width: usize,
    height: usize,
    seed: u64,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(count);
    for i in 0..count {
        let img: Image = natural_image(width, height, derive_seed(seed, i as u64)).into_image()?;
        let path = dir.join(format!("synth_{i:04}.png"));
        io::save_image(&path, &img)?;
        paths.push(path);
    }
    Ok(paths)
}
