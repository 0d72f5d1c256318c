//! Separable 1-D convolution passes shared by the pyramid, the Gaussian
//! blur, and the windowed SSIM statistics.
//!
//! Border handling is mirror reflection without repeating the edge sample
//! (`... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...`), so constant signals stay
//! constant and no edge energy is duplicated into the interior.

/// Fold an out-of-range index back into `[0, n)` by mirror reflection.
pub(crate) fn mirror_index(i: isize, n: usize) -> usize {
    debug_assert!(n >= 1);
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut i = i.rem_euclid(period);
    if i >= n as isize {
        i = period - i;
    }
    i as usize
}

/// Normalized 1-D Gaussian taps of the given odd length.
pub(crate) fn gaussian_kernel_1d(sigma: f64, len: usize) -> Vec<f64> {
    debug_assert!(sigma > 0.0 && !len.is_multiple_of(2));
    let c = (len / 2) as f64;
    let inv = 1.0 / (2.0 * sigma * sigma);
    let mut taps: Vec<f64> = (0..len)
        .map(|i| (-(i as f64 - c).powi(2) * inv).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// Default odd kernel extent for a Gaussian of the given sigma:
/// `round(6*sigma) + 1`, forced odd, at least 3.
pub(crate) fn default_gaussian_extent(sigma: f64) -> usize {
    let mut e = (6.0 * sigma).round() as usize + 1;
    if e.is_multiple_of(2) {
        e += 1;
    }
    e.max(3)
}

/// Horizontal pass with mirror borders; output has the same dimensions.
pub(crate) fn conv_rows_mirror(src: &[f64], w: usize, h: usize, k: &[f64]) -> Vec<f64> {
    let r = k.len() / 2;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        let dst = &mut out[y * w..(y + 1) * w];
        for (x, d) in dst.iter_mut().enumerate() {
            let mut acc = 0.0;
            if x >= r && x + r < w {
                for (t, &kt) in k.iter().enumerate() {
                    acc += kt * row[x + t - r];
                }
            } else {
                for (t, &kt) in k.iter().enumerate() {
                    acc += kt * row[mirror_index(x as isize + t as isize - r as isize, w)];
                }
            }
            *d = acc;
        }
    }
    out
}

/// Vertical pass with mirror borders; output has the same dimensions.
pub(crate) fn conv_cols_mirror(src: &[f64], w: usize, h: usize, k: &[f64]) -> Vec<f64> {
    let r = k.len() / 2;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        if y >= r && y + r < h {
            for x in 0..w {
                let mut acc = 0.0;
                for (t, &kt) in k.iter().enumerate() {
                    acc += kt * src[(y + t - r) * w + x];
                }
                out[y * w + x] = acc;
            }
        } else {
            for x in 0..w {
                let mut acc = 0.0;
                for (t, &kt) in k.iter().enumerate() {
                    let yy = mirror_index(y as isize + t as isize - r as isize, h);
                    acc += kt * src[yy * w + x];
                }
                out[y * w + x] = acc;
            }
        }
    }
    out
}

/// Full separable convolution with mirror borders (rows first, then columns).
pub(crate) fn conv_separable_mirror(src: &[f64], w: usize, h: usize, k: &[f64]) -> Vec<f64> {
    let tmp = conv_rows_mirror(src, w, h, k);
    conv_cols_mirror(&tmp, w, h, k)
}

/// Horizontal valid-mode pass: output width shrinks to `w - k.len() + 1`.
pub(crate) fn conv_rows_valid(src: &[f64], w: usize, h: usize, k: &[f64]) -> (Vec<f64>, usize) {
    let n = k.len();
    debug_assert!(w >= n);
    let ow = w - n + 1;
    let mut out = vec![0.0; ow * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..ow {
            let mut acc = 0.0;
            for (t, &kt) in k.iter().enumerate() {
                acc += kt * row[x + t];
            }
            out[y * ow + x] = acc;
        }
    }
    (out, ow)
}

/// Vertical valid-mode pass: output height shrinks to `h - k.len() + 1`.
pub(crate) fn conv_cols_valid(src: &[f64], w: usize, h: usize, k: &[f64]) -> (Vec<f64>, usize) {
    let n = k.len();
    debug_assert!(h >= n);
    let oh = h - n + 1;
    let mut out = vec![0.0; w * oh];
    for y in 0..oh {
        for x in 0..w {
            let mut acc = 0.0;
            for (t, &kt) in k.iter().enumerate() {
                acc += kt * src[(y + t) * w + x];
            }
            out[y * w + x] = acc;
        }
    }
    (out, oh)
}

/// Separable valid-mode convolution; returns the plane and its dimensions.
pub(crate) fn conv_separable_valid(
    src: &[f64],
    w: usize,
    h: usize,
    k: &[f64],
) -> (Vec<f64>, usize, usize) {
    let (tmp, ow) = conv_rows_valid(src, w, h, k);
    let (out, oh) = conv_cols_valid(&tmp, ow, h, k);
    (out, ow, oh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_reflects_without_edge_repeat() {
        // samples 0 1 2 3: index -1 -> 1, -2 -> 2, 4 -> 2, 5 -> 1
        assert_eq!(mirror_index(-1, 4), 1);
        assert_eq!(mirror_index(-2, 4), 2);
        assert_eq!(mirror_index(4, 4), 2);
        assert_eq!(mirror_index(5, 4), 1);
        assert_eq!(mirror_index(0, 4), 0);
        assert_eq!(mirror_index(3, 4), 3);
        assert_eq!(mirror_index(7, 2), 1);
        assert_eq!(mirror_index(-3, 1), 0);
    }

    #[test]
    fn gaussian_kernel_normalized_and_symmetric() {
        let k = gaussian_kernel_1d(1.5, 11);
        let sum: f64 = k.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        for i in 0..k.len() {
            assert_eq!(k[i], k[k.len() - 1 - i]);
        }
        assert!(k[5] > k[4] && k[4] > k[3]);
    }

    #[test]
    fn default_extent_is_odd() {
        assert_eq!(default_gaussian_extent(2.0), 13);
        assert_eq!(default_gaussian_extent(4.0), 25);
        assert_eq!(default_gaussian_extent(8.0), 49);
        for s in [0.1, 0.5, 1.0, 1.5, 3.3, 7.7] {
            assert_eq!(default_gaussian_extent(s) % 2, 1);
        }
    }

    #[test]
    fn constant_signal_survives_mirror_convolution() {
        let src = vec![7.5; 6 * 4];
        let k = gaussian_kernel_1d(1.0, 5);
        let out = conv_separable_mirror(&src, 6, 4, &k);
        for v in out {
            assert!((v - 7.5).abs() < 1e-12);
        }
    }

    #[test]
    fn valid_mode_matches_naive_window_sum() {
        let w = 7;
        let h = 5;
        let src: Vec<f64> = (0..w * h).map(|i| (i * i % 13) as f64).collect();
        let k = [0.25, 0.5, 0.25];
        let (out, ow, oh) = conv_separable_valid(&src, w, h, &k);
        assert_eq!((ow, oh), (5, 3));
        // brute-force 2-D window sum against the separable result
        for y in 0..oh {
            for x in 0..ow {
                let mut acc = 0.0;
                for dy in 0..3 {
                    for dx in 0..3 {
                        acc += k[dy] * k[dx] * src[(y + dy) * w + (x + dx)];
                    }
                }
                assert!((out[y * ow + x] - acc).abs() < 1e-12);
            }
        }
    }
}
