//! Score-distribution construction and Jensen-Shannon divergence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Additive mass given to every bin before renormalizing, so divergences
/// stay finite on disjoint empirical supports.
pub const SMOOTHING_EPSILON: f64 = 1e-12;

/// Normalized histogram of per-image metric scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreDistribution {
    /// `bins + 1` edges spanning the score range.
    pub bin_edges: Vec<f64>,
    /// Per-bin mass, summing to 1.
    pub probabilities: Vec<f64>,
    pub n_samples: usize,
    /// The raw scores the histogram was built from.
    pub raw_scores: Vec<f64>,
}

/// Histogram of `scores` over `bins` uniform bins spanning `range`.
/// Out-of-range scores clamp into the first or last bin. Mass is
/// normalized to 1 after epsilon smoothing.
pub fn build_distribution(scores: &[f64], bins: usize, range: (f64, f64)) -> Result<ScoreDistribution> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("no scores to histogram".into()));
    }
    if bins == 0 {
        return Err(Error::InvalidParams("bin count must be >= 1".into()));
    }
    let (lo, hi) = range;
    if !lo.is_finite() || !hi.is_finite() || hi <= lo {
        return Err(Error::InvalidParams(format!(
            "invalid histogram range [{lo}, {hi}]"
        )));
    }
    let mut counts = vec![0.0_f64; bins];
    let scale = bins as f64 / (hi - lo);
    for &s in scores {
        if !s.is_finite() {
            return Err(Error::InvalidParams(format!("non-finite score {s}")));
        }
        let idx = (((s - lo) * scale).floor() as isize).clamp(0, bins as isize - 1) as usize;
        counts[idx] += 1.0;
    }
    let n = scores.len() as f64;
    let total = n + SMOOTHING_EPSILON * bins as f64;
    let probabilities = counts
        .iter()
        .map(|c| (c + SMOOTHING_EPSILON) / total)
        .collect();
    let bin_edges = (0..=bins)
        .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
        .collect();
    Ok(ScoreDistribution {
        bin_edges,
        probabilities,
        n_samples: scores.len(),
        raw_scores: scores.to_vec(),
    })
}

impl ScoreDistribution {
    /// Default binning for similarity scores: 100 uniform bins on [0, 1].
    pub fn from_scores(scores: &[f64]) -> Result<Self> {
        build_distribution(scores, 100, (0.0, 1.0))
    }

    pub fn bins(&self) -> usize {
        self.probabilities.len()
    }

    /// CSV rows `bin_lo,bin_hi,mass` for plotting overlays.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,mass\n");
        for (i, p) in self.probabilities.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.bin_edges[i],
                self.bin_edges[i + 1],
                p
            ));
        }
        out
    }
}

/// Jensen-Shannon divergence between two labeled score distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceResult {
    /// Base-2 JS divergence, in [0, 1].
    pub js: f64,
    pub metric_name: String,
    pub degradation_labels: [String; 2],
}

fn kl_base2(p: &[f64], m: &[f64]) -> f64 {
    p.iter()
        .zip(m)
        .map(|(&pi, &mi)| {
            if pi > 0.0 {
                pi * (pi / mi).log2()
            } else {
                0.0
            }
        })
        .sum()
}

/// Base-2 Jensen-Shannon divergence:
/// `JS(P, Q) = KL(P || M)/2 + KL(Q || M)/2` with `M = (P + Q)/2`.
/// Symmetric, and bounded to [0, 1] with the base-2 logarithm.
pub fn js_divergence(p: &ScoreDistribution, q: &ScoreDistribution) -> Result<f64> {
    if p.bin_edges.len() != q.bin_edges.len()
        || p.bin_edges
            .iter()
            .zip(&q.bin_edges)
            .any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(Error::BinningMismatch(format!(
            "{} vs {} bins or differing edges",
            p.bins(),
            q.bins()
        )));
    }
    let m: Vec<f64> = p
        .probabilities
        .iter()
        .zip(&q.probabilities)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    Ok(0.5 * kl_base2(&p.probabilities, &m) + 0.5 * kl_base2(&q.probabilities, &m))
}

/// `js_divergence` packaged with the metric and degradation labels it
/// compares, as used in the report rows.
pub fn js_divergence_labeled(
    p: &ScoreDistribution,
    q: &ScoreDistribution,
    metric_name: &str,
    label_p: &str,
    label_q: &str,
) -> Result<DivergenceResult> {
    Ok(DivergenceResult {
        js: js_divergence(p, q)?,
        metric_name: metric_name.to_string(),
        degradation_labels: [label_p.to_string(), label_q.to_string()],
    })
}

/// Mean and sample standard deviation of a score list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 when degenerate.
    pub std: f64,
    pub n: usize,
    /// True when fewer than two samples made the std meaningless.
    pub degenerate_std: bool,
}

/// Arithmetic mean and sample standard deviation (n - 1 denominator).
/// With fewer than two samples the std is reported as 0 and flagged.
pub fn summarize(scores: &[f64]) -> Result<Summary> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("no scores to summarize".into()));
    }
    let n = scores.len();
    let mean = scores.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return Ok(Summary {
            mean,
            std: 0.0,
            n,
            degenerate_std: true,
        });
    }
    let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Ok(Summary {
        mean,
        std: var.sqrt(),
        n,
        degenerate_std: false,
    })
}
