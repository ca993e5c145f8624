//! Dataset quality metrics: k-NN precision/recall, authenticity, and a
//! ridge autoregressive forecaster for train-on-synthetic comparisons.
//!
//! Windows are compared as flattened vectors under Euclidean distance.
//! Nearest-neighbour ties resolve to the lowest index.

mod forecast;
mod report;

pub use forecast::{fit_forecaster, forecast_mae, ForecasterModel};
pub use report::{evaluate, EvalConfig, EvalReport};

use crate::datagen::WindowDataset;
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrMetricConfig {
    pub k: usize,
}

impl Default for PrMetricConfig {
    fn default() -> Self {
        Self { k: 5 }
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Distance from each point to its k-th nearest other point in the same set.
fn knn_radii(points: &[Vec<f64>], k: usize) -> Vec<f64> {
    par::map_range(points.len(), |i| {
        let mut d: Vec<f64> = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| distance(&points[i], p))
            .collect();
        let (_, kth, _) = d.select_nth_unstable_by(k - 1, f64::total_cmp);
        *kth
    })
}

/// Fraction of `queries` lying inside at least one closed ball
/// `B(centers[j], radii[j])`.
fn coverage(queries: &[Vec<f64>], centers: &[Vec<f64>], radii: &[f64]) -> f64 {
    let hits = par::map_range(queries.len(), |i| {
        centers
            .iter()
            .zip(radii)
            .any(|(c, r)| distance(&queries[i], c) <= *r)
    });
    hits.iter().filter(|h| **h).count() as f64 / queries.len() as f64
}

fn check_pair(real: &WindowDataset, synth: &WindowDataset) -> Result<()> {
    if real.is_empty() || synth.is_empty() {
        return Err(Error::EmptyDataset);
    }
    real.check_compatible(synth)
}

/// k-NN manifold precision and recall.
///
/// Precision is the fraction of synthetic windows inside the k-NN ball of
/// some real window; recall is the same with the roles swapped.
pub fn precision_recall(
    real: &WindowDataset,
    synth: &WindowDataset,
    cfg: &PrMetricConfig,
) -> Result<(f64, f64)> {
    check_pair(real, synth)?;
    let k = cfg.k;
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    for size in [real.len(), synth.len()] {
        if k >= size {
            return Err(Error::KTooLarge { k, size });
        }
    }
    let real_radii = knn_radii(real.windows(), k);
    let synth_radii = knn_radii(synth.windows(), k);
    let precision = coverage(synth.windows(), real.windows(), &real_radii);
    let recall = coverage(real.windows(), synth.windows(), &synth_radii);
    Ok((precision, recall))
}

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

fn nearest(query: &[f64], points: &[Vec<f64>], skip: Option<usize>) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for (j, p) in points.iter().enumerate() {
        if Some(j) == skip {
            continue;
        }
        let d = distance(query, p);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Fraction of synthetic windows that are not copies of a real window.
///
/// A synthetic window `s` with nearest real window `r` is a copy when
/// `d(s, r) < d(r, nearest other real window)`.
pub fn authenticity(real: &WindowDataset, synth: &WindowDataset) -> Result<f64> {
    check_pair(real, synth)?;
    if real.len() < 2 {
        return Err(Error::InvalidConfig(
            "authenticity needs at least 2 real windows".into(),
        ));
    }
    let reals = real.windows();
    let real_gap = par::map_range(reals.len(), |i| nearest(&reals[i], reals, Some(i)).1);
    let copies = par::map_range(synth.len(), |i| {
        let (r, d) = nearest(&synth.windows()[i], reals, None);
        d < real_gap[r]
    });
    let authentic = copies.iter().filter(|c| !**c).count();
    Ok(authentic as f64 / synth.len() as f64)
}
