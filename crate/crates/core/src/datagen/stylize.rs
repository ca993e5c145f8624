//! Dataset-level stylization and content strategies.

use std::path::PathBuf;

use rand::Rng;

use super::{io, Lineage, WindowDataset, WindowMeta};
use crate::error::{Error, Result};
use crate::features::{FeatureConfig, TrendConfig};
use crate::losses::LossWeights;
use crate::optimizer::{style_time, OptimizerConfig};
use crate::{par, rng};

/// Random unit-step shock: amplitude drawn uniformly from `amplitude`, step
/// position uniformly from the inclusive index range `shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockConfig {
    pub amplitude: (f64, f64),
    pub shift: (usize, usize),
    pub seed: u64,
}

impl ShockConfig {
    /// Amplitudes within two mean per-window standard deviations of
    /// `train`, steps in the middle half of the window.
    pub fn default_for(train: &WindowDataset, seed: u64) -> Result<Self> {
        let len = train.window_len().ok_or(Error::EmptyDataset)?;
        let mean_std = train
            .windows()
            .iter()
            .map(|w| {
                let m = w.iter().sum::<f64>() / w.len() as f64;
                (w.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (w.len() - 1) as f64).sqrt()
            })
            .sum::<f64>()
            / train.len() as f64;
        Ok(Self {
            amplitude: (-2.0 * mean_std, 2.0 * mean_std),
            shift: (len / 4, 3 * len / 4),
            seed,
        })
    }

    pub fn validate(&self, window_len: usize) -> Result<()> {
        let (lo, hi) = self.amplitude;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidConfig("shock amplitude range must be lo <= hi".into()));
        }
        if self.shift.0 > self.shift.1 || self.shift.1 >= window_len {
            return Err(Error::InvalidConfig(format!(
                "shock shift range {}:{} must lie within [0, {}]",
                self.shift.0,
                self.shift.1,
                window_len - 1
            )));
        }
        Ok(())
    }
}

/// Adds `a * 1[t >= k]` with `a` and `k` drawn from the shock ranges.
pub fn perturb_with_step<R: Rng + ?Sized>(window: &[f64], shock: &ShockConfig, rng: &mut R) -> Vec<f64> {
    let (lo, hi) = shock.amplitude;
    let a = if lo < hi { rng.random_range(lo..=hi) } else { lo };
    let k = rng.random_range(shock.shift.0..=shock.shift.1);
    add_step(window, a, k)
}

pub(crate) fn add_step(window: &[f64], amplitude: f64, at: usize) -> Vec<f64> {
    window
        .iter()
        .enumerate()
        .map(|(t, v)| if t >= at { v + amplitude } else { *v })
        .collect()
}

/// Source of content windows for dataset stylization.
#[derive(Debug, Clone, PartialEq)]
pub enum ContentStrategy {
    /// The style (training) windows themselves.
    InSample,
    /// Each training window shocked once by a random unit step.
    Perturbed(ShockConfig),
    /// Windows produced elsewhere, read from a window CSV.
    External(PathBuf),
}

impl ContentStrategy {
    pub fn resolve(&self, train: &WindowDataset) -> Result<WindowDataset> {
        match self {
            Self::InSample => Ok(train.clone()),
            Self::Perturbed(shock) => {
                let len = train.window_len().ok_or(Error::EmptyDataset)?;
                shock.validate(len)?;
                let mut r = rng::from_seed(shock.seed);
                train.map_windows(|_, w| perturb_with_step(w, shock, &mut r))
            }
            Self::External(path) => {
                let ds = io::read_windows(path)?;
                train.check_compatible(&ds)?;
                Ok(ds)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationConfig {
    pub n: usize,
    pub weights: LossWeights,
    pub optimizer: OptimizerConfig,
    pub features: FeatureConfig,
    pub trend: TrendConfig,
    pub seed: u64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self {
            n: 100,
            weights: LossWeights::default(),
            optimizer: OptimizerConfig::default(),
            features: FeatureConfig::default(),
            trend: TrendConfig::default(),
            seed: 0,
        }
    }
}

fn stylize_sample(
    n: usize,
    content: &WindowDataset,
    style: &WindowDataset,
    cfg: &GenerationConfig,
) -> Result<(Vec<f64>, Lineage)> {
    let seed = rng::derive_seed(cfg.seed, n as u64);
    let mut r = rng::from_seed(seed);
    let content_idx = r.random_range(0..content.len());
    let style_idx = r.random_range(0..style.len());
    let out = style_time(
        &content.windows()[content_idx],
        &style.windows()[style_idx],
        cfg.weights,
        &cfg.optimizer,
        &cfg.features,
        &cfg.trend,
    )
    .map_err(|e| Error::Sample {
        index: n,
        source: Box::new(e),
    })?;
    Ok((
        out.stylized,
        Lineage {
            content_idx,
            style_idx,
            seed,
        },
    ))
}

fn check_inputs(content: &WindowDataset, style: &WindowDataset, cfg: &GenerationConfig) -> Result<()> {
    if cfg.n == 0 {
        return Err(Error::InvalidConfig("number of samples must be positive".into()));
    }
    content.check_compatible(style)?;
    cfg.weights.validate()?;
    cfg.optimizer.validate()
}

fn assemble(results: Vec<(usize, Vec<f64>, Lineage)>) -> Result<WindowDataset> {
    let (windows, meta) = results
        .into_iter()
        .map(|(n, w, lineage)| {
            let meta = WindowMeta {
                source: "stylized".into(),
                start: Some(n),
                lineage: Some(lineage),
            };
            (w, meta)
        })
        .unzip();
    WindowDataset::new(windows, meta)
}

/// Stylizes `cfg.n` uniformly drawn (content, style) pairs, sampling with
/// replacement. Sample `n` draws from sub-stream `derive_seed(seed, n)`, so
/// the output does not depend on how samples are scheduled. Aborts on the
/// lowest failing sample index.
pub fn generate_stylized_dataset(
    content: &WindowDataset,
    style: &WindowDataset,
    cfg: &GenerationConfig,
) -> Result<WindowDataset> {
    check_inputs(content, style, cfg)?;
    let results = par::try_map_range(cfg.n, |n| {
        stylize_sample(n, content, style, cfg).map(|(w, l)| (n, w, l))
    })?;
    assemble(results)
}

/// Like [`generate_stylized_dataset`], but failed samples are dropped and
/// returned alongside the dataset.
pub fn generate_stylized_dataset_lenient(
    content: &WindowDataset,
    style: &WindowDataset,
    cfg: &GenerationConfig,
) -> Result<(WindowDataset, Vec<Error>)> {
    check_inputs(content, style, cfg)?;
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for (n, r) in par::map_range(cfg.n, |n| stylize_sample(n, content, style, cfg))
        .into_iter()
        .enumerate()
    {
        match r {
            Ok((w, l)) => ok.push((n, w, l)),
            Err(e) => failed.push(e),
        }
    }
    Ok((assemble(ok)?, failed))
}
