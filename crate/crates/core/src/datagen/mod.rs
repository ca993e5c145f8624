//! Window datasets: construction, generation, augmentation, stylization.

mod augment;
mod generator;
pub mod io;
mod stylize;

pub use augment::{augment_flip, augment_jitter, augment_time_warp};
pub use generator::{gen_switching_ar1, SwitchingArConfig};
pub use stylize::{
    generate_stylized_dataset, generate_stylized_dataset_lenient, perturb_with_step,
    ContentStrategy, GenerationConfig, ShockConfig,
};

use crate::error::{Error, Result};
use crate::series::{self, Series};

/// Where a stylized window came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lineage {
    pub content_idx: usize,
    pub style_idx: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowMeta {
    pub source: String,
    /// 0-based offset of the window's first value in its source series.
    pub start: Option<usize>,
    pub lineage: Option<Lineage>,
}

/// Equal-length windows with per-window provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowDataset {
    windows: Vec<Vec<f64>>,
    meta: Vec<WindowMeta>,
}

impl WindowDataset {
    pub fn new(windows: Vec<Vec<f64>>, meta: Vec<WindowMeta>) -> Result<Self> {
        if windows.len() != meta.len() {
            return Err(Error::LengthMismatch {
                expected: windows.len(),
                got: meta.len(),
            });
        }
        if let Some(first) = windows.first() {
            for w in &windows {
                if w.len() != first.len() {
                    return Err(Error::LengthMismatch {
                        expected: first.len(),
                        got: w.len(),
                    });
                }
                series::check_finite(w)?;
            }
            if first.is_empty() {
                return Err(Error::SeriesTooShort { needed: 1, got: 0 });
            }
        }
        Ok(Self { windows, meta })
    }

    /// Windows with generic provenance: `source` label and row index as start.
    pub fn from_windows(windows: Vec<Vec<f64>>, source: &str) -> Result<Self> {
        let meta = (0..windows.len())
            .map(|i| WindowMeta {
                source: source.to_string(),
                start: Some(i),
                lineage: None,
            })
            .collect();
        Self::new(windows, meta)
    }

    pub fn windows(&self) -> &[Vec<f64>] {
        &self.windows
    }

    pub fn meta(&self) -> &[WindowMeta] {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// Common window length, `None` when empty.
    pub fn window_len(&self) -> Option<usize> {
        self.windows.first().map(Vec::len)
    }

    pub fn get(&self, i: usize) -> Option<&[f64]> {
        self.windows.get(i).map(Vec::as_slice)
    }

    /// First `n` windows (all of them if `n >= len`).
    pub fn head(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            windows: self.windows[..n].to_vec(),
            meta: self.meta[..n].to_vec(),
        }
    }

    /// Concatenation of two datasets with equal window length.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if let (Some(a), Some(b)) = (self.window_len(), other.window_len()) {
            if a != b {
                return Err(Error::LengthMismatch { expected: a, got: b });
            }
        }
        let mut out = self.clone();
        out.windows.extend(other.windows.iter().cloned());
        out.meta.extend(other.meta.iter().cloned());
        Ok(out)
    }

    /// Applies `f` to every window, keeping provenance.
    pub fn map_windows(&self, mut f: impl FnMut(usize, &[f64]) -> Vec<f64>) -> Result<Self> {
        let windows = self.windows.iter().enumerate().map(|(i, w)| f(i, w)).collect();
        Self::new(windows, self.meta.clone())
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        match (self.window_len(), other.window_len()) {
            (Some(a), Some(b)) if a != b => Err(Error::LengthMismatch { expected: a, got: b }),
            (Some(_), Some(_)) => Ok(()),
            _ => Err(Error::EmptyDataset),
        }
    }
}

/// All `T - W` contiguous windows of length `W + 1`.
pub fn sliding_windows(series: &Series, w: usize) -> Result<WindowDataset> {
    let values = series.values();
    if w + 1 < series::MIN_SERIES_LEN {
        return Err(Error::InvalidConfig(format!(
            "window size {w} gives windows shorter than {}",
            series::MIN_SERIES_LEN
        )));
    }
    if values.len() < w + 1 {
        return Err(Error::SeriesTooShort {
            needed: w + 1,
            got: values.len(),
        });
    }
    let source = series.label().unwrap_or("series").to_string();
    let (windows, meta) = values
        .windows(w + 1)
        .enumerate()
        .map(|(start, win)| {
            let meta = WindowMeta {
                source: source.clone(),
                start: Some(start),
                lineage: None,
            };
            (win.to_vec(), meta)
        })
        .unzip();
    WindowDataset::new(windows, meta)
}

/// Chronological split into the first `n_train` windows and the rest.
pub fn train_test_split(ds: &WindowDataset, n_train: usize) -> Result<(WindowDataset, WindowDataset)> {
    if n_train == 0 || n_train >= ds.len() {
        return Err(Error::BadSplit {
            n_train,
            size: ds.len(),
        });
    }
    let train = WindowDataset {
        windows: ds.windows[..n_train].to_vec(),
        meta: ds.meta[..n_train].to_vec(),
    };
    let test = WindowDataset {
        windows: ds.windows[n_train..].to_vec(),
        meta: ds.meta[n_train..].to_vec(),
    };
    Ok((train, test))
}
