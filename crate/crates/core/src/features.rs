//! Returns, trend and stylized-feature extraction.
//!
//! Every extractor here is a pure function of its inputs. The style
//! representation of a series is three features: the sample ACF of its
//! returns at lags `1..=tau_max`, the volatility of those returns, and the
//! mean power spectral density of the series itself.

use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::series::{self, ReturnKind, ReturnSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PositivityPolicy {
    /// Fail on any non-positive value.
    Error,
    /// Map the series affinely onto `[1, 2]` (min to 1, max to 2) before
    /// taking log returns.
    #[default]
    AffineRescale,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureConfig {
    pub tau_max: usize,
    pub return_kind: ReturnKind,
    pub positivity_policy: PositivityPolicy,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            tau_max: 10,
            return_kind: ReturnKind::Log,
            positivity_policy: PositivityPolicy::AffineRescale,
        }
    }
}

impl FeatureConfig {
    /// Lengths `d_l` of the three stylized features.
    pub fn dims(&self) -> [usize; 3] {
        [self.tau_max, 1, 1]
    }

    /// Checks `1 <= tau_max <= len - 3` for a series of length `len`.
    pub fn check_for_len(&self, len: usize) -> Result<()> {
        if self.tau_max == 0 {
            return Err(Error::InvalidConfig("tau_max must be at least 1".into()));
        }
        if self.tau_max + 3 > len {
            return Err(Error::LagTooLarge {
                tau_max: self.tau_max,
                len: len.saturating_sub(1),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgePolicy {
    /// The averaging window shrinks symmetrically near the boundaries.
    #[default]
    Shrink,
    /// Out-of-range indices are mirrored about the boundary sample.
    Reflect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrendConfig {
    pub window: usize,
    pub edge_policy: EdgePolicy,
}

impl Default for TrendConfig {
    fn default() -> Self {
        Self {
            window: 5,
            edge_policy: EdgePolicy::Shrink,
        }
    }
}

/// The stylized features of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct StyleFeatures {
    pub acf: Vec<f64>,
    pub volatility: f64,
    pub mean_psd: f64,
    pub dims: [usize; 3],
}

/// Result of the affine map onto `[1, 2]`, with the indices that fixed it.
#[derive(Debug, Clone)]
pub(crate) struct Rescaled {
    pub values: Vec<f64>,
    pub min_idx: usize,
    pub max_idx: usize,
    pub range: f64,
}

/// Maps `values` so its minimum becomes 1 and its maximum 2. Ties resolve to
/// the lowest index.
pub(crate) fn affine_rescale(values: &[f64]) -> Result<Rescaled> {
    let (mut min_idx, mut max_idx) = (0, 0);
    for (i, &v) in values.iter().enumerate() {
        if v < values[min_idx] {
            min_idx = i;
        }
        if v > values[max_idx] {
            max_idx = i;
        }
    }
    let min = values[min_idx];
    let range = values[max_idx] - min;
    if range <= 0.0 {
        return Err(Error::DegenerateSeries("constant series cannot be rescaled"));
    }
    Ok(Rescaled {
        values: values.iter().map(|v| 1.0 + (v - min) / range).collect(),
        min_idx,
        max_idx,
        range,
    })
}

/// One-step returns of `values`.
///
/// Log returns go through the configured positivity policy first; simple
/// returns are plain first differences.
pub fn compute_returns(values: &[f64], config: &FeatureConfig) -> Result<ReturnSeries> {
    series::validate(values)?;
    let values = match config.return_kind {
        ReturnKind::Simple => values.windows(2).map(|w| w[1] - w[0]).collect(),
        ReturnKind::Log => {
            let positive = match config.positivity_policy {
                PositivityPolicy::Error => {
                    if let Some((index, &value)) =
                        values.iter().enumerate().find(|(_, v)| **v <= 0.0)
                    {
                        return Err(Error::NonPositiveValue { index, value });
                    }
                    values.to_vec()
                }
                PositivityPolicy::AffineRescale => affine_rescale(values)?.values,
            };
            positive.windows(2).map(|w| w[1].ln() - w[0].ln()).collect()
        }
    };
    Ok(ReturnSeries {
        values,
        kind: config.return_kind,
    })
}

/// Deviations from the mean and their sum of squares.
pub(crate) fn centered(values: &[f64]) -> (Vec<f64>, f64) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let dev: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let ss = dev.iter().map(|d| d * d).sum();
    (dev, ss)
}

fn is_constant(values: &[f64]) -> bool {
    values.iter().all(|v| *v == values[0])
}

/// Lag products `sum_t u_t u_{t-lag}` of a centered sequence.
pub(crate) fn lag_product(dev: &[f64], lag: usize) -> f64 {
    dev[lag..].iter().zip(dev).map(|(a, b)| a * b).sum()
}

/// Sample ACF at lags `0..=max_lag` of an arbitrary sequence.
fn acf_lags(values: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if is_constant(values) {
        return Err(Error::DegenerateSeries("zero-variance sequence has no ACF"));
    }
    let (dev, ss) = centered(values);
    if ss <= 0.0 {
        return Err(Error::DegenerateSeries("zero-variance sequence has no ACF"));
    }
    Ok((0..=max_lag).map(|lag| lag_product(&dev, lag) / ss).collect())
}

/// Sample autocorrelation of `returns` at lags `1..=tau_max`.
pub fn sample_acf(returns: &[f64], tau_max: usize) -> Result<Vec<f64>> {
    if tau_max == 0 {
        return Err(Error::InvalidConfig("tau_max must be at least 1".into()));
    }
    if tau_max + 2 > returns.len() {
        return Err(Error::LagTooLarge {
            tau_max,
            len: returns.len(),
        });
    }
    let mut acf = acf_lags(returns, tau_max)?;
    acf.remove(0);
    Ok(acf)
}

/// Sample standard deviation of the returns with the `1/(n-1)` divisor
/// (`1/(T-2)` in terms of the source length).
pub fn volatility(returns: &[f64]) -> Result<f64> {
    if returns.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: returns.len(),
        });
    }
    if is_constant(returns) {
        return Ok(0.0);
    }
    let (_, ss) = centered(returns);
    Ok((ss / (returns.len() - 1) as f64).sqrt())
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn forward_fft(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

/// Circular layout of the two-sided ACF: slot 0 holds lag 0, slot `k` and
/// slot `L - k` hold lag `k`, for `k = 1..=T-2` and `L = 2T - 3`.
pub(crate) fn two_sided_layout(one_sided: &[f64]) -> Vec<f64> {
    let max_lag = one_sided.len() - 1;
    let len = 2 * max_lag + 1;
    let mut seq = vec![0.0; len];
    seq[0] = one_sided[0];
    for k in 1..=max_lag {
        seq[k] = one_sided[k];
        seq[len - k] = one_sided[k];
    }
    seq
}

/// Complex DFT of the two-sided sample ACF of the series.
pub(crate) fn psd_spectrum(values: &[f64]) -> Result<Vec<Complex<f64>>> {
    series::validate(values)?;
    let acf = acf_lags(values, values.len() - 2)?;
    let mut buf: Vec<Complex<f64>> = two_sided_layout(&acf)
        .into_iter()
        .map(|re| Complex::new(re, 0.0))
        .collect();
    forward_fft(buf.len()).process(&mut buf);
    Ok(buf)
}

/// Power spectral density estimate: magnitude of the DFT of the two-sided
/// sample ACF of the series (lags `-(T-2)..=T-2`), at the `2T - 3` standard
/// DFT frequencies.
pub fn psd(values: &[f64]) -> Result<Vec<f64>> {
    Ok(psd_spectrum(values)?.iter().map(|z| z.norm()).collect())
}

/// Mean of [`psd`] across frequencies.
pub fn mean_psd(values: &[f64]) -> Result<f64> {
    let spectrum = psd(values)?;
    Ok(spectrum.iter().sum::<f64>() / spectrum.len() as f64)
}

/// Centered moving-average trend with an odd window.
pub fn extract_trend(values: &[f64], config: &TrendConfig) -> Result<Vec<f64>> {
    let n = values.len();
    let w = config.window;
    if w == 0 || w.is_multiple_of(2) || w > n {
        return Err(Error::WindowTooLarge { window: w, len: n });
    }
    let half = w / 2;
    let out = match config.edge_policy {
        EdgePolicy::Shrink => (0..n)
            .map(|t| {
                let h = half.min(t).min(n - 1 - t);
                values[t - h..=t + h].iter().sum::<f64>() / (2 * h + 1) as f64
            })
            .collect(),
        EdgePolicy::Reflect => (0..n)
            .map(|t| {
                let sum: f64 = (0..w)
                    .map(|j| {
                        let i = t as isize + j as isize - half as isize;
                        values[reflect_index(i, n)]
                    })
                    .sum();
                sum / w as f64
            })
            .collect(),
    };
    Ok(out)
}

fn reflect_index(i: isize, n: usize) -> usize {
    let last = n as isize - 1;
    let r = if i < 0 {
        -i
    } else if i > last {
        2 * last - i
    } else {
        i
    };
    r as usize
}

/// All three stylized features of a series.
pub fn style_features(values: &[f64], config: &FeatureConfig) -> Result<StyleFeatures> {
    series::validate(values)?;
    config.check_for_len(values.len())?;
    let returns = compute_returns(values, config)?;
    Ok(StyleFeatures {
        acf: sample_acf(&returns.values, config.tau_max)?,
        volatility: volatility(&returns.values)?,
        mean_psd: mean_psd(values)?,
        dims: config.dims(),
    })
}
