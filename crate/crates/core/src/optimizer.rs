//! RMSprop descent on the stylization objective.

use crate::error::{Error, Result};
use crate::features::{FeatureConfig, TrendConfig};
use crate::losses::{self, Gradient, LossBreakdown, LossContext, LossWeights};
use crate::series;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub iterations: usize,
    pub base_lr: f64,
    pub rms_decay: f64,
    pub rms_epsilon: f64,
    /// Return the traced iterate with the lowest total loss instead of the
    /// last one.
    pub return_best: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            iterations: 250,
            base_lr: 0.01,
            rms_decay: 0.9,
            rms_epsilon: 1e-8,
            return_best: true,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        if !(self.base_lr > 0.0 && self.base_lr.is_finite()) {
            return Err(Error::InvalidConfig("base_lr must be positive".into()));
        }
        if !(self.rms_decay > 0.0 && self.rms_decay < 1.0) {
            return Err(Error::InvalidConfig("rms_decay must lie in (0, 1)".into()));
        }
        if self.rms_epsilon.is_nan() || self.rms_epsilon <= 0.0 {
            return Err(Error::InvalidConfig("rms_epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// Running mean of squared gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct RmsState {
    pub accumulator: Vec<f64>,
}

impl RmsState {
    pub fn zeros(len: usize) -> Self {
        Self {
            accumulator: vec![0.0; len],
        }
    }
}

#[derive(Debug, Clone)]
pub struct StylizationResult {
    pub stylized: Vec<f64>,
    /// Loss at every evaluated iterate; `trace[0]` is the loss at the content
    /// series.
    pub trace: Vec<LossBreakdown>,
    pub best_iteration: usize,
}

/// One RMSprop update:
/// `s' = decay * s + (1 - decay) * g^2`, `y' = y - lr * g / (sqrt(s') + eps)`.
pub fn rmsprop_step(
    y: &[f64],
    grad: &Gradient,
    state: &RmsState,
    config: &OptimizerConfig,
) -> Result<(Vec<f64>, RmsState)> {
    for len in [grad.values.len(), state.accumulator.len()] {
        if len != y.len() {
            return Err(Error::LengthMismatch {
                expected: y.len(),
                got: len,
            });
        }
    }
    let decay = config.rms_decay;
    let accumulator: Vec<f64> = state
        .accumulator
        .iter()
        .zip(&grad.values)
        .map(|(s, g)| decay * s + (1.0 - decay) * g * g)
        .collect();
    let next = y
        .iter()
        .zip(&grad.values)
        .zip(&accumulator)
        .map(|((yi, g), s)| yi - config.base_lr * g / (s.sqrt() + config.rms_epsilon))
        .collect();
    Ok((next, RmsState { accumulator }))
}

/// Stylizes `content` with the features of `style`.
///
/// Starts at the content series and takes `iterations` RMSprop steps on the
/// total loss. Errors at an iterate carry the iteration index.
pub fn style_time(
    content: &[f64],
    style: &[f64],
    weights: LossWeights,
    opt: &OptimizerConfig,
    fc: &FeatureConfig,
    tc: &TrendConfig,
) -> Result<StylizationResult> {
    opt.validate()?;
    series::validate(content)?;
    series::validate(style)?;
    let ctx = LossContext::new(content, style, weights, *fc, tc)?;
    run(content.to_vec(), &ctx, opt)
}

/// Optimization loop over a prepared context, starting at `init`.
pub fn run(init: Vec<f64>, ctx: &LossContext, opt: &OptimizerConfig) -> Result<StylizationResult> {
    opt.validate()?;
    let mut y = init;
    let mut state = RmsState::zeros(y.len());
    let mut trace = Vec::with_capacity(opt.iterations);
    let mut best: Option<(f64, usize, Vec<f64>)> = None;

    for iteration in 0..opt.iterations {
        let (loss, grad) = losses::loss_and_gradient(&y, ctx).map_err(|e| Error::Stylization {
            iteration,
            source: Box::new(e),
        })?;
        if opt.return_best && best.as_ref().is_none_or(|(b, _, _)| loss.total < *b) {
            best = Some((loss.total, iteration, y.clone()));
        }
        trace.push(loss);
        let (next, next_state) = rmsprop_step(&y, &grad, &state, opt)?;
        y = next;
        state = next_state;
    }

    let (stylized, best_iteration) = match best {
        Some((_, i, y_best)) => (y_best, i),
        None => (y, opt.iterations - 1),
    };
    Ok(StylizationResult {
        stylized,
        trace,
        best_iteration,
    })
}
