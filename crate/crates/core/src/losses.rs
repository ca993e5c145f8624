//! The stylization objective and its exact gradient.
//!
//! `total = alpha * content + beta * style + gamma * tv`, where
//!
//! * `content = ||y - trend(y_c)||^2`
//! * `style = sum_l (1 / d_l) ||S_l(y) - S_l(y_s)||^2` over the ACF,
//!   volatility and mean-PSD features
//! * `tv = sum_t (y_{t+1} - y_t)^2`
//!
//! The gradient is derived by hand, feature by feature, and checked against
//! [`finite_difference_gradient`].

use crate::error::{Error, Result};
use crate::features::{
    self, affine_rescale, centered, lag_product, FeatureConfig, PositivityPolicy, StyleFeatures,
    TrendConfig,
};
use crate::par;
use crate::series::{self, ReturnKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 10.0,
            gamma: 1e-4,
        }
    }
}

impl LossWeights {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let w = Self { alpha, beta, gamma };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.alpha, self.beta, self.gamma];
        if all.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig(
                "loss weights must be finite and nonnegative".into(),
            ));
        }
        if all.iter().all(|w| *w == 0.0) {
            return Err(Error::InvalidConfig("loss weights cannot all be zero".into()));
        }
        Ok(())
    }
}

/// Fixed quantities of one stylization problem: the content trend and the
/// style series' features.
#[derive(Debug, Clone)]
pub struct LossContext {
    pub content_trend: Vec<f64>,
    pub style_features: StyleFeatures,
    pub weights: LossWeights,
    pub feature_config: FeatureConfig,
}

impl LossContext {
    pub fn new(
        content: &[f64],
        style: &[f64],
        weights: LossWeights,
        feature_config: FeatureConfig,
        trend_config: &TrendConfig,
    ) -> Result<Self> {
        weights.validate()?;
        if content.len() != style.len() {
            return Err(Error::LengthMismatch {
                expected: content.len(),
                got: style.len(),
            });
        }
        Ok(Self {
            content_trend: features::extract_trend(content, trend_config)?,
            style_features: features::style_features(style, &feature_config)?,
            weights,
            feature_config,
        })
    }

    fn check_len(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.content_trend.len() {
            return Err(Error::LengthMismatch {
                expected: self.content_trend.len(),
                got: y.len(),
            });
        }
        Ok(())
    }
}

/// The three objective terms and their weighted sum.
///
/// When `beta == 0` the style term is not evaluated and reported as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    pub content: f64,
    pub style: f64,
    pub tv: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub values: Vec<f64>,
}

pub fn content_loss(y: &[f64], ctx: &LossContext) -> Result<f64> {
    ctx.check_len(y)?;
    Ok(y.iter()
        .zip(&ctx.content_trend)
        .map(|(a, b)| (a - b).powi(2))
        .sum())
}

pub fn style_loss(y: &[f64], ctx: &LossContext) -> Result<f64> {
    ctx.check_len(y)?;
    Ok(style_term(y, ctx, false)?.0)
}

pub fn tv_loss(y: &[f64]) -> Result<f64> {
    if y.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: y.len(),
        });
    }
    Ok(y.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum())
}

pub fn total_loss(y: &[f64], ctx: &LossContext) -> Result<LossBreakdown> {
    Ok(evaluate(y, ctx, false)?.0)
}

pub fn loss_gradient(y: &[f64], ctx: &LossContext) -> Result<Gradient> {
    Ok(evaluate(y, ctx, true)?.1.expect("gradient requested"))
}

/// Loss and gradient from a single pass over the features.
pub fn loss_and_gradient(y: &[f64], ctx: &LossContext) -> Result<(LossBreakdown, Gradient)> {
    let (loss, grad) = evaluate(y, ctx, true)?;
    Ok((loss, grad.expect("gradient requested")))
}

/// Central-difference gradient of the total loss with step `h`.
pub fn finite_difference_gradient(ctx: &LossContext, y: &[f64], h: f64) -> Result<Gradient> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidConfig("finite-difference step must be positive".into()));
    }
    ctx.check_len(y)?;
    let values = par::try_map_range(y.len(), |t| {
        let mut probe = y.to_vec();
        probe[t] = y[t] + h;
        let up = total_loss(&probe, ctx)?.total;
        probe[t] = y[t] - h;
        let down = total_loss(&probe, ctx)?.total;
        Ok::<_, Error>((up - down) / (2.0 * h))
    })?;
    Ok(Gradient { values })
}

fn evaluate(y: &[f64], ctx: &LossContext, want_grad: bool) -> Result<(LossBreakdown, Option<Gradient>)> {
    ctx.check_len(y)?;
    series::check_finite(y)?;
    let w = ctx.weights;
    let content = content_loss(y, ctx)?;
    let tv = tv_loss(y)?;
    let (style, style_grad) = if w.beta > 0.0 {
        style_term(y, ctx, want_grad)?
    } else {
        (0.0, None)
    };
    let loss = LossBreakdown {
        content,
        style,
        tv,
        total: w.alpha * content + w.beta * style + w.gamma * tv,
    };
    if !want_grad {
        return Ok((loss, None));
    }

    let n = y.len();
    let mut g: Vec<f64> = y
        .iter()
        .zip(&ctx.content_trend)
        .map(|(a, b)| 2.0 * w.alpha * (a - b))
        .collect();
    if w.gamma > 0.0 {
        for t in 0..n - 1 {
            let d = 2.0 * w.gamma * (y[t + 1] - y[t]);
            g[t] -= d;
            g[t + 1] += d;
        }
    }
    if let Some(sg) = style_grad {
        for (gi, si) in g.iter_mut().zip(sg) {
            *gi += w.beta * si;
        }
    }
    Ok((loss, Some(Gradient { values: g })))
}

/// Style loss and, optionally, its gradient with respect to `y`.
fn style_term(y: &[f64], ctx: &LossContext, want_grad: bool) -> Result<(f64, Option<Vec<f64>>)> {
    let fc = &ctx.feature_config;
    let target = &ctx.style_features;
    series::validate(y)?;
    fc.check_for_len(y.len())?;
    let n = y.len();
    let k_max = fc.tau_max;

    // Returns, keeping what the backward pass needs.
    let (levels, rescale) = match (fc.return_kind, fc.positivity_policy) {
        (ReturnKind::Simple, _) => (None, None),
        (ReturnKind::Log, PositivityPolicy::Error) => {
            if let Some((index, &value)) = y.iter().enumerate().find(|(_, v)| **v <= 0.0) {
                return Err(Error::NonPositiveValue { index, value });
            }
            (Some(y.to_vec()), None)
        }
        (ReturnKind::Log, PositivityPolicy::AffineRescale) => {
            let r = affine_rescale(y)?;
            (Some(r.values.clone()), Some(r))
        }
    };
    let returns: Vec<f64> = match &levels {
        Some(z) => z.windows(2).map(|p| p[1].ln() - p[0].ln()).collect(),
        None => y.windows(2).map(|p| p[1] - p[0]).collect(),
    };
    let m = returns.len();
    if returns.iter().all(|r| *r == returns[0]) {
        return Err(Error::DegenerateSeries("returns have zero variance"));
    }
    let (ru, rss) = centered(&returns);
    let lag_prod: Vec<f64> = (1..=k_max).map(|k| lag_product(&ru, k)).collect();
    let acf: Vec<f64> = lag_prod.iter().map(|p| p / rss).collect();
    let vol = (rss / (m - 1) as f64).sqrt();

    let spectrum = features::psd_spectrum(y)?;
    let len_f = spectrum.len();
    let mags: Vec<f64> = spectrum.iter().map(|z| z.norm()).collect();
    let mpsd = mags.iter().sum::<f64>() / len_f as f64;

    let w_acf = 1.0 / fc.dims()[0] as f64;
    let acf_err: Vec<f64> = acf.iter().zip(&target.acf).map(|(a, b)| a - b).collect();
    let vol_err = vol - target.volatility;
    let psd_err = mpsd - target.mean_psd;
    let loss = w_acf * acf_err.iter().map(|e| e * e).sum::<f64>()
        + vol_err * vol_err
        + psd_err * psd_err;
    if !want_grad {
        return Ok((loss, None));
    }

    // d loss / d returns: ACF and volatility terms.
    let acf_weights: Vec<f64> = acf_err.iter().map(|e| 2.0 * w_acf * e).collect();
    let mut g_returns = acf_backward(&ru, rss, &lag_prod, &acf_weights);
    let g_vol = 2.0 * vol_err;
    if vol > 0.0 {
        let scale = g_vol / ((m - 1) as f64 * vol);
        for (g, u) in g_returns.iter_mut().zip(&ru) {
            *g += scale * u;
        }
    }

    // d returns / d y, through the log and rescale maps when present.
    let mut g = vec![0.0; n];
    match &levels {
        None => {
            for (t, gr) in g_returns.iter().enumerate() {
                g[t + 1] += gr;
                g[t] -= gr;
            }
        }
        Some(z) => {
            let mut gz = vec![0.0; n];
            for (t, gr) in g_returns.iter().enumerate() {
                gz[t + 1] += gr / z[t + 1];
                gz[t] -= gr / z[t];
            }
            match &rescale {
                None => g = gz,
                Some(r) => {
                    let min = y[r.min_idx];
                    let mut total = 0.0;
                    let mut spread = 0.0;
                    for (t, gzt) in gz.iter().enumerate() {
                        g[t] = gzt / r.range;
                        total += gzt;
                        spread += gzt * (y[t] - min);
                    }
                    spread /= r.range * r.range;
                    g[r.min_idx] += spread - total / r.range;
                    g[r.max_idx] -= spread;
                }
            }
        }
    }

    // Mean-PSD term. Slots k and L-k both carry lag k of the series ACF, so
    // d S_f / d rho_k = 2 cos(2 pi f k / L), and d|S_f| picks Re(S_f)/|S_f|.
    let g_mpsd = 2.0 * psd_err;
    if g_mpsd != 0.0 {
        let mut signs: Vec<rustfft::num_complex::Complex<f64>> = spectrum
            .iter()
            .zip(&mags)
            .map(|(s, mag)| {
                let v = if *mag > 0.0 { s.re / mag } else { 0.0 };
                rustfft::num_complex::Complex::new(v, 0.0)
            })
            .collect();
        features::forward_fft(len_f).process(&mut signs);
        let max_lag = n - 2;
        let lag_weights: Vec<f64> = (1..=max_lag)
            .map(|k| g_mpsd * 2.0 * signs[k].re / len_f as f64)
            .collect();
        let (yu, yss) = centered(y);
        let y_lag_prod: Vec<f64> = (1..=max_lag).map(|k| lag_product(&yu, k)).collect();
        for (gi, gp) in g.iter_mut().zip(acf_backward(&yu, yss, &y_lag_prod, &lag_weights)) {
            *gi += gp;
        }
    }

    Ok((loss, Some(g)))
}

/// Gradient of `sum_k weights[k-1] * rho_k` with respect to the raw
/// (uncentered) sequence, given its deviations `dev`, their sum of squares
/// `ss` and lag products `lag_prod[k-1]`.
fn acf_backward(dev: &[f64], ss: f64, lag_prod: &[f64], weights: &[f64]) -> Vec<f64> {
    let n = dev.len();
    let weighted_ratio: f64 = weights.iter().zip(lag_prod).map(|(w, p)| w * p).sum::<f64>() / ss;
    let mut g: Vec<f64> = dev.iter().map(|u| -2.0 * weighted_ratio * u / ss).collect();
    for (k, w) in (1..).zip(weights) {
        if *w == 0.0 {
            continue;
        }
        let c = w / ss;
        for t in k..n {
            g[t] += c * dev[t - k];
            g[t - k] += c * dev[t];
        }
    }
    // centering projection
    let mean = g.iter().sum::<f64>() / n as f64;
    g.iter_mut().for_each(|v| *v -= mean);
    g
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    fn ctx_for(content: &[f64], style: &[f64], weights: LossWeights) -> LossContext {
        let fc = FeatureConfig {
            tau_max: 3,
            ..Default::default()
        };
        LossContext::new(content, style, weights, fc, &TrendConfig::default()).unwrap()
    }

    const A: [f64; 12] = [0.5, 1.4, 0.2, 2.1, 1.7, 0.9, 2.6, 1.1, 0.3, 1.8, 2.4, 0.7];
    const B: [f64; 12] = [1.5, 0.4, 1.2, 0.1, 2.7, 1.9, 0.6, 2.1, 1.3, 0.8, 0.4, 1.7];

    #[test]
    fn weights_validation() {
        assert!(LossWeights::new(0.0, 0.0, 0.0).is_err());
        assert!(LossWeights::new(-1.0, 1.0, 0.0).is_err());
        assert!(LossWeights::new(0.0, 0.0, 1.0).is_ok());
        assert_eq!(LossWeights::default(), LossWeights::new(1.0, 10.0, 1e-4).unwrap());
    }

    #[test]
    fn content_loss_examples() {
        let ctx = ctx_for(&A, &B, LossWeights::default());
        assert_eq!(content_loss(&ctx.content_trend, &ctx).unwrap(), 0.0);
        let shifted: Vec<f64> = ctx.content_trend.iter().map(|v| v + 1.0).collect();
        assert_relative_eq!(content_loss(&shifted, &ctx).unwrap(), 12.0, epsilon = 1e-12);
        assert!(matches!(
            content_loss(&A[..5], &ctx),
            Err(Error::LengthMismatch { expected: 12, got: 5 })
        ));
    }

    #[test]
    fn style_loss_vanishes_at_style_series() {
        let ctx = ctx_for(&A, &B, LossWeights::default());
        assert_eq!(style_loss(&B, &ctx).unwrap(), 0.0);
    }

    #[test]
    fn style_loss_single_volatility_offset() {
        let mut ctx = ctx_for(&A, &B, LossWeights::default());
        let own = features::style_features(&A, &ctx.feature_config).unwrap();
        let delta = 0.125;
        ctx.style_features = StyleFeatures {
            volatility: own.volatility + delta,
            ..own
        };
        assert_relative_eq!(style_loss(&A, &ctx).unwrap(), delta * delta, epsilon = 1e-15);
    }

    #[test]
    fn tv_loss_examples() {
        assert_eq!(tv_loss(&[2.0; 6]).unwrap(), 0.0);
        assert_eq!(tv_loss(&[1.0, 2.0, 4.0]).unwrap(), 5.0);
        let ramp: Vec<f64> = (0..17).map(f64::from).collect();
        assert_eq!(tv_loss(&ramp).unwrap(), 16.0);
        assert!(tv_loss(&[1.0]).is_err());
    }

    #[test]
    fn breakdown_recombines() {
        let ctx = ctx_for(&A, &B, LossWeights::default());
        let l = total_loss(&A, &ctx).unwrap();
        assert_eq!(l.total, l.content + 10.0 * l.style + 1e-4 * l.tv);
        assert_eq!(l.content, content_loss(&A, &ctx).unwrap());
        assert_eq!(l.style, style_loss(&A, &ctx).unwrap());
        assert_eq!(l.tv, tv_loss(&A).unwrap());
    }

    #[test]
    fn content_only_weights() {
        let ctx = ctx_for(&A, &B, LossWeights::new(1.0, 0.0, 0.0).unwrap());
        let l = total_loss(&B, &ctx).unwrap();
        assert_eq!(l.total, l.content);
        let g = loss_gradient(&B, &ctx).unwrap();
        for (t, gt) in g.values.iter().enumerate() {
            assert_eq!(*gt, 2.0 * (B[t] - ctx.content_trend[t]));
        }
    }

    #[test]
    fn tv_only_on_constant_series() {
        let ctx = ctx_for(&A, &B, LossWeights::new(0.0, 0.0, 1.0).unwrap());
        let y = [3.0; 12];
        assert_eq!(total_loss(&y, &ctx).unwrap().total, 0.0);
        assert!(loss_gradient(&y, &ctx).unwrap().values.iter().all(|g| *g == 0.0));
        let fd = finite_difference_gradient(&ctx, &y, 1e-5).unwrap();
        assert!(fd.values.iter().all(|g| g.abs() < 1e-10));
    }

    #[test]
    fn constant_series_is_degenerate_for_style() {
        let ctx = ctx_for(&A, &B, LossWeights::default());
        assert!(matches!(
            total_loss(&[3.0; 12], &ctx),
            Err(Error::DegenerateSeries(_))
        ));
    }

    fn max_rel_err(g: &[f64], fd: &[f64]) -> f64 {
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-8);
        g.iter().zip(fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
    }

    #[test]
    fn gradient_matches_fd_for_each_return_mode() {
        let positive: Vec<f64> = A.iter().map(|v| v + 1.0).collect();
        for (kind, policy) in [
            (ReturnKind::Log, PositivityPolicy::AffineRescale),
            (ReturnKind::Log, PositivityPolicy::Error),
            (ReturnKind::Simple, PositivityPolicy::AffineRescale),
        ] {
            let fc = FeatureConfig {
                tau_max: 3,
                return_kind: kind,
                positivity_policy: policy,
            };
            let style: Vec<f64> = B.iter().map(|v| v + 1.0).collect();
            let ctx = LossContext::new(&positive, &style, LossWeights::default(), fc, &TrendConfig::default())
                .unwrap();
            let y: Vec<f64> = positive.iter().zip(&style).map(|(a, b)| 0.6 * a + 0.4 * b).collect();
            let g = loss_gradient(&y, &ctx).unwrap();
            let fd = finite_difference_gradient(&ctx, &y, 1e-5).unwrap();
            let err = max_rel_err(&g.values, &fd.values);
            assert!(err < 1e-6, "{kind:?}/{policy:?}: {err}");
        }
    }

    #[test]
    fn fd_quadratic_convergence_order() {
        let ctx = ctx_for(&A, &B, LossWeights::new(1.0, 0.0, 0.0).unwrap());
        let exact = loss_gradient(&B, &ctx).unwrap();
        let fd = finite_difference_gradient(&ctx, &B, 1e-5).unwrap();
        assert!(max_rel_err(&exact.values, &fd.values) < 1e-7);
    }
}
