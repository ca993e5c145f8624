//! Baseline augmentations: jitter, flip, time warp.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Adds i.i.d. `N(0, sigma^2)` noise to every value.
pub fn augment_jitter<R: Rng + ?Sized>(window: &[f64], sigma: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidConfig("jitter sigma must be nonnegative".into()));
    }
    Ok(window
        .iter()
        .map(|v| {
            let z: f64 = rng.sample(StandardNormal);
            v + sigma * z
        })
        .collect())
}

/// Reflects values about the window mean: `2 * mean - w_t`.
pub fn augment_flip(window: &[f64]) -> Vec<f64> {
    let mean = window.iter().sum::<f64>() / window.len() as f64;
    window.iter().map(|v| 2.0 * mean - v).collect()
}

/// Random monotone time warp.
///
/// `[0, W]` is cut into `knots - 1` equal segments; each segment's speed is
/// scaled by `exp(warp_std * z)`, `z ~ N(0, 1)`, and the knot times are
/// renormalized so both endpoints stay fixed. The window is resampled at the
/// warped times by linear interpolation.
pub fn augment_time_warp<R: Rng + ?Sized>(
    window: &[f64],
    knots: usize,
    warp_std: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if knots < 2 {
        return Err(Error::InvalidConfig("time warp needs at least 2 knots".into()));
    }
    if !(warp_std >= 0.0 && warp_std.is_finite()) {
        return Err(Error::InvalidConfig("warp_std must be nonnegative".into()));
    }
    let speeds: Vec<f64> = (0..knots - 1)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            (warp_std * z).exp()
        })
        .collect();
    if warp_std == 0.0 || window.len() < 2 {
        return Ok(window.to_vec());
    }

    let last = (window.len() - 1) as f64;
    let total: f64 = speeds.iter().sum();
    let mut warped_knots = Vec::with_capacity(knots);
    let mut acc = 0.0;
    warped_knots.push(0.0);
    for s in &speeds[..speeds.len() - 1] {
        acc += s;
        warped_knots.push(last * acc / total);
    }
    warped_knots.push(last);

    let segment = last / (knots - 1) as f64;
    let out = (0..window.len())
        .map(|t| {
            if t == 0 {
                return window[0];
            }
            if t == window.len() - 1 {
                return window[t];
            }
            let pos = t as f64 / segment;
            let j = (pos.floor() as usize).min(knots - 2);
            let frac = pos - j as f64;
            let warped = warped_knots[j] + frac * (warped_knots[j + 1] - warped_knots[j]);
            interpolate(window, warped)
        })
        .collect();
    Ok(out)
}

fn interpolate(values: &[f64], pos: f64) -> f64 {
    let last = values.len() - 1;
    let pos = pos.clamp(0.0, last as f64);
    let i = (pos.floor() as usize).min(last - 1);
    let frac = pos - i as f64;
    values[i] + frac * (values[i + 1] - values[i])
}
