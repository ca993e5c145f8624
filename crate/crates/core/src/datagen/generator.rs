use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng;
use crate::series::Series;

/// Two-regime AR(1): `y_t = a11 y_{t-1} + a10 + e_t` before the switch point
/// `floor(switch_fraction * horizon)`, `a21 y_{t-1} + a20 + e_t` from it on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchingArConfig {
    pub a10: f64,
    pub a11: f64,
    pub a20: f64,
    pub a21: f64,
    pub horizon: usize,
    pub switch_fraction: f64,
    pub noise_std: f64,
    pub seed: u64,
    /// Fixes `y_0` instead of drawing it from N(0, 1).
    pub initial: Option<f64>,
}

impl Default for SwitchingArConfig {
    fn default() -> Self {
        Self {
            a10: 0.01,
            a11: 1.001,
            a20: -0.01,
            a21: 0.999,
            horizon: 3030,
            switch_fraction: 0.8,
            noise_std: 1.0,
            seed: 0,
            initial: None,
        }
    }
}

impl SwitchingArConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon < 2 {
            return Err(Error::InvalidConfig("horizon must be at least 2".into()));
        }
        if !(self.switch_fraction > 0.0 && self.switch_fraction < 1.0) {
            return Err(Error::InvalidConfig("switch_fraction must lie in (0, 1)".into()));
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(Error::InvalidConfig("noise_std must be nonnegative".into()));
        }
        Ok(())
    }

    /// 1-based time index of the first second-regime step.
    pub fn switch_time(&self) -> usize {
        (self.switch_fraction * self.horizon as f64).floor() as usize
    }
}

/// Generates `y_1..=y_T`. The stream draws `y_0` first, then `e_1..=e_T`.
pub fn gen_switching_ar1(config: &SwitchingArConfig) -> Result<Series> {
    config.validate()?;
    let mut rng = rng::from_seed(config.seed);
    let drawn: f64 = rng.sample(StandardNormal);
    let mut prev = config.initial.unwrap_or(drawn);
    let switch = config.switch_time();
    let values: Vec<f64> = (1..=config.horizon)
        .map(|t| {
            let eps: f64 = rng.sample::<f64, _>(StandardNormal) * config.noise_std;
            prev = if t < switch {
                config.a11 * prev + config.a10 + eps
            } else {
                config.a21 * prev + config.a20 + eps
            };
            prev
        })
        .collect();
    if values.len() < crate::series::MIN_SERIES_LEN {
        return Err(Error::InvalidConfig(format!(
            "horizon {} is shorter than the minimum series length",
            config.horizon
        )));
    }
    Series::with_label(values, "switching-ar1")
}
