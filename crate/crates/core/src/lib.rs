//! Time series style transfer.
//!
//! A series is optimized so that it follows the trend of a *content* series
//! while matching the stylized features (returns ACF, volatility, mean PSD)
//! of a *style* series. Around that core sit dataset generation, baseline
//! augmentations, and fidelity / utility / authenticity metrics.

pub mod cli;
pub mod datagen;
pub mod error;
pub mod features;
pub mod losses;
pub mod metrics;
pub mod optimizer;
pub mod par;
pub mod rng;
pub mod series;

pub use error::{Error, Result};
pub use series::{ReturnKind, ReturnSeries, Series};
