//! Core series containers.

use crate::error::{Error, Result};

/// Minimum length of a [`Series`]: a volatility estimate needs two returns.
pub const MIN_SERIES_LEN: usize = 3;

/// A finite, time-ordered vector of real observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    values: Vec<f64>,
    label: Option<String>,
}

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        validate(&values)?;
        Ok(Self { values, label: None })
    }

    pub fn with_label(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let mut s = Self::new(values)?;
        s.label = Some(label.into());
        Ok(s)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl AsRef<[f64]> for Series {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Checks the series invariants: at least [`MIN_SERIES_LEN`] values, all finite.
pub fn validate(values: &[f64]) -> Result<()> {
    if values.len() < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort {
            needed: MIN_SERIES_LEN,
            got: values.len(),
        });
    }
    check_finite(values)
}

pub(crate) fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReturnKind {
    #[default]
    Log,
    Simple,
}

/// One-step returns of a series; always one element shorter than the source.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    pub values: Vec<f64>,
    pub kind: ReturnKind,
}

impl ReturnSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
