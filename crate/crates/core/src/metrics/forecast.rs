use nalgebra::{DMatrix, DVector};

use crate::datagen::WindowDataset;
use crate::error::{Error, Result};

/// Linear one-step forecaster: the last value of a window predicted from the
/// `W` values before it plus an intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecasterModel {
    /// `W` lag weights (oldest first) followed by the intercept.
    pub coefficients: Vec<f64>,
    pub ridge: f64,
}

impl ForecasterModel {
    pub fn lags(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn intercept(&self) -> f64 {
        self.coefficients[self.lags()]
    }

    pub fn predict(&self, inputs: &[f64]) -> f64 {
        let w = self.lags();
        self.intercept()
            + self.coefficients[..w]
                .iter()
                .zip(inputs)
                .map(|(c, x)| c * x)
                .sum::<f64>()
    }
}

/// Ridge least squares via the normal equations; the intercept is not
/// penalized.
pub fn fit_forecaster(train: &WindowDataset, ridge: f64) -> Result<ForecasterModel> {
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(Error::InvalidConfig("ridge must be nonnegative".into()));
    }
    let len = train.window_len().ok_or(Error::EmptyDataset)?;
    let lags = len - 1;
    let p = lags + 1;

    let mut gram = DMatrix::<f64>::zeros(p, p);
    let mut rhs = DVector::<f64>::zeros(p);
    let mut row = DVector::<f64>::zeros(p);
    for w in train.windows() {
        row.rows_mut(0, lags).copy_from_slice(&w[..lags]);
        row[lags] = 1.0;
        gram.ger(1.0, &row, &row, 1.0);
        rhs.axpy(w[lags], &row, 1.0);
    }
    for i in 0..lags {
        gram[(i, i)] += ridge;
    }

    let solution = match gram.clone().cholesky() {
        Some(chol) => chol.solve(&rhs),
        None => gram.lu().solve(&rhs).ok_or(Error::SingularSystem)?,
    };
    if solution.iter().any(|c| !c.is_finite()) {
        return Err(Error::SingularSystem);
    }
    Ok(ForecasterModel {
        coefficients: solution.iter().copied().collect(),
        ridge,
    })
}

/// Mean absolute one-step error over `eval`.
pub fn forecast_mae(model: &ForecasterModel, eval: &WindowDataset) -> Result<f64> {
    let len = eval.window_len().ok_or(Error::EmptyDataset)?;
    if len != model.lags() + 1 {
        return Err(Error::LengthMismatch {
            expected: model.lags() + 1,
            got: len,
        });
    }
    let total: f64 = eval
        .windows()
        .iter()
        .map(|w| (model.predict(&w[..len - 1]) - w[len - 1]).abs())
        .sum();
    Ok(total / eval.len() as f64)
}
