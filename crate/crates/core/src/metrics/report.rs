use super::{authenticity, f_score, fit_forecaster, forecast_mae, precision_recall, PrMetricConfig};
use crate::datagen::WindowDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub pr: PrMetricConfig,
    pub ridge: f64,
    /// Train an extra forecaster on `real_train` plus the first `L` synthetic
    /// windows and report its error as `aug_mae`.
    pub augment_level: Option<usize>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            pr: PrMetricConfig::default(),
            ridge: 1e-6,
            augment_level: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
    pub authenticity: f64,
    pub tstr_mae: f64,
    pub trtr_mae: f64,
    pub aug_mae: Option<f64>,
}

impl EvalReport {
    /// Keys and values in output order.
    pub fn fields(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("precision", self.precision),
            ("recall", self.recall),
            ("f_score", self.f_score),
            ("authenticity", self.authenticity),
            ("tstr_mae", self.tstr_mae),
            ("trtr_mae", self.trtr_mae),
        ];
        if let Some(a) = self.aug_mae {
            out.push(("aug_mae", a));
        }
        out
    }

    pub fn to_json_line(&self) -> String {
        let body: Vec<String> = self
            .fields()
            .iter()
            .map(|(k, v)| format!("\"{k}\":{}", json_number(*v)))
            .collect();
        format!("{{{}}}", body.join(","))
    }

    /// Header line and value line.
    pub fn to_csv(&self) -> String {
        let fields = self.fields();
        let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
        let vals: Vec<String> = fields.iter().map(|(_, v)| v.to_string()).collect();
        format!("{}\n{}\n", keys.join(","), vals.join(","))
    }
}

fn json_number(v: f64) -> String {
    if v.is_finite() {
        let s = v.to_string();
        if s.contains(['.', 'e']) { s } else { format!("{s}.0") }
    } else {
        "null".into()
    }
}

pub fn evaluate(
    real_train: &WindowDataset,
    real_eval: &WindowDataset,
    synth: &WindowDataset,
    cfg: &EvalConfig,
) -> Result<EvalReport> {
    for ds in [real_train, real_eval, synth] {
        if ds.is_empty() {
            return Err(Error::EmptyDataset);
        }
    }
    real_train.check_compatible(real_eval)?;
    real_train.check_compatible(synth)?;

    let (precision, recall) = precision_recall(real_train, synth, &cfg.pr)?;
    let auth = authenticity(real_train, synth)?;
    let tstr = forecast_mae(&fit_forecaster(synth, cfg.ridge)?, real_eval)?;
    let trtr = forecast_mae(&fit_forecaster(real_train, cfg.ridge)?, real_eval)?;
    let aug_mae = match cfg.augment_level {
        Some(level) => {
            let mixed = real_train.concat(&synth.head(level))?;
            Some(forecast_mae(&fit_forecaster(&mixed, cfg.ridge)?, real_eval)?)
        }
        None => None,
    };
    Ok(EvalReport {
        precision,
        recall,
        f_score: f_score(precision, recall),
        authenticity: auth,
        tstr_mae: tstr,
        trtr_mae: trtr,
        aug_mae,
    })
}
