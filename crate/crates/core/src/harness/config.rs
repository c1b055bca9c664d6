use serde::{Deserialize, Serialize};

use crate::dist::{QualityPrior, ScoreModel};
use crate::dynamics::MotivationParams;
use crate::error::{Error, Result};
use crate::grading::GradingScheme;

/// Parameter varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    AlphaM,
    R,
    Mu,
    Sigma,
    GammaNoise,
}

/// A JSON experiment description.
///
/// Model quantities (`mu`, `sigma`, `gamma_noise`, `values`) are in canonical
/// `[0, 1]` units; `scale` only affects the emitted CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub prior: QualityPrior,
    pub model: ScoreModel,
    pub schemes: Vec<GradingScheme>,
    pub alpha_m: Vec<f64>,
    pub alpha_d: f64,
    pub r: Vec<u32>,
    pub n: usize,
    pub seed: u64,
    #[serde(default = "default_scale")]
    pub scale: u32,
    pub sweep: SweepAxis,
    /// Values of `mu`, `sigma` or `gamma_noise` for those axes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
}

fn default_scale() -> u32 {
    1
}

/// One simulation cell of a sweep, fully resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub scheme: GradingScheme,
    pub prior: QualityPrior,
    pub model: ScoreModel,
    pub params: MotivationParams,
    pub r: u32,
    pub n: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            Error::Config {
                path: e.path().to_string(),
                message: e.inner().to_string(),
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |path: &str, msg: String| Err(Error::Config {
            path: path.to_string(),
            message: msg,
        });
        if self.schemes.is_empty() {
            return bad("schemes", "at least one scheme is required".into());
        }
        if self.alpha_m.is_empty() {
            return bad("alpha_m", "at least one value is required".into());
        }
        for (i, &a) in self.alpha_m.iter().enumerate() {
            MotivationParams::new(a, 0.0).map_err(|e| e.at(format!("alpha_m[{i}]")))?;
        }
        MotivationParams::new(0.0, self.alpha_d).map_err(|e| e.at("alpha_d"))?;
        if self.r.is_empty() {
            return bad("r", "at least one value is required".into());
        }
        if let Some(i) = self.r.iter().position(|&r| r == 0) {
            return bad(&format!("r[{i}]"), "need at least one evaluation".into());
        }
        if self.n < 2 {
            return bad("n", format!("need at least 2 students, got {}", self.n));
        }
        if self.scale != 1 && self.scale != 100 {
            return bad("scale", format!("must be 1 or 100, got {}", self.scale));
        }
        let needs_values = matches!(
            self.sweep,
            SweepAxis::Mu | SweepAxis::Sigma | SweepAxis::GammaNoise
        );
        if needs_values && self.values.is_empty() {
            return bad("values", "this sweep axis needs values".into());
        }
        if !needs_values && !self.values.is_empty() {
            return bad("values", "only mu, sigma and gamma_noise sweeps take values".into());
        }
        for (i, &v) in self.values.iter().enumerate() {
            self.resolve(Some(v))
                .map_err(|e| e.at(format!("values[{i}]")))?;
        }
        Ok(())
    }

    fn resolve(&self, value: Option<f64>) -> Result<(QualityPrior, ScoreModel)> {
        let Some(v) = value else {
            return Ok((self.prior, self.model));
        };
        match self.sweep {
            SweepAxis::Mu | SweepAxis::Sigma => {
                let (mu, sigma) = match (self.prior.mu(), self.prior.sigma()) {
                    (Some(mu), Some(sigma)) => (mu, sigma),
                    _ => {
                        return Err(Error::InvalidParameter(
                            "mu/sigma sweeps need a truncated-normal prior".into(),
                        ))
                    }
                };
                let prior = if self.sweep == SweepAxis::Mu {
                    QualityPrior::truncated_normal(v, sigma)?
                } else {
                    QualityPrior::truncated_normal(mu, v)?
                };
                Ok((prior, self.model))
            }
            SweepAxis::GammaNoise => Ok((self.prior, self.model.with_gamma_noise(v)?)),
            SweepAxis::AlphaM | SweepAxis::R => Ok((self.prior, self.model)),
        }
    }

    /// Expands the sweep in output order: non-swept parameters outermost, then
    /// the swept value, then the schemes.
    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        self.validate()?;
        let values: Vec<Option<f64>> = if self.values.is_empty() {
            vec![None]
        } else {
            self.values.iter().copied().map(Some).collect()
        };
        let mut combos = Vec::new();
        match self.sweep {
            SweepAxis::AlphaM => {
                for &r in &self.r {
                    for &v in &values {
                        for &a in &self.alpha_m {
                            combos.push((a, r, v));
                        }
                    }
                }
            }
            SweepAxis::R => {
                for &a in &self.alpha_m {
                    for &v in &values {
                        for &r in &self.r {
                            combos.push((a, r, v));
                        }
                    }
                }
            }
            SweepAxis::Mu | SweepAxis::Sigma | SweepAxis::GammaNoise => {
                for &a in &self.alpha_m {
                    for &r in &self.r {
                        for &v in &values {
                            combos.push((a, r, v));
                        }
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(combos.len() * self.schemes.len());
        for (a, r, v) in combos {
            let (prior, model) = self.resolve(v)?;
            let params = MotivationParams::new(a, self.alpha_d)?;
            for scheme in &self.schemes {
                out.push(SweepPoint {
                    scheme: scheme.clone(),
                    prior,
                    model,
                    params,
                    r,
                    n: self.n,
                    seed: self.seed,
                });
            }
        }
        Ok(out)
    }
}
