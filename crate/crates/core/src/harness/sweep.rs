use rayon::prelude::*;

use super::config::{ExperimentConfig, SweepPoint};
use super::table::SweepRow;
use crate::analysis::{perf_mc, PerformanceEstimate};
use crate::error::Result;
use crate::grading::GradingScheme;

impl SweepPoint {
    pub fn estimate(&self) -> Result<PerformanceEstimate> {
        perf_mc(
            &self.prior,
            &self.model,
            &self.scheme,
            &self.params,
            self.n,
            self.r,
            self.seed,
        )
    }

    /// CSV row for this point, with model quantities multiplied by `scale`.
    pub fn row(&self, est: &PerformanceEstimate, scale: f64) -> SweepRow {
        let grades = match &self.scheme {
            GradingScheme::Numerical => "ns".to_string(),
            other => other.grades().unwrap_or_default().to_string(),
        };
        SweepRow {
            scheme: self.scheme.label(),
            grades,
            alpha_m: self.params.alpha_m(),
            alpha_d: self.params.alpha_d(),
            r: self.r,
            mu: self.prior.mu().map(|v| v * scale),
            sigma: self.prior.sigma().map(|v| v * scale),
            gamma_noise: self.model.gamma_noise().map(|v| v * scale),
            n: self.n,
            seed: self.seed,
            perf_mean: est.mean * scale,
            perf_ci_lo: est.ci95_lo * scale,
            perf_ci_hi: est.ci95_hi * scale,
        }
    }
}

/// Monte Carlo estimates for every point of the sweep, in output order.
///
/// Every point reuses the same per-student random substreams, so schemes are
/// compared on common random numbers.
pub fn run_estimates(config: &ExperimentConfig) -> Result<Vec<(SweepPoint, PerformanceEstimate)>> {
    let points = config.points()?;
    log::info!("sweep over {} points, n = {}", points.len(), config.n);
    points
        .into_par_iter()
        .map(|p| {
            let est = p.estimate()?;
            Ok((p, est))
        })
        .collect()
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let scale = config.scale as f64;
    Ok(run_estimates(config)?
        .iter()
        .map(|(p, est)| p.row(est, scale))
        .collect())
}
