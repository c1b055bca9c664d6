//! Performance of a grading scheme: expected quality change, by simulation
//! and by quadrature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{QualityPrior, ScoreModel};
use crate::dynamics::{evolve, MotivationParams};
use crate::error::{Error, Result};
use crate::grading::GradingScheme;
use crate::quad::{JointRule, QuadValue};
use crate::rng::Stream;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MonteCarlo,
    Quadrature,
}

/// Mean quality change with a 95% interval.
///
/// For Monte Carlo `std_error` is `sd/√n`; for quadrature `n = 0`, the
/// interval is `mean ± quad_error_estimate` and `std_error` is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceEstimate {
    pub mean: f64,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
    pub std_error: f64,
    pub n: usize,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_error_estimate: Option<f64>,
}

impl PerformanceEstimate {
    /// Summary of per-student samples with a normal-approximation interval.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
        let sd = if n > 1 { (ss / (n - 1) as f64).sqrt() } else { 0.0 };
        let se = sd / (n as f64).sqrt();
        PerformanceEstimate {
            mean,
            ci95_lo: mean - Z95 * se,
            ci95_hi: mean + Z95 * se,
            std_error: se,
            n,
            method: Method::MonteCarlo,
            quad_error_estimate: None,
        }
    }

    fn from_quad(q: QuadValue) -> Self {
        PerformanceEstimate {
            mean: q.value,
            ci95_lo: q.value - q.error_estimate,
            ci95_hi: q.value + q.error_estimate,
            std_error: 0.0,
            n: 0,
            method: Method::Quadrature,
            quad_error_estimate: Some(q.error_estimate),
        }
    }

    /// Whether the two 95% intervals are disjoint.
    pub fn separated_from(&self, other: &PerformanceEstimate) -> bool {
        self.ci95_lo > other.ci95_hi || other.ci95_lo > self.ci95_hi
    }

    /// Same estimate with every quality-valued field multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        PerformanceEstimate {
            mean: self.mean * factor,
            ci95_lo: self.ci95_lo * factor,
            ci95_hi: self.ci95_hi * factor,
            std_error: self.std_error * factor,
            quad_error_estimate: self.quad_error_estimate.map(|e| e * factor),
            ..*self
        }
    }
}

/// Per-student gains `q_r − q_1`, student `i` reading substream `(seed, i)`.
///
/// Calling this with the same `(seed, n)` for different schemes gives paired
/// samples: every scheme sees the same initial qualities and the same uniform
/// variates round by round.
pub fn simulate_gains(
    prior: &QualityPrior,
    model: &ScoreModel,
    scheme: &GradingScheme,
    params: &MotivationParams,
    n: usize,
    r: u32,
    seed: u64,
) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 students, got {n}")));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("need at least one evaluation".into()));
    }
    Ok((0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut stream = Stream::substream(seed, i);
            let q1 = prior.sample(&mut stream);
            evolve(q1, scheme, model, params, r, &mut stream, |_, _, _| {}) - q1
        })
        .collect())
}

/// Monte Carlo estimate of `E[q_r − q_1]` over `n` students.
pub fn perf_mc(
    prior: &QualityPrior,
    model: &ScoreModel,
    scheme: &GradingScheme,
    params: &MotivationParams,
    n: usize,
    r: u32,
    seed: u64,
) -> Result<PerformanceEstimate> {
    let gains = simulate_gains(prior, model, scheme, params, n, r, seed)?;
    Ok(PerformanceEstimate::from_samples(&gains))
}

fn kinks(scheme: &GradingScheme) -> Vec<f64> {
    scheme.breakpoints()
}

/// Two-evaluation performance `E[h(q, B(s))]` by quadrature.
pub fn perf_quad(
    prior: &QualityPrior,
    model: &ScoreModel,
    scheme: &GradingScheme,
    params: &MotivationParams,
    tol: f64,
) -> Result<PerformanceEstimate> {
    let rule = JointRule::new(prior, model, &kinks(scheme));
    let out = rule.integrate(tol, |q, s| [params.delta(q, scheme.apply(s))])?;
    Ok(PerformanceEstimate::from_quad(QuadValue {
        value: out.values[0],
        error_estimate: out.error_estimate,
        level: out.level,
    }))
}

/// `E|q − B(s)|` by quadrature.
pub fn exp_abs_dev(
    prior: &QualityPrior,
    model: &ScoreModel,
    scheme: &GradingScheme,
    tol: f64,
) -> Result<QuadValue> {
    let rule = JointRule::new(prior, model, &kinks(scheme));
    let out = rule.integrate(tol, |q, s| [(q - scheme.apply(s)).abs()])?;
    Ok(QuadValue {
        value: out.values[0],
        error_estimate: out.error_estimate,
        level: out.level,
    })
}
