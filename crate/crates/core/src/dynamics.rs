//! The (de)motivation update and multi-round trajectories.

use serde::{Deserialize, Serialize};

use crate::dist::ScoreModel;
use crate::error::{check_unit, Error, Result};
use crate::grading::GradingScheme;
use crate::rng::UniformSource;

/// Motivation (`alpha_m`) and demotivation (`alpha_d`) coefficients, both in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotivationParams {
    alpha_m: f64,
    alpha_d: f64,
}

impl MotivationParams {
    pub fn new(alpha_m: f64, alpha_d: f64) -> Result<Self> {
        check_unit("alpha_m", alpha_m)?;
        check_unit("alpha_d", alpha_d)?;
        Ok(MotivationParams { alpha_m, alpha_d })
    }

    pub fn alpha_m(&self) -> f64 {
        self.alpha_m
    }

    pub fn alpha_d(&self) -> f64 {
        self.alpha_d
    }

    /// Signed quality change after receiving grade `g` at quality `q`.
    #[inline]
    pub fn delta(&self, q: f64, g: f64) -> f64 {
        if g >= q {
            self.alpha_m * (g - q)
        } else {
            -self.alpha_d * (q - g)
        }
    }

    /// Quality for the next evaluation.
    #[inline]
    pub fn update(&self, q: f64, g: f64) -> f64 {
        // exact arithmetic stays in [0, 1]; the clamp only absorbs rounding
        (q + self.delta(q, g)).clamp(0.0, 1.0)
    }
}

/// Checked form of [`MotivationParams::delta`].
pub fn delta(q: f64, g: f64, params: &MotivationParams) -> Result<f64> {
    check_unit("q", q)?;
    check_unit("g", g)?;
    Ok(params.delta(q, g))
}

/// Checked form of [`MotivationParams::update`].
pub fn update(q: f64, g: f64, params: &MotivationParams) -> Result<f64> {
    check_unit("q", q)?;
    check_unit("g", g)?;
    Ok(params.update(q, g))
}

/// One student's path through `r` evaluations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub qualities: Vec<f64>,
    pub scores: Vec<f64>,
    pub grades: Vec<f64>,
}

impl Trajectory {
    pub fn rounds(&self) -> usize {
        self.qualities.len()
    }

    /// `q_r − q_1`.
    pub fn gain(&self) -> f64 {
        self.qualities[self.qualities.len() - 1] - self.qualities[0]
    }
}

/// Runs `r` evaluations from quality `q1`.
///
/// Each round draws `s_j ~ S(q_j)` from `src`; qualities are updated between
/// rounds only, so `r` evaluations produce `r − 1` updates and the last grade
/// is observed but not acted on.
pub fn run_trajectory(
    q1: f64,
    scheme: &GradingScheme,
    model: &ScoreModel,
    params: &MotivationParams,
    r: u32,
    src: &mut impl UniformSource,
) -> Result<Trajectory> {
    check_unit("q1", q1)?;
    if r == 0 {
        return Err(Error::InvalidParameter("need at least one evaluation".into()));
    }
    let cap = r as usize;
    let mut traj = Trajectory {
        qualities: Vec::with_capacity(cap),
        scores: Vec::with_capacity(cap),
        grades: Vec::with_capacity(cap),
    };
    evolve(q1, scheme, model, params, r, src, |q, s, g| {
        traj.qualities.push(q);
        traj.scores.push(s);
        traj.grades.push(g);
    });
    Ok(traj)
}

/// Allocation-free core of [`run_trajectory`]; returns `q_r`.
pub(crate) fn evolve(
    q1: f64,
    scheme: &GradingScheme,
    model: &ScoreModel,
    params: &MotivationParams,
    r: u32,
    src: &mut impl UniformSource,
    mut visit: impl FnMut(f64, f64, f64),
) -> f64 {
    let mut q = q1;
    for j in 0..r {
        let s = model.sample(q, src);
        let g = scheme.apply(s);
        visit(q, s, g);
        if j + 1 < r {
            q = params.update(q, g);
        }
    }
    q
}
