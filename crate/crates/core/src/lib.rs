//! Simulation and numerical analysis of how grading schemes shape student
//! effort when grades motivate or demotivate.
//!
//! A student of quality `q ∈ [0, 1]` receives a noisy score `s`, which a
//! grading scheme maps to a grade `g`. The student's quality then moves by
//! `α_m (g − q)` when `g ≥ q` and by `−α_d (q − g)` otherwise. The crate
//! compares numerical scoring with letter grades by Monte Carlo and by
//! deterministic quadrature, audits structural conditions on the score model,
//! and runs parameter sweeps that emit CSV.

pub mod analysis;
pub mod dist;
pub mod dynamics;
mod error;
pub mod grading;
pub mod harness;
pub mod quad;
pub mod rng;

pub use analysis::{
    check_hypotheses, exp_abs_dev, gamma_ratio, perf_mc, perf_quad, region_probs,
    theorem_verdict, AssumptionReport, CheckOptions, GammaRatio, Hypothesis, Method,
    PerformanceEstimate, RegionProbabilities, Setup, TheoremId, TheoremVerdict, VerdictStatus,
};
pub use dist::{KernelShape, PriorKind, QualityPrior, ScoreKind, ScoreModel};
pub use dynamics::{delta, run_trajectory, update, MotivationParams, Trajectory};
pub use error::{Error, Result};
pub use grading::{is_symmetric, GradingScheme, SymmetryCheck};
pub use harness::{
    figure_config, reproduce, run_sweep, ExperimentConfig, FigureId, SweepAxis, SweepRow,
};
pub use rng::{FixedUniforms, Stream, UniformSource};
