//! Performance evaluation, region masses and theorem-hypothesis audits.

mod checks;
mod perf;
mod regions;
mod verdict;

pub use checks::{
    check_hypotheses, AssumptionReport, CheckOptions, ConclusionGap, Hypothesis, HypothesisEntry,
    Setup,
};
pub use perf::{exp_abs_dev, perf_mc, perf_quad, simulate_gains, Method, PerformanceEstimate, Z95};
pub use regions::{
    bucket_distances, gamma_ratio, region_of, region_probs, BucketDistances, GammaRatio, Region,
    RegionProbabilities, RATIO_CAP,
};
pub use verdict::{theorem_verdict, ConclusionCheck, TheoremId, TheoremVerdict, VerdictStatus};
