//! Hypothesis-gated checks of the two-evaluation comparison results.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::checks::{check_hypotheses, AssumptionReport, CheckOptions, Hypothesis, Setup};
use super::perf::{exp_abs_dev, perf_quad};
use crate::error::{Error, Result};
use crate::grading::GradingScheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    /// Performance identity for symmetric schemes under joint symmetry.
    T1,
    /// Equal-coefficient corollary and its dichotomy.
    C1,
    /// Letter grading wins iff `α_m > α_d`, via the bucket-distance condition.
    T2,
    /// Same conclusion via single-peakedness and the `2(γ+1)` mass ratio.
    T3,
    /// Same conclusion via strong symmetry and the factor-3 mass ratio.
    T4,
}

impl TheoremId {
    pub const ALL: [TheoremId; 5] = [
        TheoremId::T1,
        TheoremId::C1,
        TheoremId::T2,
        TheoremId::T3,
        TheoremId::T4,
    ];

    pub fn requires(self) -> &'static [Hypothesis] {
        use Hypothesis::*;
        match self {
            TheoremId::T1 => &[JointSymmetry, SchemeSymmetry],
            TheoremId::C1 => &[JointSymmetry],
            TheoremId::T2 => &[JointSymmetry, ExAnteSinglePeaked, BucketDistance],
            TheoremId::T3 => &[
                UniformPrior,
                JointSymmetry,
                ExAnteSinglePeaked,
                ExPostSinglePeaked,
                ProbabilisticSingleDipped,
                MassRatioGamma,
            ],
            TheoremId::T4 => &[UniformPrior, StrongSymmetry, MassRatioThree],
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremId::T1 => "t1",
            TheoremId::C1 => "c1",
            TheoremId::T2 => "t2",
            TheoremId::T3 => "t3",
            TheoremId::T4 => "t4",
        };
        f.write_str(s)
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse("theorem id", s, "expected t1, c1, t2, t3 or t4"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    /// Hypotheses hold on the grid and the conclusion checks out.
    Confirmed,
    /// Hypotheses hold but the conclusion fails numerically.
    ConclusionViolated,
    /// At least one hypothesis fails; the conclusion is reported, not asserted.
    HypothesesNotSatisfied,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConclusionCheck {
    pub holds: bool,
    pub statement: String,
    /// Identity residual (T1) or `perf(ULG_T) − perf(NS)`.
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    pub status: VerdictStatus,
    pub hypotheses_pass: bool,
    pub failed_hypotheses: Vec<Hypothesis>,
    pub conclusion: Option<ConclusionCheck>,
    pub report: AssumptionReport,
}

fn identity_residual(setup: &Setup, scheme: &GradingScheme, tol: f64) -> Result<f64> {
    let perf = perf_quad(&setup.prior, &setup.model, scheme, &setup.params, tol)?;
    let dev = exp_abs_dev(&setup.prior, &setup.model, scheme, tol)?;
    let half = 0.5 * (setup.params.alpha_m() - setup.params.alpha_d());
    Ok((perf.mean - half * dev.value).abs())
}

fn conclusion(
    id: TheoremId,
    setup: &Setup,
    report: &AssumptionReport,
    opts: &CheckOptions,
) -> Result<ConclusionCheck> {
    let ctol = opts.conclusion_tol;
    let diff = setup.params.alpha_m() - setup.params.alpha_d();
    if id == TheoremId::T1 {
        let ulg = GradingScheme::ulg(setup.grades)?;
        let r = identity_residual(setup, &ulg, opts.quad_tol)?
            .max(identity_residual(setup, &GradingScheme::ns(), opts.quad_tol)?);
        return Ok(ConclusionCheck {
            holds: r < ctol,
            statement: "perf(B) = (α_m − α_d)/2 · E|q − B(s)| for B ∈ {NS, ULG_T}".into(),
            value: r,
            tolerance: ctol,
        });
    }
    let gap = report
        .conclusion_check
        .ok_or_else(|| Error::InvalidParameter("performance gap unavailable".into()))?
        .gap;
    if diff == 0.0 {
        return Ok(ConclusionCheck {
            holds: gap.abs() < ctol,
            statement: "equal coefficients give equal performance".into(),
            value: gap,
            tolerance: ctol,
        });
    }
    if id == TheoremId::C1 {
        // one of the two implications must hold: the gap is the identity's
        // prediction, whatever its sign
        let ulg = GradingScheme::ulg(setup.grades)?;
        let e_ulg = exp_abs_dev(&setup.prior, &setup.model, &ulg, opts.quad_tol)?.value;
        let e_ns =
            exp_abs_dev(&setup.prior, &setup.model, &GradingScheme::ns(), opts.quad_tol)?.value;
        let predicted = 0.5 * diff * (e_ulg - e_ns);
        let which = if e_ns <= e_ulg { "first" } else { "second" };
        return Ok(ConclusionCheck {
            holds: (gap - predicted).abs() < ctol,
            statement: format!("{which} implication: gap matches (α_m − α_d)/2 · (E|q−ULG| − E|q−s|)"),
            value: gap,
            tolerance: ctol,
        });
    }
    Ok(ConclusionCheck {
        holds: diff.signum() * gap >= -ctol,
        statement: "sign(perf(ULG_T) − perf(NS)) = sign(α_m − α_d)".into(),
        value: gap,
        tolerance: ctol,
    })
}

/// Runs the hypothesis checks for `id` and, separately, its conclusion.
pub fn theorem_verdict(id: TheoremId, setup: &Setup, opts: &CheckOptions) -> Result<TheoremVerdict> {
    let report = check_hypotheses(setup, opts)?;
    let failed: Vec<Hypothesis> = id
        .requires()
        .iter()
        .copied()
        .filter(|h| !report.passes(*h))
        .collect();
    let concl = conclusion(id, setup, &report, opts).ok();
    let status = if !failed.is_empty() {
        VerdictStatus::HypothesesNotSatisfied
    } else if concl.as_ref().is_some_and(|c| c.holds) {
        VerdictStatus::Confirmed
    } else {
        VerdictStatus::ConclusionViolated
    };
    Ok(TheoremVerdict {
        theorem: id,
        status,
        hypotheses_pass: failed.is_empty(),
        failed_hypotheses: failed,
        conclusion: concl,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{KernelShape, QualityPrior, ScoreModel};
    use crate::dynamics::MotivationParams;

    fn setup(model: ScoreModel, grades: u32, m: f64, d: f64) -> Setup {
        Setup {
            prior: QualityPrior::uniform(),
            model,
            grades,
            params: MotivationParams::new(m, d).unwrap(),
        }
    }

    fn opts() -> CheckOptions {
        CheckOptions {
            grid_size: 128,
            ..CheckOptions::default()
        }
    }

    #[test]
    fn ids_parse() {
        assert_eq!("T3".parse::<TheoremId>().unwrap(), TheoremId::T3);
        assert!("t9".parse::<TheoremId>().is_err());
    }

    #[test]
    fn identity_confirmed_on_symmetric_setup() {
        let v = theorem_verdict(
            TheoremId::T1,
            &setup(ScoreModel::triangular(0.1).unwrap(), 8, 0.7, 0.2),
            &opts(),
        )
        .unwrap();
        assert_eq!(v.status, VerdictStatus::Confirmed);
        assert!(v.conclusion.unwrap().value < 1e-6);
    }

    #[test]
    fn equal_coefficients_corollary() {
        let v = theorem_verdict(
            TheoremId::C1,
            &setup(ScoreModel::triangular(0.1).unwrap(), 4, 0.5, 0.5),
            &opts(),
        )
        .unwrap();
        assert_eq!(v.status, VerdictStatus::Confirmed);
        assert!(v.conclusion.unwrap().value.abs() < 1e-6);
    }

    #[test]
    fn wide_kernel_fails_factor_three_condition() {
        let m = ScoreModel::kernel(KernelShape::Rectangular, 0.3, false).unwrap();
        let v = theorem_verdict(TheoremId::T4, &setup(m, 8, 0.8, 0.2), &opts()).unwrap();
        assert_eq!(v.status, VerdictStatus::HypothesesNotSatisfied);
        assert!(v.failed_hypotheses.contains(&Hypothesis::MassRatioThree));
        assert!(!v.hypotheses_pass);
    }
}
