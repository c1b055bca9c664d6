use gradelab::analysis::{check_hypotheses, exp_abs_dev, gamma_ratio, region_of, region_probs, Region};
use gradelab::{
    perf_mc, perf_quad, theorem_verdict, CheckOptions, GammaRatio, GradingScheme, Hypothesis,
    KernelShape, MotivationParams, QualityPrior, ScoreModel, Setup, TheoremId, VerdictStatus,
};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

/// Renormalizer of a kernel on `[0, 1]`, written out independently.
fn tri_z(q: f64, w: f64) -> f64 {
    let part = |x: f64| {
        let x = x.min(w);
        (x - x * x / (2.0 * w)) / w
    };
    part(q) + part(1.0 - q)
}

fn tri_density(s: f64, q: f64, w: f64) -> f64 {
    let d = (s - q).abs();
    if d >= w {
        0.0
    } else {
        (1.0 - d / w) / w / tri_z(q, w)
    }
}

/// Dense midpoint-grid oracle for `E|q − s|`, uniform prior, triangular kernel.
fn riemann_tri_abs_dev(w: f64, cells: usize) -> f64 {
    let h = 1.0 / cells as f64;
    let mut total = 0.0;
    for i in 0..cells {
        let q = (i as f64 + 0.5) * h;
        let row: f64 = (0..cells)
            .map(|j| {
                let s = (j as f64 + 0.5) * h;
                tri_density(s, q, w) * (q - s).abs()
            })
            .sum();
        total += row * h;
    }
    total * h
}

#[test]
fn triangular_abs_dev_matches_riemann_oracle() {
    let w = 0.1;
    let quad = exp_abs_dev(&QualityPrior::uniform(), &ScoreModel::triangular(w).unwrap(), &GradingScheme::ns(), 1e-10)
        .unwrap()
        .value;
    let oracle = riemann_tri_abs_dev(w, 4000);
    assert!((quad - oracle).abs() < 1e-6, "{quad} vs {oracle}");
    // boundary renormalization pulls the value slightly below w/3
    assert!(quad < w / 3.0 && quad > 0.95 * w / 3.0);
}

#[test]
fn monte_carlo_matches_identity_for_pure_motivation() {
    let w = 0.1;
    let oracle = riemann_tri_abs_dev(w, 4000);
    let est = perf_mc(
        &QualityPrior::uniform(),
        &ScoreModel::triangular(w).unwrap(),
        &GradingScheme::ns(),
        &MotivationParams::new(1.0, 0.0).unwrap(),
        100_000,
        2,
        31,
    )
    .unwrap();
    let target = 0.5 * oracle;
    assert!(est.ci95_lo <= target && target <= est.ci95_hi, "{est:?} vs {target}");
}

#[test]
fn monte_carlo_equal_coefficients_is_zero_within_ci() {
    let est = perf_mc(
        &QualityPrior::uniform(),
        &ScoreModel::triangular(0.1).unwrap(),
        &GradingScheme::ns(),
        &MotivationParams::new(0.5, 0.5).unwrap(),
        100_000,
        2,
        32,
    )
    .unwrap();
    assert!(est.ci95_lo <= 0.0 && 0.0 <= est.ci95_hi, "{est:?}");
}

#[test]
fn no_motivation_gives_exactly_zero() {
    let zero = MotivationParams::new(0.0, 0.0).unwrap();
    let prior = QualityPrior::truncated_normal(0.6, 0.2).unwrap();
    let model = ScoreModel::truncated_normal(0.05).unwrap();
    let scheme = GradingScheme::ulg(5).unwrap();
    assert_eq!(perf_mc(&prior, &model, &scheme, &zero, 500, 6, 1).unwrap().mean, 0.0);
    assert_eq!(perf_quad(&prior, &model, &scheme, &zero, 1e-8).unwrap().mean, 0.0);
}

fn rect_density(q: f64, w: f64) -> f64 {
    let z = (q.min(w) + (1.0 - q).min(w)) / (2.0 * w);
    1.0 / (2.0 * w) / z
}

#[test]
fn rectangular_regions_match_grid_oracle() {
    let w = 0.25;
    let model = ScoreModel::rectangular(w).unwrap();
    let probs = region_probs(&QualityPrior::uniform(), &model, 2, 1e-10).unwrap();

    // 2001 grid lines, density evaluated at the 2000 × 2000 cell centres;
    // cells whose centres sit exactly on the kernel edge get half weight.
    let cells = 2000usize;
    let edge = (w * cells as f64) as usize;
    let h = 1.0 / cells as f64;
    let (mut same, mut opp, mut off) = (0.0, 0.0, 0.0);
    for i in 0..cells {
        let q = (i as f64 + 0.5) * h;
        for j in 0..cells {
            let gap = i.abs_diff(j);
            if gap > edge {
                continue;
            }
            let s = (j as f64 + 0.5) * h;
            let weight = if gap == edge { 0.5 } else { 1.0 };
            let mass = weight * rect_density(q, w) * h * h;
            match region_of(2, q, s) {
                Region::Same => same += mass,
                Region::Opposite => opp += mass,
                Region::Off => off += mass,
            }
        }
    }
    let total = same + opp + off;
    assert!((probs.p_same - same / total).abs() < 1e-4, "{} vs {}", probs.p_same, same / total);
    assert!((probs.p_opp - opp / total).abs() < 1e-4, "{} vs {}", probs.p_opp, opp / total);
    assert!((probs.p_off - off / total).abs() < 1e-4);
    assert!((probs.p_same + probs.p_opp + probs.p_off - 1.0).abs() < 1e-9);
}

#[test]
fn region_membership_examples() {
    assert_eq!(region_of(10, 0.54, 0.51), Region::Same);
    assert_eq!(region_of(10, 0.54, 0.56), Region::Opposite);
    assert_eq!(region_of(10, 0.54, 0.61), Region::Off);
    let exact = region_probs(&QualityPrior::uniform(), &ScoreModel::exact(), 6, 1e-10).unwrap();
    assert!((exact.p_same - 1.0).abs() < 1e-12 && exact.p_opp == 0.0);
}

#[test]
fn abs_dev_shrinks_with_more_grades() {
    for model in [ScoreModel::triangular(0.1).unwrap(), ScoreModel::rectangular(0.05).unwrap()] {
        let devs: Vec<f64> = [4, 8, 12, 16, 20]
            .iter()
            .map(|&t| {
                exp_abs_dev(&QualityPrior::uniform(), &model, &GradingScheme::ulg(t).unwrap(), 1e-10)
                    .unwrap()
                    .value
            })
            .collect();
        assert!(devs.windows(2).all(|p| p[1] <= p[0]), "{model}: {devs:?}");
    }
}

#[test]
fn zero_noise_letter_grades_sit_quarter_bucket_away() {
    for t in [1u32, 3, 8] {
        let v = exp_abs_dev(&QualityPrior::uniform(), &ScoreModel::exact(), &GradingScheme::ulg(t).unwrap(), 1e-12)
            .unwrap()
            .value;
        assert!((v - 0.25 / t as f64).abs() < 1e-12);
    }
}

/// Brute-force `max Z(a)/Z(b)` over grid pairs whose densities clear the floor.
fn z_ratio_oracle(w: f64, n: usize) -> f64 {
    let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let mut best: f64 = 1.0;
    for &a in &grid {
        for &b in &grid {
            if tri_density(a, b, w) >= 1e-12 && tri_density(b, a, w) >= 1e-12 {
                best = best.max(tri_z(a, w) / tri_z(b, w));
            }
        }
    }
    best
}

#[test]
fn gamma_ratio_matches_z_ratio_oracle() {
    let w = 0.1;
    let model = ScoreModel::triangular(w).unwrap();
    let mut prev = 1.0;
    for n in [101usize, 201, 401, 801] {
        let got = gamma_ratio(&model, n, 1e-12).unwrap().value().unwrap();
        let oracle = z_ratio_oracle(w, n);
        assert!((got - oracle).abs() < 1e-9, "n {n}: {got} vs {oracle}");
        assert!(got >= prev - 1e-12 && got < 2.0);
        prev = got;
    }
    assert!(prev > 1.95, "{prev}");
}

#[test]
fn gamma_ratio_of_strongly_symmetric_kernel_is_one() {
    let model: ScoreModel = "rect:0.05:raw".parse().unwrap();
    assert_eq!(gamma_ratio(&model, 256, 1e-12).unwrap().value(), Some(1.0));
    let tri: ScoreModel = "tri:0.05:raw".parse().unwrap();
    assert!((gamma_ratio(&tri, 256, 1e-12).unwrap().value().unwrap() - 1.0).abs() < 1e-12);
    assert!(matches!(gamma_ratio(&ScoreModel::exact(), 64, 1e-12).unwrap(), GammaRatio::Unbounded { .. }));
}

#[test]
fn noise_model_audit() {
    let setup = Setup {
        prior: QualityPrior::uniform(),
        model: ScoreModel::triangular(0.1).unwrap(),
        grades: 8,
        params: MotivationParams::new(0.7, 0.2).unwrap(),
    };
    let report = check_hypotheses(&setup, &CheckOptions::default()).unwrap();
    let joint = report.entry(Hypothesis::JointSymmetry);
    assert!(joint.pass && joint.max_violation.unwrap() < 1e-12);
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(json["grades"], 8);
    assert!(json["hypotheses"].as_array().unwrap().len() == Hypothesis::ALL.len());
}

#[test]
fn verdict_examples() {
    let opts = CheckOptions::default();
    let sym = |am, ad, grades| Setup {
        prior: QualityPrior::uniform(),
        model: ScoreModel::triangular(0.1).unwrap(),
        grades,
        params: MotivationParams::new(am, ad).unwrap(),
    };
    let t1 = theorem_verdict(TheoremId::T1, &sym(0.7, 0.2, 8), &opts).unwrap();
    assert!(t1.hypotheses_pass, "{:?}", t1.failed_hypotheses);
    assert_eq!(t1.status, VerdictStatus::Confirmed);

    let c1 = theorem_verdict(TheoremId::C1, &sym(0.5, 0.5, 4), &opts).unwrap();
    assert_eq!(c1.status, VerdictStatus::Confirmed);
    assert!(c1.conclusion.unwrap().value.abs() < 1e-9);

    let wide = Setup {
        model: "rect:0.3:raw".parse().unwrap(),
        ..sym(0.8, 0.2, 8)
    };
    let t4 = theorem_verdict(TheoremId::T4, &wide, &opts).unwrap();
    assert_eq!(t4.status, VerdictStatus::HypothesesNotSatisfied);
    assert!(t4.failed_hypotheses.contains(&Hypothesis::MassRatioThree));
    assert!(t4.conclusion.is_some());
}

fn symmetric_scheme(kind: u8, t: u32, inner: f64) -> GradingScheme {
    match kind {
        0 => GradingScheme::ns(),
        1 => GradingScheme::ulg(t).unwrap(),
        _ => GradingScheme::from_cuts(vec![0.0, inner, 1.0 - inner, 1.0]).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identity_holds_when_symmetry_checks_pass(
        tri in any::<bool>(),
        w in 0.02..0.3f64,
        kind in 0u8..3,
        t in 1u32..16,
        inner in 0.05..0.45f64,
        am in 0.0..1.0f64,
        ad in 0.0..1.0f64,
    ) {
        let shape = if tri { KernelShape::Triangular } else { KernelShape::Rectangular };
        let model = ScoreModel::kernel(shape, w, true).unwrap();
        let prior = QualityPrior::uniform();
        let scheme = symmetric_scheme(kind, t, inner);
        let params = MotivationParams::new(am, ad).unwrap();
        let setup = Setup { prior, model, grades: t.max(2), params };
        let opts = CheckOptions { grid_size: 128, ..CheckOptions::default() };
        let report = check_hypotheses(&setup, &opts).unwrap();
        prop_assume!(report.passes(Hypothesis::JointSymmetry));
        prop_assert!(gradelab::is_symmetric(&scheme, 256, TOL).unwrap().symmetric);
        let perf = perf_quad(&prior, &model, &scheme, &params, 1e-10).unwrap().mean;
        let dev = exp_abs_dev(&prior, &model, &scheme, 1e-10).unwrap().value;
        prop_assert!((perf - 0.5 * (am - ad) * dev).abs() < 1e-8);
    }
}
