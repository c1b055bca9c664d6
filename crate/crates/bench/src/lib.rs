//! Fixtures shared by the benchmarks.

use gradelab::{GradingScheme, MotivationParams, QualityPrior, ScoreModel};

/// The reference setting: truncated-normal prior and score noise.
pub struct Fixture {
    pub prior: QualityPrior,
    pub model: ScoreModel,
    pub params: MotivationParams,
}

pub fn reference() -> Fixture {
    Fixture {
        prior: QualityPrior::truncated_normal(0.65, 0.12).unwrap(),
        model: ScoreModel::truncated_normal(0.015).unwrap(),
        params: MotivationParams::new(0.8, 0.5).unwrap(),
    }
}

pub fn schemes() -> Vec<GradingScheme> {
    vec![
        GradingScheme::ns(),
        GradingScheme::ulg(4).unwrap(),
        GradingScheme::ulg(20).unwrap(),
    ]
}
