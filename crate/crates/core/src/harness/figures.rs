use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::config::{ExperimentConfig, SweepAxis};
use super::sweep::run_sweep;
use super::table::write_rows;
use crate::dist::{QualityPrior, ScoreModel};
use crate::error::{Error, Result};
use crate::grading::GradingScheme;

/// Figure presets reproducible from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig2,
    Fig3,
    Fig4,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig1c,
        FigureId::Fig1d,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig1c => "fig1c",
            FigureId::Fig1d => "fig1d",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s.trim())
            .ok_or_else(|| {
                Error::parse("figure id", s, "expected one of fig1a..fig1d, fig2, fig3, fig4")
            })
    }
}

pub const BASE_MU: f64 = 0.65;
pub const BASE_SIGMA: f64 = 0.12;
pub const BASE_GAMMA: f64 = 0.015;
pub const BASE_ALPHA_D: f64 = 0.5;
pub const BASE_N: usize = 5000;
pub const ULG_GRADES: [u32; 5] = [4, 8, 12, 16, 20];

fn hundredths(range: impl Iterator<Item = u32>) -> Vec<f64> {
    range.map(|v| v as f64 / 100.0).collect()
}

/// The canonical configuration behind a figure.
pub fn figure_config(id: FigureId, seed: u64) -> ExperimentConfig {
    let mut schemes = vec![GradingScheme::ns()];
    schemes.extend(ULG_GRADES.iter().map(|&t| GradingScheme::ulg(t).expect("valid grade count")));
    let alpha_sweep: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let rounds: Vec<u32> = (1..=20).collect();
    let (alpha_m, r, sweep, values) = match id {
        FigureId::Fig1a => (alpha_sweep, vec![2], SweepAxis::AlphaM, vec![]),
        FigureId::Fig1b => (alpha_sweep, vec![4], SweepAxis::AlphaM, vec![]),
        FigureId::Fig1c => (vec![0.2], rounds, SweepAxis::R, vec![]),
        FigureId::Fig1d => (vec![0.8], rounds, SweepAxis::R, vec![]),
        FigureId::Fig2 => (
            vec![0.2, 0.8],
            vec![2, 4],
            SweepAxis::Mu,
            hundredths((35..=85).step_by(5)),
        ),
        FigureId::Fig3 => (
            vec![0.2, 0.8],
            vec![2, 4],
            SweepAxis::Sigma,
            hundredths((4..=24).step_by(2)),
        ),
        FigureId::Fig4 => (
            vec![0.2, 0.8],
            vec![2, 4],
            SweepAxis::GammaNoise,
            vec![0.005, 0.01, 0.015, 0.02, 0.03, 0.04, 0.05, 0.06, 0.08, 0.1],
        ),
    };
    ExperimentConfig {
        prior: QualityPrior::truncated_normal(BASE_MU, BASE_SIGMA).expect("valid prior"),
        model: ScoreModel::truncated_normal(BASE_GAMMA).expect("valid model"),
        schemes,
        alpha_m,
        alpha_d: BASE_ALPHA_D,
        r,
        n: BASE_N,
        seed,
        scale: 100,
        sweep,
        values,
    }
}

/// Writes `<id>.config.json` and `<id>.csv` into `out_dir` and returns the
/// CSV path.
pub fn reproduce(id: FigureId, out_dir: &Path, seed: u64) -> Result<PathBuf> {
    let config = figure_config(id, seed);
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join(format!("{id}.config.json")), config.to_json() + "\n")?;
    let rows = run_sweep(&config)?;
    let csv_path = out_dir.join(format!("{id}.csv"));
    let file = std::fs::File::create(&csv_path)?;
    write_rows(std::io::BufWriter::new(file), &rows)?;
    log::info!("wrote {} rows to {}", rows.len(), csv_path.display());
    Ok(csv_path)
}
