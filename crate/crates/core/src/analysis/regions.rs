//! Same-bucket regions of the `(q, s)` square and the density-ratio constant.

use serde::{Serialize, Serializer};

use crate::dist::{QualityPrior, ScoreModel};
use crate::error::{Error, Result};
use crate::grading::{uniform_bucket, GradingScheme};
use crate::quad::JointRule;

/// Where a `(q, s)` pair falls relative to the `T` uniform buckets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// Same bucket, same side of its midpoint.
    Same,
    /// Same bucket, opposite sides of its midpoint.
    Opposite,
    /// Different buckets.
    Off,
}

pub fn region_of(grades: u32, q: f64, s: f64) -> Region {
    let kq = uniform_bucket(grades, q);
    if kq != uniform_bucket(grades, s) {
        return Region::Off;
    }
    let mid = (kq as f64 + 0.5) / grades as f64;
    if (q < mid) == (s < mid) {
        Region::Same
    } else {
        Region::Opposite
    }
}

/// Joint-law mass of each region, normalized by `total_mass`.
///
/// `total_mass` is 1 for proper score models; unrenormalized kernels lose a
/// little mass near the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionProbabilities {
    pub p_same: f64,
    pub p_opp: f64,
    pub p_off: f64,
    pub total_mass: f64,
    pub error_estimate: f64,
}

pub fn region_probs(
    prior: &QualityPrior,
    model: &ScoreModel,
    grades: u32,
    tol: f64,
) -> Result<RegionProbabilities> {
    let scheme = GradingScheme::ulg(grades)?;
    let rule = JointRule::new(prior, model, &scheme.breakpoints());
    let out = rule.integrate(tol, |q, s| match region_of(grades, q, s) {
        Region::Same => [1.0, 0.0, 0.0],
        Region::Opposite => [0.0, 1.0, 0.0],
        Region::Off => [0.0, 0.0, 1.0],
    })?;
    let [same, opp, off] = out.values;
    let total = same + opp + off;
    Ok(RegionProbabilities {
        p_same: same / total,
        p_opp: opp / total,
        p_off: off / total,
        total_mass: total,
        error_estimate: out.error_estimate,
    })
}

/// Both sides of the same-bucket distance condition, conditioned on `D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BucketDistances {
    /// `E[|q − s| | D]`
    pub to_score: f64,
    /// `E[|q − ULG_T(s)| | D]`
    pub to_grade: f64,
    pub p_bucket: f64,
}

pub fn bucket_distances(
    prior: &QualityPrior,
    model: &ScoreModel,
    grades: u32,
    tol: f64,
) -> Result<BucketDistances> {
    let scheme = GradingScheme::ulg(grades)?;
    let rule = JointRule::new(prior, model, &scheme.breakpoints());
    let out = rule.integrate(tol, |q, s| {
        if uniform_bucket(grades, q) == uniform_bucket(grades, s) {
            [1.0, (q - s).abs(), (q - scheme.apply(s)).abs()]
        } else {
            [0.0; 3]
        }
    })?;
    let [mass, to_score, to_grade] = out.values;
    Ok(BucketDistances {
        to_score: to_score / mass,
        to_grade: to_grade / mass,
        p_bucket: mass,
    })
}

/// Ratios above this are reported as unbounded.
pub const RATIO_CAP: f64 = 1e6;

/// `max f_S(a; b) / f_S(b; a)` over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaRatio {
    Finite { value: f64, location: (f64, f64) },
    Unbounded { location: Option<(f64, f64)> },
}

impl GammaRatio {
    pub fn value(&self) -> Option<f64> {
        match self {
            GammaRatio::Finite { value, .. } => Some(*value),
            GammaRatio::Unbounded { .. } => None,
        }
    }
}

impl Serialize for GammaRatio {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GammaRatio::Finite { value, .. } => ser.serialize_f64(*value),
            GammaRatio::Unbounded { .. } => ser.serialize_str("unbounded"),
        }
    }
}

/// Scans the `grid_size × grid_size` grid `i/(n−1)`.
///
/// Pairs where both directions fall below `density_floor` are skipped. A
/// ratio above [`RATIO_CAP`], including a reverse density of zero, makes the
/// result unbounded.
pub fn gamma_ratio(model: &ScoreModel, grid_size: usize, density_floor: f64) -> Result<GammaRatio> {
    if grid_size < 2 {
        return Err(Error::InvalidParameter("grid_size must be at least 2".into()));
    }
    if model.is_exact() {
        return Ok(GammaRatio::Unbounded { location: None });
    }
    let grid = unit_grid(grid_size);
    let laws: Vec<_> = grid.iter().map(|&q| model.at(q)).collect();
    let mut best = (1.0, (grid[0], grid[0]));
    for (i, &a) in grid.iter().enumerate() {
        for (j, &b) in grid.iter().enumerate().skip(i + 1) {
            let ab = laws[j].density(a);
            let ba = laws[i].density(b);
            if ab.max(ba) < density_floor {
                continue;
            }
            let (ratio, loc) = if ab >= ba {
                (ab / ba, (a, b))
            } else {
                (ba / ab, (b, a))
            };
            // covers a vanishing reverse density (ratio = ∞) as well
            if ratio > RATIO_CAP {
                return Ok(GammaRatio::Unbounded {
                    location: Some(loc),
                });
            }
            if ratio > best.0 {
                best = (ratio, loc);
            }
        }
    }
    Ok(GammaRatio::Finite {
        value: best.0,
        location: best.1,
    })
}

pub(crate) fn unit_grid(n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|i| i as f64 / last).collect()
}
