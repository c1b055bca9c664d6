//! Score → grade maps.
//!
//! Letter schemes use half-open buckets `[c_{i-1}, c_i)`; a score sitting
//! exactly on a cut belongs to the upper bucket and `s = 1` folds into the
//! top bucket.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GradingScheme {
    /// Numerical scoring: the grade is the score.
    Numerical,
    /// Uniform letter grading with `grades` equal-length buckets.
    Uniform { grades: u32 },
    /// General letter grading given by its cut vector `0 = c_0 ≤ … ≤ c_T = 1`.
    Cuts(Vec<f64>),
}

impl GradingScheme {
    pub fn ns() -> Self {
        GradingScheme::Numerical
    }

    pub fn ulg(grades: u32) -> Result<Self> {
        if grades == 0 {
            return Err(Error::InvalidParameter(
                "uniform letter grading needs at least one grade".into(),
            ));
        }
        Ok(GradingScheme::Uniform { grades })
    }

    pub fn from_cuts(cuts: Vec<f64>) -> Result<Self> {
        if cuts.len() < 2 {
            return Err(Error::InvalidParameter(
                "a cut vector needs at least the endpoints 0 and 1".into(),
            ));
        }
        if cuts[0] != 0.0 || *cuts.last().unwrap() != 1.0 {
            return Err(Error::InvalidParameter(format!(
                "cut vector must start at 0 and end at 1, got {cuts:?}"
            )));
        }
        if cuts.windows(2).any(|w| w[0].is_nan() || w[1].is_nan() || w[0] > w[1]) {
            return Err(Error::InvalidParameter(format!(
                "cut vector must be non-decreasing, got {cuts:?}"
            )));
        }
        if cuts.windows(2).any(|w| w[0] == w[1]) {
            log::warn!("cut vector {cuts:?} has empty buckets; they are unreachable");
        }
        Ok(GradingScheme::Cuts(cuts))
    }

    pub fn is_letter(&self) -> bool {
        !matches!(self, GradingScheme::Numerical)
    }

    /// Number of grades; `None` for numerical scoring.
    pub fn grades(&self) -> Option<u32> {
        match self {
            GradingScheme::Numerical => None,
            GradingScheme::Uniform { grades } => Some(*grades),
            GradingScheme::Cuts(c) => Some((c.len() - 1) as u32),
        }
    }

    /// The cut vector of a letter scheme (`c_i = i/T` for ULG).
    pub fn cuts(&self) -> Option<Vec<f64>> {
        match self {
            GradingScheme::Numerical => None,
            GradingScheme::Uniform { grades } => {
                let t = *grades as f64;
                Some((0..=*grades).map(|i| i as f64 / t).collect())
            }
            GradingScheme::Cuts(c) => Some(c.clone()),
        }
    }

    /// Cut points and bucket midpoints: every place where `grade` jumps or
    /// where `|q − grade(s)|` bends.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        let Some(cuts) = self.cuts() else {
            return Vec::new();
        };
        let mut out = cuts.clone();
        out.extend(cuts.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        out
    }

    pub fn grade(&self, s: f64) -> Result<f64> {
        check_unit("s", s)?;
        Ok(self.apply(s))
    }

    /// `grade` without the range check.
    pub(crate) fn apply(&self, s: f64) -> f64 {
        match self {
            GradingScheme::Numerical => s,
            GradingScheme::Uniform { grades } => {
                if s >= 1.0 {
                    return 1.0;
                }
                (uniform_bucket(*grades, s) as f64 + 0.5) / *grades as f64
            }
            GradingScheme::Cuts(c) => {
                let i = cut_bucket(c, s);
                0.5 * (c[i] + c[i + 1])
            }
        }
    }

    /// Zero-based bucket containing `s`.
    pub fn bucket_index(&self, s: f64) -> Result<usize> {
        check_unit("s", s)?;
        match self {
            GradingScheme::Numerical => Err(Error::InvalidParameter(
                "numerical scoring has no buckets".into(),
            )),
            GradingScheme::Uniform { grades } => Ok(uniform_bucket(*grades, s)),
            GradingScheme::Cuts(c) => Ok(cut_bucket(c, s)),
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn uniform_bucket(grades: u32, s: f64) -> usize {
    let t = grades as f64;
    let top = grades as usize - 1;
    let mut k = ((s * t).floor().max(0.0) as usize).min(top);
    // s·T can round across an integer; settle against the cut values i/T
    if k < top && s >= (k + 1) as f64 / t {
        k += 1;
    } else if k > 0 && s < k as f64 / t {
        k -= 1;
    }
    k
}

fn cut_bucket(cuts: &[f64], s: f64) -> usize {
    let top = cuts.len() - 2;
    // number of interior cuts ≤ s
    let k = cuts[1..cuts.len() - 1].partition_point(|&c| c <= s);
    k.min(top)
}

/// Outcome of [`is_symmetric`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryCheck {
    pub symmetric: bool,
    pub max_violation: f64,
    /// Score at which the largest violation occurs.
    pub location: f64,
}

/// Grid check of `B(1 − s) = 1 − B(s)`.
///
/// Uses the cell-midpoint grid `(k + ½)/n`, skipping any point whose score or
/// mirrored score sits on a cut.
pub fn is_symmetric(scheme: &GradingScheme, grid_size: usize, tol: f64) -> Result<SymmetryCheck> {
    if grid_size < 2 {
        return Err(Error::InvalidParameter("grid_size must be at least 2".into()));
    }
    let cuts = scheme.cuts().unwrap_or_default();
    let on_cut = |x: f64| cuts.iter().any(|c| (x - c).abs() < 1e-12);
    let mut worst = (0.0, 0.0);
    for k in 0..grid_size {
        let s = (k as f64 + 0.5) / grid_size as f64;
        let mirror = 1.0 - s;
        if on_cut(s) || on_cut(mirror) {
            continue;
        }
        let v = (scheme.apply(mirror) - (1.0 - scheme.apply(s))).abs();
        if v > worst.0 {
            worst = (v, s);
        }
    }
    Ok(SymmetryCheck {
        symmetric: worst.0 <= tol,
        max_violation: worst.0,
        location: worst.1,
    })
}

impl fmt::Display for GradingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingScheme::Numerical => write!(f, "ns"),
            GradingScheme::Uniform { grades } => write!(f, "ulg:{grades}"),
            GradingScheme::Cuts(c) => {
                let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "cuts:[{}]", body.join(","))
            }
        }
    }
}

impl FromStr for GradingScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("ns") {
            return Ok(GradingScheme::Numerical);
        }
        if let Some(t) = s.strip_prefix("ulg:") {
            let grades = t
                .trim()
                .parse::<u32>()
                .map_err(|e| Error::parse("grading scheme", s, e.to_string()))?;
            return GradingScheme::ulg(grades);
        }
        if let Some(body) = s.strip_prefix("cuts:") {
            let inner = body
                .trim()
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::parse("grading scheme", s, "expected cuts:[c0,...,cT]"))?;
            let cuts = crate::dist::parse_floats(inner)
                .map_err(|e| Error::parse("grading scheme", s, e))?;
            return GradingScheme::from_cuts(cuts);
        }
        Err(Error::parse(
            "grading scheme",
            s,
            "expected ns, ulg:T or cuts:[...]",
        ))
    }
}

impl TryFrom<String> for GradingScheme {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GradingScheme> for String {
    fn from(g: GradingScheme) -> String {
        g.to_string()
    }
}
