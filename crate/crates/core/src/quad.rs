//! Kink-aware Gauss–Legendre quadrature over the joint law of `(q, s)`.
//!
//! Integrands in this crate are piecewise smooth: they jump at grade cuts,
//! bend at bucket midpoints and on the diagonal `s = q`, and the kernel
//! densities bend at `|s − q| = w`. Panels are aligned to every such point so
//! each panel sees a smooth function, then refined by halving until two
//! consecutive levels agree.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{QualityPrior, ScoreModel};
use crate::error::{Error, Result};

/// Points per panel of the composite rule.
pub const PANEL_ORDER: usize = 16;
const MAX_LEVEL: u32 = 5;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n`, seeded with the Chebyshev-like guess.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

pub(crate) fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER))
}

/// Clips to `[0, 1]`, adds both endpoints, sorts and drops near-duplicates.
pub(crate) fn unit_breaks(points: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = points
        .into_iter()
        .filter(|x| x.is_finite())
        .map(|x| x.clamp(0.0, 1.0))
        .chain([0.0, 1.0])
        .collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    v
}

/// Composite 16-point rule with `2^level` equal panels per piece.
pub fn composite(breaks: &[f64], level: u32, mut f: impl FnMut(f64) -> f64) -> f64 {
    let rule = gl16();
    let parts = 1usize << level;
    let mut total = 0.0;
    for piece in breaks.windows(2) {
        let h = (piece[1] - piece[0]) / parts as f64;
        if h <= 0.0 {
            continue;
        }
        for k in 0..parts {
            let a = piece[0] + k as f64 * h;
            total += rule.integrate(a, a + h, &mut f);
        }
    }
    total
}

/// Refines [`composite`] until two levels agree within `tol`.
pub fn integrate_1d(breaks: &[f64], tol: f64, f: impl Fn(f64) -> f64) -> Result<QuadValue> {
    let breaks = unit_breaks(breaks.iter().copied());
    let mut prev = composite(&breaks, 0, &f);
    let mut change = f64::INFINITY;
    for level in 1..=MAX_LEVEL + 2 {
        let cur = composite(&breaks, level, &f);
        change = (cur - prev).abs();
        if change < tol {
            return Ok(QuadValue {
                value: cur,
                error_estimate: change,
                level,
            });
        }
        prev = cur;
    }
    Err(Error::Convergence {
        change,
        tol,
        level: MAX_LEVEL + 2,
    })
}

/// A quadrature result with the change between the last two refinement levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadValue {
    pub value: f64,
    pub error_estimate: f64,
    pub level: u32,
}

/// Several integrals over the same panel decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointValues<const N: usize> {
    pub values: [f64; N],
    pub error_estimate: f64,
    pub level: u32,
}

/// Integrates `f(q, s)` against `f_Q(q)·f_S(s; q)` on the unit square.
pub(crate) struct JointRule<'a> {
    prior: &'a QualityPrior,
    model: &'a ScoreModel,
    fixed: Vec<f64>,
    offsets: Vec<f64>,
    outer: Vec<f64>,
}

impl<'a> JointRule<'a> {
    /// `fixed` holds score/quality values where the integrand itself is
    /// non-smooth (cuts, midpoints).
    pub(crate) fn new(prior: &'a QualityPrior, model: &'a ScoreModel, fixed: &[f64]) -> Self {
        let fixed = unit_breaks(fixed.iter().copied());
        let offsets = model.spread_offsets();
        let outer = unit_breaks(fixed.iter().flat_map(|&x| {
            std::iter::once(x).chain(offsets.iter().flat_map(move |&o| [x - o, x + o]))
        }));
        JointRule {
            prior,
            model,
            fixed,
            offsets,
            outer,
        }
    }

    fn inner_breaks(&self, q: f64, buf: &mut Vec<f64>) {
        buf.clear();
        buf.extend_from_slice(&self.fixed);
        buf.push(q);
        for &o in &self.offsets {
            buf.push((q - o).max(0.0));
            buf.push((q + o).min(1.0));
        }
        buf.sort_by(f64::total_cmp);
        buf.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    }

    fn inner<const N: usize>(
        &self,
        q: f64,
        level: u32,
        f: &(impl Fn(f64, f64) -> [f64; N] + Sync),
        buf: &mut Vec<f64>,
    ) -> [f64; N] {
        if self.model.is_exact() {
            return f(q, q);
        }
        let law = self.model.at(q);
        self.inner_breaks(q, buf);
        let rule = gl16();
        let parts = 1usize << level;
        let mut acc = [0.0; N];
        for piece in buf.windows(2) {
            let h = (piece[1] - piece[0]) / parts as f64;
            if h <= 0.0 {
                continue;
            }
            for k in 0..parts {
                let a = piece[0] + k as f64 * h;
                for (s, w) in rule.mapped(a, a + h) {
                    let dens = law.density(s);
                    if dens == 0.0 {
                        continue;
                    }
                    let vals = f(q, s);
                    for (slot, v) in acc.iter_mut().zip(vals) {
                        *slot += w * dens * v;
                    }
                }
            }
        }
        acc
    }

    fn evaluate<const N: usize>(
        &self,
        level: u32,
        f: &(impl Fn(f64, f64) -> [f64; N] + Sync),
    ) -> [f64; N] {
        let rule = gl16();
        let parts = 1usize << level;
        let nodes: Vec<(f64, f64)> = self
            .outer
            .windows(2)
            .filter(|p| p[1] > p[0])
            .flat_map(|p| {
                let h = (p[1] - p[0]) / parts as f64;
                (0..parts).flat_map(move |k| {
                    let a = p[0] + k as f64 * h;
                    rule.mapped(a, a + h).collect::<Vec<_>>()
                })
            })
            .collect();
        let contributions: Vec<[f64; N]> = nodes
            .par_iter()
            .map_init(Vec::new, |buf, &(q, w)| {
                let weight = w * self.prior.density(q);
                let mut vals = self.inner(q, level, f, buf);
                for v in vals.iter_mut() {
                    *v *= weight;
                }
                vals
            })
            .collect();
        // fixed summation order keeps results identical across thread counts
        let mut total = [0.0; N];
        for c in &contributions {
            for (t, v) in total.iter_mut().zip(c) {
                *t += v;
            }
        }
        total
    }

    pub(crate) fn integrate<const N: usize>(
        &self,
        tol: f64,
        f: impl Fn(f64, f64) -> [f64; N] + Sync,
    ) -> Result<JointValues<N>> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
        }
        let mut prev = self.evaluate(0, &f);
        let mut change = f64::INFINITY;
        for level in 1..=MAX_LEVEL {
            let cur = self.evaluate(level, &f);
            change = prev
                .iter()
                .zip(&cur)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if change < tol {
                return Ok(JointValues {
                    values: cur,
                    error_estimate: change,
                    level,
                });
            }
            prev = cur;
        }
        Err(Error::Convergence {
            change,
            tol,
            level: MAX_LEVEL,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_low_degree() {
        let rule = GaussLegendre::new(16);
        let w: f64 = rule.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
        // degree 31 is integrated exactly
        let v = rule.integrate(0.0, 1.0, |x| x.powi(31));
        assert!((v - 1.0 / 32.0).abs() < 1e-15);
        let odd = GaussLegendre::new(5);
        assert!(odd.nodes[2].abs() < 1e-15);
        assert!((odd.integrate(-1.0, 1.0, |x| x.powi(8)) - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn composite_handles_kinks_at_breaks() {
        let f = |x: f64| (x - 0.3).abs();
        let exact = 0.5 * (0.09 + 0.49);
        let aligned = composite(&[0.0, 0.3, 1.0], 0, f);
        assert!((aligned - exact).abs() < 1e-15);
        let naive = composite(&[0.0, 1.0], 0, f);
        assert!((naive - exact).abs() > 1e-6);
    }

    #[test]
    fn integrate_1d_converges() {
        let v = integrate_1d(&[0.5], 1e-12, |x| (3.0 * x).sin()).unwrap();
        assert!((v.value - (1.0 - 3f64.cos()) / 3.0).abs() < 1e-13);
    }

    #[test]
    fn unit_breaks_sorted_and_clipped() {
        assert_eq!(unit_breaks([0.5, -0.2, 0.5, 1.3, 0.25]), vec![0.0, 0.25, 0.5, 1.0]);
    }
}
