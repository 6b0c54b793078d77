//! Placement values, ROC curves and the concave uniform-mixture estimator.
//!
//! A concave ROC curve is the CDF of placement values `Z = W V` with
//! `V ~ U(0, 1)` independent of `W`. Given draws `w_1..w_S` of the mixing
//! variable, the curve is `F(t) = mean_s min(t, w_s) / w_s` and its AUC is
//! `1 - E(W) / 2`.

mod curve;

pub use curve::{read_curve_csv, write_curve_csv, RocCurve};

use crate::dist::normal;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Number of points in the default evaluation grid, endpoints included.
pub const DEFAULT_GRID_SIZE: usize = 1001;

/// Uniform grid on `[0, 1]` with `n >= 2` points.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    assert!(n >= 2, "a grid needs both endpoints");
    let last = (n - 1) as f64;
    (0..n).map(|i| i as f64 / last).collect()
}

/// Test scores of the reference (group 0) and affected (group 1) subjects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    scores0: Vec<f64>,
    scores1: Vec<f64>,
}

impl Sample {
    pub fn new(scores0: Vec<f64>, scores1: Vec<f64>) -> Result<Self> {
        if scores0.is_empty() || scores1.is_empty() {
            return Err(Error::input("both groups need at least one score"));
        }
        for (group, scores) in [(0, &scores0), (1, &scores1)] {
            if let Some(bad) = scores.iter().find(|v| !v.is_finite()) {
                return Err(Error::input(format!("group {group} has a non-finite score ({bad})")));
            }
        }
        Ok(Self { scores0, scores1 })
    }

    pub fn reference(&self) -> &[f64] {
        &self.scores0
    }

    pub fn affected(&self) -> &[f64] {
        &self.scores1
    }

    /// Applies `f` to every score of both groups.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.scores0.iter().map(|&v| f(v)).collect(), self.scores1.iter().map(|&v| f(v)).collect())
    }
}

/// Placement values `z_i = 1 - F0(Y1_i)`, all in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementValues(Vec<f64>);

impl PlacementValues {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::input("no placement values"));
        }
        if let Some(bad) = z.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::input(format!("placement value {bad} outside [0, 1]")));
        }
        Ok(Self(z))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pulls every value into `[1/(2 n0), 1 - 1/(2 n0)]` so the uniform
    /// likelihood stays finite; `n0` is the reference group size.
    pub fn clamped(&self, n0: usize) -> Self {
        let eps = 0.5 / n0.max(1) as f64;
        Self(self.0.iter().map(|z| z.clamp(eps, 1.0 - eps)).collect())
    }

    /// Empirical CDF of the placement values on `grid`.
    pub fn ecdf_on(&self, grid: &[f64]) -> Vec<f64> {
        let mut z = self.0.clone();
        z.sort_by(f64::total_cmp);
        ecdf_sorted(&z, grid)
    }
}

/// Empirical CDF of sorted values at each grid point.
pub(crate) fn ecdf_sorted(sorted: &[f64], grid: &[f64]) -> Vec<f64> {
    let n = sorted.len() as f64;
    let mut j = 0;
    grid.iter()
        .map(|&t| {
            while j < sorted.len() && sorted[j] <= t {
                j += 1;
            }
            j as f64 / n
        })
        .collect()
}

/// Placement values of the affected scores relative to the reference CDF `f0`.
pub fn placement_values(sample: &Sample, f0: impl Fn(f64) -> f64) -> Result<PlacementValues> {
    placement_values_of(sample.affected(), f0)
}

pub fn placement_values_of(scores1: &[f64], f0: impl Fn(f64) -> f64) -> Result<PlacementValues> {
    let mut z = Vec::with_capacity(scores1.len());
    for &y in scores1 {
        if y.is_nan() {
            return Err(Error::input("placement value of a NaN score"));
        }
        z.push((1.0 - f0(y)).clamp(0.0, 1.0));
    }
    PlacementValues::new(z)
}

/// Mixing draws `w_s` of the concave representation, each in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureBounds(Vec<f64>);

impl MixtureBounds {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::input("mixture bounds must be nonempty"));
        }
        if let Some(bad) = w.iter().find(|v| !(**v > 0.0 && **v <= 1.0)) {
            return Err(Error::Invariant(format!("mixture bound {bad} outside (0, 1]")));
        }
        Ok(Self(w))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `F(t) = (1/S) sum_s min(t, w_s) / w_s`.
pub fn concave_cdf_eval(w: &MixtureBounds, t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    let s: f64 = w.0.iter().map(|&ws| t.min(ws) / ws).sum();
    (s / w.0.len() as f64).min(1.0)
}

/// The mixture CDF on a whole grid in `O(S log S + G)`.
///
/// Splits the sum at `t`: bounds below `t` contribute 1 each, the rest
/// contribute `t / w_s`.
pub fn concave_cdf_curve(w: &MixtureBounds, grid: &[f64]) -> Vec<f64> {
    let mut sorted = w.0.clone();
    sorted.sort_by(f64::total_cmp);
    concave_cdf_curve_sorted(&sorted, grid)
}

pub(crate) fn concave_cdf_curve_sorted(sorted: &[f64], grid: &[f64]) -> Vec<f64> {
    let n = sorted.len();
    // tail[j] = sum_{i >= j} 1 / w_i
    let mut tail = vec![0.0; n + 1];
    for j in (0..n).rev() {
        tail[j] = tail[j + 1] + 1.0 / sorted[j];
    }
    let mut j = 0;
    grid.iter()
        .map(|&t| {
            let t = t.clamp(0.0, 1.0);
            while j < n && sorted[j] <= t {
                j += 1;
            }
            ((j as f64 + t * tail[j]) / n as f64).min(1.0)
        })
        .collect()
}

/// `AUC = 1 - mean(w) / 2`.
pub fn auc_from_bounds(w: &MixtureBounds) -> f64 {
    let mean = w.0.iter().sum::<f64>() / w.0.len() as f64;
    1.0 - 0.5 * mean
}

/// Binormal ROC `Phi(a + b Phi^-1(t))` with AUC `Phi(a / sqrt(1 + b^2))`.
pub fn binormal_roc(a: f64, b: f64, grid: &[f64]) -> Result<RocCurve> {
    if !(b > 0.0 && b.is_finite()) || !a.is_finite() {
        return Err(Error::domain(format!("binormal ROC needs finite a and b > 0, got a={a}, b={b}")));
    }
    let values = grid.iter().map(|&t| binormal_point(a, b, normal::quantile(t))).collect();
    RocCurve::new(grid.to_vec(), values, binormal_auc(a, b))
}

pub(crate) fn binormal_point(a: f64, b: f64, probit_t: f64) -> f64 {
    if probit_t == f64::NEG_INFINITY {
        0.0
    } else if probit_t == f64::INFINITY {
        1.0
    } else {
        normal::cdf(a + b * probit_t)
    }
}

pub fn binormal_auc(a: f64, b: f64) -> f64 {
    normal::cdf(a / (1.0 + b * b).sqrt())
}

/// Mann-Whitney estimate of `P(Y1 > Y0)`, ties counted one half.
pub fn mann_whitney_auc(scores0: &[f64], scores1: &[f64]) -> f64 {
    let mut pooled: Vec<(f64, bool)> = scores0.iter().map(|&v| (v, false)).chain(scores1.iter().map(|&v| (v, true))).collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j + 1 < pooled.len() && pooled[j + 1].0 == pooled[i].0 {
            j += 1;
        }
        // midrank of the tie block, 1-based
        let mid = 0.5 * ((i + 1) + (j + 1)) as f64;
        let affected = pooled[i..=j].iter().filter(|p| p.1).count();
        rank_sum += mid * affected as f64;
        i = j + 1;
    }
    let n0 = scores0.len() as f64;
    let n1 = scores1.len() as f64;
    let u = rank_sum - n1 * (n1 + 1.0) / 2.0;
    u / (n0 * n1)
}

/// Step-function ROC: the empirical CDF of `#{Y0 > Y1_i} / N0`.
pub fn empirical_roc(sample: &Sample, grid: &[f64]) -> Result<RocCurve> {
    let mut reference = sample.reference().to_vec();
    reference.sort_by(f64::total_cmp);
    let n0 = reference.len();
    let mut z: Vec<f64> = sample
        .affected()
        .iter()
        .map(|&y| {
            let at_or_below = reference.partition_point(|&r| r <= y);
            (n0 - at_or_below) as f64 / n0 as f64
        })
        .collect();
    z.sort_by(f64::total_cmp);
    let values = ecdf_sorted(&z, grid);
    RocCurve::new(grid.to_vec(), values, mann_whitney_auc(sample.reference(), sample.affected()))
}

/// Integrated squared difference between two curves on the same grid.
pub fn emse(estimate: &RocCurve, truth: &RocCurve) -> Result<f64> {
    if estimate.grid() != truth.grid() {
        return Err(Error::input("EMSE needs both curves on the same grid"));
    }
    let diff: Vec<f64> = estimate.values().iter().zip(truth.values()).map(|(a, b)| (a - b).powi(2)).collect();
    Ok(trapezoid(estimate.grid(), &diff))
}

pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2).zip(values.windows(2)).map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1])).sum()
}

/// Number of grid intervals where the slope increases by more than `tol`.
pub fn concavity_violations(grid: &[f64], values: &[f64], tol: f64) -> usize {
    let slopes: Vec<f64> = grid.windows(2).zip(values.windows(2)).map(|(t, v)| (v[1] - v[0]) / (t[1] - t[0])).collect();
    slopes.windows(2).filter(|s| s[1] > s[0] + tol).count()
}

/// Slope tolerance used for concavity checks on computed curves.
pub const CONCAVITY_TOL: f64 = 1e-9;
