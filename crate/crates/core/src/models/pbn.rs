//! Proper binormal ROC through its bi-chi-square form.
//!
//! With reference scores standardised to N(0, 1), the affected scores are
//! N(a0/a1, 1/a1^2). The likelihood ratio is monotone in `(x - c)^2`, which
//! is `chi2_1(theta)` under the reference and `lambda * chi2_1(lambda theta)`
//! under the affected population, `lambda = 1/a1^2`.

use super::bn::{sample_binormal, separation_warning};
use super::{summarize, ModelFit, ModelKind};
use crate::dist::{bvn_cdf, normal, solve_increasing_warm};
use crate::error::{Error, Result};
use crate::mcmc::ChainConfig;
use crate::roc::{RocCurve, Sample};
use serde::{Deserialize, Serialize};

/// `|a1 - 1|` below this uses the binormal closed form.
pub const UNIT_LAMBDA_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PbnParams {
    pub alpha0: f64,
    pub alpha1: f64,
}

impl PbnParams {
    pub fn new(alpha0: f64, alpha1: f64) -> Result<Self> {
        if !alpha0.is_finite() || !(alpha1 > 0.0 && alpha1.is_finite()) {
            return Err(Error::domain(format!("PBN needs finite a0 and a1 > 0, got ({alpha0}, {alpha1})")));
        }
        Ok(Self { alpha0, alpha1 })
    }

    pub fn lambda(&self) -> f64 {
        1.0 / (self.alpha1 * self.alpha1)
    }

    pub fn theta(&self) -> f64 {
        let a1sq = self.alpha1 * self.alpha1;
        self.alpha0 * self.alpha0 * a1sq / (1.0 - a1sq).powi(2)
    }

    pub fn is_unit(&self) -> bool {
        (self.alpha1 - 1.0).abs() < UNIT_LAMBDA_TOL
    }

    pub fn auc(&self) -> f64 {
        pbn_auc(self.alpha0, self.alpha1)
    }

    pub fn roc(&self, grid: &[f64]) -> Result<RocCurve> {
        pbn_roc(self.alpha0, self.alpha1, grid)
    }
}

/// CDF of `chi2_1(nu)` at `s^2`.
fn ncx2_cdf_sqrt(m: f64, s: f64) -> f64 {
    let lower = normal::cdf(s - m) - normal::cdf(-s - m);
    if lower < 0.5 {
        lower
    } else {
        1.0 - ncx2_sf_sqrt(m, s)
    }
}

/// Upper tail of `chi2_1(nu)` at `s^2`, with `m = sqrt(nu)`.
fn ncx2_sf_sqrt(m: f64, s: f64) -> f64 {
    normal::sf(s - m) + normal::cdf(-s - m)
}

fn ncx2_slope_sqrt(m: f64, s: f64) -> f64 {
    normal::pdf(s - m) + normal::pdf(s + m)
}

/// Proper binormal ROC values on `grid`.
pub fn pbn_roc_values(alpha0: f64, alpha1: f64, grid: &[f64]) -> Vec<f64> {
    let p = PbnParams { alpha0, alpha1 };
    if p.is_unit() {
        return grid.iter().map(|&t| crate::roc::binormal_point(alpha0, 1.0, normal::quantile(t.clamp(0.0, 1.0)))).collect();
    }
    let (lambda, theta) = (p.lambda(), p.theta());
    let m0 = theta.sqrt();
    let m1 = (lambda * theta).sqrt();
    let root_lambda = lambda.sqrt();
    let mut s = m0 + 1.0;
    grid.iter()
        .map(|&t| {
            if t <= 0.0 {
                return 0.0;
            }
            if t >= 1.0 {
                return 1.0;
            }
            if lambda > 1.0 {
                // large (x - c)^2 is positive: FPR = sf_theta(d), TPR = sf_{lambda theta}(d / lambda)
                let g = |x: f64| (-ncx2_sf_sqrt(m0, x), ncx2_slope_sqrt(m0, x));
                s = solve_increasing_warm(g, -t, s, 0.0, f64::INFINITY);
                ncx2_sf_sqrt(m1, s / root_lambda)
            } else {
                // small (x - c)^2 is positive: FPR = F_theta(d), TPR = F_{lambda theta}(d / lambda)
                let g = |x: f64| (ncx2_cdf_sqrt(m0, x), ncx2_slope_sqrt(m0, x));
                s = solve_increasing_warm(g, t, s, 0.0, f64::INFINITY);
                ncx2_cdf_sqrt(m1, s / root_lambda)
            }
        })
        .collect()
}

pub fn pbn_roc(alpha0: f64, alpha1: f64, grid: &[f64]) -> Result<RocCurve> {
    let p = PbnParams::new(alpha0, alpha1)?;
    RocCurve::new(grid.to_vec(), pbn_roc_values(alpha0, alpha1, grid), p.auc())
}

/// Proper binormal AUC, `Phi(k) + 2 F_BVN(-k, 0; -2 sqrt(l) / (l + 1))` with
/// `k = sqrt(theta) (l - 1) / sqrt(l + 1)`.
///
/// For `lambda < 1` the roles of the two chi-square laws swap, which maps
/// `(lambda, theta)` to `(1 / lambda, lambda theta)`.
pub fn pbn_auc(alpha0: f64, alpha1: f64) -> f64 {
    let p = PbnParams { alpha0, alpha1 };
    if p.is_unit() {
        return normal::cdf(alpha0 / 2f64.sqrt());
    }
    let (mut lambda, mut theta) = (p.lambda(), p.theta());
    if lambda < 1.0 {
        theta *= lambda;
        lambda = 1.0 / lambda;
    }
    let k = theta.sqrt() * (lambda - 1.0) / (lambda + 1.0).sqrt();
    let rho = (-2.0 * lambda.sqrt() / (lambda + 1.0)).max(-1.0 + 1e-15);
    let tail = bvn_cdf(-k, 0.0, rho).unwrap_or(0.0);
    (normal::cdf(k) + 2.0 * tail).clamp(0.5, 1.0)
}

/// AUC by quadrature of the ROC branch, `t = u^2` Simpson rule on 20 000
/// panels; the substitution tames the infinite slope at `t = 0`.
pub fn pbn_auc_by_integration(alpha0: f64, alpha1: f64) -> f64 {
    let panels = 20_000;
    let u: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
    let t: Vec<f64> = u.iter().map(|v| v * v).collect();
    let roc = pbn_roc_values(alpha0, alpha1, &t);
    let h = 1.0 / panels as f64;
    let f = |i: usize| roc[i] * 2.0 * u[i];
    let mut sum = f(0) + f(panels);
    for i in 1..panels {
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i);
    }
    sum * h / 3.0
}

/// Binormal fit whose `(a, b)` draws are read as `(a0, a1)` of the proper
/// binormal model and mapped through the bi-chi-square ROC.
pub fn fit_pbn(sample: &Sample, cfg: &ChainConfig, grid: &[f64]) -> Result<ModelFit> {
    let run = sample_binormal(sample, cfg)?;
    let mut fit = summarize(ModelKind::Pbn, run, grid, |p| {
        let (a0, a1) = (p.a(), p.b());
        (pbn_roc_values(a0, a1, grid), pbn_auc(a0, a1))
    })?;
    fit.warnings.extend(separation_warning(sample));
    Ok(fit)
}
