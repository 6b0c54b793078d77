//! Bigamma model: `Y0 ~ Gam(k, phi0)`, `Y1 ~ Gam(k, phi1)` with a shared
//! shape. The curve is concave exactly when `phi0 <= phi1`, so the prior is
//! restricted to that ordered region.

use super::{summarize, ModelFit, ModelKind};
use crate::dist::solve_increasing_warm;
use crate::error::{Error, Result};
use crate::mcmc::{run_chains, slice_step, ChainConfig, ChainRng, Kernel};
use crate::roc::{RocCurve, Sample};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::{gamma_ur, ln_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BigammaParams {
    pub shape: f64,
    pub scale0: f64,
    pub scale1: f64,
}

impl BigammaParams {
    pub fn new(shape: f64, scale0: f64, scale1: f64) -> Result<Self> {
        if ![shape, scale0, scale1].iter().all(|v| *v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("bigamma parameters must be positive, got ({shape}, {scale0}, {scale1})")));
        }
        Ok(Self { shape, scale0, scale1 })
    }

    pub fn auc(&self) -> f64 {
        bigamma_auc(self.shape, self.scale0 / self.scale1)
    }

    pub fn roc(&self, grid: &[f64]) -> Result<RocCurve> {
        RocCurve::new(grid.to_vec(), bigamma_roc_values(self.shape, self.scale0 / self.scale1, grid), self.auc())
    }
}

/// `1 - F_{2k,2k}(r)` with `r = phi0 / phi1`, via `F_{2k,2k}(r) = I_{r/(1+r)}(k, k)`.
pub fn bigamma_auc(shape: f64, ratio: f64) -> f64 {
    1.0 - beta_reg(shape, shape, ratio / (1.0 + ratio))
}

/// ROC values `Q(k, r y_t)` where `Q(k, y_t) = t` and `Q` is the regularised
/// upper incomplete gamma function.
pub fn bigamma_roc_values(shape: f64, ratio: f64, grid: &[f64]) -> Vec<f64> {
    let ln_g = ln_gamma(shape);
    // -Q(k, e^u) is increasing in u
    let g = |u: f64| {
        let y = u.exp();
        if y == 0.0 {
            return (-1.0, 0.0);
        }
        if !y.is_finite() {
            return (0.0, 0.0);
        }
        (-gamma_ur(shape, y), (shape * u - y - ln_g).exp())
    };
    let mut u = shape.ln();
    grid.iter()
        .map(|&t| {
            if t <= 0.0 {
                return 0.0;
            }
            if t >= 1.0 {
                return 1.0;
            }
            u = solve_increasing_warm(g, -t, u, -745.0, 709.0);
            gamma_ur(shape, ratio * u.exp())
        })
        .collect()
}

/// Vague `Gamma(shape, rate)` priors on `k`, `phi0` and `phi1`, truncated to
/// `phi0 <= phi1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BgPriors {
    pub shape: f64,
    pub rate: f64,
}

impl Default for BgPriors {
    fn default() -> Self {
        Self { shape: 0.01, rate: 0.01 }
    }
}

#[derive(Debug, Clone, Copy)]
struct GammaStats {
    n: f64,
    sum: f64,
    sum_log: f64,
}

struct BigammaKernel {
    groups: [GammaStats; 2],
    priors: BgPriors,
}

/// Slice width on the log scale of each parameter.
const LOG_WIDTH: f64 = 0.5;

impl BigammaKernel {
    fn ln_prior(&self, v: f64) -> f64 {
        (self.priors.shape - 1.0) * v.ln() - self.priors.rate * v
    }

    fn ln_lik(&self, g: usize, k: f64, phi: f64) -> f64 {
        let s = &self.groups[g];
        (k - 1.0) * s.sum_log - s.sum / phi - s.n * (k * phi.ln() + ln_gamma(k))
    }

    fn ln_post(&self, p: &[f64; 3]) -> f64 {
        self.ln_lik(0, p[0], p[1]) + self.ln_lik(1, p[0], p[2]) + p.iter().map(|&v| self.ln_prior(v)).sum::<f64>()
    }
}

impl Kernel for BigammaKernel {
    /// `[k, phi0, phi1]`
    type State = [f64; 3];
    type Draw = BigammaParams;

    fn param_names(&self) -> Vec<String> {
        ["k", "phi0", "phi1"].map(String::from).to_vec()
    }

    fn initial_state(&self, _: usize, _: usize, rng: &mut ChainRng) -> [f64; 3] {
        // moment estimate of the shared shape, then jitter on the log scale
        let mut cv2 = 0.0;
        for s in &self.groups {
            let mean = s.sum / s.n;
            cv2 += 0.5 * (s.sum_log / s.n - mean.ln()).abs().max(1e-3);
        }
        // E log Y - log E Y is about -1 / (2k) for gamma data
        let k0 = (0.5 / cv2).clamp(0.05, 1e4);
        let mut jitter = || (0.5 * rng.sample::<f64, _>(StandardNormal)).exp();
        let k = k0 * jitter();
        let (a, b) = (self.groups[0].sum / self.groups[0].n / k * jitter(), self.groups[1].sum / self.groups[1].n / k * jitter());
        [k, a.min(b), a.max(b)]
    }

    fn sweep(&self, p: &mut [f64; 3], rng: &mut ChainRng) {
        // shape move with the group means k * phi held fixed; in u = log k the
        // two scale Jacobians and the log map give -log k overall. The move
        // keeps phi1 / phi0, so the ordering survives it.
        let (m0, m1) = (p[0] * p[1], p[0] * p[2]);
        let mut f = |u: f64| {
            let k = u.exp();
            self.ln_post(&[k, m0 / k, m1 / k]) - u
        };
        let u0 = p[0].ln();
        let f0 = f(u0);
        let u = slice_step(&mut f, u0, f0, LOG_WIDTH, -700.0, 700.0, rng);
        let k = u.exp();
        *p = [k, m0 / k, m1 / k];

        for g in 1..3 {
            let mut f = |v: f64| {
                let mut q = *p;
                q[g] = v.exp();
                self.ln_lik(g - 1, q[0], q[g]) + self.ln_prior(q[g]) + v
            };
            let v0 = p[g].ln();
            let f0 = f(v0);
            let (lo, hi) = if g == 1 { (-700.0, p[2].ln()) } else { (p[1].ln(), 700.0) };
            let v = slice_step(&mut f, v0, f0, LOG_WIDTH, lo, hi, rng).exp();
            // exp(ln x) may round past the bound
            p[g] = if g == 1 { v.min(p[2]) } else { v.max(p[1]) };
        }
    }

    fn record(&self, p: &[f64; 3]) -> (Vec<f64>, BigammaParams) {
        (p.to_vec(), BigammaParams { shape: p[0], scale0: p[1], scale1: p[2] })
    }
}

fn gamma_stats(group: usize, scores: &[f64]) -> Result<GammaStats> {
    if let Some(bad) = scores.iter().find(|v| **v <= 0.0) {
        return Err(Error::input(format!("BG needs strictly positive scores; group {group} has {bad}")));
    }
    if scores.len() < 2 {
        return Err(Error::input(format!("group {group} needs at least 2 observations, got {}", scores.len())));
    }
    Ok(GammaStats { n: scores.len() as f64, sum: scores.iter().sum(), sum_log: scores.iter().map(|v| v.ln()).sum() })
}

pub fn fit_bg(sample: &Sample, cfg: &ChainConfig, grid: &[f64]) -> Result<ModelFit> {
    fit_bg_with(sample, cfg, grid, BgPriors::default())
}

pub(crate) fn fit_bg_with(sample: &Sample, cfg: &ChainConfig, grid: &[f64], priors: BgPriors) -> Result<ModelFit> {
    let groups = [gamma_stats(0, sample.reference())?, gamma_stats(1, sample.affected())?];
    let run = run_chains(&BigammaKernel { groups, priors }, cfg)?;
    summarize(ModelKind::Bg, run, grid, |p| {
        let r = p.scale0 / p.scale1;
        (bigamma_roc_values(p.shape, r, grid), bigamma_auc(p.shape, r))
    })
}
