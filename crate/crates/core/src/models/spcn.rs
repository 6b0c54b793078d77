//! Semiparametric concave model: the probit latents of pCN follow a
//! Dirichlet process mixture of normals, truncated at `H` sticks.

use super::dpm::{MixtureState, StickBreaking};
use super::pcn::{latent_bounds, latent_start, mixture_curve, sorted_bounds, update_latents};
use super::{summarize, ModelFit, ModelKind, NormalPriors};
use crate::dist::normal;
use crate::error::{Error, Result};
use crate::mcmc::{run_chains, ChainConfig, ChainRng, ChainRun, Kernel};
use crate::roc::PlacementValues;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpcnPriors {
    pub truncation: usize,
    pub alpha: f64,
    pub base: NormalPriors,
}

impl Default for SpcnPriors {
    fn default() -> Self {
        let sb = StickBreaking::default();
        Self { truncation: sb.truncation, alpha: sb.alpha, base: sb.base }
    }
}

impl SpcnPriors {
    fn stick_breaking(&self) -> Result<StickBreaking> {
        if self.truncation < 1 || !(self.alpha > 0.0) {
            return Err(Error::input("spCN needs truncation >= 1 and alpha > 0"));
        }
        Ok(StickBreaking { truncation: self.truncation, alpha: self.alpha, base: self.base })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpcnState {
    pub x: Vec<f64>,
    pub mixture: MixtureState,
}

pub struct SpcnKernel {
    lower: Vec<f64>,
    sb: StickBreaking,
}

impl SpcnKernel {
    pub fn new(z: &PlacementValues, priors: SpcnPriors) -> Result<Self> {
        Ok(Self { lower: latent_bounds(z)?, sb: priors.stick_breaking()? })
    }
}

impl Kernel for SpcnKernel {
    type State = SpcnState;
    type Draw = Vec<f64>;

    /// Only functionals of `W` are monitored: latents far in the right tail
    /// all give `w` near 1, so `sigma^2` and the atoms are weakly identified.
    fn param_names(&self) -> Vec<String> {
        vec!["w_sd".into()]
    }

    fn initial_state(&self, _: usize, _: usize, rng: &mut ChainRng) -> SpcnState {
        let n = self.lower.len() as f64;
        let center = self.lower.iter().sum::<f64>() / n + 0.5;
        let mu = center + rng.sample::<f64, _>(StandardNormal);
        let sigma2 = (0.5 * rng.sample::<f64, _>(StandardNormal)).exp();
        let x = latent_start(&self.lower, mu, sigma2.sqrt(), rng);
        let mixture = self.sb.start(&x, sigma2, rng);
        SpcnState { x, mixture }
    }

    fn sweep(&self, s: &mut SpcnState, rng: &mut ChainRng) {
        relocate(&mut s.x, &self.lower, &mut s.mixture, rng);
        translate_clusters(&mut s.x, &self.lower, &mut s.mixture, &self.sb.base, rng);
        let m = &s.mixture;
        update_latents(&mut s.x, &self.lower, |i| m.atoms[m.assign[i]], m.sigma2, rng);
        self.sb.update(&mut s.mixture, &s.x, rng);
    }

    fn record(&self, s: &SpcnState) -> (Vec<f64>, Vec<f64>) {
        let w = sorted_bounds(&s.x);
        let n = w.len() as f64;
        let mean = w.iter().sum::<f64>() / n;
        let sd = (w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        (vec![sd], w)
    }
}

/// Joint independence move on each `(label, x)`: the proposal is the prior
/// mixture restricted to `x >= lower`, so the `1 / Phi(x)` likelihood alone
/// sets the acceptance `Phi(x_old) / Phi(x_new)`. Lets latents change
/// cluster without first crossing the gap between atoms.
fn relocate(x: &mut [f64], lower: &[f64], m: &mut MixtureState, rng: &mut ChainRng) {
    let sd = m.sigma2.sqrt();
    let mut mass = vec![0.0; m.atoms.len()];
    for (i, (xi, &l)) in x.iter_mut().zip(lower).enumerate() {
        let mut total = 0.0;
        for (k, mk) in mass.iter_mut().enumerate() {
            *mk = m.weights[k] * normal::sf((l - m.atoms[k]) / sd);
            total += *mk;
        }
        if !(total > 0.0) {
            continue;
        }
        let mut u = rng.random::<f64>() * total;
        let mut k = mass.len() - 1;
        for (j, mj) in mass.iter().enumerate() {
            if u < *mj {
                k = j;
                break;
            }
            u -= mj;
        }
        let tail = mass[k] / m.weights[k];
        let proposal = m.atoms[k] - sd * normal::quantile((1.0 - rng.random::<f64>()) * tail);
        if !proposal.is_finite() || proposal < l {
            continue;
        }
        let ln_u = (1.0 - rng.random::<f64>()).ln();
        if ln_u < normal::ln_cdf(*xi) - normal::ln_cdf(proposal) {
            *xi = proposal;
            m.assign[i] = k;
        }
    }
}

/// Step sizes of the cluster translation, in units of the kernel sd.
const TRANSLATE_STEPS: [f64; 2] = [1.0, 0.1];

/// Metropolis shift of each occupied atom together with its latents. The
/// kernel terms cancel, leaving the base prior and the `1 / Phi(x)` factors;
/// moves that push a latent below its bound are rejected.
fn translate_clusters(x: &mut [f64], lower: &[f64], m: &mut MixtureState, base: &NormalPriors, rng: &mut ChainRng) {
    let sd = m.sigma2.sqrt();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); m.atoms.len()];
    m.assign.iter().enumerate().for_each(|(i, &k)| members[k].push(i));
    for (k, idx) in members.iter().enumerate().filter(|(_, idx)| !idx.is_empty()) {
        for step in TRANSLATE_STEPS {
            let delta = step * sd * rng.sample::<f64, _>(StandardNormal);
            if idx.iter().any(|&i| x[i] + delta < lower[i]) {
                continue;
            }
            let mu = m.atoms[k];
            let mut ln_ratio = ((mu - base.mean).powi(2) - (mu + delta - base.mean).powi(2)) / (2.0 * base.var);
            for &i in idx {
                ln_ratio += normal::ln_cdf(x[i]) - normal::ln_cdf(x[i] + delta);
            }
            if (1.0 - rng.random::<f64>()).ln() < ln_ratio {
                m.atoms[k] += delta;
                idx.iter().for_each(|&i| x[i] += delta);
            }
        }
    }
}

pub fn sample_spcn(z: &PlacementValues, cfg: &ChainConfig, priors: SpcnPriors) -> Result<ChainRun<Vec<f64>>> {
    run_chains(&SpcnKernel::new(z, priors)?, cfg)
}

pub fn fit_spcn(z: &PlacementValues, cfg: &ChainConfig, grid: &[f64]) -> Result<ModelFit> {
    fit_spcn_with(z, cfg, grid, SpcnPriors::default())
}

pub fn fit_spcn_with(z: &PlacementValues, cfg: &ChainConfig, grid: &[f64], priors: SpcnPriors) -> Result<ModelFit> {
    let run = sample_spcn(z, cfg, priors)?;
    summarize(ModelKind::Spcn, run, grid, |w| mixture_curve(w, grid))
}
