use super::{summarize, ModelFit, ModelKind, NormalPriors};
use crate::dist::normal;
use crate::error::{Error, Result};
use crate::mcmc::{inverse_gamma_draw, normal_draw, normal_mean_posterior, run_chains, ChainConfig, ChainRng, ChainRun, Kernel};
use crate::roc::{binormal_auc, binormal_point, Sample};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinormalParams {
    pub mu0: f64,
    pub sigma0: f64,
    pub mu1: f64,
    pub sigma1: f64,
}

impl BinormalParams {
    pub fn new(mu0: f64, sigma0: f64, mu1: f64, sigma1: f64) -> Result<Self> {
        if !(sigma0 > 0.0 && sigma1 > 0.0) || !mu0.is_finite() || !mu1.is_finite() || !sigma0.is_finite() || !sigma1.is_finite() {
            return Err(Error::domain("binormal parameters need finite means and positive scales"));
        }
        Ok(Self { mu0, sigma0, mu1, sigma1 })
    }

    pub fn a(&self) -> f64 {
        (self.mu1 - self.mu0) / self.sigma1
    }

    pub fn b(&self) -> f64 {
        self.sigma0 / self.sigma1
    }

    pub fn auc(&self) -> f64 {
        binormal_auc(self.a(), self.b())
    }
}

/// Mean and centred sum of squares of one group.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GroupStats {
    pub n: usize,
    pub mean: f64,
    pub ss: f64,
}

impl GroupStats {
    pub fn of(x: &[f64]) -> Self {
        let n = x.len();
        let mean = x.iter().sum::<f64>() / n as f64;
        let ss = x.iter().map(|v| (v - mean).powi(2)).sum();
        Self { n, mean, ss }
    }

    pub fn sd(&self) -> f64 {
        (self.ss / (self.n as f64 - 1.0).max(1.0)).sqrt()
    }
}

/// Conjugate Gibbs update of `(mu, sigma2)` for one normal group.
pub(crate) fn normal_gibbs(stats: &GroupStats, priors: &NormalPriors, sigma2: f64, rng: &mut ChainRng) -> (f64, f64) {
    let (m, v) = normal_mean_posterior(stats.n, stats.mean * stats.n as f64, sigma2, priors.mean, priors.var);
    let mu = normal_draw(m, v, rng);
    let ss = stats.ss + stats.n as f64 * (stats.mean - mu).powi(2);
    let sigma2 = inverse_gamma_draw(priors.shape + 0.5 * stats.n as f64, priors.rate + 0.5 * ss, rng);
    (mu, sigma2)
}

/// Starting `(mu, sigma2)` spread well beyond the posterior.
pub(crate) fn dispersed_normal_start(stats: &GroupStats, rng: &mut ChainRng) -> (f64, f64) {
    let sd = stats.sd().max(1e-6);
    let z: f64 = StandardNormal.sample(rng);
    let u: f64 = StandardNormal.sample(rng);
    (stats.mean + sd * z, (sd * sd) * u.exp())
}

struct BinormalKernel {
    groups: [GroupStats; 2],
    priors: NormalPriors,
}

impl Kernel for BinormalKernel {
    /// `[mu0, sigma0^2, mu1, sigma1^2]`
    type State = [f64; 4];
    type Draw = BinormalParams;

    fn param_names(&self) -> Vec<String> {
        ["mu0", "sigma0", "mu1", "sigma1"].map(String::from).to_vec()
    }

    fn initial_state(&self, _: usize, _: usize, rng: &mut ChainRng) -> [f64; 4] {
        let (m0, v0) = dispersed_normal_start(&self.groups[0], rng);
        let (m1, v1) = dispersed_normal_start(&self.groups[1], rng);
        [m0, v0, m1, v1]
    }

    fn sweep(&self, s: &mut [f64; 4], rng: &mut ChainRng) {
        for g in 0..2 {
            let (mu, v) = normal_gibbs(&self.groups[g], &self.priors, s[2 * g + 1], rng);
            s[2 * g] = mu;
            s[2 * g + 1] = v;
        }
    }

    fn record(&self, s: &[f64; 4]) -> (Vec<f64>, BinormalParams) {
        let p = BinormalParams { mu0: s[0], sigma0: s[1].sqrt(), mu1: s[2], sigma1: s[3].sqrt() };
        (vec![p.mu0, p.sigma0, p.mu1, p.sigma1], p)
    }
}

fn check_groups(sample: &Sample) -> Result<[GroupStats; 2]> {
    let mut out = [GroupStats { n: 0, mean: 0.0, ss: 0.0 }; 2];
    for (g, scores) in [sample.reference(), sample.affected()].into_iter().enumerate() {
        if scores.len() < 2 {
            return Err(Error::input(format!("group {g} needs at least 2 observations, got {}", scores.len())));
        }
        let stats = GroupStats::of(scores);
        if !(stats.ss > 0.0) {
            return Err(Error::fit(format!("group {g} has zero variance")));
        }
        out[g] = stats;
    }
    Ok(out)
}

/// Posterior draws of `(mu0, sigma0, mu1, sigma1)` under independent
/// normal / inverse-gamma priors for the two groups.
pub fn sample_binormal(sample: &Sample, cfg: &ChainConfig) -> Result<ChainRun<BinormalParams>> {
    let groups = check_groups(sample)?;
    run_chains(&BinormalKernel { groups, priors: NormalPriors::default() }, cfg)
}

pub(crate) fn separation_warning(sample: &Sample) -> Option<String> {
    let max = |x: &[f64]| x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = |x: &[f64]| x.iter().copied().fold(f64::INFINITY, f64::min);
    let (r, a) = (sample.reference(), sample.affected());
    (max(r) < min(a) || max(a) < min(r)).then(|| "groups are perfectly separated; AUC draws pile up near the boundary".to_string())
}

pub fn fit_bn(sample: &Sample, cfg: &ChainConfig, grid: &[f64]) -> Result<ModelFit> {
    let run = sample_binormal(sample, cfg)?;
    let probits: Vec<f64> = grid.iter().map(|&t| normal::quantile(t)).collect();
    let mut fit = summarize(ModelKind::Bn, run, grid, |p| {
        let (a, b) = (p.a(), p.b());
        (probits.iter().map(|&z| binormal_point(a, b, z)).collect(), binormal_auc(a, b))
    })?;
    fit.warnings.extend(separation_warning(sample));
    Ok(fit)
}
