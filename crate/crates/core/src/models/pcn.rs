//! Parametric concave model: `z_i | w_i ~ U(0, w_i)` with
//! `Phi^-1(w_i) ~ N(mu, sigma^2)`.

use super::{summarize, ModelFit, ModelKind, NormalPriors};
use crate::dist::normal;
use crate::error::{Error, Result};
use crate::mcmc::{inverse_gamma_draw, normal_draw, normal_mean_posterior, run_chains, slice_step, ChainConfig, ChainRng, ChainRun, Kernel};
use crate::roc::{concave_cdf_curve_sorted, PlacementValues};
use rand::Rng;
use rand_distr::StandardNormal;

/// Full sampler state; every `x[i]` satisfies `Phi(x[i]) >= z[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PcnState {
    pub x: Vec<f64>,
    pub mu: f64,
    pub sigma2: f64,
}

pub struct PcnKernel {
    /// `Phi^-1(z_i)`, the lower end of each latent's support.
    lower: Vec<f64>,
    priors: NormalPriors,
}

/// Log full conditional of one latent, up to a constant: normal prior
/// times the `1 / w` uniform likelihood.
#[inline]
pub(crate) fn latent_log_density(x: f64, mean: f64, sigma2: f64) -> f64 {
    -0.5 * (x - mean) * (x - mean) / sigma2 - normal::ln_cdf(x)
}

/// Latent supports `Phi^-1(z_i)`; rejects placement values outside (0, 1).
pub(crate) fn latent_bounds(z: &PlacementValues) -> Result<Vec<f64>> {
    if z.is_empty() {
        return Err(Error::input("no placement values"));
    }
    z.values()
        .iter()
        .map(|&v| {
            if v > 0.0 && v < 1.0 {
                Ok(normal::quantile(v))
            } else {
                Err(Error::input(format!("placement value {v} must be clamped into (0, 1) before fitting")))
            }
        })
        .collect()
}

/// A start inside the support, spread around `mean`.
pub(crate) fn latent_start(lower: &[f64], mean: f64, sd: f64, rng: &mut ChainRng) -> Vec<f64> {
    lower
        .iter()
        .map(|&l| {
            let x = mean + sd * rng.sample::<f64, _>(StandardNormal);
            if x > l {
                x
            } else {
                l + 0.1 * sd * (rng.sample::<f64, _>(StandardNormal)).abs() + 1e-9
            }
        })
        .collect()
}

/// Slice update of every latent given its prior mean.
pub(crate) fn update_latents(x: &mut [f64], lower: &[f64], mean_of: impl Fn(usize) -> f64, sigma2: f64, rng: &mut ChainRng) {
    let width = sigma2.sqrt();
    for (i, (xi, &l)) in x.iter_mut().zip(lower).enumerate() {
        let m = mean_of(i);
        let mut f = |v: f64| latent_log_density(v, m, sigma2);
        let f0 = f(*xi);
        *xi = slice_step(&mut f, *xi, f0, width, l, f64::INFINITY, rng);
    }
}

/// Sorted mixture bounds `w = Phi(x)`.
pub(crate) fn sorted_bounds(x: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> = x.iter().map(|&v| normal::cdf(v).max(f64::MIN_POSITIVE)).collect();
    w.sort_by(f64::total_cmp);
    w
}

impl PcnKernel {
    pub fn new(z: &PlacementValues, priors: NormalPriors) -> Result<Self> {
        Ok(Self { lower: latent_bounds(z)?, priors })
    }
}

impl Kernel for PcnKernel {
    type State = PcnState;
    type Draw = Vec<f64>;

    fn param_names(&self) -> Vec<String> {
        vec!["mu".into(), "sigma2".into()]
    }

    fn initial_state(&self, _: usize, _: usize, rng: &mut ChainRng) -> PcnState {
        let n = self.lower.len() as f64;
        let center = self.lower.iter().sum::<f64>() / n + 0.5;
        let mu = center + rng.sample::<f64, _>(StandardNormal);
        let sigma2 = (0.5 * rng.sample::<f64, _>(StandardNormal)).exp();
        PcnState { x: latent_start(&self.lower, mu, sigma2.sqrt(), rng), mu, sigma2 }
    }

    fn sweep(&self, s: &mut PcnState, rng: &mut ChainRng) {
        let (mu, sigma2) = (s.mu, s.sigma2);
        update_latents(&mut s.x, &self.lower, |_| mu, sigma2, rng);
        let n = s.x.len();
        let sum: f64 = s.x.iter().sum();
        let (m, v) = normal_mean_posterior(n, sum, s.sigma2, self.priors.mean, self.priors.var);
        s.mu = normal_draw(m, v, rng);
        let ss: f64 = s.x.iter().map(|x| (x - s.mu).powi(2)).sum();
        s.sigma2 = inverse_gamma_draw(self.priors.shape + 0.5 * n as f64, self.priors.rate + 0.5 * ss, rng);
    }

    fn record(&self, s: &PcnState) -> (Vec<f64>, Vec<f64>) {
        (vec![s.mu, s.sigma2], sorted_bounds(&s.x))
    }
}

/// Per-draw concave curve and AUC `1 - mean(w) / 2` from sorted bounds.
pub(crate) fn mixture_curve(w: &[f64], grid: &[f64]) -> (Vec<f64>, f64) {
    let auc = 1.0 - 0.5 * w.iter().sum::<f64>() / w.len() as f64;
    (concave_cdf_curve_sorted(w, grid), auc)
}

pub fn sample_pcn(z: &PlacementValues, cfg: &ChainConfig, priors: NormalPriors) -> Result<ChainRun<Vec<f64>>> {
    run_chains(&PcnKernel::new(z, priors)?, cfg)
}

pub fn fit_pcn(z: &PlacementValues, cfg: &ChainConfig, grid: &[f64]) -> Result<ModelFit> {
    fit_pcn_with(z, cfg, grid, NormalPriors::default())
}

pub fn fit_pcn_with(z: &PlacementValues, cfg: &ChainConfig, grid: &[f64], priors: NormalPriors) -> Result<ModelFit> {
    let run = sample_pcn(z, cfg, priors)?;
    summarize(ModelKind::Pcn, run, grid, |w| mixture_curve(w, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roc::uniform_grid;
    use rand::SeedableRng;

    fn pcn_values(alpha0: f64, alpha1: f64, n: usize, seed: u64) -> PlacementValues {
        let mut rng = ChainRng::seed_from_u64(seed);
        let z = (0..n)
            .map(|_| {
                let x = alpha0 / alpha1 + rng.sample::<f64, _>(StandardNormal) / alpha1;
                normal::cdf(x) * rng.random::<f64>()
            })
            .collect();
        PlacementValues::new(z).unwrap().clamped(n)
    }

    fn quick() -> ChainConfig {
        ChainConfig { n_chains: 2, burn_in: 500, keep: 500, thin: 2, seed: 8 }
    }

    #[test]
    fn recovers_generating_auc() {
        // W = Phi(N(1/30, 1/9)) has E W about 0.513, so AUC about 0.743
        let z = pcn_values(0.1, 3.0, 1000, 5);
        let fit = fit_pcn(&z, &quick(), &uniform_grid(101)).unwrap();
        assert!((fit.auc.mean - 0.743).abs() < 0.03, "{}", fit.auc.mean);
        assert_eq!(fit.concavity_violations, 0);
        assert!(fit.auc_draws.iter().all(|a| (0.5..=1.0).contains(a)));
    }

    #[test]
    fn placement_values_near_one_give_chance() {
        let z = PlacementValues::new(vec![0.999; 50]).unwrap();
        let fit = fit_pcn(&z, &quick(), &uniform_grid(101)).unwrap();
        assert!(fit.auc.mean < 0.51, "{}", fit.auc.mean);
    }

    #[test]
    fn latents_stay_in_support() {
        let z = pcn_values(1.0, 1.0, 40, 3);
        let kernel = PcnKernel::new(&z, NormalPriors::default()).unwrap();
        let mut rng = ChainRng::seed_from_u64(1);
        let mut s = kernel.initial_state(0, 1, &mut rng);
        for _ in 0..200 {
            kernel.sweep(&mut s, &mut rng);
            for (x, zi) in s.x.iter().zip(z.values()) {
                assert!(normal::cdf(*x) >= *zi);
            }
        }
    }

    #[test]
    fn rejects_boundary_values() {
        let z = PlacementValues::new(vec![0.0, 0.5]).unwrap();
        assert!(matches!(PcnKernel::new(&z, NormalPriors::default()), Err(Error::Input(_))));
    }
}
