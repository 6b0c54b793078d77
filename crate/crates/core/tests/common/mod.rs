//! Helpers shared by the integration tests: Geweke joint-distribution
//! checks for the latent-variable kernels and the bundled data set.

#![allow(dead_code)]

use concave_roc::dist::normal;
use concave_roc::io::read_dataset;
use concave_roc::mcmc::{ChainRng, Kernel};
use concave_roc::models::{MixtureState, NormalPriors, PcnKernel, PcnState, SpcnKernel, SpcnPriors, SpcnState};
use concave_roc::roc::{PlacementValues, Sample};
use rand::{Rng, SeedableRng};
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};

pub fn surrogate_sample() -> Sample {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/pancreatic_surrogate.csv");
    read_dataset(std::fs::File::open(path).expect("bundled data"), true).expect("valid data")
}

/// Proper priors: the Geweke check needs a joint distribution to sample.
pub const GEWEKE_PRIORS: NormalPriors = NormalPriors { mean: 0.0, var: 1.0, shape: 4.0, rate: 3.0 };
pub const GEWEKE_N: usize = 20;
pub const GEWEKE_DRAWS: usize = 30_000;
/// Largest |z| accepted for any test function.
pub const GEWEKE_Z_MAX: f64 = 4.0;
const BATCHES: usize = 50;

#[derive(Debug, Clone)]
pub struct GewekeStat {
    pub name: &'static str,
    pub marginal: f64,
    pub successive: f64,
    pub z: f64,
}

impl GewekeStat {
    pub fn ok(&self) -> bool {
        self.z.is_finite() && self.z.abs() < GEWEKE_Z_MAX
    }
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    (m, x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0))
}

/// Variance of the mean of an autocorrelated series by batch means.
fn batch_mean_var(x: &[f64]) -> f64 {
    let size = x.len() / BATCHES;
    let means: Vec<f64> = x.chunks_exact(size).map(|c| c.iter().sum::<f64>() / size as f64).collect();
    mean_var(&means).1 / means.len() as f64
}

fn compare(name: &'static str, marginal: &[f64], successive: &[f64]) -> GewekeStat {
    let (m1, v1) = mean_var(marginal);
    let m2 = successive.iter().sum::<f64>() / successive.len() as f64;
    let se = (v1 / marginal.len() as f64 + batch_mean_var(successive)).sqrt();
    GewekeStat { name, marginal: m1, successive: m2, z: (m1 - m2) / se }
}

fn inverse_gamma(shape: f64, rate: f64, rng: &mut ChainRng) -> f64 {
    1.0 / Gamma::new(shape, 1.0 / rate).unwrap().sample(rng)
}

fn gaussian(mean: f64, var: f64, rng: &mut ChainRng) -> f64 {
    mean + var.sqrt() * rng.sample::<f64, _>(StandardNormal)
}

/// `z_i ~ U(0, Phi(x_i))`, redrawn in the rare case rounding would put the
/// implied lower bound above the latent.
fn placements_given(x: &[f64], rng: &mut ChainRng) -> PlacementValues {
    let z = x
        .iter()
        .map(|&xi| loop {
            let z = (normal::cdf(xi) * rng.random::<f64>()).max(1e-300);
            if normal::quantile(z) <= xi {
                break z;
            }
        })
        .collect();
    PlacementValues::new(z).unwrap()
}

fn pcn_prior(p: &NormalPriors, rng: &mut ChainRng) -> PcnState {
    let mu = gaussian(p.mean, p.var, rng);
    let sigma2 = inverse_gamma(p.shape, p.rate, rng);
    PcnState { x: (0..GEWEKE_N).map(|_| gaussian(mu, sigma2, rng)).collect(), mu, sigma2 }
}

fn pcn_functions(s: &PcnState) -> [f64; 4] {
    let w = s.x.iter().map(|&x| normal::cdf(x)).sum::<f64>() / s.x.len() as f64;
    [s.mu, s.sigma2, w, s.x[0]]
}

const PCN_NAMES: [&str; 4] = ["mu", "sigma2", "mean w", "x[0]"];

/// Marginal-conditional draws from `simulator` against the successive-
/// conditional chain whose kernel uses `kernel_priors`.
pub fn geweke_pcn(simulator: NormalPriors, kernel_priors: NormalPriors, seed: u64) -> Vec<GewekeStat> {
    let mut rng = ChainRng::seed_from_u64(seed);
    let marginal: Vec<[f64; 4]> = (0..GEWEKE_DRAWS).map(|_| pcn_functions(&pcn_prior(&simulator, &mut rng))).collect();
    let mut state = pcn_prior(&simulator, &mut rng);
    let mut successive = Vec::with_capacity(GEWEKE_DRAWS);
    for _ in 0..GEWEKE_DRAWS {
        let z = placements_given(&state.x, &mut rng);
        PcnKernel::new(&z, kernel_priors).unwrap().sweep(&mut state, &mut rng);
        successive.push(pcn_functions(&state));
    }
    (0..4)
        .map(|j| {
            let a: Vec<f64> = marginal.iter().map(|f| f[j]).collect();
            let b: Vec<f64> = successive.iter().map(|f| f[j]).collect();
            compare(PCN_NAMES[j], &a, &b)
        })
        .collect()
}

pub fn geweke_spcn_priors() -> SpcnPriors {
    SpcnPriors { truncation: 5, alpha: 1.0, base: GEWEKE_PRIORS }
}

fn spcn_prior(p: &SpcnPriors, rng: &mut ChainRng) -> SpcnState {
    let h = p.truncation;
    let mut sticks = vec![1.0; h];
    let mut weights = vec![0.0; h];
    let mut remaining = 1.0;
    for k in 0..h {
        if k + 1 < h {
            sticks[k] = Beta::new(1.0, p.alpha).unwrap().sample(rng);
        }
        weights[k] = sticks[k] * remaining;
        remaining *= 1.0 - sticks[k];
    }
    let atoms: Vec<f64> = (0..h).map(|_| gaussian(p.base.mean, p.base.var, rng)).collect();
    let sigma2 = inverse_gamma(p.base.shape, p.base.rate, rng);
    let assign: Vec<usize> = (0..GEWEKE_N)
        .map(|_| {
            let mut u = rng.random::<f64>();
            let mut k = h - 1;
            for (j, w) in weights.iter().enumerate() {
                if u < *w {
                    k = j;
                    break;
                }
                u -= w;
            }
            k
        })
        .collect();
    let x = assign.iter().map(|&k| gaussian(atoms[k], sigma2, rng)).collect();
    SpcnState { x, mixture: MixtureState { assign, atoms, sticks, weights, sigma2 } }
}

fn spcn_functions(s: &SpcnState) -> [f64; 6] {
    let m = &s.mixture;
    let w = s.x.iter().map(|&x| normal::cdf(x)).sum::<f64>() / s.x.len() as f64;
    [m.sigma2, w, s.x[0], m.atoms[m.assign[0]], m.weights[0], m.occupied() as f64]
}

const SPCN_NAMES: [&str; 6] = ["sigma2", "mean w", "x[0]", "atom of x[0]", "weight[0]", "occupied"];

pub fn geweke_spcn(simulator: SpcnPriors, kernel_priors: SpcnPriors, seed: u64) -> Vec<GewekeStat> {
    let mut rng = ChainRng::seed_from_u64(seed);
    let marginal: Vec<[f64; 6]> = (0..GEWEKE_DRAWS).map(|_| spcn_functions(&spcn_prior(&simulator, &mut rng))).collect();
    let mut state = spcn_prior(&simulator, &mut rng);
    let mut successive = Vec::with_capacity(GEWEKE_DRAWS);
    for _ in 0..GEWEKE_DRAWS {
        let z = placements_given(&state.x, &mut rng);
        SpcnKernel::new(&z, kernel_priors).unwrap().sweep(&mut state, &mut rng);
        successive.push(spcn_functions(&state));
    }
    (0..6)
        .map(|j| {
            let a: Vec<f64> = marginal.iter().map(|f| f[j]).collect();
            let b: Vec<f64> = successive.iter().map(|f| f[j]).collect();
            compare(SPCN_NAMES[j], &a, &b)
        })
        .collect()
}

pub fn describe(stats: &[GewekeStat]) -> String {
    stats.iter().map(|s| format!("{} z={:+.2}", s.name, s.z)).collect::<Vec<_>>().join(", ")
}
