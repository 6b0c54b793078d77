//! Stage-one estimate of the reference CDF used to form placement values.

use super::bn::{dispersed_normal_start, normal_gibbs, GroupStats};
use super::dpm::{MixtureState, StickBreaking};
use super::NormalPriors;
use crate::dist::normal;
use crate::error::{Error, Result};
use crate::mcmc::{run_chains, ChainConfig, ChainRng, Kernel};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceMode {
    /// `Phi((y - mu) / sigma)` at posterior means.
    Parametric,
    /// Posterior-mean CDF of a Dirichlet process normal mixture.
    Dpm,
}

impl fmt::Display for ReferenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReferenceMode::Parametric => "parametric",
            ReferenceMode::Dpm => "dpm",
        })
    }
}

impl FromStr for ReferenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "parametric" | "parametric-normal" | "normal" => Ok(ReferenceMode::Parametric),
            "dpm" | "dpm-normal-mixture" | "mixture" => Ok(ReferenceMode::Dpm),
            _ => Err(Error::input(format!("unknown reference mode `{s}`; expected parametric or dpm"))),
        }
    }
}

/// A fitted reference CDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReferenceCdf {
    Normal {
        mean: f64,
        sd: f64,
    },
    /// Equal-weight average of mixture draws, flattened into components.
    Mixture {
        weights: Vec<f64>,
        means: Vec<f64>,
        sds: Vec<f64>,
    },
}

impl ReferenceCdf {
    pub fn cdf(&self, y: f64) -> f64 {
        match self {
            ReferenceCdf::Normal { mean, sd } => normal::cdf((y - mean) / sd),
            ReferenceCdf::Mixture { weights, means, sds } => {
                let s: f64 = weights.iter().zip(means).zip(sds).map(|((w, m), sd)| w * normal::cdf((y - m) / sd)).sum();
                s.clamp(0.0, 1.0)
            }
        }
    }

    /// `1 - F0(y)` without cancellation in the upper tail.
    pub fn sf(&self, y: f64) -> f64 {
        match self {
            ReferenceCdf::Normal { mean, sd } => normal::sf((y - mean) / sd),
            ReferenceCdf::Mixture { weights, means, sds } => {
                let s: f64 = weights.iter().zip(means).zip(sds).map(|((w, m), sd)| w * normal::sf((y - m) / sd)).sum();
                s.clamp(0.0, 1.0)
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            ReferenceCdf::Normal { mean, .. } => *mean,
            ReferenceCdf::Mixture { weights, means, .. } => weights.iter().zip(means).map(|(w, m)| w * m).sum(),
        }
    }
}

/// Mixture draws kept for the posterior-mean CDF.
const MAX_CDF_DRAWS: usize = 200;
/// Components lighter than this are dropped from each kept draw.
const MIN_WEIGHT: f64 = 1e-10;

struct NormalKernel {
    stats: GroupStats,
    priors: NormalPriors,
}

impl Kernel for NormalKernel {
    type State = (f64, f64);
    type Draw = ();

    fn param_names(&self) -> Vec<String> {
        vec!["mu".into(), "sigma".into()]
    }

    fn initial_state(&self, _: usize, _: usize, rng: &mut ChainRng) -> (f64, f64) {
        dispersed_normal_start(&self.stats, rng)
    }

    fn sweep(&self, s: &mut (f64, f64), rng: &mut ChainRng) {
        *s = normal_gibbs(&self.stats, &self.priors, s.1, rng);
    }

    fn record(&self, s: &(f64, f64)) -> (Vec<f64>, ()) {
        (vec![s.0, s.1.sqrt()], ())
    }
}

struct MixtureKernel<'a> {
    data: &'a [f64],
    sb: StickBreaking,
}

impl Kernel for MixtureKernel<'_> {
    type State = MixtureState;
    /// `(weights, atoms, sigma2)`
    type Draw = (Vec<f64>, Vec<f64>, f64);

    fn param_names(&self) -> Vec<String> {
        vec!["sigma2".into()]
    }

    fn initial_state(&self, _: usize, _: usize, rng: &mut ChainRng) -> MixtureState {
        let stats = GroupStats::of(self.data);
        let (_, var) = dispersed_normal_start(&stats, rng);
        self.sb.start(self.data, 0.25 * var, rng)
    }

    fn sweep(&self, s: &mut MixtureState, rng: &mut ChainRng) {
        self.sb.update(s, self.data, rng);
    }

    fn record(&self, s: &MixtureState) -> (Vec<f64>, Self::Draw) {
        (vec![s.sigma2], (s.weights.clone(), s.atoms.clone(), s.sigma2))
    }
}

/// Fits the reference CDF from group-0 scores (already on the modelling scale).
pub fn estimate_reference_cdf(scores0: &[f64], mode: ReferenceMode, cfg: &ChainConfig) -> Result<ReferenceCdf> {
    if scores0.len() < 3 {
        return Err(Error::fit(format!("reference CDF needs at least 3 scores, got {}", scores0.len())));
    }
    let stats = GroupStats::of(scores0);
    if !(stats.ss > 0.0) {
        return Err(Error::fit("reference scores have zero variance"));
    }
    match mode {
        ReferenceMode::Parametric => {
            let run = run_chains(&NormalKernel { stats, priors: NormalPriors::default() }, cfg)?;
            let mean_of = |name: &str| {
                let d = run.draws.pooled(name).expect("own parameter");
                d.iter().sum::<f64>() / d.len() as f64
            };
            Ok(ReferenceCdf::Normal { mean: mean_of("mu"), sd: mean_of("sigma") })
        }
        ReferenceMode::Dpm => {
            let run = run_chains(&MixtureKernel { data: scores0, sb: StickBreaking::default() }, cfg)?;
            let total = run.draws.len();
            let step = total.div_ceil(MAX_CDF_DRAWS).max(1);
            let kept: Vec<_> = run.draws.iter_draws().step_by(step).collect();
            let scale = 1.0 / kept.len() as f64;
            let (mut weights, mut means, mut sds) = (Vec::new(), Vec::new(), Vec::new());
            for (ws, atoms, sigma2) in kept {
                let sd = sigma2.sqrt();
                for (w, mu) in ws.iter().zip(atoms) {
                    if *w > MIN_WEIGHT {
                        weights.push(w * scale);
                        means.push(*mu);
                        sds.push(sd);
                    }
                }
            }
            let sum: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= sum);
            Ok(ReferenceCdf::Mixture { weights, means, sds })
        }
    }
}
