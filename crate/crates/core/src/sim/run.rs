use super::report::{summarize_records, SimulationReport};
use super::truth::{scenario_truth, TruthCurve, DEFAULT_TRUTH_REPS, TRUTH_SEED};
use super::{generate, scenario, Generator, Scenario, ScenarioParams};
use crate::error::{Error, Result};
use crate::mcmc::{derive_seed, ChainConfig, ChainRng};
use crate::models::{fit_models, FitSettings, ModelKind, ReferenceMode};
use crate::roc::{emse, uniform_grid, Sample, DEFAULT_GRID_SIZE};
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub scenario: String,
    /// Replaces the registry parameters; must keep the same generator.
    pub params: Option<ScenarioParams>,
    pub n0: usize,
    pub n1: usize,
    pub replicates: usize,
    pub fit_models: Vec<ModelKind>,
    pub seed: u64,
    /// Chain layout of every fit; the seed field is replaced per replicate.
    pub chains: ChainConfig,
    pub grid_size: usize,
    pub truth_reps: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: "pcn-medium".into(),
            params: None,
            n0: 1000,
            n1: 1000,
            replicates: 50,
            fit_models: ModelKind::ALL.to_vec(),
            seed: 20240601,
            chains: Self::simulation_chains(),
            grid_size: DEFAULT_GRID_SIZE,
            truth_reps: DEFAULT_TRUTH_REPS,
        }
    }
}

impl ScenarioConfig {
    pub fn new(scenario: &str) -> Self {
        Self { scenario: scenario.into(), ..Self::default() }
    }

    /// Lighter than a single-dataset fit: replicate averaging absorbs the
    /// extra Monte Carlo error.
    pub fn simulation_chains() -> ChainConfig {
        ChainConfig { n_chains: 2, burn_in: 1000, keep: 500, thin: 2, seed: 0 }
    }

    /// Registry entry with any parameter override applied.
    pub fn resolve(&self) -> Result<Scenario> {
        let mut s = scenario(&self.scenario)?;
        if let Some(p) = self.params {
            if p.generator() != s.generator() {
                return Err(Error::input(format!("override {p:?} does not match the {} generator of `{}`", s.generator(), s.name)));
            }
            p.validate()?;
            s.params = p;
        }
        if self.n0 < 2 || self.n1 < 2 {
            return Err(Error::input("scenario group sizes must be at least 2"));
        }
        if self.replicates == 0 {
            return Err(Error::input("replicates must be positive"));
        }
        if self.fit_models.is_empty() {
            return Err(Error::input("no fitting models requested"));
        }
        if self.grid_size < 2 || self.truth_reps == 0 {
            return Err(Error::input("grid_size must be >= 2 and truth_reps >= 1"));
        }
        self.chains.with_seed(0).validate()?;
        Ok(s)
    }

    fn replicate_seed(&self, replicate: usize) -> u64 {
        derive_seed(self.seed, replicate as u64)
    }
}

/// Outcome of one model on one replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub model: ModelKind,
    pub seed: u64,
    pub auc: Option<f64>,
    pub emse: Option<f64>,
    pub converged: Option<bool>,
    /// Retained draws whose curve has an increasing slope.
    pub concavity_violations: Option<usize>,
    pub error: Option<String>,
}

/// The data set of replicate `replicate`; depends only on the master seed
/// and the index.
pub fn replicate_sample(cfg: &ScenarioConfig, replicate: usize) -> Result<Sample> {
    let s = cfg.resolve()?;
    let mut rng = ChainRng::seed_from_u64(derive_seed(cfg.replicate_seed(replicate), 0));
    generate(&s.params, cfg.n0, cfg.n1, &mut rng)
}

/// Fit settings of replicate `replicate`. Placement values use a normal
/// reference CDF for PBN and PCN data and a DPM one for gamma data.
pub fn replicate_settings(cfg: &ScenarioConfig, replicate: usize) -> Result<FitSettings> {
    let s = cfg.resolve()?;
    let reference = match s.generator() {
        Generator::Bg => ReferenceMode::Dpm,
        Generator::Pbn | Generator::Pcn => ReferenceMode::Parametric,
    };
    Ok(FitSettings {
        chains: cfg.chains.with_seed(derive_seed(cfg.replicate_seed(replicate), 1)),
        grid: uniform_grid(cfg.grid_size),
        pcn_reference: reference,
        spcn_reference: reference,
    })
}

fn run_one(cfg: &ScenarioConfig, replicate: usize, truth: &TruthCurve) -> Vec<ReplicateRecord> {
    let seed = cfg.replicate_seed(replicate);
    let failed = |model, e: &Error| ReplicateRecord {
        replicate,
        model,
        seed,
        auc: None,
        emse: None,
        converged: None,
        concavity_violations: None,
        error: Some(e.to_string()),
    };
    let prepared = replicate_sample(cfg, replicate).and_then(|s| Ok((s, replicate_settings(cfg, replicate)?)));
    let (sample, settings) = match prepared {
        Ok(v) => v,
        Err(e) => return cfg.fit_models.iter().map(|&m| failed(m, &e)).collect(),
    };
    cfg.fit_models
        .iter()
        .zip(fit_models(&cfg.fit_models, &sample, &settings))
        .map(|(&model, fit)| match fit.and_then(|f| Ok((emse(&f.roc, &truth.curve)?, f))) {
            Ok((e, f)) => ReplicateRecord {
                replicate,
                model,
                seed,
                auc: Some(f.auc.mean),
                emse: Some(e),
                converged: Some(f.converged()),
                concavity_violations: Some(f.concavity_violations),
                error: None,
            },
            Err(e) => failed(model, &e),
        })
        .collect()
}

/// Runs the listed replicates in parallel; records come back sorted by
/// replicate index, then by position in `fit_models`.
pub fn run_replicates(cfg: &ScenarioConfig, replicates: &[usize], truth: &TruthCurve) -> Result<Vec<ReplicateRecord>> {
    cfg.resolve()?;
    let mut order: Vec<usize> = replicates.to_vec();
    order.sort_unstable();
    order.dedup();
    Ok(order.par_iter().flat_map_iter(|&r| run_one(cfg, r, truth)).collect())
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<SimulationReport> {
    let s = cfg.resolve()?;
    let grid = uniform_grid(cfg.grid_size);
    let truth = scenario_truth(&s.params, &grid, cfg.truth_reps, cfg.n1, TRUTH_SEED)?;
    let indices: Vec<usize> = (0..cfg.replicates).collect();
    let records = run_replicates(cfg, &indices, &truth)?;
    let rows = summarize_records(&s, &cfg.fit_models, truth.true_auc, &records);
    Ok(SimulationReport {
        scenario: s.name.to_string(),
        generator: s.generator(),
        level: s.level,
        params: s.params,
        published_auc: s.published_auc,
        n0: cfg.n0,
        n1: cfg.n1,
        replicates: cfg.replicates,
        seed: cfg.seed,
        chains: cfg.chains,
        true_auc: truth.true_auc,
        truth_provenance: truth.provenance.tag(),
        rows,
        records,
    })
}
