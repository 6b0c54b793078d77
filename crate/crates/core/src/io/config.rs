use crate::error::{Error, Result};
use crate::mcmc::ChainConfig;
use crate::models::{FitSettings, ModelKind, ReferenceMode};
use crate::roc::{uniform_grid, DEFAULT_GRID_SIZE};
use crate::sim::{ScenarioConfig, ScenarioParams, DEFAULT_TRUTH_REPS};
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::PathBuf;

/// Options shared by every command; each command reads the keys it needs.
/// Unknown keys are rejected. Command-line flags override these values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Models fitted by `fit` and `simulate`.
    pub models: Vec<ModelKind>,
    /// Chains of a single-dataset fit.
    pub chains: ChainConfig,
    /// Chains of every fit inside a simulation.
    pub sim_chains: ChainConfig,
    pub grid_size: usize,
    /// Replace scores by their logs before fitting.
    pub log_transform: bool,
    pub pcn_reference: ReferenceMode,
    pub spcn_reference: ReferenceMode,
    pub scenario: Option<String>,
    /// Overrides the registry parameters of `scenario`.
    pub params: Option<ScenarioParams>,
    pub n0: usize,
    pub n1: usize,
    pub replicates: usize,
    pub truth_reps: usize,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let sim = ScenarioConfig::default();
        let fit = FitSettings::default();
        Self {
            models: ModelKind::ALL.to_vec(),
            chains: ChainConfig::default(),
            sim_chains: ScenarioConfig::simulation_chains(),
            grid_size: DEFAULT_GRID_SIZE,
            log_transform: false,
            pcn_reference: fit.pcn_reference,
            spcn_reference: fit.spcn_reference,
            scenario: None,
            params: None,
            n0: sim.n0,
            n1: sim.n1,
            replicates: sim.replicates,
            truth_reps: DEFAULT_TRUTH_REPS,
            seed: None,
            threads: None,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_json<R: Read>(input: R) -> Result<Self> {
        serde_json::from_reader(input).map_err(|e| Error::input(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::input("config lists no models"));
        }
        if self.grid_size < 2 {
            return Err(Error::input("grid_size must be at least 2"));
        }
        self.chains.validate()?;
        self.sim_chains.validate()
    }

    pub fn fit_settings(&self, seed: u64) -> FitSettings {
        FitSettings {
            chains: self.chains.with_seed(seed),
            grid: uniform_grid(self.grid_size),
            pcn_reference: self.pcn_reference,
            spcn_reference: self.spcn_reference,
        }
    }

    pub fn scenario_config(&self, scenario: &str, seed: u64) -> ScenarioConfig {
        ScenarioConfig {
            scenario: scenario.to_string(),
            params: self.params,
            n0: self.n0,
            n1: self.n1,
            replicates: self.replicates,
            fit_models: self.models.clone(),
            seed,
            chains: self.sim_chains,
            grid_size: self.grid_size,
            truth_reps: self.truth_reps,
        }
    }
}
