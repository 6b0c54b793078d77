//! Simulation study: scenario registry, data generators, truth curves and
//! the replicate loop that aggregates bias and EMSE per fitted model.

mod generate;
mod report;
mod run;
mod truth;

pub use generate::{generate, generate_bg, generate_pbn, generate_pcn};
pub use report::{merge_reports, read_report_csv, write_report_csv, SimulationReport, SummaryRow};
pub use run::{replicate_sample, replicate_settings, run_replicates, run_scenario, ReplicateRecord, ScenarioConfig};
pub use truth::{pcn_truth, scenario_truth, Provenance, TruthCurve, DEFAULT_TRUTH_REPS, TRUTH_SEED};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    #[serde(rename = "PBN")]
    Pbn,
    #[serde(rename = "BG")]
    Bg,
    #[serde(rename = "PCN")]
    Pcn,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Pbn => "PBN",
            Generator::Bg => "BG",
            Generator::Pcn => "PCN",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    Low,
    Medium,
    High,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Low => "Low",
            Level::Medium => "Medium",
            Level::High => "High",
        })
    }
}

/// Data-generating parameters of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", deny_unknown_fields)]
pub enum ScenarioParams {
    /// `Y0 ~ N(0, 1)`, `Y1 ~ N(a0 / a1, 1 / a1^2)`.
    #[serde(rename = "PBN")]
    Pbn { alpha0: f64, alpha1: f64 },
    /// `Y0 ~ Gam(k, phi0)`, `Y1 ~ Gam(k, phi1)`.
    #[serde(rename = "BG")]
    Bg { shape: f64, scale0: f64, scale1: f64 },
    /// Placement values `z ~ U(0, Phi(w*))` with `w* ~ N(a0 / a1, 1 / a1^2)`.
    #[serde(rename = "PCN")]
    Pcn { alpha0: f64, alpha1: f64 },
}

impl ScenarioParams {
    pub fn generator(&self) -> Generator {
        match self {
            ScenarioParams::Pbn { .. } => Generator::Pbn,
            ScenarioParams::Bg { .. } => Generator::Bg,
            ScenarioParams::Pcn { .. } => Generator::Pcn,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ScenarioParams::Pbn { alpha0, alpha1 } | ScenarioParams::Pcn { alpha0, alpha1 } => {
                alpha0.is_finite() && alpha1 > 0.0 && alpha1.is_finite()
            }
            ScenarioParams::Bg { shape, scale0, scale1 } => [shape, scale0, scale1].iter().all(|v| *v > 0.0 && v.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::input(format!("invalid scenario parameters {self:?}")))
        }
    }
}

/// A registered data-generating setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: &'static str,
    pub level: Level,
    pub params: ScenarioParams,
    /// AUC quoted for this setting in the published study.
    pub published_auc: f64,
}

impl Scenario {
    pub fn generator(&self) -> Generator {
        self.params.generator()
    }
}

pub const REGISTRY: [Scenario; 9] = [
    Scenario { name: "pbn-low", level: Level::Low, params: ScenarioParams::Pbn { alpha0: 0.5, alpha1: 0.7 }, published_auc: 0.673 },
    Scenario { name: "pbn-medium", level: Level::Medium, params: ScenarioParams::Pbn { alpha0: 0.5, alpha1: 0.45 }, published_auc: 0.762 },
    Scenario { name: "pbn-high", level: Level::High, params: ScenarioParams::Pbn { alpha0: 0.5, alpha1: 0.28 }, published_auc: 0.842 },
    Scenario { name: "bg-low", level: Level::Low, params: ScenarioParams::Bg { shape: 1.0, scale0: 1.0, scale1: 2.0 }, published_auc: 0.665 },
    Scenario { name: "bg-medium", level: Level::Medium, params: ScenarioParams::Bg { shape: 1.0, scale0: 1.0, scale1: 3.5 }, published_auc: 0.774 },
    Scenario { name: "bg-high", level: Level::High, params: ScenarioParams::Bg { shape: 1.0, scale0: 1.0, scale1: 7.0 }, published_auc: 0.869 },
    Scenario { name: "pcn-low", level: Level::Low, params: ScenarioParams::Pcn { alpha0: 1.0, alpha1: 1.0 }, published_auc: 0.619 },
    Scenario { name: "pcn-medium", level: Level::Medium, params: ScenarioParams::Pcn { alpha0: 0.1, alpha1: 3.0 }, published_auc: 0.741 },
    Scenario { name: "pcn-high", level: Level::High, params: ScenarioParams::Pcn { alpha0: -15.0, alpha1: 15.0 }, published_auc: 0.916 },
];

/// Looks a scenario up by name, case-insensitively.
pub fn scenario(name: &str) -> Result<Scenario> {
    REGISTRY.iter().find(|s| s.name.eq_ignore_ascii_case(name.trim())).copied().ok_or_else(|| {
        let names: Vec<&str> = REGISTRY.iter().map(|s| s.name).collect();
        Error::input(format!("unknown scenario `{name}`; valid names: {}", names.join(", ")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        assert_eq!(scenario("PCN-Medium").unwrap().generator(), Generator::Pcn);
        let err = scenario("lomax-low").unwrap_err().to_string();
        assert!(err.contains("pbn-low") && err.contains("pcn-high"));
    }

    #[test]
    fn registry_names_are_generator_and_level() {
        for s in REGISTRY {
            let want = format!("{}-{}", s.generator(), s.level).to_lowercase();
            assert_eq!(s.name, want);
            s.params.validate().unwrap();
        }
    }
}
