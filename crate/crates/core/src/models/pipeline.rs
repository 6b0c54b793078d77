//! Dispatch from raw scores to any model, including the two-stage
//! placement-value route of pCN and spCN.

use super::{estimate_reference_cdf, fit_bg, fit_bn, fit_pbn, fit_pcn, fit_spcn, ModelFit, ModelKind, ReferenceCdf, ReferenceMode};
use crate::error::Result;
use crate::mcmc::{derive_seed, ChainConfig};
use crate::roc::{placement_values_of, uniform_grid, PlacementValues, Sample, DEFAULT_GRID_SIZE};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSettings {
    pub chains: ChainConfig,
    pub grid: Vec<f64>,
    pub pcn_reference: ReferenceMode,
    pub spcn_reference: ReferenceMode,
}

impl Default for FitSettings {
    fn default() -> Self {
        Self {
            chains: ChainConfig::default(),
            grid: uniform_grid(DEFAULT_GRID_SIZE),
            pcn_reference: ReferenceMode::Parametric,
            spcn_reference: ReferenceMode::Dpm,
        }
    }
}

impl FitSettings {
    /// Chain settings for `model`; the seed depends only on the master seed
    /// and the model, never on which other models are fitted.
    pub fn chains_for(&self, model: ModelKind) -> ChainConfig {
        let index = ModelKind::ALL.iter().position(|m| *m == model).expect("listed model") as u64;
        self.chains.with_seed(derive_seed(self.chains.seed, index))
    }

    fn chains_for_reference(&self, mode: ReferenceMode) -> ChainConfig {
        let index = match mode {
            ReferenceMode::Parametric => 100,
            ReferenceMode::Dpm => 101,
        };
        self.chains.with_seed(derive_seed(self.chains.seed, index))
    }

    pub fn reference_for(&self, model: ModelKind) -> Option<ReferenceMode> {
        match model {
            ModelKind::Pcn => Some(self.pcn_reference),
            ModelKind::Spcn => Some(self.spcn_reference),
            _ => None,
        }
    }
}

/// Placement values `1 - F0(y1)` clamped to `[1/(2 N0), 1 - 1/(2 N0)]`.
pub fn placement_values_from(sample: &Sample, reference: &ReferenceCdf) -> Result<PlacementValues> {
    let z = placement_values_of(sample.affected(), |y| 1.0 - reference.sf(y))?;
    Ok(z.clamped(sample.reference().len()))
}

/// Shift making every score at least 1, when some score is nonpositive.
fn bg_shift(sample: &Sample) -> Option<f64> {
    let min = sample.reference().iter().chain(sample.affected()).copied().fold(f64::INFINITY, f64::min);
    (min <= 0.0).then_some(1.0 - min)
}

/// Fits `models` to one sample. Reference CDFs are fitted once per mode and
/// shared; each entry of the result belongs to the model at the same index.
pub fn fit_models(models: &[ModelKind], sample: &Sample, settings: &FitSettings) -> Vec<Result<ModelFit>> {
    let mut references: Vec<(ReferenceMode, Result<ReferenceCdf>)> = Vec::new();
    models
        .iter()
        .map(|&model| {
            let cfg = settings.chains_for(model);
            let grid = &settings.grid;
            match model {
                ModelKind::Bn => fit_bn(sample, &cfg, grid),
                ModelKind::Pbn => fit_pbn(sample, &cfg, grid),
                ModelKind::Bg => match bg_shift(sample) {
                    None => fit_bg(sample, &cfg, grid),
                    Some(c) => {
                        let mut fit = fit_bg(&sample.map(|v| v + c)?, &cfg, grid)?;
                        fit.warnings.push(format!("scores shifted by {c:.6} so that BG sees positive values"));
                        Ok(fit)
                    }
                },
                ModelKind::Pcn | ModelKind::Spcn => {
                    let mode = settings.reference_for(model).expect("placement-value model");
                    if !references.iter().any(|(m, _)| *m == mode) {
                        let f0 = estimate_reference_cdf(sample.reference(), mode, &settings.chains_for_reference(mode));
                        references.push((mode, f0));
                    }
                    let f0 = match &references.iter().find(|(m, _)| *m == mode).expect("just inserted").1 {
                        Ok(f) => f,
                        Err(e) => return Err(crate::Error::fit(format!("reference CDF ({mode}) failed: {e}"))),
                    };
                    let z = placement_values_from(sample, f0)?;
                    if model == ModelKind::Pcn {
                        fit_pcn(&z, &cfg, grid)
                    } else {
                        fit_spcn(&z, &cfg, grid)
                    }
                }
            }
        })
        .collect()
}

pub fn fit_sample(model: ModelKind, sample: &Sample, settings: &FitSettings) -> Result<ModelFit> {
    fit_models(&[model], sample, settings).pop().expect("one model")
}
