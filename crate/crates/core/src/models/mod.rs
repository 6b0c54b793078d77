//! The five fitting models: binormal (BN), bigamma (BG), proper binormal
//! (PBN), and the parametric (pCN) and semiparametric (spCN) concave
//! placement-value mixtures.
//!
//! Every model maps data to MCMC draws, turns each retained draw into an ROC
//! curve on the evaluation grid, and reports the posterior-mean curve, AUC
//! summaries and chain diagnostics as a [`ModelFit`].

mod bg;
mod bn;
mod dpm;
mod pbn;
mod pcn;
mod pipeline;
mod reference;
mod spcn;

pub use bg::{bigamma_auc, bigamma_roc_values, fit_bg, BgPriors, BigammaParams};
pub use bn::{fit_bn, sample_binormal, BinormalParams};
pub use dpm::{MixtureState, StickBreaking};
pub use pbn::{fit_pbn, pbn_auc, pbn_auc_by_integration, pbn_roc, pbn_roc_values, PbnParams};
pub use pcn::{fit_pcn, fit_pcn_with, sample_pcn, PcnKernel, PcnState};
pub use pipeline::{fit_models, fit_sample, placement_values_from, FitSettings};
pub use reference::{estimate_reference_cdf, ReferenceCdf, ReferenceMode};
pub use spcn::{fit_spcn, fit_spcn_with, sample_spcn, SpcnKernel, SpcnPriors, SpcnState};

/// Normal mean prior `N(mean, var)` and inverse-gamma `IG(shape, rate)`
/// variance prior shared by the normal-based models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalPriors {
    pub mean: f64,
    pub var: f64,
    pub shape: f64,
    pub rate: f64,
}

impl Default for NormalPriors {
    fn default() -> Self {
        Self { mean: 0.0, var: 100.0, shape: 0.01, rate: 0.01 }
    }
}

use crate::error::{Error, Result};
use crate::mcmc::{ChainDiagnostics, ChainRun};
use crate::roc::{concavity_violations, RocCurve, CONCAVITY_TOL};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "BN")]
    Bn,
    #[serde(rename = "BG")]
    Bg,
    #[serde(rename = "PBN")]
    Pbn,
    #[serde(rename = "pCN")]
    Pcn,
    #[serde(rename = "spCN")]
    Spcn,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [ModelKind::Bn, ModelKind::Bg, ModelKind::Pbn, ModelKind::Pcn, ModelKind::Spcn];

    pub fn id(self) -> &'static str {
        match self {
            ModelKind::Bn => "BN",
            ModelKind::Bg => "BG",
            ModelKind::Pbn => "PBN",
            ModelKind::Pcn => "pCN",
            ModelKind::Spcn => "spCN",
        }
    }

    /// Whether every posterior ROC draw is concave by construction.
    pub fn is_concave(self) -> bool {
        !matches!(self, ModelKind::Bn)
    }

    /// Models that work on placement values rather than raw scores.
    pub fn uses_placement_values(self) -> bool {
        matches!(self, ModelKind::Pcn | ModelKind::Spcn)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::input(format!("unknown model `{s}`; expected one of BN, BG, PBN, pCN, spCN")))
    }
}

/// Posterior summary of the AUC draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AucSummary {
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub q975: f64,
}

impl AucSummary {
    pub fn from_draws(draws: &[f64]) -> Self {
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / n;
        let sd = if draws.len() > 1 { (draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
        let mut sorted = draws.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self { mean, sd, q025: quantile_sorted(&sorted, 0.025), q975: quantile_sorted(&sorted, 0.975) }
    }
}

/// Linear-interpolation sample quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Posterior summaries of one fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub model: ModelKind,
    pub auc: AucSummary,
    /// Pooled AUC draws, chain by chain.
    pub auc_draws: Vec<f64>,
    /// Posterior-mean ROC curve; its `auc` is the posterior-mean AUC.
    pub roc: RocCurve,
    pub diagnostics: ChainDiagnostics,
    /// Retained draws whose ROC curve has an increasing slope somewhere.
    pub concavity_violations: usize,
    pub n_draws: usize,
    pub param_means: Vec<(String, f64)>,
    pub warnings: Vec<String>,
}

impl ModelFit {
    pub fn converged(&self) -> bool {
        self.diagnostics.converged
    }
}

/// Turns chain output into a [`ModelFit`]. `curve_of` maps one retained
/// draw to its ROC values on `grid` and its AUC.
pub(crate) fn summarize<D, F>(model: ModelKind, run: ChainRun<D>, grid: &[f64], curve_of: F) -> Result<ModelFit>
where
    D: Sync,
    F: Fn(&D) -> (Vec<f64>, f64) + Sync,
{
    use rayon::prelude::*;

    struct ChainSummary {
        sum: Vec<f64>,
        aucs: Vec<f64>,
        violations: usize,
    }

    let per_chain: Vec<ChainSummary> = run
        .draws
        .chains
        .par_iter()
        .map(|chain| {
            let mut sum = vec![0.0; grid.len()];
            let mut aucs = Vec::with_capacity(chain.draws.len());
            let mut violations = 0;
            for d in &chain.draws {
                let (values, auc) = curve_of(d);
                if concavity_violations(grid, &values, CONCAVITY_TOL) > 0 {
                    violations += 1;
                }
                sum.iter_mut().zip(&values).for_each(|(s, v)| *s += v);
                aucs.push(auc);
            }
            ChainSummary { sum, aucs, violations }
        })
        .collect();

    let n_draws: usize = per_chain.iter().map(|c| c.aucs.len()).sum();
    if n_draws == 0 {
        return Err(Error::fit("no retained draws"));
    }
    let mut mean_curve = vec![0.0; grid.len()];
    for c in &per_chain {
        mean_curve.iter_mut().zip(&c.sum).for_each(|(m, s)| *m += s);
    }
    mean_curve.iter_mut().for_each(|m| *m /= n_draws as f64);
    if mean_curve.iter().any(|v| !v.is_finite()) || per_chain.iter().flat_map(|c| &c.aucs).any(|a| !a.is_finite()) {
        return Err(Error::fit(format!("{model} produced non-finite ROC values")));
    }

    let auc_series: Vec<Vec<f64>> = per_chain.iter().map(|c| c.aucs.clone()).collect();
    let mut names = run.draws.names.clone();
    names.push("auc".into());
    let mut series: Vec<Vec<Vec<f64>>> = run.draws.names.iter().map(|n| run.draws.series(n).expect("own parameter")).collect();
    series.push(auc_series.clone());
    let diagnostics = ChainDiagnostics::compute(&names, &series);

    let param_means = names
        .iter()
        .zip(&series)
        .map(|(n, s)| {
            let all: Vec<f64> = s.concat();
            (n.clone(), all.iter().sum::<f64>() / all.len() as f64)
        })
        .collect();

    let auc_draws = auc_series.concat();
    let auc = AucSummary::from_draws(&auc_draws);
    let roc = RocCurve::new(grid.to_vec(), mean_curve, auc.mean.clamp(0.0, 1.0))?;
    let mut warnings = Vec::new();
    if !diagnostics.converged {
        warnings.push(format!("chains not converged (max R-hat {:.3})", diagnostics.max_r_hat()));
    }
    Ok(ModelFit {
        model,
        auc,
        auc_draws,
        roc,
        diagnostics,
        concavity_violations: per_chain.iter().map(|c| c.violations).sum(),
        n_draws,
        param_means,
        warnings,
    })
}
