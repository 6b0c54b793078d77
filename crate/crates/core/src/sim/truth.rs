use super::generate::pcn_placement_value;
use super::ScenarioParams;
use crate::error::{Error, Result};
use crate::mcmc::{derive_seed, ChainRng};
use crate::models::{bigamma_auc, bigamma_roc_values, pbn_auc, pbn_roc};
use crate::roc::{ecdf_sorted, RocCurve};
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_TRUTH_REPS: usize = 10_000;

/// Seed of the empirical truth; fixed so every study shares one truth.
pub const TRUTH_SEED: u64 = 0x7275_7468;

/// Replicates summed sequentially inside one parallel task.
const CHUNK: usize = 250;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    ClosedForm,
    Empirical { reps: usize, n_per_rep: usize, seed: u64 },
}

impl Provenance {
    pub fn tag(&self) -> String {
        match self {
            Provenance::ClosedForm => "closed-form".into(),
            Provenance::Empirical { reps, .. } => format!("empirical-{reps}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthCurve {
    pub curve: RocCurve,
    pub true_auc: f64,
    pub provenance: Provenance,
}

/// Average of per-replicate empirical placement-value CDFs. The AUC is the
/// average of `1 - mean(z)`, so it is exact for each replicate rather than
/// a trapezoid of the averaged curve.
pub fn pcn_truth(alpha0: f64, alpha1: f64, reps: usize, n_per_rep: usize, seed: u64, grid: &[f64]) -> Result<TruthCurve> {
    ScenarioParams::Pcn { alpha0, alpha1 }.validate()?;
    if reps == 0 || n_per_rep == 0 {
        return Err(Error::input("pCN truth needs reps >= 1 and n_per_rep >= 1"));
    }
    let chunks: Vec<(Vec<f64>, f64)> = (0..reps.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; grid.len()];
            let mut auc = 0.0;
            let mut z = vec![0.0; n_per_rep];
            for r in c * CHUNK..((c + 1) * CHUNK).min(reps) {
                let mut rng = ChainRng::seed_from_u64(derive_seed(seed, r as u64));
                z.iter_mut().for_each(|v| *v = pcn_placement_value(alpha0, alpha1, &mut rng));
                auc += 1.0 - z.iter().sum::<f64>() / n_per_rep as f64;
                z.sort_by(f64::total_cmp);
                acc.iter_mut().zip(ecdf_sorted(&z, grid)).for_each(|(a, v)| *a += v);
            }
            (acc, auc)
        })
        .collect();
    let mut values = vec![0.0; grid.len()];
    let mut auc = 0.0;
    for (acc, a) in chunks {
        values.iter_mut().zip(acc).for_each(|(v, x)| *v += x);
        auc += a;
    }
    let n = reps as f64;
    values.iter_mut().for_each(|v| *v /= n);
    let true_auc = auc / n;
    Ok(TruthCurve { curve: RocCurve::new(grid.to_vec(), values, true_auc)?, true_auc, provenance: Provenance::Empirical { reps, n_per_rep, seed } })
}

/// Closed form for PBN and BG generators; empirical for PCN.
pub fn scenario_truth(params: &ScenarioParams, grid: &[f64], reps: usize, n_per_rep: usize, seed: u64) -> Result<TruthCurve> {
    params.validate()?;
    match *params {
        ScenarioParams::Pbn { alpha0, alpha1 } => {
            let true_auc = pbn_auc(alpha0, alpha1);
            let curve = pbn_roc(alpha0, alpha1, grid)?;
            let curve = RocCurve::new(grid.to_vec(), curve.values().to_vec(), true_auc)?;
            Ok(TruthCurve { curve, true_auc, provenance: Provenance::ClosedForm })
        }
        ScenarioParams::Bg { shape, scale0, scale1 } => {
            let ratio = scale0 / scale1;
            let true_auc = bigamma_auc(shape, ratio);
            let curve = RocCurve::new(grid.to_vec(), bigamma_roc_values(shape, ratio, grid), true_auc)?;
            Ok(TruthCurve { curve, true_auc, provenance: Provenance::ClosedForm })
        }
        ScenarioParams::Pcn { alpha0, alpha1 } => pcn_truth(alpha0, alpha1, reps, n_per_rep, seed, grid),
    }
}
