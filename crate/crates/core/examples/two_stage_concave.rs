//! Two-stage concave fits: estimate the reference CDF, turn affected scores
//! into placement values, then fit the parametric (pCN) and Dirichlet
//! process (spCN) mixtures of uniforms.

use concave_roc::mcmc::{ChainConfig, ChainRng};
use concave_roc::models::{estimate_reference_cdf, fit_pcn, fit_spcn, placement_values_from, ReferenceMode};
use concave_roc::roc::uniform_grid;
use concave_roc::sim::{generate_bg, scenario_truth, ScenarioParams};
use rand::SeedableRng;

fn main() -> concave_roc::Result<()> {
    let params = ScenarioParams::Bg { shape: 1.0, scale0: 1.0, scale1: 3.5 };
    let mut rng = ChainRng::seed_from_u64(8);
    let sample = generate_bg(1.0, 1.0, 3.5, 400, 400, &mut rng)?;
    let cfg = ChainConfig { n_chains: 2, burn_in: 500, keep: 500, thin: 2, seed: 2 };
    let grid = uniform_grid(201);
    let truth = scenario_truth(&params, &grid, 1, 1, 0)?;
    println!("true AUC {:.3}", truth.true_auc);
    for mode in [ReferenceMode::Parametric, ReferenceMode::Dpm] {
        let f0 = estimate_reference_cdf(sample.reference(), mode, &cfg)?;
        let z = placement_values_from(&sample, &f0)?;
        let pcn = fit_pcn(&z, &cfg, &grid)?;
        let spcn = fit_spcn(&z, &cfg, &grid)?;
        println!("{mode:>10} reference: pCN AUC {:.3}  spCN AUC {:.3}  (spCN R-hat ok: {})", pcn.auc.mean, spcn.auc.mean, spcn.converged());
    }
    Ok(())
}
