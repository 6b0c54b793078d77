//! Running several chains of a custom kernel and reading split R-hat and
//! effective sample size.

use concave_roc::mcmc::{run_chains, ChainConfig, ChainRng, Kernel};
use rand::Rng;
use rand_distr::StandardNormal;

/// AR(1) chain with stationary N(0, 1) law; `rho` sets the autocorrelation.
struct Ar1 {
    rho: f64,
}

impl Kernel for Ar1 {
    type State = f64;
    type Draw = ();

    fn param_names(&self) -> Vec<String> {
        vec!["x".into()]
    }

    fn initial_state(&self, chain: usize, n_chains: usize, _: &mut ChainRng) -> f64 {
        10.0 * (chain as f64 - 0.5 * (n_chains - 1) as f64)
    }

    fn sweep(&self, x: &mut f64, rng: &mut ChainRng) {
        *x = self.rho * *x + (1.0 - self.rho * self.rho).sqrt() * rng.sample::<f64, _>(StandardNormal);
    }

    fn record(&self, x: &f64) -> (Vec<f64>, ()) {
        (vec![*x], ())
    }
}

fn main() -> concave_roc::Result<()> {
    for (rho, burn) in [(0.5, 500), (0.99, 500), (0.999, 0)] {
        let cfg = ChainConfig { n_chains: 4, burn_in: burn, keep: 1000, thin: 1, seed: 1 };
        let run = run_chains(&Ar1 { rho }, &cfg)?;
        let d = &run.diagnostics.params[0];
        println!("rho {rho:<6} burn {burn:<4} R-hat {:.3}  ESS {:7.1}  converged {}", d.r_hat, d.ess, run.diagnostics.converged);
    }
    Ok(())
}
