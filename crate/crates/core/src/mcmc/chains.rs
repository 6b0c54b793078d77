use super::diagnostics::ChainDiagnostics;
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Generator owned by a single chain.
pub type ChainRng = ChaCha8Rng;

/// Mixes a master seed with a stream index (SplitMix64 finaliser).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sampler settings. `keep` counts retained draws per chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainConfig {
    pub n_chains: usize,
    pub burn_in: usize,
    pub keep: usize,
    pub thin: usize,
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self { n_chains: 4, burn_in: 2000, keep: 1250, thin: 2, seed: 20_240_601 }
    }
}

/// Fewest retained draws, pooled over chains, accepted by `validate`.
pub const MIN_TOTAL_KEEP: usize = 1000;

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_chains == 0 || self.keep == 0 || self.thin == 0 {
            return Err(Error::input("chain counts must be positive"));
        }
        if self.n_chains < 2 {
            return Err(Error::input("R-hat needs at least 2 chains"));
        }
        if self.n_chains * self.keep < MIN_TOTAL_KEEP {
            return Err(Error::input(format!("at least {MIN_TOTAL_KEEP} retained draws are required, got {} chains x {}", self.n_chains, self.keep)));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn total_draws(&self) -> usize {
        self.n_chains * self.keep
    }
}

/// A Markov transition over a model's full state.
///
/// `record` turns a state into monitored scalars (named by `param_names`)
/// plus a model-specific retained draw.
pub trait Kernel: Sync {
    type State: Send;
    type Draw: Send;

    fn param_names(&self) -> Vec<String>;

    /// Starting state of chain `chain` out of `n_chains`; starts should be
    /// spread out so the between-chain diagnostic is informative.
    fn initial_state(&self, chain: usize, n_chains: usize, rng: &mut ChainRng) -> Self::State;

    fn sweep(&self, state: &mut Self::State, rng: &mut ChainRng);

    fn record(&self, state: &Self::State) -> (Vec<f64>, Self::Draw);
}

#[derive(Debug, Clone)]
pub struct ChainTrace<D> {
    /// `scalars[i][p]`: parameter `p` at retained iteration `i`.
    pub scalars: Vec<Vec<f64>>,
    pub draws: Vec<D>,
}

/// Retained draws of every chain.
#[derive(Debug, Clone)]
pub struct PosteriorDraws<D> {
    pub names: Vec<String>,
    pub chains: Vec<ChainTrace<D>>,
}

impl<D> PosteriorDraws<D> {
    fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Per-chain series of one parameter.
    pub fn series(&self, name: &str) -> Option<Vec<Vec<f64>>> {
        let p = self.index(name)?;
        Some(self.chains.iter().map(|c| c.scalars.iter().map(|s| s[p]).collect()).collect())
    }

    /// All chains of one parameter concatenated.
    pub fn pooled(&self, name: &str) -> Option<Vec<f64>> {
        Some(self.series(name)?.concat())
    }

    pub fn iter_draws(&self) -> impl Iterator<Item = &D> {
        self.chains.iter().flat_map(|c| c.draws.iter())
    }

    pub fn len(&self) -> usize {
        self.chains.iter().map(|c| c.draws.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `chain,iter,param,value` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["chain", "iter", "param", "value"])?;
        for (c, chain) in self.chains.iter().enumerate() {
            for (i, row) in chain.scalars.iter().enumerate() {
                for (name, v) in self.names.iter().zip(row) {
                    w.write_record([c.to_string(), i.to_string(), name.clone(), format!("{v:.6}")])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ChainRun<D> {
    pub draws: PosteriorDraws<D>,
    pub diagnostics: ChainDiagnostics,
}

/// Runs `n_chains` independent chains in parallel, discards burn-in, keeps
/// every `thin`-th state until `keep` draws per chain, then computes
/// diagnostics over the monitored scalars.
pub fn run_chains<K: Kernel>(kernel: &K, cfg: &ChainConfig) -> Result<ChainRun<K::Draw>> {
    cfg.validate()?;
    let names = kernel.param_names();
    let chains: Vec<ChainTrace<K::Draw>> = (0..cfg.n_chains)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChainRng::seed_from_u64(derive_seed(cfg.seed, c as u64));
            let mut state = kernel.initial_state(c, cfg.n_chains, &mut rng);
            for _ in 0..cfg.burn_in {
                kernel.sweep(&mut state, &mut rng);
            }
            let mut scalars = Vec::with_capacity(cfg.keep);
            let mut draws = Vec::with_capacity(cfg.keep);
            for _ in 0..cfg.keep {
                for _ in 0..cfg.thin {
                    kernel.sweep(&mut state, &mut rng);
                }
                let (s, d) = kernel.record(&state);
                scalars.push(s);
                draws.push(d);
            }
            ChainTrace { scalars, draws }
        })
        .collect();
    let draws = PosteriorDraws { names, chains };
    let series: Vec<Vec<Vec<f64>>> = draws.names.iter().map(|n| draws.series(n).expect("own parameter")).collect();
    let diagnostics = ChainDiagnostics::compute(&draws.names, &series);
    Ok(ChainRun { draws, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    struct IidNormal;

    impl Kernel for IidNormal {
        type State = f64;
        type Draw = ();
        fn param_names(&self) -> Vec<String> {
            vec!["x".into()]
        }
        fn initial_state(&self, chain: usize, _: usize, _: &mut ChainRng) -> f64 {
            chain as f64 * 10.0
        }
        fn sweep(&self, state: &mut f64, rng: &mut ChainRng) {
            *state = StandardNormal.sample(rng);
        }
        fn record(&self, state: &f64) -> (Vec<f64>, ()) {
            (vec![*state], ())
        }
    }

    /// Random-walk Metropolis on N(0, 1), deliberately started far apart.
    struct Rwm;

    impl Kernel for Rwm {
        type State = f64;
        type Draw = ();
        fn param_names(&self) -> Vec<String> {
            vec!["x".into()]
        }
        fn initial_state(&self, chain: usize, _: usize, _: &mut ChainRng) -> f64 {
            if chain.is_multiple_of(2) {
                -5.0
            } else {
                5.0
            }
        }
        fn sweep(&self, state: &mut f64, rng: &mut ChainRng) {
            use rand::Rng;
            let z: f64 = StandardNormal.sample(rng);
            let prop = *state + 2.4 * z;
            if rng.random::<f64>().ln() < 0.5 * (*state * *state - prop * prop) {
                *state = prop;
            }
        }
        fn record(&self, state: &f64) -> (Vec<f64>, ()) {
            (vec![*state], ())
        }
    }

    #[test]
    fn perfect_mixing() {
        let run = run_chains(&IidNormal, &ChainConfig::default()).unwrap();
        assert!(run.diagnostics.r_hat("x").unwrap() < 1.01);
        assert!(run.diagnostics.converged);
    }

    #[test]
    fn dispersed_starts_converge() {
        let cfg = ChainConfig { n_chains: 2, ..ChainConfig::default() };
        let run = run_chains(&Rwm, &cfg).unwrap();
        assert!(run.diagnostics.converged, "{:?}", run.diagnostics);
    }

    #[test]
    fn keep_is_per_chain() {
        let cfg = ChainConfig { n_chains: 2, burn_in: 10, keep: 5000, thin: 1, seed: 1 };
        let run = run_chains(&IidNormal, &cfg).unwrap();
        assert!(run.draws.chains.iter().all(|c| c.scalars.len() == 5000));
        assert_eq!(run.draws.len(), 10_000);
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let cfg = ChainConfig { n_chains: 2, burn_in: 10, keep: 500, thin: 3, seed: 99 };
        let a = run_chains(&Rwm, &cfg).unwrap().draws.pooled("x").unwrap();
        let b = run_chains(&Rwm, &cfg).unwrap().draws.pooled("x").unwrap();
        assert_eq!(a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), b.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
    }

    #[test]
    fn config_validation() {
        assert!(ChainConfig { keep: 0, ..ChainConfig::default() }.validate().is_err());
        assert!(ChainConfig { n_chains: 1, keep: 999, ..ChainConfig::default() }.validate().is_err());
        assert!(ChainConfig { n_chains: 2, keep: 500, ..ChainConfig::default() }.validate().is_ok());
    }

    #[test]
    fn draws_csv_has_long_format() {
        let cfg = ChainConfig { n_chains: 2, burn_in: 0, keep: 500, thin: 1, seed: 3 };
        let run = run_chains(&IidNormal, &cfg).unwrap();
        let mut buf = Vec::new();
        run.draws.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("chain,iter,param,value\n0,0,x,"));
        assert_eq!(text.lines().count(), 1001);
    }
}
