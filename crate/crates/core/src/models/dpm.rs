//! Truncated stick-breaking mixture of normals with a common variance,
//! updated by blocked Gibbs. Shared by spCN (on latents) and the DPM
//! reference CDF (on observed scores).

use super::NormalPriors;
use crate::mcmc::{inverse_gamma_draw, normal_draw, normal_mean_posterior, ChainRng};
use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

/// Truncation level, concentration and base measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StickBreaking {
    pub truncation: usize,
    pub alpha: f64,
    /// Base measure `N(mean, var)` for atoms and the `IG(shape, rate)` prior
    /// of the common variance.
    pub base: NormalPriors,
}

impl Default for StickBreaking {
    fn default() -> Self {
        Self { truncation: 30, alpha: 1.0, base: NormalPriors::default() }
    }
}

/// `weights[k] = sticks[k] * prod_{j<k} (1 - sticks[j])`, last stick 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureState {
    pub assign: Vec<usize>,
    pub atoms: Vec<f64>,
    pub sticks: Vec<f64>,
    pub weights: Vec<f64>,
    pub sigma2: f64,
}

impl MixtureState {
    pub fn occupied(&self) -> usize {
        let mut seen = vec![false; self.atoms.len()];
        self.assign.iter().for_each(|&k| seen[k] = true);
        seen.into_iter().filter(|s| *s).count()
    }
}

impl StickBreaking {
    /// Atoms at random data points, equal weights, variance `sigma2`.
    pub fn start(&self, data: &[f64], sigma2: f64, rng: &mut ChainRng) -> MixtureState {
        let h = self.truncation;
        let atoms: Vec<f64> = (0..h).map(|_| data[rng.random_range(0..data.len())]).collect();
        let mut state = MixtureState { assign: vec![0; data.len()], atoms, sticks: vec![0.0; h], weights: vec![1.0 / h as f64; h], sigma2 };
        self.reassign(&mut state, data, rng);
        state
    }

    /// One blocked-Gibbs pass: assignments, atoms, sticks, then variance.
    pub fn update(&self, state: &mut MixtureState, data: &[f64], rng: &mut ChainRng) {
        self.reassign(state, data, rng);
        let h = self.truncation;
        let mut counts = vec![0usize; h];
        let mut sums = vec![0.0; h];
        for (&k, &x) in state.assign.iter().zip(data) {
            counts[k] += 1;
            sums[k] += x;
        }
        for k in 0..h {
            let (m, v) = normal_mean_posterior(counts[k], sums[k], state.sigma2, self.base.mean, self.base.var);
            state.atoms[k] = normal_draw(m, v, rng);
        }
        let mut beyond = data.len();
        let mut remaining = 1.0;
        for (k, &c) in counts.iter().enumerate().take(h) {
            beyond -= c;
            let v =
                if k + 1 == h { 1.0 } else { Beta::new(1.0 + c as f64, self.alpha + beyond as f64).expect("positive beta parameters").sample(rng) };
            state.sticks[k] = v;
            state.weights[k] = v * remaining;
            remaining *= 1.0 - v;
        }
        let ss: f64 = state.assign.iter().zip(data).map(|(&k, &x)| (x - state.atoms[k]).powi(2)).sum();
        state.sigma2 = inverse_gamma_draw(self.base.shape + 0.5 * data.len() as f64, self.base.rate + 0.5 * ss, rng);
    }

    /// Multinomial draw of each label with weights `p_k N(x; mu_k, sigma2)`.
    pub fn reassign(&self, state: &mut MixtureState, data: &[f64], rng: &mut ChainRng) {
        let h = self.truncation;
        let ln_w: Vec<f64> = state.weights.iter().map(|w| w.ln()).collect();
        let half_prec = 0.5 / state.sigma2;
        let mut probs = vec![0.0; h];
        for (label, &x) in state.assign.iter_mut().zip(data) {
            let mut best = f64::NEG_INFINITY;
            for k in 0..h {
                let d = x - state.atoms[k];
                probs[k] = ln_w[k] - half_prec * d * d;
                best = best.max(probs[k]);
            }
            let mut total = 0.0;
            for p in probs.iter_mut() {
                // relative weights below e^-40 cannot move a double-precision draw
                let d = *p - best;
                *p = if d < -40.0 { 0.0 } else { d.exp() };
                total += *p;
            }
            let mut u = rng.random::<f64>() * total;
            let mut pick = h - 1;
            for (k, p) in probs.iter().enumerate() {
                if u < *p {
                    pick = k;
                    break;
                }
                u -= p;
            }
            *label = pick;
        }
    }
}
