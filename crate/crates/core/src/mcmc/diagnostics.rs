//! Between/within-chain convergence diagnostics.

use serde::{Deserialize, Serialize};

/// Chains are declared converged when every monitored R-hat is below this.
pub const RHAT_THRESHOLD: f64 = 1.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamDiagnostic {
    pub name: String,
    /// Non-finite values are stored as JSON null and read back as NaN.
    #[serde(with = "nan_as_null")]
    pub r_hat: f64,
    #[serde(with = "nan_as_null")]
    pub ess: f64,
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDiagnostics {
    pub params: Vec<ParamDiagnostic>,
    pub converged: bool,
}

impl ChainDiagnostics {
    /// Diagnostics for each named series; `series[p][c]` is chain `c` of parameter `p`.
    pub fn compute(names: &[String], series: &[Vec<Vec<f64>>]) -> Self {
        let params: Vec<ParamDiagnostic> = names
            .iter()
            .zip(series)
            .map(|(name, chains)| ParamDiagnostic { name: name.clone(), r_hat: split_r_hat(chains), ess: effective_sample_size(chains) })
            .collect();
        let converged = params.iter().all(|p| p.r_hat < RHAT_THRESHOLD);
        Self { params, converged }
    }

    pub fn r_hat(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.r_hat)
    }

    pub fn max_r_hat(&self) -> f64 {
        self.params.iter().map(|p| p.r_hat).fold(f64::NAN, f64::max)
    }
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sample_var(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0)
}

/// Gelman-Rubin potential scale reduction on chains truncated to a common length.
pub fn r_hat(chains: &[Vec<f64>]) -> f64 {
    let n = chains.iter().map(Vec::len).min().unwrap_or(0);
    if chains.len() < 2 || n < 2 {
        return f64::NAN;
    }
    let chains: Vec<&[f64]> = chains.iter().map(|c| &c[..n]).collect();
    let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let within = mean(&chains.iter().map(|c| sample_var(c)).collect::<Vec<_>>());
    let between = n as f64 * sample_var(&means);
    if within == 0.0 {
        // constant chains: agree exactly or disagree infinitely
        return if between == 0.0 { 1.0 } else { f64::INFINITY };
    }
    let nf = n as f64;
    (((nf - 1.0) / nf * within + between / nf) / within).sqrt()
}

/// R-hat after splitting every chain in half, which also catches drift
/// inside a single chain.
pub fn split_r_hat(chains: &[Vec<f64>]) -> f64 {
    r_hat(&split(chains))
}

fn split(chains: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = chains.iter().map(Vec::len).min().unwrap_or(0);
    let half = n / 2;
    chains.iter().flat_map(|c| [c[..half].to_vec(), c[n - half..n].to_vec()]).collect()
}

/// Multi-chain effective sample size with Geyer's initial positive sequence.
pub fn effective_sample_size(chains: &[Vec<f64>]) -> f64 {
    let chains = split(chains);
    let m = chains.len();
    let n = chains.iter().map(Vec::len).min().unwrap_or(0);
    if m == 0 || n < 4 {
        return f64::NAN;
    }
    let acov: Vec<Vec<f64>> = chains.iter().map(|c| autocovariance(&c[..n])).collect();
    let chain_means: Vec<f64> = chains.iter().map(|c| mean(&c[..n])).collect();
    let nf = n as f64;
    let mean_var = acov.iter().map(|a| a[0] * nf / (nf - 1.0)).sum::<f64>() / m as f64;
    let mut var_plus = mean_var * (nf - 1.0) / nf;
    if m > 1 {
        var_plus += sample_var(&chain_means);
    }
    if var_plus <= 0.0 {
        return (m * n) as f64;
    }
    let rho = |t: usize| 1.0 - (mean_var - acov.iter().map(|a| a[t]).sum::<f64>() / m as f64) / var_plus;

    let mut sum = 0.0;
    let mut prev_pair = f64::INFINITY;
    let mut t = 0;
    while t + 1 < n {
        let mut pair = rho(t) + rho(t + 1);
        if pair < 0.0 {
            break;
        }
        // monotone sequence estimator
        if pair > prev_pair {
            pair = prev_pair;
        }
        sum += pair;
        prev_pair = pair;
        t += 2;
    }
    let tau = (-1.0 + 2.0 * sum).max(1.0 / ((m * n) as f64).log10());
    (m * n) as f64 / tau
}

fn autocovariance(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let m = mean(x);
    let d: Vec<f64> = x.iter().map(|v| v - m).collect();
    (0..n).map(|lag| d[..n - lag].iter().zip(&d[lag..]).map(|(a, b)| a * b).sum::<f64>() / n as f64).collect()
}
