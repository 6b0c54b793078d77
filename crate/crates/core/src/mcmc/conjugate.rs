use crate::dist::gamma_draw;
use rand::Rng;
use rand_distr::StandardNormal;

/// Posterior `(mean, variance)` of a normal mean with known variance.
pub fn normal_mean_posterior(n: usize, sum: f64, sigma2: f64, prior_mean: f64, prior_var: f64) -> (f64, f64) {
    let precision = 1.0 / prior_var + n as f64 / sigma2;
    let var = 1.0 / precision;
    (var * (prior_mean / prior_var + sum / sigma2), var)
}

/// Conjugate draw of a normal mean given `data ~ N(mean, sigma2)` and a
/// `N(prior_mean, prior_var)` prior. Empty data yields a prior draw.
pub fn gibbs_normal_mean<R: Rng + ?Sized>(data: &[f64], sigma2: f64, prior_mean: f64, prior_var: f64, rng: &mut R) -> f64 {
    let (m, v) = normal_mean_posterior(data.len(), data.iter().sum(), sigma2, prior_mean, prior_var);
    normal_draw(m, v, rng)
}

pub(crate) fn normal_draw<R: Rng + ?Sized>(mean: f64, var: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    mean + var.sqrt() * z
}

/// Conjugate variance draw from `IG(shape0 + n/2, rate0 + sum(r^2)/2)`.
pub fn gibbs_inverse_gamma_var<R: Rng + ?Sized>(residuals: &[f64], shape0: f64, rate0: f64, rng: &mut R) -> f64 {
    let ss: f64 = residuals.iter().map(|r| r * r).sum();
    inverse_gamma_draw(shape0 + 0.5 * residuals.len() as f64, rate0 + 0.5 * ss, rng)
}

pub(crate) fn inverse_gamma_draw<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> f64 {
    // Tiny shapes can round the gamma draw to zero; keep the variance finite.
    let g = gamma_draw(shape, 1.0 / rate, rng).max(f64::MIN_POSITIVE);
    1.0 / g
}
