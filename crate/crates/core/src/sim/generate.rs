use super::ScenarioParams;
use crate::dist::{gamma_draw, normal};
use crate::error::Result;
use crate::roc::Sample;
use rand::Rng;
use rand_distr::StandardNormal;

fn normals<R: Rng + ?Sized>(mean: f64, sd: f64, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| mean + sd * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Reference draws N(0, 1), affected draws N(a0 / a1, 1 / a1^2).
pub fn generate_pbn<R: Rng + ?Sized>(alpha0: f64, alpha1: f64, n0: usize, n1: usize, rng: &mut R) -> Result<Sample> {
    ScenarioParams::Pbn { alpha0, alpha1 }.validate()?;
    let y0 = normals(0.0, 1.0, n0, rng);
    let y1 = normals(alpha0 / alpha1, 1.0 / alpha1, n1, rng);
    Sample::new(y0, y1)
}

/// Gamma draws with a shared shape; the group means are `k phi0` and `k phi1`.
pub fn generate_bg<R: Rng + ?Sized>(shape: f64, scale0: f64, scale1: f64, n0: usize, n1: usize, rng: &mut R) -> Result<Sample> {
    ScenarioParams::Bg { shape, scale0, scale1 }.validate()?;
    let y0 = (0..n0).map(|_| gamma_draw(shape, scale0, rng)).collect();
    let y1 = (0..n1).map(|_| gamma_draw(shape, scale1, rng)).collect();
    Sample::new(y0, y1)
}

/// Smallest placement value fed to the quantile map.
const MIN_Z: f64 = 1e-300;

/// Reference N(0, 1); affected scores `Phi^-1(1 - z)` with
/// `z ~ U(0, Phi(w*))`, `w* ~ N(a0 / a1, 1 / a1^2)`.
pub fn generate_pcn<R: Rng + ?Sized>(alpha0: f64, alpha1: f64, n0: usize, n1: usize, rng: &mut R) -> Result<Sample> {
    ScenarioParams::Pcn { alpha0, alpha1 }.validate()?;
    let y0 = normals(0.0, 1.0, n0, rng);
    let y1 = (0..n1)
        .map(|_| {
            let z = pcn_placement_value(alpha0, alpha1, rng);
            // Phi^-1(1 - z) = -Phi^-1(z) keeps small z exact
            -normal::quantile(z)
        })
        .collect();
    Sample::new(y0, y1)
}

/// One placement value from the pCN generator, clamped inside (0, 1).
pub(crate) fn pcn_placement_value<R: Rng + ?Sized>(alpha0: f64, alpha1: f64, rng: &mut R) -> f64 {
    let w_star = alpha0 / alpha1 + rng.sample::<f64, _>(StandardNormal) / alpha1;
    let w = normal::cdf(w_star);
    (w * rng.random::<f64>()).clamp(MIN_Z, 1.0 - f64::EPSILON)
}

/// Draws a sample for any scenario parameters.
pub fn generate<R: Rng + ?Sized>(params: &ScenarioParams, n0: usize, n1: usize, rng: &mut R) -> Result<Sample> {
    match *params {
        ScenarioParams::Pbn { alpha0, alpha1 } => generate_pbn(alpha0, alpha1, n0, n1, rng),
        ScenarioParams::Bg { shape, scale0, scale1 } => generate_bg(shape, scale0, scale1, n0, n1, rng),
        ScenarioParams::Pcn { alpha0, alpha1 } => generate_pcn(alpha0, alpha1, n0, n1, rng),
    }
}
