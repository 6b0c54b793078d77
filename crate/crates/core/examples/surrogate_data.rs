//! Regenerates `data/pancreatic_surrogate.csv`, a synthetic stand-in for the
//! CA19-9 study data. Log scores are matched exactly to the published group
//! means and standard deviations (51 reference, 90 affected); the affected
//! group is a skewed two-component mixture so every log score is positive.
//!
//! cargo run --release --example surrogate_data -- data/pancreatic_surrogate.csv

use concave_roc::io::write_dataset;
use concave_roc::mcmc::ChainRng;
use concave_roc::roc::Sample;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use std::fs::File;

const REFERENCE: (usize, f64, f64) = (51, 2.472, 0.865);
const AFFECTED: (usize, f64, f64) = (90, 5.415, 2.342);

/// Affine map onto exact sample mean and sd.
fn standardize(x: &mut [f64], mean: f64, sd: f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let s = (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    x.iter_mut().for_each(|v| *v = mean + sd * (*v - m) / s);
}

fn main() -> concave_roc::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "data/pancreatic_surrogate.csv".into());
    let mut seed = 1989;
    let (y0, y1) = loop {
        let mut rng = ChainRng::seed_from_u64(seed);
        let mut z = |m: f64, s: f64| m + s * rng.sample::<f64, _>(StandardNormal);
        let mut y0: Vec<f64> = (0..REFERENCE.0).map(|_| z(0.0, 1.0)).collect();
        let mut y1: Vec<f64> = (0..AFFECTED.0).map(|i| if i % 4 == 0 { z(3.0, 0.8) } else { z(6.2, 1.9) }).collect();
        standardize(&mut y0, REFERENCE.1, REFERENCE.2);
        standardize(&mut y1, AFFECTED.1, AFFECTED.2);
        if y0.iter().chain(&y1).all(|v| *v > 0.0) {
            break (y0, y1);
        }
        seed += 1;
    };
    // six significant digits on the raw scale, as a lab would report
    let raw = |y: Vec<f64>| -> Vec<f64> { y.into_iter().map(|v| format!("{:.5e}", v.exp()).parse().expect("formatted float")).collect() };
    write_dataset(&Sample::new(raw(y0), raw(y1))?, File::create(&path)?)?;
    eprintln!("seed {seed}, wrote {path}");
    Ok(())
}
