//! Univariate slice sampling on a bounded support, the move used for every
//! latent and shape update.

use concave_roc::mcmc::{slice_sample_1d, ChainRng};
use rand::SeedableRng;

fn main() -> concave_roc::Result<()> {
    // half-normal on [0, inf)
    let mut rng = ChainRng::seed_from_u64(5);
    let mut x = 1.0;
    let n = 50_000;
    let mut sum = 0.0;
    for _ in 0..n {
        x = slice_sample_1d(|v| -0.5 * v * v, x, 1.0, 0.0, f64::INFINITY, &mut rng)?;
        sum += x;
    }
    println!("mean {:.4}  (exact sqrt(2/pi) = {:.4})", sum / n as f64, (2.0 / std::f64::consts::PI).sqrt());
    Ok(())
}
