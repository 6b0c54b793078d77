//! A concave ROC curve is the CDF of `Z = W V` with `V ~ U(0, 1)`: every
//! set of mixture bounds `w` gives `F(t) = mean(min(t, w) / w)` and
//! `AUC = 1 - mean(w) / 2`. Checked here against simulated products.

use concave_roc::mcmc::ChainRng;
use concave_roc::roc::{auc_from_bounds, concave_cdf_curve, concavity_violations, uniform_grid, MixtureBounds, CONCAVITY_TOL};
use rand::{Rng, SeedableRng};

fn main() -> concave_roc::Result<()> {
    let mut rng = ChainRng::seed_from_u64(3);
    let w: Vec<f64> = (0..50).map(|_| rng.random::<f64>().powi(2).max(1e-3)).collect();
    let bounds = MixtureBounds::new(w.clone())?;
    let grid = uniform_grid(101);
    let curve = concave_cdf_curve(&bounds, &grid);

    let n = 100_000;
    let mut z: Vec<f64> = (0..n).map(|_| w[rng.random_range(0..w.len())] * rng.random::<f64>()).collect();
    z.sort_by(f64::total_cmp);
    let sup = grid.iter().zip(&curve).map(|(t, f)| (z.partition_point(|v| v <= t) as f64 / n as f64 - f).abs()).fold(0.0, f64::max);

    println!("closed-form AUC       {:.4}", auc_from_bounds(&bounds));
    println!("1 - mean(Z)           {:.4}", 1.0 - z.iter().sum::<f64>() / n as f64);
    println!("sup |ECDF - F|        {sup:.4}");
    println!("slope increases       {}", concavity_violations(&grid, &curve, CONCAVITY_TOL));
    Ok(())
}
