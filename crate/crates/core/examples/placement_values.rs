//! Placement values and the empirical ROC curve: the CDF of the placement
//! values is the ROC curve, and one minus their mean is the Mann-Whitney AUC.

use concave_roc::mcmc::ChainRng;
use concave_roc::roc::{empirical_roc, mann_whitney_auc, placement_values, uniform_grid, Sample};
use concave_roc::sim::generate_pbn;
use rand::SeedableRng;

fn main() -> concave_roc::Result<()> {
    let mut rng = ChainRng::seed_from_u64(11);
    let sample: Sample = generate_pbn(0.5, 0.7, 200, 200, &mut rng)?;

    let mut sorted = sample.reference().to_vec();
    sorted.sort_by(f64::total_cmp);
    let n0 = sorted.len() as f64;
    let z = placement_values(&sample, |y| sorted.partition_point(|v| *v <= y) as f64 / n0)?;
    let mean_z = z.values().iter().sum::<f64>() / z.len() as f64;

    let grid = uniform_grid(11);
    let roc = empirical_roc(&sample, &grid)?;
    println!("Mann-Whitney AUC      {:.4}", mann_whitney_auc(sample.reference(), sample.affected()));
    println!("1 - mean placement    {:.4}", 1.0 - mean_z);
    println!("   t    ROC(t)  PV-CDF(t)");
    for ((t, r), c) in grid.iter().zip(roc.values()).zip(z.ecdf_on(&grid)) {
        println!("{t:5.2}  {r:7.4}  {c:7.4}");
    }
    Ok(())
}
