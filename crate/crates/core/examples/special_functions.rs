//! Distribution layer: noncentral chi-square and F laws, the bivariate
//! normal CDF, and the bi-chi-square AUC built from them.

use concave_roc::dist::{bvn_cdf, normal, UnivariateDist};
use concave_roc::models::{pbn_auc, pbn_auc_by_integration};

fn main() -> concave_roc::Result<()> {
    let nc = UnivariateDist::noncentral_chisq1(2.5)?;
    println!("noncentral chi2(1, 2.5): P(X <= 3) = {:.6}, mean {:.3}", nc.cdf(3.0), nc.mean());
    let f = UnivariateDist::f_dist(4.0, 4.0)?;
    println!("F(4, 4): median {:.6}", f.quantile(0.5)?);
    println!("BVN(0, 0; 0.5) = {:.6} (exact 1/3)", bvn_cdf(0.0, 0.0, 0.5)?);
    println!("Phi^-1(0.975) = {:.6}", normal::quantile(0.975));
    for (a0, a1) in [(0.5, 0.7), (0.5, 0.45), (0.5, 0.28)] {
        println!("PBN({a0}, {a1}): AUC closed form {:.5}, by integration {:.5}", pbn_auc(a0, a1), pbn_auc_by_integration(a0, a1));
    }
    Ok(())
}
