use concave_roc::dist::{bvn_cdf, gamma_quantile, normal, UnivariateDist};
use concave_roc::mcmc::ChainRng;
use concave_roc::models::{bigamma_auc, pbn_auc, pbn_auc_by_integration};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_distr::{ChiSquared, Distribution, Gamma, StandardNormal};
use std::f64::consts::PI;

const DRAWS: usize = 200_000;
/// Several standard errors of an empirical probability at `DRAWS`.
const MC_TOL: f64 = 0.005;

fn ecdf_at(draws: &[f64], x: f64) -> f64 {
    draws.iter().filter(|&&d| d <= x).count() as f64 / draws.len() as f64
}

#[test]
fn noncentral_chisq_matches_squared_shifted_normals() {
    let mut rng = ChainRng::seed_from_u64(1);
    for lambda in [0.0, 0.3, 2.0, 9.0] {
        let d = UnivariateDist::noncentral_chisq1(lambda).unwrap();
        let draws: Vec<f64> = (0..DRAWS).map(|_| (rng.sample::<f64, _>(StandardNormal) + lambda.sqrt()).powi(2)).collect();
        for x in [0.05, 0.5, 1.0, 3.0, 8.0, 15.0] {
            assert!((d.cdf(x) - ecdf_at(&draws, x)).abs() < MC_TOL, "lambda {lambda} x {x}");
            assert!((d.cdf(x) + d.sf(x) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn f_distribution_matches_chisq_ratio() {
    let mut rng = ChainRng::seed_from_u64(2);
    for (d1, d2) in [(1.0, 1.0), (4.0, 4.0), (10.0, 3.0)] {
        let f = UnivariateDist::f_dist(d1, d2).unwrap();
        let (c1, c2) = (ChiSquared::new(d1).unwrap(), ChiSquared::new(d2).unwrap());
        let draws: Vec<f64> = (0..DRAWS).map(|_| (c1.sample(&mut rng) / d1) / (c2.sample(&mut rng) / d2)).collect();
        for x in [0.2, 0.8, 1.0, 2.5, 6.0] {
            assert!((f.cdf(x) - ecdf_at(&draws, x)).abs() < MC_TOL, "F({d1},{d2}) at {x}");
        }
    }
}

#[test]
fn bivariate_normal_special_and_monte_carlo_values() {
    for rho in [-0.9, -0.3, 0.0, 0.5, 0.95] {
        let want = 0.25 + f64::asin(rho) / (2.0 * PI);
        assert!((bvn_cdf(0.0, 0.0, rho).unwrap() - want).abs() < 1e-10, "rho {rho}");
    }
    assert!((bvn_cdf(0.7, -0.4, 0.0).unwrap() - normal::cdf(0.7) * normal::cdf(-0.4)).abs() < 1e-12);
    let mut rng = ChainRng::seed_from_u64(3);
    for (x, y, rho) in [(0.5, 1.0, 0.6), (-1.0, 0.3, -0.7), (1.5, 1.2, 0.99)] {
        let hits = (0..DRAWS)
            .filter(|_| {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                a <= x && rho * a + (1.0f64 - rho * rho).sqrt() * b <= y
            })
            .count();
        assert!((bvn_cdf(x, y, rho).unwrap() - hits as f64 / DRAWS as f64).abs() < MC_TOL, "({x}, {y}, {rho})");
    }
    assert!(bvn_cdf(0.0, 0.0, 1.5).is_err());
}

/// Likelihood-ratio scores of the two normal groups, compared pairwise.
fn pbn_monte_carlo(alpha0: f64, alpha1: f64, rng: &mut ChainRng, n: usize) -> f64 {
    let (mu, s) = (alpha0 / alpha1, 1.0 / alpha1);
    let ln_lr = |y: f64| -0.5 * ((y - mu) / s).powi(2) - s.ln() + 0.5 * y * y;
    let wins = (0..n)
        .filter(|_| {
            let y0: f64 = rng.sample(StandardNormal);
            let y1 = mu + s * rng.sample::<f64, _>(StandardNormal);
            ln_lr(y1) > ln_lr(y0)
        })
        .count();
    wins as f64 / n as f64
}

#[test]
fn pbn_auc_matches_likelihood_ratio_simulation() {
    let mut rng = ChainRng::seed_from_u64(4);
    for (a0, a1) in [(0.5, 0.7), (1.0, 1.3), (0.4, 0.25), (0.0, 2.0)] {
        let mc = pbn_monte_carlo(a0, a1, &mut rng, DRAWS);
        assert!((pbn_auc(a0, a1) - mc).abs() < MC_TOL, "({a0}, {a1}): {} vs {mc}", pbn_auc(a0, a1));
    }
}

#[test]
fn bigamma_auc_matches_pairwise_simulation() {
    let mut rng = ChainRng::seed_from_u64(5);
    for (k, phi0, phi1) in [(1.0, 1.0, 2.0), (0.5, 1.0, 6.0), (3.0, 2.0, 2.5)] {
        let (g0, g1) = (Gamma::new(k, phi0).unwrap(), Gamma::new(k, phi1).unwrap());
        let wins = (0..DRAWS).filter(|_| g1.sample(&mut rng) > g0.sample(&mut rng)).count();
        let mc = wins as f64 / DRAWS as f64;
        assert!((bigamma_auc(k, phi0 / phi1) - mc).abs() < MC_TOL, "k {k}");
    }
}

#[test]
fn inverse_gamma_mean_by_simulation() {
    let mut rng = ChainRng::seed_from_u64(6);
    let d = UnivariateDist::inverse_gamma(5.0, 2.0).unwrap();
    let g = Gamma::new(5.0, 0.5).unwrap();
    let m = (0..DRAWS).map(|_| 1.0 / g.sample(&mut rng)).sum::<f64>() / DRAWS as f64;
    assert!((d.mean() - m).abs() < 0.005);
    assert!((d.cdf(0.5) - ecdf_at(&(0..DRAWS).map(|_| 1.0 / g.sample(&mut rng)).collect::<Vec<_>>(), 0.5)).abs() < MC_TOL);
}

proptest! {
    #[test]
    fn normal_quantile_inverts_cdf(p in 1e-12f64..1.0) {
        let x = normal::quantile(p);
        prop_assert!((normal::cdf(x) - p).abs() <= 1e-12 * p.max(1e-3));
    }

    #[test]
    fn gamma_quantile_inverts_cdf(shape in 0.05f64..50.0, p in 0.001f64..0.999) {
        let x = gamma_quantile(shape, p);
        let d = UnivariateDist::gamma(shape, 1.0).unwrap();
        prop_assert!((d.cdf(x) - p).abs() < 1e-8, "shape {} p {} x {}", shape, p, x);
    }

    #[test]
    fn pbn_closed_form_agrees_with_integration(a0 in 0.0f64..3.0, a1 in 0.1f64..3.0) {
        let (c, i) = (pbn_auc(a0, a1), pbn_auc_by_integration(a0, a1));
        prop_assert!((c - i).abs() < 1e-6, "({}, {}): {} vs {}", a0, a1, c, i);
        prop_assert!((0.5..=1.0).contains(&c));
    }

    #[test]
    fn cdf_is_monotone(lambda in 0.0f64..20.0, x in 0.0f64..30.0, dx in 0.0f64..5.0) {
        let d = UnivariateDist::noncentral_chisq1(lambda).unwrap();
        prop_assert!(d.cdf(x) <= d.cdf(x + dx) + 1e-14);
    }
}
