mod common;

use concave_roc::dist::UnivariateDist;
use concave_roc::mcmc::{ChainConfig, ChainRng};
use concave_roc::models::*;
use concave_roc::roc::{uniform_grid, Sample};
use concave_roc::sim::{generate, scenario, scenario_truth, TRUTH_SEED};
use rand::SeedableRng;

fn settings(seed: u64, reference: ReferenceMode) -> FitSettings {
    FitSettings {
        chains: ChainConfig { n_chains: 2, burn_in: 500, keep: 500, thin: 1, seed },
        grid: uniform_grid(501),
        pcn_reference: reference,
        spcn_reference: reference,
    }
}

fn data(name: &str, n: usize, seed: u64) -> (Sample, f64) {
    let s = scenario(name).unwrap();
    let mut rng = ChainRng::seed_from_u64(seed);
    let truth = scenario_truth(&s.params, &uniform_grid(101), 4000, n, TRUTH_SEED).unwrap();
    (generate(&s.params, n, n, &mut rng).unwrap(), truth.true_auc)
}

fn check_concave(f: &ModelFit) {
    if f.model.is_concave() {
        assert_eq!(f.concavity_violations, 0, "{}", f.model);
        assert_eq!(f.roc.concavity_violations(), 0, "{}", f.model);
    }
}

#[test]
fn placement_value_models_recover_pcn_truth() {
    let (sample, truth) = data("pcn-medium", 500, 1);
    let fits = fit_models(&[ModelKind::Pcn, ModelKind::Spcn], &sample, &settings(2, ReferenceMode::Parametric));
    for f in fits {
        let f = f.unwrap();
        check_concave(&f);
        assert!((f.auc.mean - truth).abs() < 0.03, "{}: {} vs {truth}", f.model, f.auc.mean);
        assert!(f.auc.q025 < f.auc.mean && f.auc.mean < f.auc.q975);
    }
}

#[test]
fn score_models_recover_their_own_generators() {
    for (name, model) in [("pbn-medium", ModelKind::Pbn), ("bg-medium", ModelKind::Bg)] {
        let (sample, truth) = data(name, 400, 3);
        let f = fit_sample(model, &sample, &settings(4, ReferenceMode::Parametric)).unwrap();
        check_concave(&f);
        assert!((f.auc.mean - truth).abs() < 0.03, "{model}: {} vs {truth}", f.auc.mean);
    }
}

#[test]
fn binormal_fit_on_binormal_data() {
    let mut rng = ChainRng::seed_from_u64(5);
    let y0 = UnivariateDist::normal(0.0, 1.0).unwrap().sample(&mut rng, 400);
    let y1 = UnivariateDist::normal(1.2, 1.5).unwrap().sample(&mut rng, 400);
    let f = fit_sample(ModelKind::Bn, &Sample::new(y0, y1).unwrap(), &settings(6, ReferenceMode::Parametric)).unwrap();
    // P(Y1 > Y0) for independent normals
    let truth = concave_roc::dist::normal::cdf(1.2 / (1.0f64 + 1.5 * 1.5).sqrt());
    assert!((f.auc.mean - truth).abs() < 0.03, "{} vs {truth}", f.auc.mean);
}

#[test]
fn dpm_reference_follows_gamma_scores() {
    let mut rng = ChainRng::seed_from_u64(7);
    let g = UnivariateDist::gamma(2.0, 1.0).unwrap();
    let y0 = g.sample(&mut rng, 500);
    let cfg = ChainConfig { n_chains: 2, burn_in: 500, keep: 500, thin: 1, seed: 8 };
    let f0 = estimate_reference_cdf(&y0, ReferenceMode::Dpm, &cfg).unwrap();
    let sup = (1..80).map(|i| i as f64 * 0.1).map(|y| (f0.cdf(y) - g.cdf(y)).abs()).fold(0.0, f64::max);
    assert!(sup < 0.05, "{sup}");
}

#[test]
fn separated_groups_warn_binormal() {
    let s = Sample::new(vec![0.0, 0.1, 0.2, 0.3, 0.4], vec![5.0, 5.5, 6.0, 6.5, 7.0]).unwrap();
    let f = fit_sample(ModelKind::Bn, &s, &settings(9, ReferenceMode::Parametric)).unwrap();
    assert!(f.warnings.iter().any(|w| w.contains("separated")));
    assert!(f.auc.mean > 0.9);
}

#[test]
fn nonpositive_scores_are_shifted_for_bigamma() {
    let (sample, _) = data("pbn-low", 200, 10);
    let f = fit_sample(ModelKind::Bg, &sample, &settings(11, ReferenceMode::Parametric)).unwrap();
    assert!(f.warnings.iter().any(|w| w.contains("shifted")));
    check_concave(&f);
}

#[test]
fn fits_do_not_depend_on_the_other_models_requested() {
    let (sample, _) = data("bg-low", 150, 12);
    let s = settings(13, ReferenceMode::Dpm);
    let all = fit_models(&ModelKind::ALL, &sample, &s);
    let one = fit_sample(ModelKind::Spcn, &sample, &s).unwrap();
    assert_eq!(all[4].as_ref().unwrap(), &one);
    for f in &all {
        check_concave(f.as_ref().unwrap());
    }
}

#[test]
fn surrogate_data_fits_are_concave_except_binormal() {
    let sample = common::surrogate_sample();
    let fits = fit_models(&ModelKind::ALL, &sample, &settings(14, ReferenceMode::Parametric));
    for f in fits {
        let f = f.unwrap();
        check_concave(&f);
        assert_eq!(f.roc.crosses_chance_line(1e-6), f.model == ModelKind::Bn, "{}", f.model);
    }
}
