use concave_roc::dist::normal;
use concave_roc::mcmc::ChainConfig;
use concave_roc::models::{fit_models, pbn_auc_by_integration, ModelKind};
use concave_roc::roc::{emse, uniform_grid};
use concave_roc::sim::*;

/// Published truths that the closed forms miss by more than 0.005, with the
/// largest gap accepted for each.
const KNOWN_GAPS: [(&str, f64); 2] = [("pbn-high", 0.006), ("bg-high", 0.007)];

fn tiny(name: &str, models: &[ModelKind]) -> ScenarioConfig {
    ScenarioConfig {
        n0: 80,
        n1: 80,
        replicates: 2,
        fit_models: models.to_vec(),
        seed: 77,
        chains: ChainConfig { n_chains: 2, burn_in: 200, keep: 500, thin: 1, seed: 0 },
        grid_size: 201,
        truth_reps: 400,
        ..ScenarioConfig::new(name)
    }
}

fn independent_truth(p: &ScenarioParams) -> f64 {
    match *p {
        ScenarioParams::Pbn { alpha0, alpha1 } => pbn_auc_by_integration(alpha0, alpha1),
        // P(Y1 > Y0) = P(F(2k, 2k) < phi1 / phi0), by the F cdf's beta form
        ScenarioParams::Bg { shape, scale0, scale1 } => {
            let x = scale1 / (scale0 + scale1);
            statrs::function::beta::beta_reg(shape, shape, x)
        }
        // 1 - E Phi(w*) / 2 with w* ~ N(a0 / a1, 1 / a1^2)
        ScenarioParams::Pcn { alpha0, alpha1 } => 1.0 - 0.5 * normal::cdf(alpha0 / alpha1 / (1.0 + 1.0 / (alpha1 * alpha1)).sqrt()),
    }
}

#[test]
fn registry_truths_against_independent_routes_and_published_values() {
    let grid = uniform_grid(201);
    for s in REGISTRY {
        let t = scenario_truth(&s.params, &grid, DEFAULT_TRUTH_REPS, 1000, TRUTH_SEED).unwrap();
        let route = independent_truth(&s.params);
        let route_tol = if s.generator() == Generator::Pcn { 0.002 } else { 1e-6 };
        assert!((t.true_auc - route).abs() < route_tol, "{}: {} vs {route}", s.name, t.true_auc);
        let gap = (t.true_auc - s.published_auc).abs();
        let tol = match KNOWN_GAPS.iter().find(|(n, _)| *n == s.name) {
            Some((_, g)) => *g,
            None if s.generator() == Generator::Pcn => 0.01,
            None => 0.005,
        };
        println!("{}: truth {:.4} published {:.3} gap {gap:.4} ({})", s.name, t.true_auc, s.published_auc, t.provenance.tag());
        assert!(gap < tol, "{}: gap {gap}", s.name);
        assert_eq!(emse(&t.curve, &t.curve).unwrap(), 0.0);
        assert_eq!(matches!(t.provenance, Provenance::Empirical { .. }), s.generator() == Generator::Pcn);
    }
}

#[test]
fn single_replicate_report_is_a_direct_fit() {
    let cfg = ScenarioConfig { replicates: 1, ..tiny("bg-low", &[ModelKind::Bg, ModelKind::Spcn]) };
    let report = run_scenario(&cfg).unwrap();
    let sample = replicate_sample(&cfg, 0).unwrap();
    let settings = replicate_settings(&cfg, 0).unwrap();
    let s = cfg.resolve().unwrap();
    let truth = scenario_truth(&s.params, &uniform_grid(cfg.grid_size), cfg.truth_reps, cfg.n1, TRUTH_SEED).unwrap();
    for (fit, row) in fit_models(&cfg.fit_models, &sample, &settings).into_iter().zip(&report.rows) {
        let fit = fit.unwrap();
        assert_eq!(row.mean, Some(fit.auc.mean));
        assert_eq!(row.bias, Some(fit.auc.mean - truth.true_auc));
        assert_eq!(row.emse_x1000, Some(1000.0 * emse(&fit.roc, &truth.curve).unwrap()));
        assert_eq!((row.replicates, row.failed), (1, 0));
    }
}

#[test]
fn reports_are_bit_reproducible() {
    let cfg = tiny("pcn-low", &[ModelKind::Bn, ModelKind::Pcn]);
    let render = || {
        let r = run_scenario(&cfg).unwrap();
        let (mut csv, mut json) = (Vec::new(), Vec::new());
        write_report_csv(&r.rows, &mut csv).unwrap();
        r.write_json(&mut json).unwrap();
        (csv, json)
    };
    let a = render();
    assert_eq!(a, render());
    let other = run_scenario(&ScenarioConfig { seed: 78, ..cfg.clone() }).unwrap();
    let mut csv = Vec::new();
    write_report_csv(&other.rows, &mut csv).unwrap();
    assert_ne!(a.0, csv);
}

#[test]
fn report_json_round_trips() {
    let r = run_scenario(&tiny("pbn-low", &[ModelKind::Pbn])).unwrap();
    let mut json = Vec::new();
    r.write_json(&mut json).unwrap();
    assert_eq!(SimulationReport::read_json(json.as_slice()).unwrap(), r);
    assert!(r.records.iter().all(|rec| rec.concavity_violations == Some(0)));
}

#[test]
fn shards_merge_into_the_full_table() {
    let cfg = tiny("pcn-medium", &[ModelKind::Pcn]);
    let s = cfg.resolve().unwrap();
    let truth = scenario_truth(&s.params, &uniform_grid(cfg.grid_size), cfg.truth_reps, cfg.n1, TRUTH_SEED).unwrap();
    let all = run_replicates(&cfg, &[0, 1], &truth).unwrap();
    let first = run_replicates(&cfg, &[0], &truth).unwrap();
    let second = run_replicates(&cfg, &[1], &truth).unwrap();
    assert_eq!([first, second].concat(), all);
    let full = run_scenario(&cfg).unwrap();
    let mut buf = Vec::new();
    write_report_csv(&full.rows, &mut buf).unwrap();
    let table = read_report_csv(buf.as_slice()).unwrap();
    let merged = merge_reports(std::slice::from_ref(&table)).unwrap();
    assert_eq!(merged, table);
}
