//! A small replicate study on one registered scenario. The full study uses
//! 50 or more replicates of 1000 subjects per group.

use concave_roc::models::ModelKind;
use concave_roc::sim::{run_scenario, write_report_csv, ScenarioConfig};

fn main() -> concave_roc::Result<()> {
    let cfg = ScenarioConfig {
        n0: 300,
        n1: 300,
        replicates: 4,
        fit_models: vec![ModelKind::Bn, ModelKind::Pbn, ModelKind::Pcn],
        truth_reps: 2000,
        ..ScenarioConfig::new("pcn-medium")
    };
    let report = run_scenario(&cfg)?;
    println!("{} truth {:.4} ({})", report.scenario, report.true_auc, report.truth_provenance);
    write_report_csv(&report.rows, std::io::stdout())?;
    Ok(())
}
