//! Command implementations behind the `concave-roc` binary. Every command
//! validates all inputs before it writes anything.

use crate::error::{Error, Result};
use crate::io::{read_dataset, write_fit_artifacts, write_json_file, RunConfig};
use crate::models::{fit_models, ModelKind};
use crate::roc::{uniform_grid, write_curve_csv};
use crate::sim::{merge_reports, read_report_csv, run_scenario, scenario_truth, write_report_csv, TruthCurve, TRUTH_SEED};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Failure = 1,
    Input = 2,
    Fit = 3,
    NotConverged = 4,
}

impl Exit {
    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::Input(_) | Error::Csv(_) | Error::Json(_) => Exit::Input,
            Error::Fit(_) | Error::Domain(_) => Exit::Fit,
            _ => Exit::Failure,
        }
    }
}

/// What a command did, for the caller to report.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit: Exit,
    pub written: Vec<PathBuf>,
    pub messages: Vec<String>,
}

#[derive(Serialize)]
struct RunInfo<'a> {
    command: &'a str,
    seed: u64,
    version: &'a str,
    config: &'a RunConfig,
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    let cfg = match path {
        Some(p) => RunConfig::from_json(fs::File::open(p).map_err(|e| Error::input(format!("{}: {e}", p.display())))?)?,
        None => RunConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn write_run_info(dir: &Path, command: &str, seed: u64, cfg: &RunConfig) -> Result<PathBuf> {
    let path = dir.join("run_info.json");
    write_json_file(&path, &RunInfo { command, seed, version: env!("CARGO_PKG_VERSION"), config: cfg })?;
    Ok(path)
}

/// Fits every configured model to a `score,group` file.
pub fn fit(data: &Path, cfg: &RunConfig, seed: u64, out: &Path) -> Result<Outcome> {
    let file = fs::File::open(data).map_err(|e| Error::input(format!("{}: {e}", data.display())))?;
    let sample = read_dataset(file, cfg.log_transform)?;
    let settings = cfg.fit_settings(seed);
    let mut fits = Vec::new();
    let mut messages = Vec::new();
    let mut exit = Exit::Ok;
    for (model, result) in cfg.models.iter().zip(fit_models(&cfg.models, &sample, &settings)) {
        match result {
            Ok(f) => {
                messages.extend(f.warnings.iter().map(|w| format!("{model}: {w}")));
                if !f.converged() && exit == Exit::Ok {
                    exit = Exit::NotConverged;
                }
                fits.push(f);
            }
            Err(e) => {
                messages.push(format!("{model}: {e}"));
                exit = Exit::Fit;
            }
        }
    }
    let mut written = write_fit_artifacts(out, &fits)?;
    written.push(write_run_info(out, "fit", seed, cfg)?);
    for f in &fits {
        messages.push(format!("{:>5}  AUC {:.3}  95% CI ({:.3}, {:.3})", f.model.id(), f.auc.mean, f.auc.q025, f.auc.q975));
    }
    Ok(Outcome { exit, written, messages })
}

/// Runs the simulation study for each named scenario.
pub fn simulate(scenarios: &[String], cfg: &RunConfig, seed: u64, out: &Path) -> Result<Outcome> {
    if scenarios.is_empty() {
        return Err(Error::input("simulate needs at least one --scenario"));
    }
    let configs: Vec<_> = scenarios.iter().map(|s| cfg.scenario_config(s, seed)).collect();
    for c in &configs {
        c.resolve()?;
    }
    fs::create_dir_all(out)?;
    let mut written = Vec::new();
    let mut messages = Vec::new();
    let mut exit = Exit::Ok;
    for c in &configs {
        let report = run_scenario(c)?;
        let csv = out.join(format!("{}_report.csv", report.scenario));
        let json = out.join(format!("{}_replicates.json", report.scenario));
        write_report_csv(&report.rows, fs::File::create(&csv)?)?;
        report.write_json(fs::File::create(&json)?)?;
        written.extend([csv, json]);
        for r in &report.rows {
            if r.failed > 0 {
                exit = Exit::Fit;
            } else if r.nonconverged > 0 && exit == Exit::Ok {
                exit = Exit::NotConverged;
            }
            let fmt = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
            messages.push(format!(
                "{} {}: true {:.3} mean {} bias {} EMSE x1000 {} (ok {}, failed {}, unconverged {})",
                report.scenario,
                r.fit_model,
                r.true_auc,
                fmt(r.mean),
                fmt(r.bias),
                fmt(r.emse_x1000),
                r.replicates,
                r.failed,
                r.nonconverged
            ));
        }
    }
    written.push(write_run_info(out, "simulate", seed, cfg)?);
    Ok(Outcome { exit, written, messages })
}

/// Truth curve of a registered scenario; the seed only affects empirical truths.
pub fn truth(name: &str, cfg: &RunConfig, seed: Option<u64>, out: &Path) -> Result<(TruthCurve, Outcome)> {
    let s = cfg.scenario_config(name, 0).resolve()?;
    let t = scenario_truth(&s.params, &uniform_grid(cfg.grid_size), cfg.truth_reps, cfg.n1, seed.unwrap_or(TRUTH_SEED))?;
    fs::create_dir_all(out)?;
    let csv = out.join(format!("{}_truth.csv", s.name));
    let json = out.join(format!("{}_truth.json", s.name));
    write_curve_csv(&t.curve, fs::File::create(&csv)?)?;
    write_json_file(&json, &t)?;
    let msg = format!("{}: true AUC {:.4} ({}), published {:.3}", s.name, t.true_auc, t.provenance.tag(), s.published_auc);
    Ok((t, Outcome { exit: Exit::Ok, written: vec![csv, json], messages: vec![msg] }))
}

/// Merges simulation CSVs into one table.
pub fn report(inputs: &[PathBuf], out: &Path) -> Result<Outcome> {
    if inputs.is_empty() {
        return Err(Error::input("report needs at least one CSV"));
    }
    let tables = inputs
        .iter()
        .map(|p| {
            let f = fs::File::open(p).map_err(|e| Error::input(format!("{}: {e}", p.display())))?;
            read_report_csv(f).map_err(|e| Error::input(format!("{}: {e}", p.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    let merged = merge_reports(&tables)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    write_report_csv(&merged, fs::File::create(out)?)?;
    let messages = vec![format!("merged {} rows from {} files", merged.len(), inputs.len())];
    Ok(Outcome { exit: Exit::Ok, written: vec![out.to_path_buf()], messages })
}

/// Model list from a comma-separated `--fit` value.
pub fn parse_models(list: &str) -> Result<Vec<ModelKind>> {
    let models: Vec<ModelKind> = list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    if models.is_empty() {
        return Err(Error::input("--fit lists no models"));
    }
    Ok(models)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_list_parsing() {
        assert_eq!(parse_models("bn, spcn").unwrap(), vec![ModelKind::Bn, ModelKind::Spcn]);
        assert!(parse_models("BN,probit").is_err());
        assert!(parse_models(",").is_err());
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(Exit::of_error(&Error::input("x")), Exit::Input);
        assert_eq!(Exit::of_error(&Error::fit("x")), Exit::Fit);
    }
}
