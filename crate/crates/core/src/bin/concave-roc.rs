use clap::{Parser, Subcommand};
use concave_roc::cli::{self, Exit, Outcome};
use concave_roc::io::RunConfig;
use concave_roc::Result;
use std::path::PathBuf;
use std::process::ExitCode;

const CONFIG_HELP: &str = "\
Config keys (JSON object, all optional):
  models          [\"BN\",\"BG\",\"PBN\",\"pCN\",\"spCN\"]
  chains          {n_chains: 4, burn_in: 2000, keep: 1250, thin: 2}  single-dataset fits
  sim_chains      {n_chains: 2, burn_in: 1000, keep: 500, thin: 2}   fits inside simulations
  grid_size       1001
  log_transform   false
  pcn_reference   \"parametric\"   (or \"dpm\")
  spcn_reference  \"dpm\"
  params          scenario override, e.g. {\"generator\": \"PBN\", \"alpha0\": 0.5, \"alpha1\": 0.7}
  n0, n1          1000, 1000
  replicates      50
  truth_reps      10000
  seed, threads, out";

/// Concave ROC estimation via placement-value mixtures.
///
/// Exit codes: 0 success, 1 I/O failure, 2 input error, 3 fit error,
/// 4 outputs written but some chains did not converge.
#[derive(Parser)]
#[command(version, about, long_about, after_long_help = CONFIG_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; unknown keys are rejected.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; a fresh one is drawn and echoed when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Fit models to a `score,group` CSV and write JSON, CSV and SVG artifacts.
    Fit {
        #[arg(long)]
        data: PathBuf,
        /// Comma-separated models: BN, BG, PBN, pCN, spCN (default: all).
        #[arg(long)]
        fit: Option<String>,
        /// Fit log scores (requires positive scores).
        #[arg(long)]
        log_transform: bool,
        /// Output directory [default: fit_out].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replicate a registered scenario and report bias and EMSE per model.
    Simulate {
        /// Registry name such as pcn-medium; repeat for several.
        #[arg(long, required = true)]
        scenario: Vec<String>,
        #[arg(long)]
        fit: Option<String>,
        #[arg(long)]
        replicates: Option<usize>,
        /// Output directory [default: sim_out].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the true ROC curve and AUC of a registered scenario.
    Truth {
        #[arg(long)]
        scenario: String,
        /// Output directory [default: truth_out].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge simulation report CSVs into one table.
    Report {
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "report.csv")]
        out: PathBuf,
    },
}

/// The flag wins over the config file, which wins over the default.
fn out_dir(flag: Option<PathBuf>, cfg: &RunConfig, default: &str) -> PathBuf {
    flag.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from(default))
}

fn run(cli: Cli) -> Result<Outcome> {
    let mut cfg: RunConfig = cli::load_config(cli.config.as_deref())?;
    if let Some(n) = cli.threads.or(cfg.threads) {
        // a second initialisation only fails when a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let seed = cli.seed.or(cfg.seed);
    let master = || {
        seed.unwrap_or_else(|| {
            let s = rand::random::<u64>();
            eprintln!("seed: {s}");
            s
        })
    };
    match cli.command {
        Command::Fit { data, fit, log_transform, out } => {
            if let Some(list) = fit {
                cfg.models = cli::parse_models(&list)?;
            }
            cfg.log_transform |= log_transform;
            let out = out_dir(out, &cfg, "fit_out");
            cli::fit(&data, &cfg, master(), &out)
        }
        Command::Simulate { scenario, fit, replicates, out } => {
            if let Some(list) = fit {
                cfg.models = cli::parse_models(&list)?;
            }
            if let Some(r) = replicates {
                cfg.replicates = r;
            }
            let out = out_dir(out, &cfg, "sim_out");
            cli::simulate(&scenario, &cfg, master(), &out)
        }
        Command::Truth { scenario, out } => Ok(cli::truth(&scenario, &cfg, seed, &out_dir(out, &cfg, "truth_out"))?.1),
        Command::Report { inputs, out } => cli::report(&inputs, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            outcome.messages.iter().for_each(|m| println!("{m}"));
            outcome.written.iter().for_each(|p| eprintln!("wrote {}", p.display()));
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Exit::of_error(&e) as u8)
        }
    }
}
