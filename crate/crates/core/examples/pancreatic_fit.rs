//! All five models on the bundled CA19-9 stand-in data (log scale), with
//! JSON, CSV and SVG artifacts written to a directory.
//!
//! cargo run --release --example pancreatic_fit -- /tmp/pancreatic

use concave_roc::io::{read_dataset, write_fit_artifacts};
use concave_roc::models::{fit_models, FitSettings, ModelKind};
use std::fs::File;
use std::path::PathBuf;

fn main() -> concave_roc::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "pancreatic_out".into()));
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data/pancreatic_surrogate.csv");
    let sample = read_dataset(File::open(data)?, true)?;
    let fits: Vec<_> = fit_models(&ModelKind::ALL, &sample, &FitSettings::default()).into_iter().collect::<concave_roc::Result<_>>()?;
    for f in &fits {
        println!(
            "{:>5}  AUC {:.3} ({:.3}, {:.3})  below chance: {}",
            f.model.id(),
            f.auc.mean,
            f.auc.q025,
            f.auc.q975,
            f.roc.crosses_chance_line(1e-6)
        );
    }
    for p in write_fit_artifacts(&out, &fits)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
