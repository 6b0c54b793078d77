//! File formats: dataset CSV, run configuration, and fit artifacts.

mod artifacts;
mod config;
mod dataset;

pub use artifacts::{
    fit_artifact_paths, read_auc_table, read_fit_json, render_svg, write_auc_table, write_fit_artifacts, write_fit_json, write_json_file, AucRow,
};
pub use config::RunConfig;
pub use dataset::{read_dataset, write_dataset, MIN_GROUP_ROWS};
