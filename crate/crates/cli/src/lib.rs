//! Experiment runner behind the `constructive` command.

pub mod config;
pub mod experiment;
pub mod render;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("results file: {0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] constructive_nn::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub use config::{ConfigFile, DatasetKind, ExperimentConfig, OutputFormat, Profile, TrainOverrides};
pub use experiment::{run_experiment, ExperimentOutcome, SeedRun};
pub use render::{parse_history_csv, parse_history_json_lines, render_table};
