//! Experiment configuration: a TOML file, flag overrides and per-dataset
//! default profiles.

use std::fmt;
use std::path::{Path, PathBuf};

use constructive_nn::network::NewUnitInit;
use constructive_nn::{DatasetHeader, StoppingSet, TrainConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetKind {
    #[default]
    Proben1,
    RawCsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
    JsonLines,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Markdown => "md",
            OutputFormat::JsonLines => "jsonl",
        }
    }
}

/// Bundled defaults for the three medical benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    Generic,
    Cancer1,
    Heart,
    Diabetes,
}

impl Profile {
    /// Guesses the profile from a dataset file name.
    pub fn from_path_hint(path: &Path) -> Self {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().to_lowercase())
            .unwrap_or_default();
        if name.contains("cancer") {
            Profile::Cancer1
        } else if name.contains("heart") {
            Profile::Heart
        } else if name.contains("diabetes") {
            Profile::Diabetes
        } else {
            Profile::Generic
        }
    }

    /// Training defaults. Thresholds sit just below the validation columns
    /// of the best-fitted published networks.
    pub fn train_config(self) -> TrainConfig {
        let base = TrainConfig::default();
        match self {
            Profile::Generic => base,
            Profile::Cancer1 => TrainConfig {
                xi_target: 0.05,
                eff_target: 95.0,
                ..base
            },
            Profile::Heart => TrainConfig {
                xi_target: 0.1,
                eff_target: 82.0,
                ..base
            },
            Profile::Diabetes => TrainConfig {
                xi_target: 0.2,
                eff_target: 76.0,
                h_max: 5,
                ..base
            },
        }
    }

    /// Expected header counts, when the profile describes a known benchmark.
    pub fn expected_header(self) -> Option<DatasetHeader> {
        let h = |n_inputs, n_outputs, n_train, n_valid, n_test| DatasetHeader {
            n_inputs,
            n_outputs,
            n_classes: 2,
            n_train,
            n_valid,
            n_test,
        };
        match self {
            Profile::Generic => None,
            Profile::Cancer1 => Some(h(9, 2, 350, 175, 174)),
            Profile::Heart => Some(h(13, 1, 152, 76, 75)),
            Profile::Diabetes => Some(h(8, 2, 384, 192, 192)),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Generic => "generic",
            Profile::Cancer1 => "cancer1",
            Profile::Heart => "heart",
            Profile::Diabetes => "diabetes",
        })
    }
}

/// Optional overrides for every [`TrainConfig`] field except the seed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct TrainOverrides {
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub epochs_per_phase: Option<usize>,
    #[arg(long)]
    pub patience: Option<usize>,
    #[arg(long)]
    pub xi_target: Option<f64>,
    #[arg(long)]
    pub eff_target: Option<f64>,
    #[arg(long)]
    pub h_max: Option<usize>,
    #[arg(long)]
    pub init_range: Option<f64>,
    #[arg(long, value_parser = parse_stopping_set)]
    pub stopping_set: Option<StoppingSet>,
    #[arg(long)]
    pub shuffle: Option<bool>,
    #[arg(long, value_parser = parse_new_unit_init)]
    pub new_unit_init: Option<NewUnitInit>,
}

fn parse_stopping_set(s: &str) -> Result<StoppingSet, String> {
    match s {
        "validation" => Ok(StoppingSet::Validation),
        "test" => Ok(StoppingSet::Test),
        _ => Err(format!("expected `validation` or `test`, got `{s}`")),
    }
}

fn parse_new_unit_init(s: &str) -> Result<NewUnitInit, String> {
    match s {
        "random" => Ok(NewUnitInit::Random),
        "zero-outgoing" => Ok(NewUnitInit::ZeroOutgoing),
        _ => Err(format!("expected `random` or `zero-outgoing`, got `{s}`")),
    }
}

impl TrainOverrides {
    pub fn apply(&self, cfg: &mut TrainConfig) {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        set!(
            eta,
            epochs_per_phase,
            patience,
            xi_target,
            eff_target,
            h_max,
            init_range,
            stopping_set,
            shuffle,
            new_unit_init
        );
    }

    /// Later values win.
    pub fn merge(&mut self, other: &TrainOverrides) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(
            eta,
            epochs_per_phase,
            patience,
            xi_target,
            eff_target,
            h_max,
            init_range,
            stopping_set,
            shuffle,
            new_unit_init
        );
    }
}

/// Contents of an experiment config file. Every field is optional so that
/// command-line flags can fill or override it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub dataset_path: Option<PathBuf>,
    pub dataset_kind: Option<DatasetKind>,
    pub manifest_path: Option<PathBuf>,
    pub profile: Option<Profile>,
    pub sweep_seeds: Option<Vec<u64>>,
    pub output_path: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
    pub jobs: Option<usize>,
    pub report_only: Option<bool>,
    #[serde(default)]
    pub train: TrainOverrides,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Overlays `other` on top of `self`.
    pub fn merge(&mut self, other: ConfigFile) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(
            dataset_path,
            dataset_kind,
            manifest_path,
            profile,
            sweep_seeds,
            output_path,
            output_format,
            jobs,
            report_only
        );
        self.train.merge(&other.train);
    }

    /// Fills defaults and validates.
    pub fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let dataset_path = self
            .dataset_path
            .ok_or_else(|| CliError::Config("no dataset_path given".into()))?;
        let dataset_kind = self.dataset_kind.unwrap_or_default();
        let manifest_path = match dataset_kind {
            DatasetKind::Proben1 => None,
            DatasetKind::RawCsv => Some(
                self.manifest_path
                    .unwrap_or_else(|| dataset_path.with_extension("manifest")),
            ),
        };
        let profile = self
            .profile
            .unwrap_or_else(|| Profile::from_path_hint(&dataset_path));
        let mut train = profile.train_config();
        self.train.apply(&mut train);
        train.validate()?;

        let sweep_seeds = self.sweep_seeds.unwrap_or_else(|| vec![0]);
        if sweep_seeds.is_empty() {
            return Err(CliError::Config("sweep_seeds must not be empty".into()));
        }
        let mut seen = sweep_seeds.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != sweep_seeds.len() {
            return Err(CliError::Config("sweep_seeds contains duplicates".into()));
        }
        let output_path = self
            .output_path
            .ok_or_else(|| CliError::Config("no output_path given".into()))?;
        Ok(ExperimentConfig {
            dataset_path,
            dataset_kind,
            manifest_path,
            profile,
            sweep_seeds,
            output_path,
            output_format: self.output_format.unwrap_or_default(),
            jobs: self.jobs.unwrap_or(0),
            report_only: self.report_only.unwrap_or(false),
            train,
        })
    }
}

/// Fully resolved experiment; written verbatim next to the results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset_path: PathBuf,
    pub dataset_kind: DatasetKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifest_path: Option<PathBuf>,
    pub profile: Profile,
    pub sweep_seeds: Vec<u64>,
    pub output_path: PathBuf,
    pub output_format: OutputFormat,
    /// Worker threads; 0 means one per seed, capped at available cores.
    pub jobs: usize,
    /// Exit with status 0 even when no seed is accepted.
    pub report_only: bool,
    /// Shared training parameters; `seed` is replaced by each sweep seed.
    pub train: TrainConfig,
}

impl ExperimentConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment config serializes to TOML")
    }

    pub fn train_config_for(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            seed,
            ..self.train.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> ConfigFile {
        ConfigFile {
            dataset_path: Some("data/heart.dt".into()),
            output_path: Some("out".into()),
            ..Default::default()
        }
    }

    #[test]
    fn profile_from_file_name() {
        assert_eq!(Profile::from_path_hint(Path::new("data/cancer1.dt")), Profile::Cancer1);
        assert_eq!(Profile::from_path_hint(Path::new("x/Heart.dt")), Profile::Heart);
        assert_eq!(Profile::from_path_hint(Path::new("diabetes1.dt")), Profile::Diabetes);
        assert_eq!(Profile::from_path_hint(Path::new("xor.dt")), Profile::Generic);
    }

    #[test]
    fn resolution_order() {
        let mut file = minimal();
        file.train.eta = Some(0.8);
        file.train.h_max = Some(3);
        let flags = ConfigFile {
            train: TrainOverrides {
                h_max: Some(4),
                ..Default::default()
            },
            ..Default::default()
        };
        file.merge(flags);
        let cfg = file.resolve().unwrap();
        assert_eq!(cfg.profile, Profile::Heart);
        assert_eq!(cfg.train.eta, 0.8);
        assert_eq!(cfg.train.h_max, 4);
        assert_eq!(cfg.train.eff_target, Profile::Heart.train_config().eff_target);
        assert_eq!(cfg.sweep_seeds, vec![0]);
    }

    #[test]
    fn empty_sweep_is_rejected() {
        let mut file = minimal();
        file.sweep_seeds = Some(vec![]);
        assert!(matches!(file.resolve(), Err(CliError::Config(_))));
    }

    #[test]
    fn bad_train_values_are_rejected() {
        let mut file = minimal();
        file.train.eta = Some(-1.0);
        assert!(file.resolve().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
            dataset_path = "data/cancer1.dt"
            output_path = "results/cancer1"
            sweep_seeds = [1, 2, 3]
            output_format = "markdown"

            [train]
            eta = 0.8
            stopping_set = "test"
            xi_target = inf
        "#;
        let file: ConfigFile = toml::from_str(text).unwrap();
        let cfg = file.resolve().unwrap();
        assert_eq!(cfg.train.stopping_set, StoppingSet::Test);
        assert_eq!(cfg.train.xi_target, f64::INFINITY);
        let back: ExperimentConfig = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_keys_are_errors() {
        assert!(toml::from_str::<ConfigFile>("momentum = 0.9").is_err());
        assert!(toml::from_str::<ConfigFile>("[train]\nmomentum = 0.9").is_err());
    }
}
