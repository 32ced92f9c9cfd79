//! Seed sweeps over one dataset.

use std::fs;
use std::path::Path;

use constructive_nn::{constructive_train, load_dataset, load_raw_csv, GrowthHistory, Network, SplitDataset, StopReason};
use rayon::prelude::*;

use crate::config::{DatasetKind, ExperimentConfig, OutputFormat};
use crate::render::render_table_for_seed;
use crate::CliError;

#[derive(Debug, Clone)]
pub struct SeedRun {
    pub seed: u64,
    pub network: Network,
    pub history: GrowthHistory,
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    /// Successful runs in sweep order.
    pub runs: Vec<SeedRun>,
    pub failures: Vec<(u64, constructive_nn::Error)>,
}

impl ExperimentOutcome {
    pub fn any_accepted(&self) -> bool {
        self.runs
            .iter()
            .any(|r| r.history.stop_reason == StopReason::Accepted)
    }

    /// Run with the highest test efficiency of its returned phase; ties go to
    /// fewer hidden units, then to the earlier seed in the sweep.
    pub fn best(&self) -> Option<&SeedRun> {
        let mut best: Option<&SeedRun> = None;
        for run in &self.runs {
            let p = run.history.selected_phase();
            let better = match best {
                None => true,
                Some(b) => {
                    let q = b.history.selected_phase();
                    p.test_eff > q.test_eff || (p.test_eff == q.test_eff && p.h < q.h)
                }
            };
            if better {
                best = Some(run);
            }
        }
        best
    }

    /// 0 when some seed was accepted (or in report-only mode), 1 when none
    /// was, 2 when any seed failed.
    pub fn exit_code(&self, report_only: bool) -> i32 {
        if !self.failures.is_empty() {
            2
        } else if report_only || self.any_accepted() {
            0
        } else {
            1
        }
    }
}

pub fn load_experiment_data(cfg: &ExperimentConfig) -> Result<SplitDataset, CliError> {
    Ok(match cfg.dataset_kind {
        DatasetKind::Proben1 => load_dataset(&cfg.dataset_path)?,
        DatasetKind::RawCsv => {
            let manifest = cfg
                .manifest_path
                .as_ref()
                .ok_or_else(|| CliError::Config("raw-csv datasets need a manifest_path".into()))?;
            load_raw_csv(&cfg.dataset_path, manifest)?
        }
    })
}

/// Trains every seed of the sweep. Seeds run concurrently; results are kept
/// in sweep order.
pub fn run_sweep(data: &SplitDataset, cfg: &ExperimentConfig) -> Result<ExperimentOutcome, CliError> {
    let threads = if cfg.jobs == 0 {
        let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
        cfg.sweep_seeds.len().min(cores)
    } else {
        cfg.jobs
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        cfg.sweep_seeds
            .par_iter()
            .map(|&seed| (seed, constructive_train(data, &cfg.train_config_for(seed))))
            .collect()
    });

    let mut outcome = ExperimentOutcome {
        runs: Vec::new(),
        failures: Vec::new(),
    };
    for (seed, result) in results {
        match result {
            Ok((network, history)) => outcome.runs.push(SeedRun {
                seed,
                network,
                history,
            }),
            Err(e) => outcome.failures.push((seed, e)),
        }
    }
    Ok(outcome)
}

/// Per-seed summary with the best-of-sweep row flagged.
pub fn summary_csv(outcome: &ExperimentOutcome) -> String {
    let best_seed = outcome.best().map(|r| r.seed);
    let mut out = String::from("seed,h,stop_reason,epochs,test_classified,test_eff,overall_eff,best\n");
    for run in &outcome.runs {
        let p = run.history.selected_phase();
        let reason = match run.history.stop_reason {
            StopReason::Accepted => "accepted",
            StopReason::HMaxReached => "h_max_reached",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            run.seed,
            p.h,
            reason,
            run.history.total_epochs(),
            p.test_classified,
            p.test_eff,
            p.overall_eff,
            if Some(run.seed) == best_seed { "best" } else { "" },
        ));
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the resolved config, one growth table and network per seed, and
/// the sweep summary into `cfg.output_path`.
pub fn write_results(cfg: &ExperimentConfig, outcome: &ExperimentOutcome) -> Result<(), CliError> {
    let dir = &cfg.output_path;
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    write(&dir.join("config.toml"), &cfg.to_toml())?;

    let mut json_lines = String::new();
    for run in &outcome.runs {
        match cfg.output_format {
            OutputFormat::JsonLines => json_lines.push_str(&render_table_for_seed(
                &run.history,
                OutputFormat::JsonLines,
                Some(run.seed),
            )),
            format => write(
                &dir.join(format!("seed-{}.{}", run.seed, format.extension())),
                &render_table_for_seed(&run.history, format, Some(run.seed)),
            )?,
        }
        write(&dir.join(format!("seed-{}.net", run.seed)), &run.network.to_text())?;
    }
    if cfg.output_format == OutputFormat::JsonLines {
        write(&dir.join("phases.jsonl"), &json_lines)?;
    }
    write(&dir.join("summary.csv"), &summary_csv(outcome))
}

/// Loads the dataset, runs the sweep and writes every result file.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome, CliError> {
    let data = load_experiment_data(cfg)?;
    let outcome = run_sweep(&data, cfg)?;
    write_results(cfg, &outcome)?;
    Ok(outcome)
}

/// One-line description of the best run, as printed at the end of a sweep.
pub fn best_line(outcome: &ExperimentOutcome) -> String {
    match outcome.best() {
        Some(run) => {
            let p = run.history.selected_phase();
            format!(
                "best: seed {} h={} epochs={} test {}/{:.2}% overall {:.5}%",
                run.seed,
                p.h,
                run.history.total_epochs(),
                p.test_classified,
                p.test_eff,
                p.overall_eff
            )
        }
        None => "best: no successful runs".to_string(),
    }
}
