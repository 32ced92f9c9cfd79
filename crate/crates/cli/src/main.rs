use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use constructive_nn::metrics::{classify, DecisionRule};
use constructive_nn::{load_raw_csv, Partition, SplitDataset};
use constructive_cli::config::{ConfigFile, DatasetKind, ExperimentConfig, OutputFormat, Profile, TrainOverrides};
use constructive_cli::experiment::{best_line, load_experiment_data, run_experiment};
use constructive_cli::render::{parse_history_csv, parse_history_json_lines, render_table, render_table_for_seed};
use constructive_cli::CliError;

#[derive(Parser)]
#[command(name = "constructive", version, about = "Grow and train single-hidden-layer networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run constructive training for one seed or a seed sweep.
    Train(TrainArgs),
    /// Validate a dataset file and summarize its partitions.
    Inspect(InspectArgs),
    /// Reformat a stored growth table (CSV or JSON lines).
    Render(RenderArgs),
    /// Convert a raw CSV file plus manifest into the `.dt` format.
    Convert(ConvertArgs),
}

#[derive(Args)]
struct TrainArgs {
    /// TOML experiment config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long, value_enum)]
    dataset_kind: Option<DatasetKind>,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Default profile; guessed from the dataset file name when omitted.
    #[arg(long, value_enum)]
    profile: Option<Profile>,
    /// Comma-separated sweep seeds.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    seeds: Option<Vec<u64>>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads (0 = one per seed, capped at available cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Exit 0 even if no seed meets the acceptance targets.
    #[arg(long)]
    report_only: bool,
    #[command(flatten)]
    train: TrainOverrides,
}

#[derive(Args)]
struct InspectArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value = "proben1")]
    dataset_kind: DatasetKind,
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, value_enum)]
    profile: Option<Profile>,
}

#[derive(Args)]
struct RenderArgs {
    /// A `seed-*.csv` table or a `phases.jsonl` file.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "markdown")]
    format: OutputFormat,
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long)]
    csv: PathBuf,
    /// Defaults to the CSV path with a `.manifest` extension.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, short)]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(args) => train(args),
        Command::Inspect(args) => inspect(args),
        Command::Render(args) => render(args),
        Command::Convert(args) => convert(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn train(args: TrainArgs) -> Result<ExitCode, CliError> {
    let mut file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    file.merge(ConfigFile {
        dataset_path: args.dataset,
        dataset_kind: args.dataset_kind,
        manifest_path: args.manifest,
        profile: args.profile,
        sweep_seeds: args.seeds,
        output_path: args.output,
        output_format: args.format,
        jobs: args.jobs,
        report_only: args.report_only.then_some(true),
        train: args.train,
    });
    let cfg: ExperimentConfig = file.resolve()?;
    let outcome = run_experiment(&cfg)?;

    for run in &outcome.runs {
        let p = run.history.selected_phase();
        println!(
            "seed {}: {:?} h={} epochs={} valid {:.2}% test {:.2}% overall {:.5}%",
            run.seed,
            run.history.stop_reason,
            p.h,
            run.history.total_epochs(),
            p.valid_eff,
            p.test_eff,
            p.overall_eff
        );
    }
    for (seed, err) in &outcome.failures {
        eprintln!("error: seed {seed}: {err}");
    }
    println!("{}", best_line(&outcome));
    println!("results written to {}", cfg.output_path.display());
    Ok(ExitCode::from(outcome.exit_code(cfg.report_only) as u8))
}

fn inspect(args: InspectArgs) -> Result<ExitCode, CliError> {
    let profile = args
        .profile
        .unwrap_or_else(|| Profile::from_path_hint(&args.path));
    let cfg = ConfigFile {
        dataset_path: Some(args.path.clone()),
        dataset_kind: Some(args.dataset_kind),
        manifest_path: args.manifest,
        profile: Some(profile),
        output_path: Some(PathBuf::new()),
        ..Default::default()
    }
    .resolve()?;
    let data = load_experiment_data(&cfg)?;
    let h = data.header;
    println!("{}", args.path.display());
    println!(
        "  inputs {}  outputs {}  classes {}",
        h.n_inputs, h.n_outputs, h.n_classes
    );
    let rule = DecisionRule::for_outputs(h.n_outputs);
    for part in Partition::ALL {
        let set = data.partition(part);
        let mut counts = vec![0usize; h.n_classes];
        for ex in set {
            counts[classify(&ex.targets, rule)?] += 1;
        }
        println!("  {:<6} {:>5} examples, class counts {:?}", label(part), set.len(), counts);
    }
    println!("  total  {:>5} examples", data.len());
    print_input_range(&data);

    match profile.expected_header() {
        Some(expected) if expected == h => {
            println!("  matches the {profile} benchmark layout");
            Ok(ExitCode::SUCCESS)
        }
        Some(expected) => {
            println!(
                "  MISMATCH with the {profile} benchmark layout: expected {}/{}/{} inputs/outputs/classes and {}/{}/{} examples",
                expected.n_inputs, expected.n_outputs, expected.n_classes, expected.n_train, expected.n_valid, expected.n_test
            );
            Ok(ExitCode::from(1))
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

fn label(part: Partition) -> &'static str {
    match part {
        Partition::Train => "train",
        Partition::Valid => "valid",
        Partition::Test => "test",
    }
}

fn print_input_range(data: &SplitDataset) {
    let (lo, hi) = data
        .iter()
        .flat_map(|ex| ex.inputs.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    println!("  input range [{lo}, {hi}]");
}

fn render(args: RenderArgs) -> Result<ExitCode, CliError> {
    let text = read(&args.input)?;
    let is_jsonl = args
        .input
        .extension()
        .is_some_and(|e| e == "jsonl" || e == "json");
    let rendered = if is_jsonl {
        let mut out = String::new();
        for (seed, history) in parse_history_json_lines(&text)? {
            if args.format == OutputFormat::Markdown {
                if let Some(seed) = seed {
                    out.push_str(&format!("### seed {seed}\n\n"));
                }
            }
            out.push_str(&render_table_for_seed(&history, args.format, seed));
            if args.format == OutputFormat::Markdown {
                out.push('\n');
            }
        }
        out
    } else {
        render_table(&parse_history_csv(&text)?, args.format)
    };
    match &args.output {
        Some(path) => fs::write(path, rendered).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn convert(args: ConvertArgs) -> Result<ExitCode, CliError> {
    let manifest = args
        .manifest
        .unwrap_or_else(|| args.csv.with_extension("manifest"));
    let data = load_raw_csv(&args.csv, &manifest)?;
    fs::write(&args.output, data.to_proben1()).map_err(|source| CliError::Io {
        path: args.output.clone(),
        source,
    })?;
    println!(
        "{} -> {} ({} examples)",
        args.csv.display(),
        args.output.display(),
        data.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
