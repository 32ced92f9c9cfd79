//! Growth-history tables in CSV, Markdown and JSON-lines form.
//!
//! Rows follow the published table layout: hidden units, cumulative epochs,
//! then classified / efficiency / mean error for the training and validation
//! sets, classified / efficiency for the test set and the overall efficiency.
//! The returned phase is flagged (`accepted` or `best`) in CSV and bolded in
//! Markdown.

use std::fmt::Write as _;

use constructive_nn::metrics::{format_efficiency, format_overall};
use constructive_nn::{GrowthHistory, PhaseRecord, StopReason};
use serde::{Deserialize, Serialize};

use crate::config::OutputFormat;
use crate::CliError;

pub const CSV_COLUMNS: [&str; 12] = [
    "h",
    "epochs",
    "train_classified",
    "train_eff",
    "train_mse",
    "valid_classified",
    "valid_eff",
    "valid_mse",
    "test_classified",
    "test_eff",
    "overall_eff",
    "selected",
];

const MARKDOWN_HEADER: [&str; 11] = [
    "NO OF HU",
    "EPOCH",
    "TRAIN CLASSIFIED",
    "TRAIN EFFICIENCY",
    "TRAIN MSE",
    "VALID CLASSIFIED",
    "VALID EFFICIENCY",
    "VALID MSE",
    "TEST CLASSIFIED",
    "TEST EFFICIENCY",
    "OVERALL EFFICIENCY",
];

fn selection_flag(history: &GrowthHistory, index: usize) -> &'static str {
    if index != history.selected {
        ""
    } else {
        match history.stop_reason {
            StopReason::Accepted => "accepted",
            StopReason::HMaxReached => "best",
        }
    }
}

/// One JSON-lines object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseLine {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub record: PhaseRecord,
    pub selected: bool,
    pub stop_reason: StopReason,
}

pub fn render_table(history: &GrowthHistory, format: OutputFormat) -> String {
    render_table_for_seed(history, format, None)
}

pub fn render_table_for_seed(history: &GrowthHistory, format: OutputFormat, seed: Option<u64>) -> String {
    match format {
        OutputFormat::Csv => render_csv(history),
        OutputFormat::Markdown => render_markdown(history),
        OutputFormat::JsonLines => render_json_lines(history, seed),
    }
}

fn render_csv(history: &GrowthHistory) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for (i, p) in history.phases.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            p.h,
            p.epochs_cumulative,
            p.train_classified,
            p.train_eff,
            p.train_mse,
            p.valid_classified,
            p.valid_eff,
            p.valid_mse,
            p.test_classified,
            p.test_eff,
            p.overall_eff,
            selection_flag(history, i),
        );
    }
    out
}

fn render_markdown(history: &GrowthHistory) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", MARKDOWN_HEADER.join(" | "));
    let _ = writeln!(out, "|{}", "---:|".repeat(MARKDOWN_HEADER.len()));
    for (i, p) in history.phases.iter().enumerate() {
        let cells = [
            p.h.to_string(),
            p.epochs_cumulative.to_string(),
            p.train_classified.to_string(),
            format_efficiency(p.train_eff),
            format!("{:.4}", p.train_mse),
            p.valid_classified.to_string(),
            format!("{}%", format_efficiency(p.valid_eff)),
            format!("{:.4}", p.valid_mse),
            p.test_classified.to_string(),
            format!("{}%", format_efficiency(p.test_eff)),
            format_overall(p.overall_eff),
        ];
        let bold = i == history.selected;
        out.push('|');
        for cell in cells {
            if bold {
                let _ = write!(out, " **{cell}** |");
            } else {
                let _ = write!(out, " {cell} |");
            }
        }
        out.push('\n');
    }
    let reason = match history.stop_reason {
        StopReason::Accepted => "accepted",
        StopReason::HMaxReached => "h_max reached, best overall efficiency shown in bold",
    };
    let _ = writeln!(out, "\nStop reason: {reason}.");
    out
}

fn render_json_lines(history: &GrowthHistory, seed: Option<u64>) -> String {
    let mut out = String::new();
    for (i, p) in history.phases.iter().enumerate() {
        let line = PhaseLine {
            seed,
            record: p.clone(),
            selected: i == history.selected,
            stop_reason: history.stop_reason,
        };
        out.push_str(&serde_json::to_string(&line).expect("phase line serializes"));
        out.push('\n');
    }
    out
}

/// Parses a CSV written by [`render_table`] back into a history.
pub fn parse_history_csv(text: &str) -> Result<GrowthHistory, CliError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(CliError::Format(format!(
            "unexpected CSV columns: {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut phases = Vec::new();
    let mut selected = None;
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let field = |c: usize| -> Result<&str, CliError> { Ok(row.get(c).unwrap_or("")) };
        let int = |c: usize| -> Result<usize, CliError> {
            field(c)?
                .parse()
                .map_err(|_| CliError::Format(format!("row {}: bad integer in `{}`", i + 1, CSV_COLUMNS[c])))
        };
        let real = |c: usize| -> Result<f64, CliError> {
            field(c)?
                .parse()
                .map_err(|_| CliError::Format(format!("row {}: bad number in `{}`", i + 1, CSV_COLUMNS[c])))
        };
        phases.push(PhaseRecord {
            h: int(0)?,
            epochs_cumulative: int(1)?,
            train_classified: int(2)?,
            train_eff: real(3)?,
            train_mse: real(4)?,
            valid_classified: int(5)?,
            valid_eff: real(6)?,
            valid_mse: real(7)?,
            test_classified: int(8)?,
            test_eff: real(9)?,
            overall_eff: real(10)?,
        });
        match field(11)? {
            "" => {}
            "accepted" => selected = Some((i, StopReason::Accepted)),
            "best" => selected = Some((i, StopReason::HMaxReached)),
            other => {
                return Err(CliError::Format(format!("row {}: unknown flag `{other}`", i + 1)));
            }
        }
    }
    let (selected, stop_reason) =
        selected.ok_or_else(|| CliError::Format("no selected phase in CSV".into()))?;
    Ok(GrowthHistory {
        phases,
        stop_reason,
        selected,
    })
}

/// Parses JSON-lines output into `(seed, history)` pairs in file order.
pub fn parse_history_json_lines(text: &str) -> Result<Vec<(Option<u64>, GrowthHistory)>, CliError> {
    let mut out: Vec<(Option<u64>, GrowthHistory)> = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let line: PhaseLine = serde_json::from_str(line)
            .map_err(|e| CliError::Format(format!("line {}: {e}", i + 1)))?;
        let starts_new = match out.last() {
            Some((seed, h)) => *seed != line.seed || line.record.h <= h.phases.last().map_or(0, |p| p.h),
            None => true,
        };
        if starts_new {
            out.push((
                line.seed,
                GrowthHistory {
                    phases: Vec::new(),
                    stop_reason: line.stop_reason,
                    selected: 0,
                },
            ));
        }
        let (_, history) = out.last_mut().expect("pushed above");
        if line.selected {
            history.selected = history.phases.len();
        }
        history.stop_reason = line.stop_reason;
        history.phases.push(line.record);
    }
    Ok(out)
}
