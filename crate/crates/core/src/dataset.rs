//! Benchmark datasets in the Proben1 `.dt` container.
//!
//! A file is a short `key=value` header followed by one example per line:
//! the input attributes and then the target units, whitespace separated.
//! Partitions are positional: the first `training_examples` rows train, the
//! next `validation_examples` rows validate and the rest are test rows.
//!
//! Raw CSV data (header row, trailing target columns, plus a split manifest)
//! can be ingested with [`load_raw_csv`], which min-max normalizes the inputs
//! using statistics of the training rows only.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::ops::Range;
use std::path::Path;

use crate::error::{Error, Result};

/// One pattern: normalized inputs and a 0/1 target encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub inputs: Vec<f64>,
    pub targets: Vec<f64>,
}

impl Example {
    pub fn new(inputs: Vec<f64>, targets: Vec<f64>) -> Self {
        Self { inputs, targets }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetHeader {
    pub n_inputs: usize,
    pub n_outputs: usize,
    pub n_classes: usize,
    pub n_train: usize,
    pub n_valid: usize,
    pub n_test: usize,
}

impl DatasetHeader {
    pub fn total(&self) -> usize {
        self.n_train + self.n_valid + self.n_test
    }

    fn validate(&self) -> Result<()> {
        let counts = [
            ("inputs", self.n_inputs),
            ("outputs", self.n_outputs),
            ("classes", self.n_classes),
            ("training_examples", self.n_train),
            ("validation_examples", self.n_valid),
            ("test_examples", self.n_test),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, n)| *n == 0) {
            return Err(Error::InvalidHeader(format!("`{name}` must be positive")));
        }
        if self.n_outputs != 1 && self.n_outputs != self.n_classes {
            return Err(Error::InvalidHeader(format!(
                "{} output units cannot encode {} classes",
                self.n_outputs, self.n_classes
            )));
        }
        Ok(())
    }

    /// Index ranges of the three partitions in file order.
    pub fn ranges(&self) -> [Range<usize>; 3] {
        let valid_start = self.n_train;
        let test_start = valid_start + self.n_valid;
        [
            0..valid_start,
            valid_start..test_start,
            test_start..test_start + self.n_test,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partition {
    Train,
    Valid,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Valid, Partition::Test];
}

/// Train/validation/test partitions of one benchmark file.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitDataset {
    pub header: DatasetHeader,
    pub train: Vec<Example>,
    pub valid: Vec<Example>,
    pub test: Vec<Example>,
}

impl SplitDataset {
    /// Splits `examples` positionally according to `header`.
    pub fn from_examples(header: DatasetHeader, mut examples: Vec<Example>) -> Result<Self> {
        header.validate()?;
        if examples.len() != header.total() {
            return Err(Error::CountMismatch {
                expected: header.total(),
                found: examples.len(),
            });
        }
        for ex in &examples {
            check_arity(header.n_inputs, ex.inputs.len())?;
            check_arity(header.n_outputs, ex.targets.len())?;
        }
        let test = examples.split_off(header.n_train + header.n_valid);
        let valid = examples.split_off(header.n_train);
        Ok(Self {
            header,
            train: examples,
            valid,
            test,
        })
    }

    pub fn partition(&self, which: Partition) -> &[Example] {
        match which {
            Partition::Train => &self.train,
            Partition::Valid => &self.valid,
            Partition::Test => &self.test,
        }
    }

    pub fn len(&self) -> usize {
        self.train.len() + self.valid.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All examples in file order.
    pub fn iter(&self) -> impl Iterator<Item = &Example> {
        self.train.iter().chain(&self.valid).chain(&self.test)
    }

    /// Serializes back to the `.dt` text format. Values are written with the
    /// shortest representation that parses back to the same `f64`.
    pub fn to_proben1(&self) -> String {
        let h = &self.header;
        let mut out = String::new();
        // Inputs are reported as real-valued and outputs as boolean; only the
        // sums matter once parsed.
        let _ = writeln!(out, "bool_in=0");
        let _ = writeln!(out, "real_in={}", h.n_inputs);
        let _ = writeln!(out, "bool_out={}", h.n_outputs);
        let _ = writeln!(out, "real_out=0");
        let _ = writeln!(out, "training_examples={}", h.n_train);
        let _ = writeln!(out, "validation_examples={}", h.n_valid);
        let _ = writeln!(out, "test_examples={}", h.n_test);
        for ex in self.iter() {
            let mut first = true;
            for v in ex.inputs.iter().chain(&ex.targets) {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }
}

fn check_arity(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected, found })
    }
}

const REQUIRED_KEYS: [&str; 7] = [
    "bool_in",
    "real_in",
    "bool_out",
    "real_out",
    "training_examples",
    "validation_examples",
    "test_examples",
];

/// Parses the `key=value` header of a `.dt` file.
///
/// Lines without `=` are ignored, as are keys this format does not use.
pub fn parse_header<S: AsRef<str>>(lines: &[S]) -> Result<DatasetHeader> {
    let mut values: HashMap<&str, usize> = HashMap::new();
    for line in lines {
        let line = line.as_ref().trim();
        let Some((key, value)) = line.split_once('=') else {
            continue;
        };
        let key = key.trim();
        if !REQUIRED_KEYS.contains(&key) {
            continue;
        }
        let value = value
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::MalformedValue(line.to_string()))?;
        values.insert(key, value);
    }
    let get = |key: &str| {
        values
            .get(key)
            .copied()
            .ok_or_else(|| Error::MissingKey(key.to_string()))
    };
    let n_inputs = get("bool_in")? + get("real_in")?;
    let n_outputs = get("bool_out")? + get("real_out")?;
    let header = DatasetHeader {
        n_inputs,
        n_outputs,
        // A single output unit encodes a two-class problem.
        n_classes: if n_outputs == 1 { 2 } else { n_outputs },
        n_train: get("training_examples")?,
        n_valid: get("validation_examples")?,
        n_test: get("test_examples")?,
    };
    header.validate()?;
    Ok(header)
}

/// Parses a whole `.dt` document.
pub fn parse_dataset(text: &str) -> Result<SplitDataset> {
    let lines: Vec<&str> = text.lines().collect();
    let header_len = lines
        .iter()
        .position(|l| !l.contains('='))
        .unwrap_or(lines.len());
    let header = parse_header(&lines[..header_len])?;
    let width = header.n_inputs + header.n_outputs;

    let mut examples = Vec::with_capacity(header.total());
    for (idx, line) in lines.iter().enumerate().skip(header_len) {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let values = parse_row(line, line_no)?;
        if values.len() != width {
            return Err(Error::RowArity(line_no));
        }
        let (inputs, targets) = values.split_at(header.n_inputs);
        if targets.iter().any(|&t| t != 0.0 && t != 1.0) {
            return Err(Error::InvalidTarget(line_no));
        }
        examples.push(Example::new(inputs.to_vec(), targets.to_vec()));
    }
    if examples.len() != header.total() {
        return Err(Error::CountMismatch {
            expected: header.total(),
            found: examples.len(),
        });
    }
    SplitDataset::from_examples(header, examples)
}

fn parse_row(line: &str, line_no: usize) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::NonFinite(line_no)),
        })
        .collect()
}

/// Loads a `.dt` file from disk.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<SplitDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dataset(&text)
}

/// Min-max normalizes each column of `features` with the range observed in
/// `stats_source`. Constant columns map to 0; values outside the training
/// range are not clamped.
pub fn normalize_raw(features: &[Vec<f64>], stats_source: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let first = stats_source.first().ok_or(Error::EmptyTraining)?;
    let width = first.len();
    let mut lo = vec![f64::INFINITY; width];
    let mut hi = vec![f64::NEG_INFINITY; width];
    for row in stats_source {
        check_arity(width, row.len())?;
        for (c, &v) in row.iter().enumerate() {
            lo[c] = lo[c].min(v);
            hi[c] = hi[c].max(v);
        }
    }
    features
        .iter()
        .map(|row| {
            check_arity(width, row.len())?;
            Ok(row
                .iter()
                .enumerate()
                .map(|(c, &v)| {
                    let span = hi[c] - lo[c];
                    if span > 0.0 {
                        (v - lo[c]) / span
                    } else {
                        0.0
                    }
                })
                .collect())
        })
        .collect()
}

/// Split counts for a raw CSV file.
///
/// The manifest is a `key=value` file with `targets`, `training_examples`,
/// `validation_examples` and `test_examples`; `classes` is optional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawManifest {
    pub n_targets: usize,
    pub n_classes: Option<usize>,
    pub n_train: usize,
    pub n_valid: usize,
    pub n_test: usize,
}

impl RawManifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values: HashMap<String, usize> = HashMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::MalformedValue(line.to_string()))?;
            let value = value
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::MalformedValue(line.to_string()))?;
            values.insert(key.trim().to_string(), value);
        }
        let get = |key: &str| {
            values
                .get(key)
                .copied()
                .ok_or_else(|| Error::MissingKey(key.to_string()))
        };
        Ok(Self {
            n_targets: get("targets")?,
            n_classes: values.get("classes").copied(),
            n_train: get("training_examples")?,
            n_valid: get("validation_examples")?,
            n_test: get("test_examples")?,
        })
    }
}

/// Loads a raw CSV file plus its manifest, normalizing the input columns
/// with training-partition statistics.
pub fn load_raw_csv(csv_path: impl AsRef<Path>, manifest_path: impl AsRef<Path>) -> Result<SplitDataset> {
    let manifest_path = manifest_path.as_ref();
    let manifest_text = fs::read_to_string(manifest_path).map_err(|source| Error::Io {
        path: manifest_path.to_path_buf(),
        source,
    })?;
    let manifest = RawManifest::parse(&manifest_text)?;
    let csv_path = csv_path.as_ref();
    let file = fs::File::open(csv_path).map_err(|source| Error::Io {
        path: csv_path.to_path_buf(),
        source,
    })?;
    parse_raw_csv(file, &manifest)
}

/// Reader-based core of [`load_raw_csv`].
pub fn parse_raw_csv(reader: impl std::io::Read, manifest: &RawManifest) -> Result<SplitDataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let width = rdr.headers()?.len();
    if manifest.n_targets == 0 || manifest.n_targets >= width {
        return Err(Error::InvalidHeader(format!(
            "{} target columns in a {width}-column file",
            manifest.n_targets
        )));
    }
    let n_inputs = width - manifest.n_targets;

    let mut features = Vec::new();
    let mut targets = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        // header is line 1
        let line_no = idx + 2;
        let record = record?;
        if record.len() != width {
            return Err(Error::RowArity(line_no));
        }
        let values = record
            .iter()
            .map(|tok| match tok.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::NonFinite(line_no)),
            })
            .collect::<Result<Vec<_>>>()?;
        let (x, t) = values.split_at(n_inputs);
        if t.iter().any(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::InvalidTarget(line_no));
        }
        features.push(x.to_vec());
        targets.push(t.to_vec());
    }

    let n_outputs = manifest.n_targets;
    let header = DatasetHeader {
        n_inputs,
        n_outputs,
        n_classes: manifest
            .n_classes
            .unwrap_or(if n_outputs == 1 { 2 } else { n_outputs }),
        n_train: manifest.n_train,
        n_valid: manifest.n_valid,
        n_test: manifest.n_test,
    };
    header.validate()?;
    if features.len() != header.total() {
        return Err(Error::CountMismatch {
            expected: header.total(),
            found: features.len(),
        });
    }
    let normalized = normalize_raw(&features, &features[..header.n_train])?;
    let examples = normalized
        .into_iter()
        .zip(targets)
        .map(|(x, t)| Example::new(x, t))
        .collect();
    SplitDataset::from_examples(header, examples)
}
