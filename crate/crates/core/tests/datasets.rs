mod common;

use std::path::PathBuf;

use constructive_nn::{
    load_dataset, parse_dataset, train_phase, DatasetHeader, Error, Example, Network, SplitDataset,
    TrainConfig,
};
use proptest::prelude::*;

fn data_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn header(n_inputs: usize, n_outputs: usize, n_train: usize, n_valid: usize, n_test: usize) -> DatasetHeader {
    DatasetHeader {
        n_inputs,
        n_outputs,
        n_classes: 2,
        n_train,
        n_valid,
        n_test,
    }
}

#[test]
fn shipped_files_match_benchmark_layouts() {
    for (file, expected) in [
        ("cancer1.dt", header(9, 2, 350, 175, 174)),
        ("heart.dt", header(13, 1, 152, 76, 75)),
        ("diabetes1.dt", header(8, 2, 384, 192, 192)),
    ] {
        let ds = load_dataset(data_file(file)).unwrap();
        assert_eq!(ds.header, expected, "{file}");
        assert_eq!(ds.train.len(), expected.n_train);
        assert_eq!(ds.valid.len(), expected.n_valid);
        assert_eq!(ds.test.len(), expected.n_test);
        assert_eq!(ds.len(), expected.total());
        for ex in ds.iter() {
            assert_eq!(ex.inputs.len(), expected.n_inputs);
            assert_eq!(ex.targets.len(), expected.n_outputs);
            if expected.n_outputs == 2 {
                assert_eq!(ex.targets.iter().sum::<f64>(), 1.0, "{file}: one-hot");
            }
        }
    }
}

#[test]
fn training_inputs_lie_in_unit_interval() {
    for file in ["cancer1.dt", "heart.dt", "diabetes1.dt"] {
        let ds = load_dataset(data_file(file)).unwrap();
        for col in 0..ds.header.n_inputs {
            let (lo, hi) = ds
                .train
                .iter()
                .map(|ex| ex.inputs[col])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
            assert!(lo >= 0.0 && hi <= 1.0, "{file} column {col}: [{lo}, {hi}]");
        }
    }
}

#[test]
fn dropping_one_row_is_a_count_mismatch() {
    let text = std::fs::read_to_string(data_file("cancer1.dt")).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    let truncated = lines.join("\n");
    assert!(matches!(
        parse_dataset(&truncated),
        Err(Error::CountMismatch {
            expected: 699,
            found: 698
        })
    ));
}

#[test]
fn partitions_tile_the_file() {
    let text = std::fs::read_to_string(data_file("diabetes1.dt")).unwrap();
    let ds = parse_dataset(&text).unwrap();
    let body: Vec<&str> = text.lines().skip(7).collect();
    let ranges = ds.header.ranges();
    assert_eq!(ranges[0].end, ranges[1].start);
    assert_eq!(ranges[1].end, ranges[2].start);
    assert_eq!(ranges[2].end, body.len());
    let all: Vec<&Example> = ds.iter().collect();
    assert_eq!(all.len(), body.len());
    // first and last rows of each partition come from the matching file lines
    for (part, range) in [&ds.train, &ds.valid, &ds.test].iter().zip(ranges) {
        for (ex, line_idx) in [(&part[0], range.start), (part.last().unwrap(), range.end - 1)] {
            let values: Vec<f64> = body[line_idx]
                .split_whitespace()
                .map(|t| t.parse().unwrap())
                .collect();
            assert_eq!(values[..8], ex.inputs[..]);
            assert_eq!(values[8..], ex.targets[..]);
        }
    }
}

#[test]
fn missing_file_reports_path() {
    let err = load_dataset(data_file("no-such-file.dt")).unwrap_err();
    assert!(err.to_string().contains("no-such-file.dt"));
}

/// Best-of-10 training efficiency of a one-unit network after a 100-epoch
/// phase, expected within two points of 96.57%.
#[test]
fn cancer1_single_unit_training_efficiency() {
    let data = load_dataset(data_file("cancer1.dt")).unwrap();
    let cfg = TrainConfig {
        eta: 0.7,
        epochs_per_phase: 100,
        ..TrainConfig::default()
    };
    let best = (0..10)
        .map(|seed| {
            let net = Network::init(9, 2, cfg.init_range, &mut common::rng(seed)).unwrap();
            train_phase(net, &data, &cfg, &mut common::rng(seed), 0)
                .unwrap()
                .record
                .train_eff
        })
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((best - 96.57).abs() <= 2.0, "best training efficiency {best:.2}%");
}

fn arb_dataset() -> impl Strategy<Value = SplitDataset> {
    (1usize..6, 1usize..4, 1usize..6, 1usize..4, 1usize..4).prop_flat_map(|(n, m, a, b, c)| {
        let total = a + b + c;
        (
            proptest::collection::vec(proptest::collection::vec(-1e6f64..1e6, n), total),
            proptest::collection::vec(proptest::collection::vec(0u8..=1, m), total),
        )
            .prop_map(move |(xs, ts)| {
                let examples = xs
                    .into_iter()
                    .zip(ts)
                    .map(|(x, t)| Example::new(x, t.into_iter().map(f64::from).collect()))
                    .collect();
                let h = DatasetHeader {
                    n_inputs: n,
                    n_outputs: m,
                    n_classes: if m == 1 { 2 } else { m },
                    n_train: a,
                    n_valid: b,
                    n_test: c,
                };
                SplitDataset::from_examples(h, examples).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn text_round_trip_is_bit_exact(ds in arb_dataset()) {
        let parsed = parse_dataset(&ds.to_proben1()).unwrap();
        prop_assert_eq!(&parsed.header, &ds.header);
        for (a, b) in parsed.iter().zip(ds.iter()) {
            for (x, y) in a.inputs.iter().zip(&b.inputs) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
            prop_assert_eq!(&a.targets, &b.targets);
        }
    }
}
