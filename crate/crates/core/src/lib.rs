//! Constructive training of single-hidden-layer feedforward networks.
//!
//! A network starts with one hidden unit and is trained with online
//! backpropagation on the training partition. Whenever a training phase ends
//! without reaching the configured validation error and classification
//! efficiency, one hidden unit is added (keeping every existing weight) and
//! training resumes. See [`trainer::constructive_train`].
//!
//! ```no_run
//! use constructive_nn::{constructive_train, load_dataset, TrainConfig};
//!
//! # fn main() -> constructive_nn::Result<()> {
//! let data = load_dataset("data/cancer1.dt")?;
//! let cfg = TrainConfig { seed: 3, ..TrainConfig::default() };
//! let (net, history) = constructive_train(&data, &cfg)?;
//! println!("h = {}, test efficiency {:.2}%", net.n_hidden(), history.selected_phase().test_eff);
//! # Ok(())
//! # }
//! ```

pub mod dataset;
pub mod error;
pub mod metrics;
pub mod network;
pub mod trainer;

pub use dataset::{
    load_dataset, load_raw_csv, normalize_raw, parse_dataset, parse_header, DatasetHeader, Example,
    Partition, RawManifest, SplitDataset,
};
pub use error::{Error, Result};
pub use metrics::{classify, efficiency, overall_efficiency, DecisionRule, EfficiencyReport};
pub use network::{sigmoid, Activations, Network, NewUnitInit};
pub use trainer::{
    average_error, backprop_step, constructive_train, pattern_error, train_epoch, train_phase,
    EarlyStopping, GrowthHistory, PhaseOutcome, PhaseRecord, StopReason, StoppingSet, TrainConfig,
};
