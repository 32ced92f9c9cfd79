//! Online backpropagation and the constructive growth loop.
//!
//! Training starts from a network with one hidden unit. Each phase runs
//! online backpropagation over the training partition, keeping the snapshot
//! with the lowest validation error and ending early once validation error
//! stops improving for `patience` epochs. After a phase the snapshot is
//! accepted if its validation error and its efficiency on the configured
//! stopping set both meet their targets; otherwise one hidden unit is added
//! and another phase begins, up to `h_max` units.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Example, Partition, SplitDataset};
use crate::error::{Error, Result};
use crate::metrics::{efficiency, overall_efficiency, DecisionRule};
use crate::network::{sigmoid_derivative, Network, NewUnitInit};

/// Partition whose efficiency gates acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StoppingSet {
    #[default]
    Validation,
    /// Gate on test efficiency, as in the original procedure. Leaks the test
    /// partition into model selection.
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    /// Learning rate.
    pub eta: f64,
    /// Epoch budget of one growth phase.
    pub epochs_per_phase: usize,
    /// Epochs without a new best validation error before a phase ends.
    pub patience: usize,
    /// Acceptable average validation error.
    pub xi_target: f64,
    /// Acceptable efficiency (percent) on `stopping_set`.
    pub eff_target: f64,
    /// Hidden unit cap.
    pub h_max: usize,
    /// Weights are drawn uniformly from `[-init_range, init_range]`.
    pub init_range: f64,
    pub seed: u64,
    pub stopping_set: StoppingSet,
    /// Re-permute the training patterns every epoch.
    pub shuffle: bool,
    pub new_unit_init: NewUnitInit,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            eta: 0.7,
            epochs_per_phase: 500,
            patience: 50,
            xi_target: 0.1,
            eff_target: 90.0,
            h_max: 8,
            init_range: 1.0,
            seed: 0,
            stopping_set: StoppingSet::Validation,
            shuffle: false,
            new_unit_init: NewUnitInit::Random,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return fail("eta must be positive and finite");
        }
        if self.h_max < 1 {
            return fail("h_max must be at least 1");
        }
        if self.epochs_per_phase < 1 {
            return fail("epochs_per_phase must be at least 1");
        }
        if self.patience < 1 {
            return fail("patience must be at least 1");
        }
        if self.xi_target.is_nan() || self.xi_target < 0.0 {
            return fail("xi_target must be non-negative");
        }
        if self.eff_target.is_nan() {
            return fail("eff_target must be a number");
        }
        if !(self.init_range > 0.0 && self.init_range.is_finite()) {
            return fail("init_range must be positive and finite");
        }
        Ok(())
    }
}

/// Per-output errors `d_k - y_k` and the pattern error `½ Σ e_k²`.
pub fn pattern_error(targets: &[f64], outputs: &[f64]) -> Result<(Vec<f64>, f64)> {
    if targets.len() != outputs.len() {
        return Err(Error::ArityMismatch {
            expected: targets.len(),
            found: outputs.len(),
        });
    }
    let errors: Vec<f64> = targets.iter().zip(outputs).map(|(d, y)| d - y).collect();
    let xi = 0.5 * errors.iter().map(|e| e * e).sum::<f64>();
    Ok((errors, xi))
}

/// Mean pattern error over `set`.
pub fn average_error(net: &Network, set: &[Example]) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut total = 0.0;
    for ex in set {
        let outputs = net.predict(&ex.inputs)?;
        total += pattern_error(&ex.targets, &outputs)?.1;
    }
    Ok(total / set.len() as f64)
}

/// One online gradient step on the pattern error of `example`.
///
/// Output deltas are `e_k · y_k(1 - y_k)`; hidden deltas back-propagate them
/// through the output weights as they were before this step. Returns the
/// pattern error measured before the update.
pub fn backprop_step(net: &mut Network, example: &Example, eta: f64) -> Result<f64> {
    let act = net.forward(&example.inputs)?;
    let (errors, xi) = pattern_error(&example.targets, &act.output)?;
    let n_in = net.n_inputs();
    let h = net.n_hidden();

    let delta_out: Vec<f64> = errors
        .iter()
        .zip(&act.output)
        .map(|(e, &y)| e * sigmoid_derivative(y))
        .collect();
    let delta_hidden: Vec<f64> = (0..h)
        .map(|j| {
            let back: f64 = delta_out
                .iter()
                .enumerate()
                .map(|(k, d)| d * net.output_row(k)[j])
                .sum();
            sigmoid_derivative(act.hidden[j]) * back
        })
        .collect();

    for (row, d) in net.output_weights_mut().chunks_exact_mut(h + 1).zip(&delta_out) {
        let step = eta * d;
        for (w, y) in row[..h].iter_mut().zip(&act.hidden) {
            *w += step * y;
        }
        row[h] += step;
    }
    for (row, d) in net.hidden_weights_mut().chunks_exact_mut(n_in + 1).zip(&delta_hidden) {
        let step = eta * d;
        for (w, x) in row[..n_in].iter_mut().zip(&example.inputs) {
            *w += step * x;
        }
        row[n_in] += step;
    }
    Ok(xi)
}

/// Applies [`backprop_step`] once per pattern in `order`.
pub fn train_epoch(net: &mut Network, train: &[Example], eta: f64, order: &[usize]) -> Result<()> {
    if train.is_empty() {
        return Err(Error::EmptySet);
    }
    if !is_permutation(order, train.len()) {
        return Err(Error::InvalidOrder(train.len()));
    }
    for &i in order {
        backprop_step(net, &train[i], eta)?;
    }
    Ok(())
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    order
        .iter()
        .all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

/// Tracks the best validation error seen in a phase.
#[derive(Debug, Clone)]
pub struct EarlyStopping {
    patience: usize,
    best_error: f64,
    best_epoch: usize,
    epoch: usize,
}

impl EarlyStopping {
    pub fn new(patience: usize) -> Self {
        Self {
            patience,
            best_error: f64::INFINITY,
            best_epoch: 0,
            epoch: 0,
        }
    }

    /// Records the validation error after the next epoch (1-based). Returns
    /// `true` when it is a strict improvement.
    pub fn observe(&mut self, valid_error: f64) -> bool {
        self.epoch += 1;
        if valid_error < self.best_error {
            self.best_error = valid_error;
            self.best_epoch = self.epoch;
            true
        } else {
            false
        }
    }

    pub fn should_stop(&self) -> bool {
        self.epoch - self.best_epoch >= self.patience
    }

    pub fn best_epoch(&self) -> usize {
        self.best_epoch
    }

    pub fn best_error(&self) -> f64 {
        self.best_error
    }
}

/// Table row describing the snapshot at the end of one growth phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub h: usize,
    pub epochs_cumulative: usize,
    pub train_classified: usize,
    pub train_eff: f64,
    pub train_mse: f64,
    pub valid_classified: usize,
    pub valid_eff: f64,
    pub valid_mse: f64,
    pub test_classified: usize,
    pub test_eff: f64,
    pub overall_eff: f64,
}

impl PhaseRecord {
    pub fn evaluate(net: &Network, data: &SplitDataset, epochs_cumulative: usize) -> Result<Self> {
        let rule = DecisionRule::for_outputs(net.n_outputs());
        let [train, valid, test] =
            Partition::ALL.map(|p| efficiency(net, data.partition(p), rule));
        let (train, valid, test) = (train?, valid?, test?);
        Ok(Self {
            h: net.n_hidden(),
            epochs_cumulative,
            train_classified: train.classified,
            train_eff: train.percent(),
            train_mse: average_error(net, &data.train)?,
            valid_classified: valid.classified,
            valid_eff: valid.percent(),
            valid_mse: average_error(net, &data.valid)?,
            test_classified: test.classified,
            test_eff: test.percent(),
            overall_eff: overall_efficiency(&[train, valid, test]),
        })
    }

    pub fn stopping_eff(&self, set: StoppingSet) -> f64 {
        match set {
            StoppingSet::Validation => self.valid_eff,
            StoppingSet::Test => self.test_eff,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PhaseOutcome {
    /// Snapshot with the lowest validation error of the phase.
    pub network: Network,
    pub epochs_used: usize,
    /// 1-based epoch at which the snapshot was taken.
    pub best_epoch: usize,
    /// Validation error of the network after the last epoch run.
    pub final_valid_error: f64,
    pub record: PhaseRecord,
}

/// Trains `net` for one growth phase with hold-out early stopping.
/// `epochs_before` is the number of epochs already spent in earlier phases.
pub fn train_phase<R: Rng + ?Sized>(
    mut net: Network,
    data: &SplitDataset,
    cfg: &TrainConfig,
    rng: &mut R,
    epochs_before: usize,
) -> Result<PhaseOutcome> {
    cfg.validate()?;
    if data.train.is_empty() || data.valid.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut order: Vec<usize> = (0..data.train.len()).collect();
    let mut stopper = EarlyStopping::new(cfg.patience);
    let mut best = net.clone();
    let mut final_valid_error = f64::NAN;
    let mut epochs_used = 0;

    while epochs_used < cfg.epochs_per_phase {
        if cfg.shuffle {
            order.shuffle(rng);
        }
        train_epoch(&mut net, &data.train, cfg.eta, &order)?;
        epochs_used += 1;
        final_valid_error = average_error(&net, &data.valid)?;
        if stopper.observe(final_valid_error) {
            best.clone_from(&net);
        }
        if stopper.should_stop() {
            break;
        }
    }
    let record = PhaseRecord::evaluate(&best, data, epochs_before + epochs_used)?;
    Ok(PhaseOutcome {
        network: best,
        epochs_used,
        best_epoch: stopper.best_epoch(),
        final_valid_error,
        record,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Accepted,
    HMaxReached,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthHistory {
    pub phases: Vec<PhaseRecord>,
    pub stop_reason: StopReason,
    /// Index of the returned phase: the accepted one, or the one with the
    /// best overall efficiency when the cap was reached.
    pub selected: usize,
}

impl GrowthHistory {
    pub fn selected_phase(&self) -> &PhaseRecord {
        &self.phases[self.selected]
    }

    pub fn total_epochs(&self) -> usize {
        self.phases.last().map_or(0, |p| p.epochs_cumulative)
    }
}

/// Grows a network from one hidden unit until the acceptance test passes
/// or `h_max` units have been trained.
///
/// All randomness (initial weights, per-epoch shuffles, new units) comes
/// from one ChaCha8 stream seeded with `cfg.seed`.
pub fn constructive_train(data: &SplitDataset, cfg: &TrainConfig) -> Result<(Network, GrowthHistory)> {
    cfg.validate()?;
    if data.train.is_empty() || data.valid.is_empty() || data.test.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut net = Network::init(
        data.header.n_inputs,
        data.header.n_outputs,
        cfg.init_range,
        &mut rng,
    )?;
    let mut phases = Vec::new();
    let mut snapshots = Vec::new();
    let mut epochs = 0;

    loop {
        let outcome = train_phase(net, data, cfg, &mut rng, epochs)?;
        epochs += outcome.epochs_used;
        let record = outcome.record;
        let accepted = record.valid_mse <= cfg.xi_target
            && record.stopping_eff(cfg.stopping_set) >= cfg.eff_target;
        phases.push(record);

        if accepted {
            let selected = phases.len() - 1;
            let history = GrowthHistory {
                phases,
                stop_reason: StopReason::Accepted,
                selected,
            };
            return Ok((outcome.network, history));
        }
        if outcome.network.n_hidden() >= cfg.h_max {
            snapshots.push(outcome.network);
            // earliest (smallest) phase wins ties
            let mut selected = 0;
            for (i, p) in phases.iter().enumerate() {
                if p.overall_eff > phases[selected].overall_eff {
                    selected = i;
                }
            }
            let history = GrowthHistory {
                phases,
                stop_reason: StopReason::HMaxReached,
                selected,
            };
            return Ok((snapshots.swap_remove(selected), history));
        }
        net = outcome.network.clone();
        snapshots.push(outcome.network);
        net.add_hidden_unit_with(cfg.init_range, cfg.new_unit_init, &mut rng)?;
    }
}
