//! Classification decisions and efficiency arithmetic.

use serde::{Deserialize, Serialize};

use crate::dataset::Example;
use crate::error::{Error, Result};
use crate::network::Network;

/// How an output vector is turned into a class index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionRule {
    /// Winner-take-all over a one-hot encoding (two or more outputs).
    Argmax,
    /// Single output unit, class 1 when the output is at least 0.5.
    Threshold,
}

impl DecisionRule {
    /// The rule implied by the number of output units.
    pub fn for_outputs(n_outputs: usize) -> Self {
        if n_outputs == 1 {
            DecisionRule::Threshold
        } else {
            DecisionRule::Argmax
        }
    }

    fn check(self, len: usize) -> Result<()> {
        match self {
            DecisionRule::Argmax if len < 2 => Err(Error::ArityMismatch {
                expected: 2,
                found: len,
            }),
            DecisionRule::Threshold if len != 1 => Err(Error::ArityMismatch {
                expected: 1,
                found: len,
            }),
            _ => Ok(()),
        }
    }
}

/// Class index of an output (or target) vector. Ties go to the lowest index.
pub fn classify(outputs: &[f64], rule: DecisionRule) -> Result<usize> {
    rule.check(outputs.len())?;
    Ok(match rule {
        DecisionRule::Threshold => usize::from(outputs[0] >= 0.5),
        DecisionRule::Argmax => {
            let mut best = 0;
            for (i, &v) in outputs.iter().enumerate().skip(1) {
                if v > outputs[best] {
                    best = i;
                }
            }
            best
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub classified: usize,
    pub total: usize,
}

impl EfficiencyReport {
    pub fn new(classified: usize, total: usize) -> Self {
        debug_assert!(classified <= total);
        Self { classified, total }
    }

    pub fn percent(&self) -> f64 {
        100.0 * self.classified as f64 / self.total as f64
    }
}

/// Counts the examples whose predicted class equals their target class.
pub fn efficiency(net: &Network, set: &[Example], rule: DecisionRule) -> Result<EfficiencyReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut classified = 0;
    for ex in set {
        let predicted = classify(&net.predict(&ex.inputs)?, rule)?;
        if predicted == classify(&ex.targets, rule)? {
            classified += 1;
        }
    }
    Ok(EfficiencyReport::new(classified, set.len()))
}

/// Pooled rate over all partitions: `100 · Σ classified / Σ total`.
pub fn overall_efficiency(reports: &[EfficiencyReport]) -> f64 {
    let classified: usize = reports.iter().map(|r| r.classified).sum();
    let total: usize = reports.iter().map(|r| r.total).sum();
    100.0 * classified as f64 / total as f64
}

/// Per-partition efficiency as displayed in growth tables.
pub fn format_efficiency(percent: f64) -> String {
    format!("{percent:.2}")
}

pub fn format_overall(percent: f64) -> String {
    format!("{percent:.5}")
}
