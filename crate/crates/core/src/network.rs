//! Single-hidden-layer feedforward network with logistic units.
//!
//! Weights are stored row-major. Row `j` of the hidden matrix holds the
//! weights from every input to hidden unit `j`, followed by its bias. Row `k`
//! of the output matrix holds the weights from every hidden unit to output
//! `k`, followed by its bias. Biases act on a constant input of 1.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Logistic activation `1 / (1 + e^-x)`.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Derivative of the logistic function expressed through its output.
#[inline]
pub fn sigmoid_derivative(y: f64) -> f64 {
    y * (1.0 - y)
}

/// How the outgoing (hidden to output) weights of a freshly added unit are set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NewUnitInit {
    /// Uniform in `[-init_range, init_range]`, like every other weight.
    #[default]
    Random,
    /// Zero, so the grown network computes exactly what it did before.
    ZeroOutgoing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    n_inputs: usize,
    n_hidden: usize,
    n_outputs: usize,
    hidden_weights: Vec<f64>,
    output_weights: Vec<f64>,
}

/// Pre-activations and activations of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Activations {
    pub hidden_net: Vec<f64>,
    pub hidden: Vec<f64>,
    pub output_net: Vec<f64>,
    pub output: Vec<f64>,
}

impl Network {
    /// Builds a network with `h = 1` and every weight drawn uniformly from
    /// `[-init_range, init_range]`. The hidden matrix is drawn first, then
    /// the output matrix, both in row-major order.
    pub fn init<R: Rng + ?Sized>(
        n_inputs: usize,
        n_outputs: usize,
        init_range: f64,
        rng: &mut R,
    ) -> Result<Self> {
        check_range(init_range)?;
        if n_inputs == 0 || n_outputs == 0 {
            return Err(Error::InvalidConfig(
                "a network needs at least one input and one output".into(),
            ));
        }
        let hidden_weights = (0..n_inputs + 1)
            .map(|_| rng.gen_range(-init_range..=init_range))
            .collect();
        let output_weights = (0..n_outputs * 2)
            .map(|_| rng.gen_range(-init_range..=init_range))
            .collect();
        Ok(Self {
            n_inputs,
            n_hidden: 1,
            n_outputs,
            hidden_weights,
            output_weights,
        })
    }

    /// Assembles a network from explicit weight matrices.
    pub fn from_weights(
        n_inputs: usize,
        n_hidden: usize,
        n_outputs: usize,
        hidden_weights: Vec<f64>,
        output_weights: Vec<f64>,
    ) -> Result<Self> {
        if n_inputs == 0 || n_hidden == 0 || n_outputs == 0 {
            return Err(Error::MalformedNetwork(
                "all layer sizes must be positive".into(),
            ));
        }
        if hidden_weights.len() != n_hidden * (n_inputs + 1) {
            return Err(Error::MalformedNetwork(format!(
                "hidden matrix has {} weights, expected {}",
                hidden_weights.len(),
                n_hidden * (n_inputs + 1)
            )));
        }
        if output_weights.len() != n_outputs * (n_hidden + 1) {
            return Err(Error::MalformedNetwork(format!(
                "output matrix has {} weights, expected {}",
                output_weights.len(),
                n_outputs * (n_hidden + 1)
            )));
        }
        if hidden_weights.iter().chain(&output_weights).any(|w| !w.is_finite()) {
            return Err(Error::MalformedNetwork("non-finite weight".into()));
        }
        Ok(Self {
            n_inputs,
            n_hidden,
            n_outputs,
            hidden_weights,
            output_weights,
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    /// `h × (n_inputs + 1)` row-major, bias last in each row.
    pub fn hidden_weights(&self) -> &[f64] {
        &self.hidden_weights
    }

    /// `n_outputs × (h + 1)` row-major, bias last in each row.
    pub fn output_weights(&self) -> &[f64] {
        &self.output_weights
    }

    pub fn hidden_weights_mut(&mut self) -> &mut [f64] {
        &mut self.hidden_weights
    }

    pub fn output_weights_mut(&mut self) -> &mut [f64] {
        &mut self.output_weights
    }

    /// Weights of hidden unit `j` (inputs then bias).
    pub fn hidden_row(&self, j: usize) -> &[f64] {
        let w = self.n_inputs + 1;
        &self.hidden_weights[j * w..(j + 1) * w]
    }

    /// Weights into output unit `k` (hidden units then bias).
    pub fn output_row(&self, k: usize) -> &[f64] {
        let w = self.n_hidden + 1;
        &self.output_weights[k * w..(k + 1) * w]
    }

    pub fn weight_count(&self) -> usize {
        self.hidden_weights.len() + self.output_weights.len()
    }

    pub fn forward(&self, inputs: &[f64]) -> Result<Activations> {
        if inputs.len() != self.n_inputs {
            return Err(Error::ArityMismatch {
                expected: self.n_inputs,
                found: inputs.len(),
            });
        }
        let hidden_net: Vec<f64> = (0..self.n_hidden)
            .map(|j| {
                let row = self.hidden_row(j);
                dot(&row[..self.n_inputs], inputs) + row[self.n_inputs]
            })
            .collect();
        let hidden: Vec<f64> = hidden_net.iter().map(|&n| sigmoid(n)).collect();
        let output_net: Vec<f64> = (0..self.n_outputs)
            .map(|k| {
                let row = self.output_row(k);
                dot(&row[..self.n_hidden], &hidden) + row[self.n_hidden]
            })
            .collect();
        let output = output_net.iter().map(|&n| sigmoid(n)).collect();
        Ok(Activations {
            hidden_net,
            hidden,
            output_net,
            output,
        })
    }

    /// Output activations only.
    pub fn predict(&self, inputs: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward(inputs)?.output)
    }

    /// Adds one hidden unit with random incoming weights and random outgoing
    /// weights. Existing weights are left untouched.
    pub fn add_hidden_unit<R: Rng + ?Sized>(&mut self, init_range: f64, rng: &mut R) -> Result<()> {
        self.add_hidden_unit_with(init_range, NewUnitInit::Random, rng)
    }

    /// Adds one hidden unit. The new incoming row (inputs then bias) is drawn
    /// first, then one outgoing weight per output unit in output order. With
    /// [`NewUnitInit::ZeroOutgoing`] the outgoing weights are not drawn.
    pub fn add_hidden_unit_with<R: Rng + ?Sized>(
        &mut self,
        init_range: f64,
        init: NewUnitInit,
        rng: &mut R,
    ) -> Result<()> {
        check_range(init_range)?;
        self.hidden_weights
            .extend((0..self.n_inputs + 1).map(|_| rng.gen_range(-init_range..=init_range)));

        let old_width = self.n_hidden + 1;
        let mut grown = Vec::with_capacity(self.n_outputs * (old_width + 1));
        for row in self.output_weights.chunks_exact(old_width) {
            let new_weight = match init {
                NewUnitInit::Random => rng.gen_range(-init_range..=init_range),
                NewUnitInit::ZeroOutgoing => 0.0,
            };
            grown.extend_from_slice(&row[..self.n_hidden]);
            grown.push(new_weight);
            grown.push(row[self.n_hidden]);
        }
        self.output_weights = grown;
        self.n_hidden += 1;
        Ok(())
    }

    /// Plain-text checkpoint; see the [`fmt::Display`] impl for the layout.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn check_range(init_range: f64) -> Result<()> {
    if init_range > 0.0 && init_range.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidRange(init_range))
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// ```text
/// n_inputs <n>
/// n_hidden <h>
/// n_outputs <m>
/// hidden_weights
/// <h rows of n+1 values>
/// output_weights
/// <m rows of h+1 values>
/// ```
///
/// Values use the shortest decimal form that parses back to the same `f64`.
impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n_inputs {}", self.n_inputs)?;
        writeln!(f, "n_hidden {}", self.n_hidden)?;
        writeln!(f, "n_outputs {}", self.n_outputs)?;
        writeln!(f, "hidden_weights")?;
        for row in self.hidden_weights.chunks_exact(self.n_inputs + 1) {
            write_row(f, row)?;
        }
        writeln!(f, "output_weights")?;
        for row in self.output_weights.chunks_exact(self.n_hidden + 1) {
            write_row(f, row)?;
        }
        Ok(())
    }
}

fn write_row(f: &mut fmt::Formatter<'_>, row: &[f64]) -> fmt::Result {
    for (i, w) in row.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{w:?}")?;
    }
    writeln!(f)
}

impl FromStr for Network {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let mut dim = |name: &str| -> Result<usize> {
            let line = lines
                .next()
                .ok_or_else(|| Error::MalformedNetwork(format!("missing `{name}`")))?;
            match line.split_once(' ') {
                Some((key, value)) if key == name => value
                    .trim()
                    .parse()
                    .map_err(|_| Error::MalformedNetwork(format!("bad `{name}` value"))),
                _ => Err(Error::MalformedNetwork(format!("expected `{name}`, got `{line}`"))),
            }
        };
        let n_inputs = dim("n_inputs")?;
        let n_hidden = dim("n_hidden")?;
        let n_outputs = dim("n_outputs")?;

        let mut hidden = Vec::new();
        let mut output = Vec::new();
        let mut target: Option<&mut Vec<f64>> = None;
        for line in lines {
            match line {
                "hidden_weights" => target = Some(&mut hidden),
                "output_weights" => target = Some(&mut output),
                _ => {
                    let dest = target
                        .as_deref_mut()
                        .ok_or_else(|| Error::MalformedNetwork("weights before section".into()))?;
                    for tok in line.split_whitespace() {
                        dest.push(tok.parse().map_err(|_| {
                            Error::MalformedNetwork(format!("bad weight `{tok}`"))
                        })?);
                    }
                }
            }
        }
        Network::from_weights(n_inputs, n_hidden, n_outputs, hidden, output)
    }
}
