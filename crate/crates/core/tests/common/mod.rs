//! Test-only reference implementations, written independently of the
//! library's matrix layout helpers.
#![allow(dead_code)]

use constructive_nn::{Example, Network};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Scalar-loop forward pass over the raw weight slices.
pub fn scalar_outputs(net: &Network, x: &[f64]) -> Vec<f64> {
    let (n, h, m) = (net.n_inputs(), net.n_hidden(), net.n_outputs());
    let wh = net.hidden_weights();
    let wo = net.output_weights();
    let mut hidden = vec![0.0; h];
    for j in 0..h {
        let mut s = wh[j * (n + 1) + n];
        for i in 0..n {
            s += wh[j * (n + 1) + i] * x[i];
        }
        hidden[j] = logistic(s);
    }
    let mut out = vec![0.0; m];
    for k in 0..m {
        let mut s = wo[k * (h + 1) + h];
        for j in 0..h {
            s += wo[k * (h + 1) + j] * hidden[j];
        }
        out[k] = logistic(s);
    }
    out
}

/// Half sum of squared errors, computed with the scalar evaluator.
pub fn scalar_pattern_error(net: &Network, ex: &Example) -> f64 {
    let y = scalar_outputs(net, &ex.inputs);
    ex.targets
        .iter()
        .zip(&y)
        .map(|(d, y)| 0.5 * (d - y) * (d - y))
        .sum()
}

/// Central-difference gradient of the pattern error with respect to every
/// weight, hidden matrix first then output matrix.
pub fn finite_difference_gradient(net: &Network, ex: &Example, step: f64) -> Vec<f64> {
    let mut grad = Vec::with_capacity(net.weight_count());
    let n_hidden = net.hidden_weights().len();
    for idx in 0..net.weight_count() {
        let mut plus = net.clone();
        let mut minus = net.clone();
        if idx < n_hidden {
            plus.hidden_weights_mut()[idx] += step;
            minus.hidden_weights_mut()[idx] -= step;
        } else {
            plus.output_weights_mut()[idx - n_hidden] += step;
            minus.output_weights_mut()[idx - n_hidden] -= step;
        }
        grad.push((scalar_pattern_error(&plus, ex) - scalar_pattern_error(&minus, ex)) / (2.0 * step));
    }
    grad
}

pub fn all_weights(net: &Network) -> Vec<f64> {
    net.hidden_weights()
        .iter()
        .chain(net.output_weights())
        .copied()
        .collect()
}

/// Network of arbitrary hidden size with uniform weights in [-range, range].
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, h: usize, m: usize, range: f64) -> Network {
    let wh = (0..h * (n + 1)).map(|_| rng.gen_range(-range..=range)).collect();
    let wo = (0..m * (h + 1)).map(|_| rng.gen_range(-range..=range)).collect();
    Network::from_weights(n, h, m, wh, wo).unwrap()
}

pub fn random_example(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Example {
    let inputs = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
    let targets = (0..m).map(|_| f64::from(rng.gen_bool(0.5) as u8)).collect();
    Example::new(inputs, targets)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn xor_examples() -> Vec<Example> {
    [([0.0, 0.0], 0.0), ([0.0, 1.0], 1.0), ([1.0, 0.0], 1.0), ([1.0, 1.0], 0.0)]
        .into_iter()
        .map(|(x, t)| Example::new(x.to_vec(), vec![t]))
        .collect()
}
