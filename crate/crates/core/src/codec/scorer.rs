//! Token importance scoring (logistic gate) and its offline fit.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::Token;
use crate::error::{Error, Result};

/// `[protected_energy_fraction, log1p_energy, spectral_flatness]`
pub const FEATURE_COUNT: usize = 3;

const FLATNESS_EPS: f64 = 1e-12;

/// Linear projection and bias feeding the sigmoid gate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScorerWeights {
    pub w: [f64; FEATURE_COUNT],
    pub b: f64,
}

impl Default for ScorerWeights {
    /// Favours protected-band energy, mildly favours loud tokens and mildly
    /// penalises noise-like (flat) ones.
    fn default() -> Self {
        ScorerWeights {
            w: [4.0, 0.5, -0.5],
            b: -1.0,
        }
    }
}

impl ScorerWeights {
    pub fn zeros() -> Self {
        ScorerWeights {
            w: [0.0; FEATURE_COUNT],
            b: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.w.iter().chain(core::iter::once(&self.b)).all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::param("scorer weights must be finite"))
        }
    }

    fn logit(&self, features: &[f64; FEATURE_COUNT]) -> f64 {
        self.w.iter().zip(features).map(|(w, f)| w * f).sum::<f64>() + self.b
    }

    pub fn score(&self, features: &[f64; FEATURE_COUNT]) -> f64 {
        sigmoid(self.logit(features))
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Hand-crafted stand-in for a learned token embedding.
pub fn token_features(token: &Token) -> [f64; FEATURE_COUNT] {
    let energy = token.energy();
    let protected: f64 = token
        .coefficients
        .iter()
        .zip(&token.protected_mask)
        .filter(|(_, &p)| p)
        .map(|(c, _)| c * c)
        .sum();
    let fraction = if energy > 0.0 { (protected / energy).clamp(0.0, 1.0) } else { 0.0 };
    let flatness = if token.is_empty() {
        1.0
    } else {
        let n = token.len() as f64;
        let mags = token.coefficients.iter().map(|c| c.abs() + FLATNESS_EPS);
        let log_mean = mags.clone().map(f64::ln).sum::<f64>() / n;
        let arith = mags.sum::<f64>() / n;
        (log_mean.exp() / arith).clamp(0.0, 1.0)
    };
    [fraction, energy.ln_1p(), flatness]
}

/// `s_i = sigmoid(w . features_i + b)` for each token.
pub fn score_tokens(tokens: &[Token], weights: &ScorerWeights) -> Vec<f64> {
    tokens
        .iter()
        .map(|t| weights.score(&token_features(t)))
        .collect()
}

/// Fitted weights and the mean cross-entropy after each epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedScorer {
    pub weights: ScorerWeights,
    pub loss_history: Vec<f64>,
}

fn mean_loss(examples: &[([f64; FEATURE_COUNT], bool)], weights: &ScorerWeights) -> f64 {
    examples
        .iter()
        .map(|(f, keep)| {
            let z = weights.logit(f);
            softplus(z) - if *keep { z } else { 0.0 }
        })
        .sum::<f64>()
        / examples.len() as f64
}

/// Logistic regression by full-batch gradient descent on the mean binary
/// cross-entropy, starting from `init`.
pub fn train_scorer(
    examples: &[([f64; FEATURE_COUNT], bool)],
    init: ScorerWeights,
    epochs: usize,
    learning_rate: f64,
) -> Result<TrainedScorer> {
    let positives = examples.iter().filter(|(_, k)| *k).count();
    if positives == 0 || positives == examples.len() {
        return Err(Error::SingleClass);
    }
    if !(learning_rate.is_finite() && learning_rate > 0.0) {
        return Err(Error::param("learning rate must be positive"));
    }
    init.validate()?;
    let mut weights = init;
    let mut loss_history = Vec::with_capacity(epochs);
    let n = examples.len() as f64;
    for _ in 0..epochs {
        let mut grad_w = [0.0; FEATURE_COUNT];
        let mut grad_b = 0.0;
        for (f, keep) in examples {
            let err = weights.score(f) - if *keep { 1.0 } else { 0.0 };
            for (g, x) in grad_w.iter_mut().zip(f) {
                *g += err * x;
            }
            grad_b += err;
        }
        for (w, g) in weights.w.iter_mut().zip(&grad_w) {
            *w -= learning_rate * g / n;
        }
        weights.b -= learning_rate * grad_b / n;
        loss_history.push(mean_loss(examples, &weights));
    }
    Ok(TrainedScorer {
        weights,
        loss_history,
    })
}
