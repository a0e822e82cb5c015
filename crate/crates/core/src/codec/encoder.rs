//! Window -> frame: DCT, tokens, scores, top-K gate, harmonic-preserving
//! quantisation and budget shrink.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::frame::{CodecFamily, EncodedFrame, FrameHeader};
use super::quant::{quantize_hp, QuantParams};
use super::scorer::{score_tokens, ScorerWeights};
use super::select::{kept_count, select_tokens};
use super::token::{tokenize, Token};
use crate::dsp::{dct2, SignalWindow};
use crate::error::{Error, Result};
use crate::harmonic::BandClassification;

pub const DEFAULT_TOKEN_LEN: usize = 8;

/// How the per-frame base step `delta0` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum StepRule {
    /// A fixed step for every frame.
    Fixed(f64),
    /// `RMS(coefficients) / divisor`.
    RmsFraction(f64),
    /// The smallest step for which no coefficient of the frame saturates at
    /// its band's width.
    NoSaturation,
}

/// Which tokens survive the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Selection {
    /// Top-K by score.
    Adaptive,
    /// The K lowest-frequency tokens.
    LowestFrequency,
    /// K tokens drawn uniformly with a fixed seed.
    SeededRandom(u64),
}

/// Cap on a frame's payload bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BitBudget {
    pub b_max: u64,
}

impl BitBudget {
    pub fn new(b_max: u64) -> Self {
        BitBudget { b_max }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EncoderConfig {
    pub token_len: usize,
    pub compression_ratio: f64,
    pub step_rule: StepRule,
    pub alpha: f64,
    pub fine_bits: u8,
    pub coarse_bits: u8,
    pub weights: ScorerWeights,
    pub selection: Selection,
    pub budget: Option<BitBudget>,
    pub refine_hint: bool,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig {
            token_len: DEFAULT_TOKEN_LEN,
            compression_ratio: 4.0,
            step_rule: StepRule::NoSaturation,
            alpha: 3.0,
            fine_bits: 8,
            coarse_bits: 4,
            weights: ScorerWeights::default(),
            selection: Selection::Adaptive,
            budget: None,
            refine_hint: false,
        }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.compression_ratio.is_finite() && self.compression_ratio >= 1.0) {
            return Err(Error::param("compression ratio must be finite and at least 1"));
        }
        if self.token_len == 0 {
            return Err(Error::param("token_len must be positive"));
        }
        match self.step_rule {
            StepRule::Fixed(v) | StepRule::RmsFraction(v) if !(v.is_finite() && v > 0.0) => {
                return Err(Error::param("step rule value must be positive and finite"));
            }
            _ => {}
        }
        self.weights.validate()?;
        // delta0 is a placeholder here; only alpha and the widths are checked.
        QuantParams {
            delta0: 1.0,
            alpha: self.alpha,
            fine_bits: self.fine_bits,
            coarse_bits: self.coarse_bits,
        }
        .validate()
    }
}

/// A frame plus what the encoder learned while producing it.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodeOutcome {
    pub frame: EncodedFrame,
    /// Score of every token, kept or not.
    pub scores: Vec<f64>,
    /// Tokens kept by the gate before any budget shrink.
    pub selected: usize,
    /// Coefficients whose code hit the end of its range.
    pub saturated: usize,
}

/// An encoder bound to one band classification.
#[derive(Debug, Clone)]
pub struct Encoder {
    config: EncoderConfig,
    classification: BandClassification,
}

impl Encoder {
    pub fn new(config: EncoderConfig, classification: BandClassification) -> Result<Self> {
        config.validate()?;
        let n = classification.len();
        if n == 0 || !n.is_multiple_of(config.token_len) {
            return Err(Error::TokenLength {
                token_len: config.token_len,
                window_len: n,
            });
        }
        Ok(Encoder {
            config,
            classification,
        })
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    pub fn classification(&self) -> &BandClassification {
        &self.classification
    }

    pub fn encode(&self, window: &SignalWindow) -> Result<EncodeOutcome> {
        encode_window(window, &self.classification, &self.config, CodecFamily::HarmonicTokens)
    }
}

/// Encodes one window with an explicit step (`params.delta0`), the default
/// token length and adaptive selection.
pub fn encode(
    window: &SignalWindow,
    classification: &BandClassification,
    params: &QuantParams,
    weights: &ScorerWeights,
    r: f64,
    budget: Option<BitBudget>,
) -> Result<EncodedFrame> {
    params.validate()?;
    let config = EncoderConfig {
        token_len: DEFAULT_TOKEN_LEN,
        compression_ratio: r,
        step_rule: StepRule::Fixed(params.delta0),
        alpha: params.alpha,
        fine_bits: params.fine_bits,
        coarse_bits: params.coarse_bits,
        weights: *weights,
        selection: Selection::Adaptive,
        budget,
        refine_hint: false,
    };
    config.validate()?;
    encode_window(window, classification, &config, CodecFamily::HarmonicTokens).map(|o| o.frame)
}

fn resolve_delta0(rule: StepRule, coeffs: &[f64], protected: &[bool], alpha: f64, fine: u8, coarse: u8) -> f64 {
    match rule {
        StepRule::Fixed(v) => v,
        StepRule::RmsFraction(div) => {
            let rms = (coeffs.iter().map(|c| c * c).sum::<f64>() / coeffs.len() as f64).sqrt();
            if rms > 0.0 {
                rms / div
            } else {
                1.0
            }
        }
        StepRule::NoSaturation => {
            let (mut prot, mut bg) = (0.0f64, 0.0f64);
            for (&c, &p) in coeffs.iter().zip(protected) {
                if p {
                    prot = prot.max(c.abs());
                } else {
                    bg = bg.max(c.abs());
                }
            }
            let top = |bits: u8| ((1u32 << (bits - 1)) - 1) as f64;
            let d = ((1.0 + alpha) * prot / top(fine)).max(bg / top(coarse));
            if d > 0.0 {
                d
            } else {
                1.0
            }
        }
    }
}

fn token_bits(token: &Token, params: &QuantParams) -> u64 {
    token.protected_mask.iter().map(|&p| params.width(p) as u64).sum()
}

fn choose(scores: &[f64], r: f64, selection: Selection) -> Vec<usize> {
    match selection {
        Selection::Adaptive => select_tokens(scores, r),
        Selection::LowestFrequency => (0..kept_count(scores.len(), r)).collect(),
        Selection::SeededRandom(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = kept_count(scores.len(), r);
            let mut kept = rand::seq::index::sample(&mut rng, scores.len(), k).into_vec();
            kept.sort_unstable();
            kept
        }
    }
}

/// Drops the lowest-scoring kept tokens (ties: higher index first) until the
/// payload fits.
fn shrink_to_budget(kept: &mut Vec<usize>, bits: &[u64], scores: &[f64], b_max: u64) {
    let mut total: u64 = kept.iter().map(|&i| bits[i]).sum();
    if total <= b_max {
        return;
    }
    let mut order = kept.clone();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(b.cmp(&a)));
    let mut dropped = Vec::new();
    for i in order {
        if total <= b_max {
            break;
        }
        total -= bits[i];
        dropped.push(i);
    }
    kept.retain(|i| !dropped.contains(i));
}

pub(crate) fn encode_window(
    window: &SignalWindow,
    classification: &BandClassification,
    config: &EncoderConfig,
    family: CodecFamily,
) -> Result<EncodeOutcome> {
    let n = window.len();
    if classification.len() != n {
        return Err(Error::HeaderMismatch);
    }
    if n > 1 << 15 {
        return Err(Error::param("window length must fit the 16-bit header field"));
    }
    let fs = window.sample_rate_hz().round();
    if !(1.0..=u32::MAX as f64).contains(&fs) {
        return Err(Error::param("sample rate must round to a positive 32-bit integer"));
    }
    let spectrum = dct2(window)?;
    let tokens = tokenize(&spectrum, classification, config.token_len)?;

    let delta0 = resolve_delta0(
        config.step_rule,
        spectrum.coefficients(),
        &classification.protected,
        config.alpha,
        config.fine_bits,
        config.coarse_bits,
    );
    // The decoder only sees the f32 header values, so quantise with those.
    let delta0 = delta0 as f32;
    let alpha = config.alpha as f32;
    if !(delta0.is_finite() && delta0 > 0.0) {
        return Err(Error::param("delta0 is not representable as a positive f32"));
    }
    let params = QuantParams {
        delta0: delta0 as f64,
        alpha: alpha as f64,
        fine_bits: config.fine_bits,
        coarse_bits: config.coarse_bits,
    };

    let scores = score_tokens(&tokens, &config.weights);
    let mut kept = choose(&scores, config.compression_ratio, config.selection);
    let selected = kept.len();

    if let Some(budget) = config.budget {
        let min_bits = (config.token_len as u64) * config.coarse_bits as u64;
        if budget.b_max < min_bits {
            return Err(Error::BudgetInfeasible {
                b_max: budget.b_max,
                min_bits,
            });
        }
        let bits: Vec<u64> = tokens.iter().map(|t| token_bits(t, &params)).collect();
        shrink_to_budget(&mut kept, &bits, &scores, budget.b_max);
    }

    let mut codes = Vec::with_capacity(kept.len() * config.token_len);
    let mut saturated = 0;
    for &i in &kept {
        let q = quantize_hp(&tokens[i], &params);
        saturated += q.saturated;
        codes.extend(q.codes);
    }

    let frame = EncodedFrame {
        header: FrameHeader {
            family,
            refine_hint: config.refine_hint,
            sample_rate_hz: fs as u32,
            window_len: n as u16,
            token_len: config.token_len as u16,
            total_tokens: tokens.len() as u16,
            delta0,
            alpha,
            fine_bits: config.fine_bits,
            coarse_bits: config.coarse_bits,
        },
        band_bitmap: classification.protected.clone(),
        kept_indices: kept.iter().map(|&i| i as u16).collect(),
        codes,
    };
    Ok(EncodeOutcome {
        frame,
        scores,
        selected,
        saturated,
    })
}
