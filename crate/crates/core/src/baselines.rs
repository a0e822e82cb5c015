//! Reference codecs and ablations, all emitting [`EncodedFrame`]s so bit
//! counts are comparable.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codec::encoder::encode_window;
use crate::codec::{quantize_value, CodecFamily, EncodeOutcome, EncodedFrame, EncoderConfig, FrameHeader, Selection};
use crate::dsp::{dct2_ortho, SignalWindow};
use crate::error::{Error, Result};
use crate::harmonic::BandClassification;

fn header(family: CodecFamily, fs: f64, n: usize, delta0: f32, bits: u8) -> Result<FrameHeader> {
    if n > 1 << 15 {
        return Err(Error::param("window length must fit the 16-bit header field"));
    }
    let fs = fs.round();
    if !(1.0..=u32::MAX as f64).contains(&fs) {
        return Err(Error::param("sample rate must round to a positive 32-bit integer"));
    }
    Ok(FrameHeader {
        family,
        refine_hint: false,
        sample_rate_hz: fs as u32,
        window_len: n as u16,
        token_len: 1,
        total_tokens: n as u16,
        delta0,
        alpha: 0.0,
        fine_bits: bits,
        coarse_bits: bits,
    })
}

fn check_bits(q: u8) -> Result<()> {
    if (2..=16).contains(&q) {
        Ok(())
    } else {
        Err(Error::param("bit width must lie in 2..=16"))
    }
}

/// Uniform quantisation of the chosen coefficients with
/// `Delta = max|kept| / 2^(q-1)`, stored as a token-length-1 frame.
fn coefficient_frame(window: &SignalWindow, mut kept: Vec<usize>, q: u8, family: CodecFamily) -> Result<EncodedFrame> {
    let c = dct2_ortho(window.samples());
    kept.sort_unstable();
    let peak = kept.iter().fold(0.0f64, |m, &i| m.max(c[i].abs()));
    let step = if peak > 0.0 { peak / (1u32 << (q - 1)) as f64 } else { 1.0 };
    let step = step as f32;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::param("quantiser step is not representable as a positive f32"));
    }
    let codes = kept.iter().map(|&i| quantize_value(c[i], step as f64, q).0).collect();
    Ok(EncodedFrame {
        header: header(family, window.sample_rate_hz(), window.len(), step, q)?,
        band_bitmap: vec![false; window.len()],
        kept_indices: kept.iter().map(|&i| i as u16).collect(),
        codes,
    })
}

/// Keeps the `k` largest-magnitude DCT coefficients (ties: lower index).
/// Side information is `16 k` bits on top of the `k q` payload.
pub fn dct_topk_encode(window: &SignalWindow, k: usize, q: u8) -> Result<EncodedFrame> {
    check_bits(q)?;
    let n = window.len();
    if k == 0 || k > n {
        return Err(Error::param("keep count must lie in 1..=window_len"));
    }
    let c = dct2_ortho(window.samples());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| c[b].abs().total_cmp(&c[a].abs()).then(a.cmp(&b)));
    order.truncate(k);
    coefficient_frame(window, order, q, CodecFamily::DctTopK)
}

/// Keeps `k` coefficients chosen uniformly at random with a fixed seed,
/// standing in for a random-measurement compressed-sensing baseline.
pub fn cs_random_encode(window: &SignalWindow, k: usize, q: u8, seed: u64) -> Result<EncodedFrame> {
    check_bits(q)?;
    let n = window.len();
    if k == 0 || k > n {
        return Err(Error::param("keep count must lie in 1..=window_len"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kept = rand::seq::index::sample(&mut rng, n, k).into_vec();
    coefficient_frame(window, kept, q, CodecFamily::RandomDct)
}

/// The full encoder with `alpha = 0` and `fine_bits` everywhere.
pub fn ablation_no_hpq(
    window: &SignalWindow,
    classification: &BandClassification,
    config: &EncoderConfig,
) -> Result<EncodeOutcome> {
    let cfg = EncoderConfig {
        alpha: 0.0,
        coarse_bits: config.fine_bits,
        ..config.clone()
    };
    cfg.validate()?;
    encode_window(window, classification, &cfg, CodecFamily::HarmonicTokens)
}

/// The full encoder with the score-driven gate replaced by `selection`.
pub fn ablation_no_sats(
    window: &SignalWindow,
    classification: &BandClassification,
    config: &EncoderConfig,
    selection: Selection,
) -> Result<EncodeOutcome> {
    let cfg = EncoderConfig {
        selection,
        ..config.clone()
    };
    cfg.validate()?;
    encode_window(window, classification, &cfg, CodecFamily::HarmonicTokens)
}

/// Eigenvalues below this fraction of the largest count as zero.
const RANK_TOL: f64 = 1e-9;
const PCA_BITS: u8 = 16;

/// Mean-centred projection onto the leading principal directions of a
/// training set.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaCodec {
    pub mean: Vec<f64>,
    /// Orthonormal rows, strongest first.
    pub components: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub sample_rate_hz: f64,
}

impl PcaCodec {
    /// Eigen-decomposes whichever of the covariance or Gram matrix is
    /// smaller.
    pub fn fit(train: &[Vec<f64>], r: usize, sample_rate_hz: f64) -> Result<Self> {
        let m = train.len();
        let Some(first) = train.first() else {
            return Err(Error::EmptyInput);
        };
        let n = first.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if let Some(bad) = train.iter().find(|w| w.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: bad.len(),
            });
        }
        if r > m {
            return Err(Error::param("need at least r training windows"));
        }
        let mut mean = vec![0.0; n];
        for w in train {
            for (a, b) in mean.iter_mut().zip(w) {
                *a += b;
            }
        }
        mean.iter_mut().for_each(|v| *v /= m as f64);
        let x = DMatrix::from_fn(m, n, |i, j| train[i][j] - mean[j]);

        let (values, vectors) = if m < n {
            let gram = &x * x.transpose();
            let eig = SymmetricEigen::new(gram);
            (eig.eigenvalues, eig.eigenvectors)
        } else {
            let cov = x.transpose() * &x;
            let eig = SymmetricEigen::new(cov);
            (eig.eigenvalues, eig.eigenvectors)
        };
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
        let top = values[order[0]].max(0.0);
        let rank = order.iter().filter(|&&i| top > 0.0 && values[i] > RANK_TOL * top).count();
        if r > rank {
            return Err(Error::RankDeficient { requested: r, rank });
        }
        let mut components = Vec::with_capacity(r);
        let mut eigenvalues = Vec::with_capacity(r);
        for &i in order.iter().take(r) {
            let lambda = values[i];
            let v: Vec<f64> = if m < n {
                // right singular vector from the left one: X^T u / sqrt(lambda)
                let u = vectors.column(i);
                let s = lambda.sqrt();
                (0..n).map(|j| (0..m).map(|k| x[(k, j)] * u[k]).sum::<f64>() / s).collect()
            } else {
                vectors.column(i).iter().copied().collect()
            };
            components.push(v);
            eigenvalues.push(lambda);
        }
        Ok(PcaCodec {
            mean,
            components,
            eigenvalues,
            sample_rate_hz,
        })
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn window_len(&self) -> usize {
        self.mean.len()
    }

    /// The same codec restricted to its leading `r` components.
    pub fn truncated(&self, r: usize) -> Result<Self> {
        if r > self.n_components() {
            return Err(Error::RankDeficient {
                requested: r,
                rank: self.n_components(),
            });
        }
        Ok(PcaCodec {
            mean: self.mean.clone(),
            components: self.components[..r].to_vec(),
            eigenvalues: self.eigenvalues[..r].to_vec(),
            sample_rate_hz: self.sample_rate_hz,
        })
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.window_len() {
            return Err(Error::LengthMismatch {
                expected: self.window_len(),
                actual: len,
            });
        }
        Ok(())
    }

    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        Ok(self
            .components
            .iter()
            .map(|v| v.iter().zip(x).zip(&self.mean).map(|((a, b), m)| a * (b - m)).sum())
            .collect())
    }

    /// `mean + sum_i scores_i v_i`; extra components beyond `scores` are
    /// treated as zero.
    pub fn reconstruct(&self, scores: &[f64]) -> Vec<f64> {
        let mut out = self.mean.clone();
        for (s, v) in scores.iter().zip(&self.components) {
            for (o, c) in out.iter_mut().zip(v) {
                *o += s * c;
            }
        }
        out
    }

    /// Scores quantised to 16 bits with the smallest non-saturating step.
    pub fn encode(&self, window: &SignalWindow) -> Result<EncodedFrame> {
        let scores = self.project(window.samples())?;
        let n = self.window_len();
        let peak = scores.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        let top = ((1u32 << (PCA_BITS - 1)) - 1) as f64;
        let step = if peak > 0.0 { (peak / top) as f32 } else { 1.0 };
        let step = if (step as f64) * top < peak {
            f32::from_bits(step.to_bits() + 1)
        } else {
            step
        };
        let codes = scores.iter().map(|&s| quantize_value(s, step as f64, PCA_BITS).0).collect();
        Ok(EncodedFrame {
            header: header(CodecFamily::Pca, window.sample_rate_hz(), n, step, PCA_BITS)?,
            band_bitmap: vec![false; n],
            kept_indices: (0..scores.len() as u16).collect(),
            codes,
        })
    }

    pub fn decode(&self, frame: &EncodedFrame) -> Result<Vec<f64>> {
        if frame.header.family != CodecFamily::Pca {
            return Err(Error::WrongFamily(frame.header.family));
        }
        frame.validate()?;
        self.check_len(frame.window_len())?;
        if frame.kept_count() > self.n_components() {
            return Err(Error::RankDeficient {
                requested: frame.kept_count(),
                rank: self.n_components(),
            });
        }
        let step = frame.header.delta0 as f64;
        let scores: Vec<f64> = frame.codes.iter().map(|&c| c as f64 * step).collect();
        Ok(self.reconstruct(&scores))
    }
}
