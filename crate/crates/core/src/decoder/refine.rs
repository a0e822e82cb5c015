//! Physics-projection refinement: pull the protected spectrum of a decoded
//! signal toward the transmitted protected coefficients.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::codec::EncodedFrame;
use crate::dsp::{dct2_ortho, idct2_ortho, sqrt_hann};
use crate::error::{Error, Result};
use crate::harmonic::BandClassification;

/// Step schedule for `x <- x + eta_k * alpha_mix * (p - x)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RefineConfig {
    pub k_steps: usize,
    pub eta: Vec<f64>,
    pub alpha_mix: f64,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig::constant(4, 0.5, 1.0)
    }
}

impl RefineConfig {
    pub fn constant(k_steps: usize, eta: f64, alpha_mix: f64) -> Self {
        RefineConfig {
            k_steps,
            eta: vec![eta; k_steps],
            alpha_mix,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eta.len() != self.k_steps {
            return Err(Error::param("eta schedule length must equal k_steps"));
        }
        if !(self.alpha_mix.is_finite() && self.alpha_mix >= 0.0) {
            return Err(Error::param("alpha_mix must be non-negative and finite"));
        }
        let mut max_eta = 0.0f64;
        for &e in &self.eta {
            if !(e > 0.0 && e <= 1.0) {
                return Err(Error::param("eta values must lie in (0, 1]"));
            }
            max_eta = max_eta.max(e);
        }
        if self.alpha_mix * max_eta > 1.0 {
            return Err(Error::param("alpha_mix * max(eta) must not exceed 1"));
        }
        Ok(())
    }

    fn is_identity(&self) -> bool {
        self.k_steps == 0 || self.alpha_mix == 0.0
    }
}

/// Decoded values of the protected coefficients a frame carried.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionTargets {
    pub window_len: usize,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl ProjectionTargets {
    /// Targets are the kept coefficients that `classification` marks
    /// protected.
    pub fn from_frame(frame: &EncodedFrame, classification: &BandClassification) -> Result<Self> {
        if frame.band_bitmap != classification.protected {
            return Err(Error::HeaderMismatch);
        }
        frame.validate()?;
        let decoded = frame.dequantized_coefficients();
        let indices: Vec<usize> = frame
            .kept_coefficients()
            .filter(|&i| classification.protected[i])
            .collect();
        let values = indices.iter().map(|&i| decoded[i]).collect();
        Ok(ProjectionTargets {
            window_len: frame.window_len(),
            indices,
            values,
        })
    }

    fn own(frame: &EncodedFrame) -> Result<Self> {
        let cls = BandClassification {
            protected: frame.band_bitmap.clone(),
        };
        Self::from_frame(frame, &cls)
    }
}

/// `||protected(spec(x)) - targets||_2`
pub fn protected_deviation(x: &[f64], targets: &ProjectionTargets) -> Result<f64> {
    if x.len() != targets.window_len {
        return Err(Error::LengthMismatch {
            expected: targets.window_len,
            actual: x.len(),
        });
    }
    let c = dct2_ortho(x);
    Ok(targets
        .indices
        .iter()
        .zip(&targets.values)
        .map(|(&i, t)| (c[i] - t).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Runs the refinement loop on one window. The projector keeps `xhat`'s
/// spectrum and replaces the targeted coefficients, so each step shrinks the
/// protected deviation by `1 - eta_k * alpha_mix`.
pub fn pc_refine(xhat: &[f64], targets: &ProjectionTargets, cfg: &RefineConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if xhat.len() != targets.window_len {
        return Err(Error::LengthMismatch {
            expected: targets.window_len,
            actual: xhat.len(),
        });
    }
    if cfg.is_identity() {
        return Ok(xhat.to_vec());
    }
    let c = dct2_ortho(xhat);
    let mut delta = vec![0.0; xhat.len()];
    for (&i, &t) in targets.indices.iter().zip(&targets.values) {
        let mut cur = c[i];
        for &eta in &cfg.eta {
            cur += eta * cfg.alpha_mix * (t - cur);
        }
        delta[i] = cur - c[i];
    }
    let correction = idct2_ortho(&delta);
    Ok(xhat.iter().zip(&correction).map(|(x, d)| x + d).collect())
}

/// Per-frame residuals of an overlap-added stream against the frames'
/// protected targets.
fn stream_residuals(x: &[f64], targets: &[Option<ProjectionTargets>], taper: &[f64]) -> Vec<Option<Vec<f64>>> {
    let n = taper.len();
    let hop = n / 2;
    targets
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let t = t.as_ref()?;
            let start = k * hop;
            let seg: Vec<f64> = x.get(start..start + n)?.iter().zip(taper).map(|(a, w)| a * w).collect();
            let c = dct2_ortho(&seg);
            let mut r = vec![0.0; n];
            for (&i, &v) in t.indices.iter().zip(&t.values) {
                r[i] = v - c[i];
            }
            Some(r)
        })
        .collect()
}

fn stream_targets(frames: &[Option<EncodedFrame>]) -> Result<(usize, Vec<Option<ProjectionTargets>>)> {
    let n = frames
        .iter()
        .flatten()
        .next()
        .map(|f| f.window_len())
        .ok_or(Error::EmptyInput)?;
    let targets = frames
        .iter()
        .map(|f| match f {
            Some(frame) if frame.window_len() == n => ProjectionTargets::own(frame).map(Some),
            Some(frame) => Err(Error::LengthMismatch {
                expected: n,
                actual: frame.window_len(),
            }),
            None => Ok(None),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((n, targets))
}

/// Total protected deviation of a stream, summed over its frames.
pub fn stream_deviation(x: &[f64], frames: &[Option<EncodedFrame>]) -> Result<f64> {
    let (n, targets) = stream_targets(frames)?;
    let taper = sqrt_hann(n);
    Ok(stream_residuals(x, &targets, &taper)
        .iter()
        .flatten()
        .map(|r| r.iter().map(|v| v * v).sum::<f64>())
        .sum::<f64>()
        .sqrt())
}

/// Refinement for an overlap-added stream: each step re-analyses every frame
/// with the taper, and adds back the tapered inverse of its protected
/// residual. Because the squared tapers sum to one, the step is a Landweber
/// iteration with unit-bounded gain.
pub fn refine_stream(stream: &[f64], frames: &[Option<EncodedFrame>], cfg: &RefineConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if cfg.is_identity() {
        return Ok(stream.to_vec());
    }
    let (n, targets) = stream_targets(frames)?;
    let taper = sqrt_hann(n);
    let hop = n / 2;
    let mut x = stream.to_vec();
    for &eta in &cfg.eta {
        let gain = eta * cfg.alpha_mix;
        let mut correction = vec![0.0; x.len()];
        for (k, r) in stream_residuals(&x, &targets, &taper).into_iter().enumerate() {
            let Some(r) = r else { continue };
            let back = idct2_ortho(&r);
            let start = k * hop;
            for ((c, b), w) in correction[start..start + n].iter_mut().zip(&back).zip(&taper) {
                *c += b * w;
            }
        }
        for (xi, c) in x.iter_mut().zip(&correction) {
            *xi += gain * c;
        }
    }
    Ok(x)
}
