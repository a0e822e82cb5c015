use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{check_finite, hann_periodic};
use crate::error::{Error, Result};
use crate::fft::{Complex64, Fft};

/// Segmenting parameters for [`welch_psd`]. Only the Hann taper is offered.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WelchConfig {
    pub segment_len: usize,
    pub overlap_fraction: f64,
}

impl Default for WelchConfig {
    fn default() -> Self {
        WelchConfig {
            segment_len: 512,
            overlap_fraction: 0.5,
        }
    }
}

impl WelchConfig {
    pub fn new(segment_len: usize, overlap_fraction: f64) -> Self {
        WelchConfig {
            segment_len,
            overlap_fraction,
        }
    }

    fn hop(&self) -> usize {
        let hop = (self.segment_len as f64 * (1.0 - self.overlap_fraction)).round() as usize;
        hop.max(1)
    }

    /// Number of segments averaged for a signal of `len` samples.
    pub fn segment_count(&self, len: usize) -> usize {
        if len < self.segment_len {
            0
        } else {
            (len - self.segment_len) / self.hop() + 1
        }
    }
}

/// One-sided power spectral density, amplitude²/Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    pub freqs_hz: Vec<f64>,
    pub power: Vec<f64>,
}

impl PsdEstimate {
    /// Frequency spacing between adjacent bins.
    pub fn resolution_hz(&self) -> f64 {
        if self.freqs_hz.len() < 2 {
            0.0
        } else {
            self.freqs_hz[1] - self.freqs_hz[0]
        }
    }

    pub fn max_freq_hz(&self) -> f64 {
        self.freqs_hz.last().copied().unwrap_or(0.0)
    }

    /// Rectangle-rule integral of the whole estimate.
    pub fn total_power(&self) -> f64 {
        self.power.iter().sum::<f64>() * self.resolution_hz()
    }

    /// Index of the largest bin, lowest index on ties.
    pub fn peak_bin(&self) -> usize {
        argmax(&self.power)
    }

    /// Largest bin within `[lo, hi]` (inclusive, clamped to the estimate).
    pub fn peak_bin_in(&self, lo: usize, hi: usize) -> usize {
        let hi = hi.min(self.power.len().saturating_sub(1));
        let lo = lo.min(hi);
        lo + argmax(&self.power[lo..=hi])
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Welch's averaged, Hann-windowed periodogram.
///
/// Density scaling: a unit-amplitude sine integrates to about 0.5.
pub fn welch_psd(signal: &[f64], sample_rate_hz: f64, config: &WelchConfig) -> Result<PsdEstimate> {
    let seg = config.segment_len;
    if seg == 0 || !seg.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { len: seg });
    }
    if !(0.0..1.0).contains(&config.overlap_fraction) {
        return Err(Error::param("overlap fraction must lie in [0, 1)"));
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::param("sample rate must be positive and finite"));
    }
    if signal.len() < seg {
        return Err(Error::SignalTooShort {
            len: signal.len(),
            required: seg,
        });
    }
    check_finite(signal)?;

    let window = hann_periodic(seg);
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let hop = config.hop();
    let count = config.segment_count(signal.len());
    let bins = seg / 2 + 1;
    let plan = Fft::new(seg);
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex64::new(0.0, 0.0); seg];
    for s in 0..count {
        let start = s * hop;
        for ((b, x), w) in buf.iter_mut().zip(&signal[start..start + seg]).zip(&window) {
            *b = Complex64::new(x * w, 0.0);
        }
        plan.forward(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
    }
    let norm = 1.0 / (sample_rate_hz * window_power * count as f64);
    let power = acc
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let one_sided = if k == 0 || k == seg / 2 { 1.0 } else { 2.0 };
            p * norm * one_sided
        })
        .collect();
    let freqs_hz = (0..bins)
        .map(|k| k as f64 * sample_rate_hz / seg as f64)
        .collect();
    Ok(PsdEstimate { freqs_hz, power })
}
