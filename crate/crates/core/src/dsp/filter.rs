//! Second-order IIR sections and forward-backward (zero-phase) filtering.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Direct-form-I biquad with normalised `a0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Biquad {
    fn rbj(cutoff_hz: f64, sample_rate_hz: f64, highpass: bool) -> Self {
        let q = core::f64::consts::FRAC_1_SQRT_2;
        let w0 = 2.0 * PI * cutoff_hz / sample_rate_hz;
        let (sin, cos) = (w0.sin(), w0.cos());
        let alpha = sin / (2.0 * q);
        let a0 = 1.0 + alpha;
        let b = if highpass {
            [(1.0 + cos) / 2.0, -(1.0 + cos), (1.0 + cos) / 2.0]
        } else {
            [(1.0 - cos) / 2.0, 1.0 - cos, (1.0 - cos) / 2.0]
        };
        Biquad {
            b: [b[0] / a0, b[1] / a0, b[2] / a0],
            a: [-2.0 * cos / a0, (1.0 - alpha) / a0],
        }
    }

    /// Second-order Butterworth low-pass.
    pub fn lowpass(cutoff_hz: f64, sample_rate_hz: f64) -> Self {
        Self::rbj(cutoff_hz, sample_rate_hz, false)
    }

    /// Second-order Butterworth high-pass.
    pub fn highpass(cutoff_hz: f64, sample_rate_hz: f64) -> Self {
        Self::rbj(cutoff_hz, sample_rate_hz, true)
    }

    pub fn apply(&self, x: &mut [f64]) {
        let (mut x1, mut x2, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0);
        for v in x.iter_mut() {
            let x0 = *v;
            let y0 = self.b[0] * x0 + self.b[1] * x1 + self.b[2] * x2 - self.a[0] * y1 - self.a[1] * y2;
            x2 = x1;
            x1 = x0;
            y2 = y1;
            y1 = y0;
            *v = y0;
        }
    }
}

const MAX_PAD: usize = 100;

/// Fourth-order band-pass (second-order high-pass at `lo_hz` cascaded with a
/// second-order low-pass at `hi_hz`) run forward and backward.
///
/// A lower edge at or below 0 Hz drops the high-pass section and an upper
/// edge at or above Nyquist drops the low-pass section, so `[0, fs/2]` is
/// the identity.
pub fn bandpass_zero_phase(signal: &[f64], sample_rate_hz: f64, lo_hz: f64, hi_hz: f64) -> Result<Vec<f64>> {
    let nyquist = sample_rate_hz / 2.0;
    if !(lo_hz < hi_hz) || lo_hz < 0.0 || hi_hz > nyquist {
        return Err(Error::param("band edges must satisfy 0 <= lo < hi <= Nyquist"));
    }
    let mut sections = Vec::new();
    if lo_hz > 0.0 {
        sections.push(Biquad::highpass(lo_hz, sample_rate_hz));
    }
    if hi_hz < nyquist {
        sections.push(Biquad::lowpass(hi_hz, sample_rate_hz));
    }
    if sections.is_empty() || signal.len() < 2 {
        return Ok(signal.to_vec());
    }
    let n = signal.len();
    let pad = MAX_PAD.min(n - 1);
    // odd reflection about each end point
    let mut ext = Vec::with_capacity(n + 2 * pad);
    ext.extend((1..=pad).rev().map(|i| 2.0 * signal[0] - signal[i]));
    ext.extend_from_slice(signal);
    ext.extend((1..=pad).map(|i| 2.0 * signal[n - 1] - signal[n - 1 - i]));
    for s in &sections {
        s.apply(&mut ext);
    }
    ext.reverse();
    for s in &sections {
        s.apply(&mut ext);
    }
    ext.reverse();
    Ok(ext[pad..pad + n].to_vec())
}
