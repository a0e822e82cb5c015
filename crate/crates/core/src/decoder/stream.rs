//! Tapered framing at half-window hop and its overlap-add inverse.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::synthesize_frame;
use crate::codec::{EncodeOutcome, EncodedFrame, Encoder};
use crate::dsp::{sqrt_hann, SignalWindow};
use crate::error::{Error, Result};

/// Cuts `signal` into sqrt-Hann tapered windows at hop `window_len / 2`.
/// Samples past the last full window are not covered.
pub fn analysis_windows(signal: &[f64], sample_rate_hz: f64, window_len: usize) -> Result<Vec<SignalWindow>> {
    if window_len < 2 || !window_len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { len: window_len });
    }
    if signal.len() < window_len {
        return Err(Error::SignalTooShort {
            len: signal.len(),
            required: window_len,
        });
    }
    let hop = window_len / 2;
    let taper = sqrt_hann(window_len);
    let count = (signal.len() - window_len) / hop + 1;
    (0..count)
        .map(|i| {
            let start = i * hop;
            let samples = signal[start..start + window_len]
                .iter()
                .zip(&taper)
                .map(|(x, w)| x * w)
                .collect();
            SignalWindow::new(samples, sample_rate_hz, start)
        })
        .collect()
}

/// Samples reconstructed by two overlapping windows, where the taper pair
/// sums to one. The first and last half window are warm-up.
pub fn stream_interior(frame_count: usize, window_len: usize) -> Range<usize> {
    let hop = window_len / 2;
    if frame_count == 0 {
        return 0..0;
    }
    hop..frame_count * hop
}

/// Applies the synthesis taper to each window and sums them at
/// `hop = window_len / 2`. Window `i` starts at `i * hop`.
pub fn overlap_add(windows: &[SignalWindow], hop: usize) -> Result<Vec<f64>> {
    let Some(first) = windows.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    if hop * 2 != n {
        return Err(Error::param("overlap-add hop must be half the window length"));
    }
    for w in windows {
        if w.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: w.len(),
            });
        }
    }
    let taper = sqrt_hann(n);
    let mut out = vec![0.0; (windows.len() - 1) * hop + n];
    for (i, w) in windows.iter().enumerate() {
        let dst = &mut out[i * hop..i * hop + n];
        for ((o, x), t) in dst.iter_mut().zip(w.samples()).zip(&taper) {
            *o += x * t;
        }
    }
    Ok(out)
}

/// Encodes a whole stream with tapered half-overlapping windows.
pub fn encode_stream(signal: &[f64], sample_rate_hz: f64, encoder: &Encoder) -> Result<Vec<EncodeOutcome>> {
    let n = encoder.classification().len();
    analysis_windows(signal, sample_rate_hz, n)?
        .iter()
        .map(|w| encoder.encode(w))
        .collect()
}

/// Decodes frames in stream order; `None` marks a frame lost in transit and
/// contributes silence.
pub fn decode_stream(frames: &[Option<EncodedFrame>]) -> Result<Vec<f64>> {
    let Some(reference) = frames.iter().flatten().next() else {
        return Err(Error::EmptyInput);
    };
    let n = reference.window_len();
    let fs = reference.header.sample_rate_hz as f64;
    let windows = frames
        .iter()
        .map(|f| match f {
            Some(frame) => synthesize_frame(frame),
            None => SignalWindow::new(vec![0.0; n], fs, 0),
        })
        .collect::<Result<Vec<_>>>()?;
    overlap_add(&windows, n / 2)
}
