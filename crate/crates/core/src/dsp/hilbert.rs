use alloc::vec::Vec;

use super::check_finite;
use crate::error::{Error, Result};
use crate::fft::{Complex64, Fft};

/// Magnitude of the analytic signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub values: Vec<f64>,
}

/// Envelope through the FFT analytic signal: keep DC and Nyquist, double the
/// positive frequencies, zero the negative ones.
pub fn hilbert_envelope(signal: &[f64]) -> Result<Envelope> {
    let n = signal.len();
    if !n.is_multiple_of(2) {
        return Err(Error::OddLength { len: n });
    }
    check_finite(signal)?;
    if n == 0 {
        return Ok(Envelope { values: Vec::new() });
    }
    let plan = Fft::new(n);
    let mut buf: Vec<Complex64> = signal.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    plan.forward(&mut buf);
    for v in &mut buf[1..n / 2] {
        *v *= 2.0;
    }
    for v in &mut buf[n / 2 + 1..] {
        *v = Complex64::new(0.0, 0.0);
    }
    plan.inverse(&mut buf);
    Ok(Envelope {
        values: buf.iter().map(|c| c.norm()).collect(),
    })
}
