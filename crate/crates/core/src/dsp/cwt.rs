use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::check_finite;
use crate::error::{Error, Result};
use crate::fft::{Complex64, Fft};

/// Morlet centre frequency (rad).
pub const MORLET_OMEGA0: f64 = 6.0;

/// Magnitudes of a continuous wavelet transform, one row per scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CwtTensor {
    pub scales: Vec<f64>,
    pub coefficients: Vec<Vec<f64>>,
}

impl CwtTensor {
    pub fn signal_len(&self) -> usize {
        self.coefficients.first().map_or(0, Vec::len)
    }

    /// Row index with the largest magnitude anywhere in it.
    pub fn peak_scale_index(&self) -> usize {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, row) in self.coefficients.iter().enumerate() {
            let m = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if m > best.1 {
                best = (i, m);
            }
        }
        best.0
    }
}

/// Frequency in Hz matched by a Morlet scale given in seconds.
pub fn scale_to_frequency(scale_s: f64) -> f64 {
    MORLET_OMEGA0 / (2.0 * PI * scale_s)
}

/// Thirty log-spaced scales covering 10 Hz up to a quarter of the sample
/// rate, returned in ascending order.
pub fn default_scales(sample_rate_hz: f64) -> Result<Vec<f64>> {
    const COUNT: usize = 30;
    let f_lo = 10.0;
    let f_hi = sample_rate_hz / 4.0;
    if !(f_hi > f_lo) {
        return Err(Error::param("sample rate too low for the default CWT grid"));
    }
    let ratio = (f_hi / f_lo).ln();
    Ok((0..COUNT)
        .map(|i| {
            let f = f_hi * (-(ratio * i as f64) / (COUNT - 1) as f64).exp();
            MORLET_OMEGA0 / (2.0 * PI * f)
        })
        .collect())
}

/// Morlet CWT magnitude computed per scale in the frequency domain.
///
/// The analytic wavelet is normalised so a tone of amplitude `A` reaches
/// magnitude `A` at its matched scale.
pub fn cwt_morlet(signal: &[f64], sample_rate_hz: f64, scales: &[f64]) -> Result<CwtTensor> {
    if scales.is_empty() {
        return Err(Error::param("empty scale list"));
    }
    if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::param("scales must be positive"));
    }
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("scales must be strictly ascending"));
    }
    check_finite(signal)?;
    let n = signal.len();
    if n == 0 {
        return Ok(CwtTensor {
            scales: scales.to_vec(),
            coefficients: vec![Vec::new(); scales.len()],
        });
    }
    let m = (2 * n).next_power_of_two();
    let plan = Fft::new(m);
    let mut spectrum = vec![Complex64::new(0.0, 0.0); m];
    for (s, &x) in spectrum.iter_mut().zip(signal) {
        *s = Complex64::new(x, 0.0);
    }
    plan.forward(&mut spectrum);

    let mut work = vec![Complex64::new(0.0, 0.0); m];
    let coefficients = scales
        .iter()
        .map(|&scale| {
            for (k, w) in work.iter_mut().enumerate() {
                *w = if k >= 1 && k < m / 2 {
                    let omega = 2.0 * PI * k as f64 * sample_rate_hz / m as f64;
                    let d = scale * omega - MORLET_OMEGA0;
                    spectrum[k] * (2.0 * (-0.5 * d * d).exp())
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            plan.inverse(&mut work);
            work[..n].iter().map(|c| c.norm()).collect()
        })
        .collect();
    Ok(CwtTensor {
        scales: scales.to_vec(),
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(freq: f64, fs: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| (2.0 * PI * freq * i as f64 / fs).sin()).collect()
    }

    #[test]
    fn zero_signal_gives_zero_tensor() {
        let t = cwt_morlet(&[0.0; 128], 1000.0, &[0.01, 0.02]).unwrap();
        assert_eq!(t.coefficients.len(), 2);
        assert!(t.coefficients.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn peak_scale_matches_tone() {
        let fs = 8000.0;
        let f0 = 440.0;
        // dense grid so the nearest scale is well within tolerance
        let scales: Vec<f64> = (0..120)
            .map(|i| {
                let f = 2000.0 * (50.0f64 / 2000.0).powf(i as f64 / 119.0);
                MORLET_OMEGA0 / (2.0 * PI * f)
            })
            .collect();
        let t = cwt_morlet(&tone(f0, fs, 2048), fs, &scales).unwrap();
        let f = scale_to_frequency(t.scales[t.peak_scale_index()]);
        assert!((f - f0).abs() <= 0.1 * f0, "{f}");
        // amplitude calibration away from the edges
        let row = &t.coefficients[t.peak_scale_index()];
        assert!((row[1024] - 1.0).abs() < 0.05, "{}", row[1024]);
    }

    #[test]
    fn linear_in_amplitude() {
        let fs = 1000.0;
        let x = tone(37.0, fs, 300);
        let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let scales = default_scales(fs).unwrap();
        let a = cwt_morlet(&x, fs, &scales).unwrap();
        let b = cwt_morlet(&x2, fs, &scales).unwrap();
        for (ra, rb) in a.coefficients.iter().zip(&b.coefficients) {
            for (p, q) in ra.iter().zip(rb) {
                assert!((2.0 * p - q).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn default_grid_is_ascending() {
        let s = default_scales(20_000.0).unwrap();
        assert_eq!(s.len(), 30);
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        assert!((scale_to_frequency(s[0]) - 5000.0).abs() < 1e-6);
        assert!((scale_to_frequency(s[29]) - 10.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_empty_or_unsorted_scales() {
        assert!(cwt_morlet(&[1.0; 8], 100.0, &[]).is_err());
        assert!(cwt_morlet(&[1.0; 8], 100.0, &[0.2, 0.1]).is_err());
    }
}
