//! Orthonormal DCT-II / DCT-III through an N-point complex FFT (Makhoul's
//! even/odd reordering).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{SignalWindow, Spectrum};
use crate::error::{Error, Result};
use crate::fft::{Complex64, Fft};

/// Forward orthonormal DCT-II of an arbitrary-length slice.
pub fn dct2_ortho(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.div_ceil(2) {
        v[k] = Complex64::new(x[2 * k], 0.0);
    }
    for k in 0..n / 2 {
        v[n - 1 - k] = Complex64::new(x[2 * k + 1], 0.0);
    }
    Fft::new(n).forward(&mut v);
    let dc_scale = (1.0 / n as f64).sqrt();
    let ac_scale = (2.0 / n as f64).sqrt();
    v.iter()
        .enumerate()
        .map(|(k, vk)| {
            let angle = -PI * k as f64 / (2 * n) as f64;
            let rot = Complex64::new(angle.cos(), angle.sin());
            let scale = if k == 0 { dc_scale } else { ac_scale };
            (vk * rot).re * scale
        })
        .collect()
}

/// Inverse of [`dct2_ortho`] (orthonormal DCT-III).
pub fn idct2_ortho(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n == 0 {
        return Vec::new();
    }
    let dc_scale = (1.0 / n as f64).sqrt();
    let ac_scale = (2.0 / n as f64).sqrt();
    // undo the orthonormal scaling to recover the plain DCT-II values
    let raw: Vec<f64> = c
        .iter()
        .enumerate()
        .map(|(k, &ck)| if k == 0 { ck / dc_scale } else { ck / ac_scale })
        .collect();
    let mut v: Vec<Complex64> = (0..n)
        .map(|k| {
            let mirrored = if k == 0 { 0.0 } else { raw[n - k] };
            let angle = PI * k as f64 / (2 * n) as f64;
            Complex64::new(angle.cos(), angle.sin()) * Complex64::new(raw[k], -mirrored)
        })
        .collect();
    Fft::new(n).inverse(&mut v);
    let mut x = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        x[2 * k] = v[k].re;
    }
    for k in 0..n / 2 {
        x[2 * k + 1] = v[n - 1 - k].re;
    }
    x
}

/// Orthonormal DCT-II of a window.
pub fn dct2(window: &SignalWindow) -> Result<Spectrum> {
    let coefficients = dct2_ortho(window.samples());
    let spacing = window.sample_rate_hz() / (2.0 * window.len() as f64);
    Spectrum::new(coefficients, spacing)
}

/// Inverse transform back to a window of the configured length.
pub fn idct2(spectrum: &Spectrum, window_len: usize) -> Result<SignalWindow> {
    if spectrum.len() != window_len {
        return Err(Error::LengthMismatch {
            expected: window_len,
            actual: spectrum.len(),
        });
    }
    let samples = idct2_ortho(spectrum.coefficients());
    SignalWindow::new(samples, spectrum.sample_rate_hz(), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Direct O(N^2) definition, independent of the FFT route.
    fn dct2_direct(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let s: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * (PI * (2 * i + 1) as f64 * k as f64 / (2 * n) as f64).cos())
                    .sum();
                let scale = if k == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
                s * scale
            })
            .collect()
    }

    fn random_vec(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn constant_signal_has_only_dc() {
        let c = dct2_ortho(&[1.0, 1.0, 1.0, 1.0]);
        assert!((c[0] - 2.0).abs() < 1e-12);
        for v in &c[1..] {
            assert!(v.abs() < 1e-12);
        }
        let back = idct2_ortho(&[2.0, 0.0, 0.0, 0.0]);
        for v in back {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn impulse_has_unit_energy() {
        let c = dct2_ortho(&[1.0, 0.0, 0.0, 0.0]);
        let e: f64 = c.iter().map(|v| v * v).sum();
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_spectrum_gives_zero_window() {
        let spec = Spectrum::new(vec![0.0; 16], 10.0).unwrap();
        let w = idct2(&spec, 16).unwrap();
        assert!(w.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn matches_direct_definition() {
        for &n in &[1usize, 2, 3, 8, 15, 64, 256] {
            let x = random_vec(n, n as u64);
            let fast = dct2_ortho(&x);
            let slow = dct2_direct(&x);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-10, "n={n}");
            }
        }
    }

    #[test]
    fn round_trips_within_tolerance() {
        for seed in 0..100 {
            let x = random_vec(1024, seed);
            let c = dct2_ortho(&x);
            let y = idct2_ortho(&c);
            let max_x = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let err = x.iter().zip(&y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-9 * max_x, "seed {seed}: {err}");
            let ex: f64 = x.iter().map(|v| v * v).sum();
            let ec: f64 = c.iter().map(|v| v * v).sum();
            assert!((ex - ec).abs() < 1e-9 * ex);
            // and the other direction
            let back = dct2_ortho(&idct2_ortho(&x));
            let err = x.iter().zip(&back).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-9 * max_x);
        }
    }

    #[test]
    fn non_finite_window_rejected() {
        assert_eq!(
            SignalWindow::new(vec![0.0, f64::NAN, 0.0, 0.0], 1000.0, 0).unwrap_err(),
            Error::NonFiniteSample { index: 1 }
        );
    }

    #[test]
    fn idct2_rejects_wrong_length() {
        let spec = Spectrum::new(vec![0.0; 8], 1.0).unwrap();
        assert!(matches!(idct2(&spec, 16), Err(Error::LengthMismatch { .. })));
    }
}
