use alloc::vec::Vec;

use super::check_finite;
use crate::error::{Error, Result};

/// Window length used by the stock configuration.
pub const DEFAULT_WINDOW_LEN: usize = 1024;

/// One fixed-length slice of a real-valued sensor stream.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalWindow {
    samples: Vec<f64>,
    sample_rate_hz: f64,
    start_index: usize,
}

impl SignalWindow {
    /// Validates that the length is a power of two and every sample is finite.
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64, start_index: usize) -> Result<Self> {
        if samples.is_empty() || !samples.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo { len: samples.len() });
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::param("sample rate must be positive and finite"));
        }
        check_finite(&samples)?;
        Ok(SignalWindow {
            samples,
            sample_rate_hz,
            start_index,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn start_index(&self) -> usize {
        self.start_index
    }

    pub fn with_start_index(mut self, start_index: usize) -> Self {
        self.start_index = start_index;
        self
    }

    /// Rejects windows whose length differs from the configured one.
    pub fn expect_len(&self, window_len: usize) -> Result<()> {
        if self.len() != window_len {
            return Err(Error::LengthMismatch {
                expected: window_len,
                actual: self.len(),
            });
        }
        Ok(())
    }
}

/// Orthonormal DCT-II coefficients of one window.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coefficients: Vec<f64>,
    bin_spacing_hz: f64,
}

impl Spectrum {
    pub fn new(coefficients: Vec<f64>, bin_spacing_hz: f64) -> Result<Self> {
        if coefficients.is_empty() || !coefficients.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo {
                len: coefficients.len(),
            });
        }
        if !(bin_spacing_hz.is_finite() && bin_spacing_hz > 0.0) {
            return Err(Error::param("bin spacing must be positive and finite"));
        }
        check_finite(&coefficients)?;
        Ok(Spectrum {
            coefficients,
            bin_spacing_hz,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Nominal frequency spacing, `fs / (2N)`.
    pub fn bin_spacing_hz(&self) -> f64 {
        self.bin_spacing_hz
    }

    /// Sample rate implied by the bin spacing.
    pub fn sample_rate_hz(&self) -> f64 {
        self.bin_spacing_hz * 2.0 * self.len() as f64
    }
}
