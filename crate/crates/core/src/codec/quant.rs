//! Harmonic-preserving scalar quantiser: the step shrinks by `1/(1+alpha)`
//! inside protected bands, which are also coded at the finer bit width.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::Token;
use crate::error::{Error, Result};

/// Base step, protection boost and the two code widths.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuantParams {
    pub delta0: f64,
    pub alpha: f64,
    pub fine_bits: u8,
    pub coarse_bits: u8,
}

impl QuantParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta0.is_finite() && self.delta0 > 0.0) {
            return Err(Error::param("delta0 must be positive and finite"));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::param("alpha must be non-negative and finite"));
        }
        for bits in [self.fine_bits, self.coarse_bits] {
            if !(2..=16).contains(&bits) {
                return Err(Error::param("bit widths must lie in 2..=16"));
            }
        }
        if self.fine_bits < self.coarse_bits {
            return Err(Error::param("fine_bits must be at least coarse_bits"));
        }
        Ok(())
    }

    /// `delta0 / (1 + alpha * [protected])`
    pub fn step(&self, protected: bool) -> f64 {
        if protected {
            self.delta0 / (1.0 + self.alpha)
        } else {
            self.delta0
        }
    }

    pub fn width(&self, protected: bool) -> u8 {
        if protected {
            self.fine_bits
        } else {
            self.coarse_bits
        }
    }
}

/// Largest and smallest code representable in `width` two's-complement bits.
pub(crate) fn code_range(width: u8) -> (i32, i32) {
    let half = 1i32 << (width - 1);
    (-half, half - 1)
}

/// `round(x / step)` (half away from zero), saturated to the signed range of
/// `width` bits. The flag reports saturation.
pub fn quantize_value(x: f64, step: f64, width: u8) -> (i32, bool) {
    let (lo, hi) = code_range(width);
    let q = (x / step).round();
    if q > hi as f64 {
        (hi, true)
    } else if q < lo as f64 {
        (lo, true)
    } else {
        (q as i32, false)
    }
}

pub fn dequantize(code: i32, step: f64) -> f64 {
    code as f64 * step
}

/// Codes and widths for one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedToken {
    pub codes: Vec<i32>,
    pub widths: Vec<u8>,
    pub saturated: usize,
}

pub fn quantize_hp(token: &Token, params: &QuantParams) -> QuantizedToken {
    let mut saturated = 0;
    let mut codes = Vec::with_capacity(token.len());
    let mut widths = Vec::with_capacity(token.len());
    for (&x, &p) in token.coefficients.iter().zip(&token.protected_mask) {
        let width = params.width(p);
        let (code, sat) = quantize_value(x, params.step(p), width);
        saturated += usize::from(sat);
        codes.push(code);
        widths.push(width);
    }
    QuantizedToken {
        codes,
        widths,
        saturated,
    }
}
