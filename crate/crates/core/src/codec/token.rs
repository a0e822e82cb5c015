use alloc::vec::Vec;

use crate::dsp::Spectrum;
use crate::error::{Error, Result};
use crate::harmonic::BandClassification;

/// A contiguous run of `d` spectral coefficients, the unit of selection.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub index: usize,
    pub coefficients: Vec<f64>,
    pub protected_mask: Vec<bool>,
}

impl Token {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }
}

/// Splits a spectrum into `N = len / d` frequency-band tokens in ascending
/// frequency order.
pub fn tokenize(spectrum: &Spectrum, classification: &BandClassification, token_len: usize) -> Result<Vec<Token>> {
    let n = spectrum.len();
    if token_len == 0 || !n.is_multiple_of(token_len) {
        return Err(Error::TokenLength {
            token_len,
            window_len: n,
        });
    }
    if classification.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: classification.len(),
        });
    }
    Ok(spectrum
        .coefficients()
        .chunks_exact(token_len)
        .zip(classification.protected.chunks_exact(token_len))
        .enumerate()
        .map(|(index, (c, p))| Token {
            index,
            coefficients: c.to_vec(),
            protected_mask: p.to_vec(),
        })
        .collect())
}
