//! Deterministic signal-analysis primitives: transforms, spectra,
//! envelopes and correlation measures used by every other module.

mod autocorr;
mod cwt;
mod dct;
mod filter;
mod hilbert;
mod taper;
mod welch;
mod window;

pub use autocorr::autocorr_norm;
pub use cwt::{cwt_morlet, default_scales, scale_to_frequency, CwtTensor, MORLET_OMEGA0};
pub use dct::{dct2, dct2_ortho, idct2, idct2_ortho};
pub use filter::{bandpass_zero_phase, Biquad};
pub use hilbert::{hilbert_envelope, Envelope};
pub use taper::{hann_periodic, sqrt_hann};
pub use welch::{welch_psd, PsdEstimate, WelchConfig};
pub use window::{SignalWindow, Spectrum, DEFAULT_WINDOW_LEN};

use crate::error::{Error, Result};

pub(crate) fn check_finite(samples: &[f64]) -> Result<()> {
    match samples.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFiniteSample { index }),
        None => Ok(()),
    }
}

pub(crate) fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        0.0
    } else {
        x.iter().sum::<f64>() / x.len() as f64
    }
}
