//! Reconstruction fidelity and physics-consistency measures.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::dsp::{
    autocorr_norm, bandpass_zero_phase, cwt_morlet, default_scales, energy, hilbert_envelope, mean, welch_psd,
    WelchConfig,
};
use crate::error::{Error, Result};
use crate::harmonic::{scr_band_energies, HarmonicMap};

/// Reported SNR when the reconstruction error is exactly zero.
pub const SNR_CAP_DB: f64 = 300.0;

fn same_len(x: &[f64], xhat: &[f64]) -> Result<()> {
    if x.len() != xhat.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: xhat.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

fn error_energy(x: &[f64], xhat: &[f64]) -> f64 {
    x.iter().zip(xhat).map(|(a, b)| (a - b) * (a - b)).sum()
}

fn reference_energy(x: &[f64]) -> Result<f64> {
    let e = energy(x);
    if e == 0.0 {
        Err(Error::AllZeroReference)
    } else {
        Ok(e)
    }
}

/// `10 log10(sum x^2 / sum (x - xhat)^2)`, capped at [`SNR_CAP_DB`].
pub fn snr(x: &[f64], xhat: &[f64]) -> Result<f64> {
    same_len(x, xhat)?;
    let sig = reference_energy(x)?;
    let err = error_energy(x, xhat);
    if err == 0.0 {
        return Ok(SNR_CAP_DB);
    }
    Ok((10.0 * (sig / err).log10()).min(SNR_CAP_DB))
}

/// Percent root-mean-square difference `100 ||x - xhat|| / ||x||`.
pub fn prd(x: &[f64], xhat: &[f64]) -> Result<f64> {
    same_len(x, xhat)?;
    let sig = reference_energy(x)?;
    Ok(100.0 * (error_energy(x, xhat) / sig).sqrt())
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Diagnostic-band energy (carriers and sidebands) over broadband energy.
pub fn scr_consistency(x: &[f64], sample_rate_hz: f64, map: &HarmonicMap, welch: &WelchConfig) -> Result<f64> {
    let psd = welch_psd(x, sample_rate_hz, welch)?;
    let e = scr_band_energies(&psd, map)?;
    Ok(ratio(e.carrier + e.sideband, e.broadband))
}

/// Sideband energy over carrier energy.
pub fn scr_sideband(x: &[f64], sample_rate_hz: f64, map: &HarmonicMap, welch: &WelchConfig) -> Result<f64> {
    let psd = welch_psd(x, sample_rate_hz, welch)?;
    let e = scr_band_energies(&psd, map)?;
    Ok(ratio(e.sideband, e.carrier))
}

fn centered_norm(x: &[f64]) -> Result<(Vec<f64>, f64)> {
    let m = mean(x);
    let c: Vec<f64> = x.iter().map(|v| v - m).collect();
    let norm = energy(&c).sqrt();
    if norm <= f64::MIN_POSITIVE {
        return Err(Error::ZeroVariance);
    }
    Ok((c, norm))
}

/// `1 - rho(x, xhat)` with Pearson's correlation; lies in `[0, 2]`.
pub fn gda_loss(x: &[f64], xhat: &[f64]) -> Result<f64> {
    same_len(x, xhat)?;
    let (a, na) = centered_norm(x)?;
    let (b, nb) = centered_norm(xhat)?;
    let rho = a.iter().zip(&b).map(|(p, q)| p * q).sum::<f64>() / (na * nb);
    Ok(1.0 - rho.clamp(-1.0, 1.0))
}

/// Four octave bands from Nyquist/16 up to Nyquist, as five edges.
pub fn default_mec_edges(sample_rate_hz: f64) -> Vec<f64> {
    let ny = sample_rate_hz / 2.0;
    vec![ny / 16.0, ny / 8.0, ny / 4.0, ny / 2.0, ny]
}

fn mean_sq_diff(a: &[f64], b: &[f64]) -> f64 {
    error_energy(a, b) / a.len() as f64
}

/// Mean over bands of the envelope MSE after a zero-phase band-pass over
/// `[edges[s], edges[s + 1]]`.
pub fn mec_loss(x: &[f64], xhat: &[f64], sample_rate_hz: f64, edges: &[f64]) -> Result<f64> {
    same_len(x, xhat)?;
    if edges.len() < 2 {
        return Err(Error::EmptyInput);
    }
    if edges.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("band edges must be strictly ascending"));
    }
    let mut total = 0.0;
    for band in edges.windows(2) {
        let ex = hilbert_envelope(&bandpass_zero_phase(x, sample_rate_hz, band[0], band[1])?)?;
        let ey = hilbert_envelope(&bandpass_zero_phase(xhat, sample_rate_hz, band[0], band[1])?)?;
        total += mean_sq_diff(&ex.values, &ey.values);
    }
    Ok(total / (edges.len() - 1) as f64)
}

/// Mean squared difference of Morlet CWT magnitudes over `scales`.
pub fn cwt_loss_with(x: &[f64], xhat: &[f64], sample_rate_hz: f64, scales: &[f64]) -> Result<f64> {
    same_len(x, xhat)?;
    let a = cwt_morlet(x, sample_rate_hz, scales)?;
    let b = cwt_morlet(xhat, sample_rate_hz, scales)?;
    let sum: f64 = a
        .coefficients
        .iter()
        .zip(&b.coefficients)
        .map(|(ra, rb)| error_energy(ra, rb))
        .sum();
    Ok(sum / (scales.len() * x.len()) as f64)
}

/// [`cwt_loss_with`] on the default 30-scale grid.
pub fn cwt_loss(x: &[f64], xhat: &[f64], sample_rate_hz: f64) -> Result<f64> {
    cwt_loss_with(x, xhat, sample_rate_hz, &default_scales(sample_rate_hz)?)
}

/// Mean squared difference of normalised autocorrelations over lags
/// `0..=max_lag`.
pub fn ac_loss(x: &[f64], xhat: &[f64], max_lag: usize) -> Result<f64> {
    same_len(x, xhat)?;
    let a = autocorr_norm(x, max_lag)?;
    let b = autocorr_norm(xhat, max_lag)?;
    Ok(mean_sq_diff(&a, &b))
}

/// Analysis settings shared by every report.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsConfig {
    pub sample_rate_hz: f64,
    pub welch: WelchConfig,
    pub mec_edges: Vec<f64>,
    pub ac_max_lag: usize,
    pub cwt_scales: Vec<f64>,
}

impl MetricsConfig {
    pub fn new(sample_rate_hz: f64) -> Result<Self> {
        Ok(MetricsConfig {
            sample_rate_hz,
            welch: WelchConfig::default(),
            mec_edges: default_mec_edges(sample_rate_hz),
            ac_max_lag: 64,
            cwt_scales: default_scales(sample_rate_hz)?,
        })
    }

    /// The Welch settings, with the segment shortened to the largest power
    /// of two that fits a signal of `len` samples.
    pub fn welch_for(&self, len: usize) -> WelchConfig {
        let mut w = self.welch;
        if len > 0 && w.segment_len > len {
            w.segment_len = 1 << (usize::BITS - 1 - len.leading_zeros());
        }
        w
    }
}

/// Per-signal fidelity bundle. The SCR fields describe the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsReport {
    pub snr_db: f64,
    pub prd_percent: f64,
    pub scr_consistency: f64,
    pub scr_sideband: f64,
    pub gda_loss: f64,
    pub mec_loss: f64,
    pub cwt_loss: f64,
    pub ac_loss: f64,
    /// Plain mean squared error, used by [`composite`]; not serialised.
    #[cfg_attr(feature = "serde", serde(skip))]
    pub mse: f64,
}

/// Computes every metric of `xhat` against `x`. A constant reconstruction
/// counts as uncorrelated (`gda_loss = 1`) with a white autocorrelation.
pub fn evaluate(x: &[f64], xhat: &[f64], map: &HarmonicMap, cfg: &MetricsConfig) -> Result<MetricsReport> {
    same_len(x, xhat)?;
    let fs = cfg.sample_rate_hz;
    let welch = cfg.welch_for(x.len());
    let xhat_flat = centered_norm(xhat).is_err();
    let gda = if xhat_flat { 1.0 } else { gda_loss(x, xhat)? };
    let ac = if xhat_flat {
        let a = autocorr_norm(x, cfg.ac_max_lag)?;
        let mut white = vec![0.0; a.len()];
        white[0] = 1.0;
        mean_sq_diff(&a, &white)
    } else {
        ac_loss(x, xhat, cfg.ac_max_lag)?
    };
    Ok(MetricsReport {
        snr_db: snr(x, xhat)?,
        prd_percent: prd(x, xhat)?,
        scr_consistency: scr_consistency(xhat, fs, map, &welch)?,
        scr_sideband: scr_sideband(xhat, fs, map, &welch)?,
        gda_loss: gda,
        mec_loss: mec_loss(x, xhat, fs, &cfg.mec_edges)?,
        cwt_loss: cwt_loss_with(x, xhat, fs, &cfg.cwt_scales)?,
        ac_loss: ac,
        mse: error_energy(x, xhat) / x.len() as f64,
    })
}

/// Weights of the composite objective.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LossWeights {
    pub mse: f64,
    pub gda: f64,
    pub mec: f64,
    pub cwt: f64,
    pub ac: f64,
}

/// `lambda_mse MSE + lambda_gda L_gda + lambda_mec L_mec + lambda_cwt L_cwt + lambda_ac L_ac`
pub fn composite(report: &MetricsReport, weights: &LossWeights) -> f64 {
    weights.mse * report.mse
        + weights.gda * report.gda_loss
        + weights.mec * report.mec_loss
        + weights.cwt * report.cwt_loss
        + weights.ac * report.ac_loss
}
