use alloc::vec::Vec;

use super::{check_finite, mean};
use crate::error::{Error, Result};

/// Biased autocorrelation of the mean-removed signal, normalised so that
/// `r(0) = 1`. Returns lags `0..=max_lag` (clamped to `len - 1`).
pub fn autocorr_norm(signal: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if signal.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_finite(signal)?;
    let m = mean(signal);
    let centered: Vec<f64> = signal.iter().map(|x| x - m).collect();
    let r0: f64 = centered.iter().map(|x| x * x).sum();
    if r0 <= f64::MIN_POSITIVE * signal.len() as f64 {
        return Err(Error::ZeroVariance);
    }
    let max_lag = max_lag.min(signal.len() - 1);
    Ok((0..=max_lag)
        .map(|lag| {
            let s: f64 = centered[..centered.len() - lag]
                .iter()
                .zip(&centered[lag..])
                .map(|(a, b)| a * b)
                .sum();
            s / r0
        })
        .collect())
}
