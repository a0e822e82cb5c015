//! Band-energy features and a nearest-centroid classifier used to check that
//! reconstructions keep fault-relevant content.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::dsp::{energy, mean, welch_psd, WelchConfig};
use crate::error::{Error, Result};
use crate::harmonic::{line_energies, HarmonicMap};

/// Feature layout: one energy per carrier, one per sideband (map order), then
/// `scr_consistency`, `scr_sideband`, `rms`, `kurtosis`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureVector {
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Harmonic map and PSD settings for feature extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureExtractor {
    pub map: HarmonicMap,
    pub sample_rate_hz: f64,
    pub welch: WelchConfig,
}

impl FeatureExtractor {
    /// 256-point segments with 50% overlap: seven averaged periodograms per
    /// 1024-sample window, which keeps band energies stable across the
    /// modulation phase.
    pub fn new(map: HarmonicMap, sample_rate_hz: f64) -> Self {
        FeatureExtractor {
            map,
            sample_rate_hz,
            welch: WelchConfig::new(256, 0.5),
        }
    }

    pub fn feature_len(&self) -> usize {
        self.map.carriers_hz.len() + self.map.sidebands_hz.len() + 4
    }

    pub fn extract(&self, signal: &[f64]) -> Result<FeatureVector> {
        if signal.is_empty() {
            return Err(Error::EmptyInput);
        }
        let m = mean(signal);
        let centered: Vec<f64> = signal.iter().map(|x| x - m).collect();
        let m2 = energy(&centered) / signal.len() as f64;
        if m2 <= f64::MIN_POSITIVE {
            return Err(Error::ZeroVariance);
        }
        let m4 = centered.iter().map(|x| x.powi(4)).sum::<f64>() / signal.len() as f64;

        let mut welch = self.welch;
        if welch.segment_len > signal.len() {
            welch.segment_len = 1 << (usize::BITS - 1 - signal.len().leading_zeros());
        }
        let psd = welch_psd(signal, self.sample_rate_hz, &welch)?;
        let lines = line_energies(&psd, &self.map)?;
        let nc = self.map.carriers_hz.len();
        let carrier: f64 = lines[..nc].iter().sum();
        let sideband: f64 = lines[nc..].iter().sum();
        let total = psd.total_power();
        let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };

        let mut values = lines;
        values.push(ratio(carrier + sideband, total));
        values.push(ratio(sideband, carrier));
        values.push((energy(signal) / signal.len() as f64).sqrt());
        values.push(m4 / (m2 * m2));
        Ok(FeatureVector { values })
    }
}

/// [`FeatureExtractor::extract`] with the default settings.
pub fn extract_features(signal: &[f64], sample_rate_hz: f64, map: &HarmonicMap) -> Result<FeatureVector> {
    FeatureExtractor::new(map.clone(), sample_rate_hz).extract(signal)
}

/// Class centroids in z-scored feature space.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CentroidModel {
    /// Sorted ascending; ties in distance go to the earlier label.
    pub labels: Vec<String>,
    pub centroids: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

impl CentroidModel {
    /// Fits normalisation statistics (population std, zero std treated as
    /// one) and per-class means. Samples are summed in a canonical order, so
    /// the model does not depend on input order.
    pub fn fit(samples: &[(String, FeatureVector)]) -> Result<Self> {
        let Some((_, first)) = samples.first() else {
            return Err(Error::EmptyInput);
        };
        let dim = first.len();
        for (label, f) in samples {
            if f.len() != dim {
                return Err(Error::FeatureLength {
                    expected: dim,
                    actual: f.len(),
                });
            }
            if label.is_empty() {
                return Err(Error::param("labels must be non-empty"));
            }
            if f.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::param("features must be finite"));
            }
        }
        let mut order: Vec<&(String, FeatureVector)> = samples.iter().collect();
        order.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| lex_cmp(&a.1.values, &b.1.values)));

        let n = order.len() as f64;
        let mut mu = vec_zero(dim);
        for (_, f) in &order {
            add(&mut mu, &f.values);
        }
        mu.iter_mut().for_each(|v| *v /= n);
        let mut var = vec_zero(dim);
        for (_, f) in &order {
            for ((v, x), m) in var.iter_mut().zip(&f.values).zip(&mu) {
                *v += (x - m) * (x - m);
            }
        }
        let std: Vec<f64> = var
            .iter()
            .map(|v| {
                let s = (v / n).sqrt();
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            })
            .collect();

        let mut labels: Vec<String> = Vec::new();
        let mut centroids: Vec<Vec<f64>> = Vec::new();
        let mut counts: Vec<f64> = Vec::new();
        for (label, f) in order {
            if labels.last() != Some(label) {
                labels.push(label.clone());
                centroids.push(vec_zero(dim));
                counts.push(0.0);
            }
            let c = centroids.last_mut().expect("pushed above");
            let z: Vec<f64> = f.values.iter().zip(&mu).zip(&std).map(|((x, m), s)| (x - m) / s).collect();
            add(c, &z);
            *counts.last_mut().expect("pushed above") += 1.0;
        }
        for (c, k) in centroids.iter_mut().zip(&counts) {
            c.iter_mut().for_each(|v| *v /= k);
        }
        Ok(CentroidModel {
            labels,
            centroids,
            mean: mu,
            std,
        })
    }

    pub fn feature_len(&self) -> usize {
        self.mean.len()
    }

    pub fn predict(&self, features: &FeatureVector) -> Result<&str> {
        if features.len() != self.feature_len() {
            return Err(Error::FeatureLength {
                expected: self.feature_len(),
                actual: features.len(),
            });
        }
        let z: Vec<f64> = features
            .values
            .iter()
            .zip(&self.mean)
            .zip(&self.std)
            .map(|((x, m), s)| (x - m) / s)
            .collect();
        let mut best = (0, f64::INFINITY);
        for (i, c) in self.centroids.iter().enumerate() {
            let d: f64 = c.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum();
            if d < best.1 {
                best = (i, d);
            }
        }
        Ok(&self.labels[best.0])
    }
}

fn vec_zero(n: usize) -> Vec<f64> {
    alloc::vec![0.0; n]
}

fn add(acc: &mut [f64], x: &[f64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

/// Accuracy on the originals and on their reconstructions, same labels. A
/// reconstruction whose features cannot be computed (e.g. all zero) counts
/// as misclassified.
pub fn accuracy_delta(
    model: &CentroidModel,
    extractor: &FeatureExtractor,
    originals: &[Vec<f64>],
    reconstructions: &[Vec<f64>],
    labels: &[String],
) -> Result<(f64, f64)> {
    if originals.is_empty() {
        return Err(Error::EmptyInput);
    }
    if originals.len() != labels.len() || reconstructions.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: labels.len(),
            actual: originals.len().min(reconstructions.len()),
        });
    }
    let accuracy = |signals: &[Vec<f64>]| -> Result<f64> {
        let mut hits = 0usize;
        for (s, label) in signals.iter().zip(labels) {
            if let Ok(f) = extractor.extract(s) {
                if model.predict(&f)? == label.as_str() {
                    hits += 1;
                }
            }
        }
        Ok(hits as f64 / labels.len() as f64)
    };
    Ok((accuracy(originals)?, accuracy(reconstructions)?))
}
