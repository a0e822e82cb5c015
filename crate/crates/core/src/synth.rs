//! Seeded synthetic gearbox vibration and window segmentation.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dsp::SignalWindow;
use crate::error::{Error, Result};
use crate::harmonic::KinematicSpec;

/// Amplitudes of the mesh harmonics, shaft-rate AM depth, additive noise
/// level and the seed driving phases and noise.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FaultProfile {
    pub harmonic_amplitudes: Vec<f64>,
    pub sideband_mod_index: f64,
    /// `f64::INFINITY` disables the noise.
    pub noise_snr_db: f64,
    pub seed: u64,
}

impl FaultProfile {
    pub fn validate(&self) -> Result<()> {
        if self.harmonic_amplitudes.is_empty() {
            return Err(Error::param("at least one harmonic amplitude is required"));
        }
        if self.harmonic_amplitudes.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::param("harmonic amplitudes must be non-negative"));
        }
        if !(self.sideband_mod_index.is_finite() && self.sideband_mod_index >= 0.0) {
            return Err(Error::param("sideband_mod_index must be non-negative"));
        }
        if self.noise_snr_db.is_nan() {
            return Err(Error::param("noise_snr_db must not be NaN"));
        }
        Ok(())
    }

    /// Mean power of the noiseless signal.
    pub fn signal_power(&self) -> f64 {
        let mu = self.sideband_mod_index;
        self.harmonic_amplitudes.iter().map(|a| a * a / 2.0).sum::<f64>() * (1.0 + mu * mu / 2.0)
    }
}

/// `sum_m A_m (1 + mu cos(2 pi f_shaft t)) cos(2 pi m GMF t + phi_m)` plus
/// white Gaussian noise at the requested SNR.
pub fn synth_gear(spec: &KinematicSpec, profile: &FaultProfile, duration_s: f64, sample_rate_hz: f64) -> Result<Vec<f64>> {
    spec.validate()?;
    profile.validate()?;
    if !(duration_s.is_finite() && duration_s >= 0.0) {
        return Err(Error::param("duration must be non-negative"));
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::param("sample rate must be positive"));
    }
    let gmf = spec.gear_mesh_hz();
    let fs_shaft = spec.shaft_hz();
    let m = profile.harmonic_amplitudes.len() as f64;
    let top = m * gmf + if profile.sideband_mod_index > 0.0 { fs_shaft } else { 0.0 };
    if 2.0 * top >= sample_rate_hz {
        return Err(Error::NyquistViolation {
            max_hz: top,
            sample_rate_hz,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let phases: Vec<f64> = profile
        .harmonic_amplitudes
        .iter()
        .map(|_| rng.random_range(0.0..2.0 * PI))
        .collect();
    let sigma = if profile.noise_snr_db.is_finite() {
        (profile.signal_power() / 10f64.powf(profile.noise_snr_db / 10.0)).sqrt()
    } else {
        0.0
    };
    let n = (duration_s * sample_rate_hz).round() as usize;
    let mu = profile.sideband_mod_index;
    Ok((0..n)
        .map(|i| {
            let t = i as f64 / sample_rate_hz;
            let am = 1.0 + mu * (2.0 * PI * fs_shaft * t).cos();
            let tone: f64 = profile
                .harmonic_amplitudes
                .iter()
                .zip(&phases)
                .enumerate()
                .map(|(k, (a, phi))| a * (2.0 * PI * (k + 1) as f64 * gmf * t + phi).cos())
                .sum();
            let noise: f64 = if sigma > 0.0 { rng.sample(StandardNormal) } else { 0.0 };
            am * tone + sigma * noise
        })
        .collect())
}

/// Cuts `floor((len - window_len) / hop) + 1` windows, recording each start.
pub fn segment(signal: &[f64], sample_rate_hz: f64, window_len: usize, hop: usize) -> Result<Vec<SignalWindow>> {
    if hop == 0 {
        return Err(Error::param("hop must be positive"));
    }
    if signal.len() < window_len {
        return Ok(Vec::new());
    }
    let count = (signal.len() - window_len) / hop + 1;
    (0..count)
        .map(|i| SignalWindow::new(signal[i * hop..i * hop + window_len].to_vec(), sample_rate_hz, i * hop))
        .collect()
}

/// One labelled class of a synthetic corpus.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorpusClass {
    pub label: String,
    pub profile: FaultProfile,
}

/// A labelled set of gearbox classes, each rendered as one continuous
/// signal that is cut into disjoint windows.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorpusSpec {
    pub kinematics: KinematicSpec,
    pub sample_rate_hz: f64,
    pub window_len: usize,
    pub windows_per_class: usize,
    pub classes: Vec<CorpusClass>,
}

/// Samples of one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSignal {
    pub label: String,
    pub samples: Vec<f64>,
}

pub const BASE_AMPLITUDES: [f64; 3] = [1.0, 0.5, 0.25];

impl CorpusSpec {
    /// Healthy (no modulation) plus three faults with AM depth 0.15, 0.3 and
    /// 0.6 whose third harmonic grows by the same amount; 20 dB SNR, 250
    /// windows of 1024 samples per class at 20 kHz.
    pub fn default_corpus(seed: u64) -> Self {
        let fs = 20_000.0;
        let n = crate::dsp::DEFAULT_WINDOW_LEN;
        let classes = [("healthy", 0.0), ("fault_mild", 0.15), ("fault_moderate", 0.3), ("fault_severe", 0.6)]
            .iter()
            .enumerate()
            .map(|(i, &(label, mu))| {
                let mut amps = BASE_AMPLITUDES.to_vec();
                amps[2] += mu;
                CorpusClass {
                    label: label.into(),
                    profile: FaultProfile {
                        harmonic_amplitudes: amps,
                        sideband_mod_index: mu,
                        noise_snr_db: 20.0,
                        seed: seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64),
                    },
                }
            })
            .collect();
        CorpusSpec {
            kinematics: KinematicSpec::gearbox_default(fs, n),
            sample_rate_hz: fs,
            window_len: n,
            windows_per_class: 250,
            classes,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.kinematics.validate()?;
        if self.window_len == 0 || !self.window_len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { len: self.window_len });
        }
        if self.classes.is_empty() || self.windows_per_class == 0 {
            return Err(Error::EmptyInput);
        }
        for c in &self.classes {
            if c.label.is_empty() {
                return Err(Error::param("class labels must be non-empty"));
            }
            c.profile.validate()?;
        }
        Ok(())
    }

    /// Renders every class.
    pub fn generate(&self) -> Result<Vec<ClassSignal>> {
        self.validate()?;
        let duration = (self.windows_per_class * self.window_len) as f64 / self.sample_rate_hz;
        self.classes
            .iter()
            .map(|c| {
                let samples = synth_gear(&self.kinematics, &c.profile, duration, self.sample_rate_hz)
                    .map_err(|e| Error::param(format!("class {}: {e}", c.label)))?;
                Ok(ClassSignal {
                    label: c.label.clone(),
                    samples,
                })
            })
            .collect()
    }

    /// Every window of every class with its label, class by class.
    pub fn labeled_windows(&self) -> Result<Vec<(String, SignalWindow)>> {
        let mut out = Vec::new();
        for class in self.generate()? {
            for w in segment(&class.samples, self.sample_rate_hz, self.window_len, self.window_len)? {
                out.push((class.label.clone(), w));
            }
        }
        Ok(out)
    }
}

/// First `train_per_class` items of each label go to the training half, the
/// rest to the test half; order is preserved.
pub fn split_per_class<T: Clone>(items: &[(String, T)], train_per_class: usize) -> (Vec<(String, T)>, Vec<(String, T)>) {
    let mut seen: Vec<(String, usize)> = vec![];
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (label, item) in items {
        let count = match seen.iter_mut().find(|(l, _)| l == label) {
            Some((_, c)) => {
                *c += 1;
                *c
            }
            None => {
                seen.push((label.clone(), 1));
                1
            }
        };
        if count <= train_per_class {
            train.push((label.clone(), item.clone()));
        } else {
            test.push((label.clone(), item.clone()));
        }
    }
    (train, test)
}
