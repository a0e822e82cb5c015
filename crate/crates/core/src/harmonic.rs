//! Protected frequency bands derived from gearbox kinematics: gear-mesh
//! harmonics and their shaft-rate sidebands.

use alloc::vec;
use alloc::vec::Vec;

use crate::dsp::PsdEstimate;
use crate::error::{Error, Result};

/// Shaft speed, tooth count and how many lines to protect.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KinematicSpec {
    pub shaft_rpm: f64,
    pub pinion_teeth: u32,
    pub n_harmonics: u32,
    pub n_sidebands_per_harmonic: u32,
    pub band_half_width_hz: f64,
}

impl KinematicSpec {
    /// The 32-tooth pinion at ~1333 rpm with three mesh harmonics and one
    /// sideband pair each; band half-width from [`default_half_width`].
    pub fn gearbox_default(sample_rate_hz: f64, window_len: usize) -> Self {
        KinematicSpec {
            shaft_rpm: 1333.0,
            pinion_teeth: 32,
            n_harmonics: 3,
            n_sidebands_per_harmonic: 1,
            band_half_width_hz: default_half_width(sample_rate_hz, window_len),
        }
    }

    pub fn shaft_hz(&self) -> f64 {
        self.shaft_rpm / 60.0
    }

    pub fn gear_mesh_hz(&self) -> f64 {
        self.shaft_hz() * self.pinion_teeth as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.shaft_rpm.is_finite() && self.shaft_rpm > 0.0) {
            return Err(Error::param("shaft_rpm must be positive"));
        }
        if self.pinion_teeth == 0 || self.n_harmonics == 0 {
            return Err(Error::param("pinion_teeth and n_harmonics must be positive"));
        }
        if !(self.band_half_width_hz.is_finite() && self.band_half_width_hz > 0.0) {
            return Err(Error::param("band_half_width_hz must be positive"));
        }
        // lowest sideband of the first harmonic must stay above 0 Hz
        if self.n_sidebands_per_harmonic >= self.pinion_teeth {
            return Err(Error::param("n_sidebands_per_harmonic must be below pinion_teeth"));
        }
        Ok(())
    }
}

/// Two DCT bins plus 5 Hz, enough to cover Hann leakage of a tone.
pub fn default_half_width(sample_rate_hz: f64, window_len: usize) -> f64 {
    2.0 * sample_rate_hz / (2.0 * window_len as f64) + 5.0
}

/// Carrier and sideband line frequencies with a common band half-width.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HarmonicMap {
    pub carriers_hz: Vec<f64>,
    /// Stored as `[c - f, c + f, c - 2f, c + 2f, ...]` per carrier.
    pub sidebands_hz: Vec<f64>,
    pub band_half_width_hz: f64,
}

impl HarmonicMap {
    /// A map without any protected lines.
    pub fn empty(band_half_width_hz: f64) -> Self {
        HarmonicMap {
            carriers_hz: Vec::new(),
            sidebands_hz: Vec::new(),
            band_half_width_hz,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.carriers_hz.is_empty() && self.sidebands_hz.is_empty()
    }

    /// Every line with its kind, carriers first.
    pub fn centers(&self) -> impl Iterator<Item = (f64, LineKind)> + '_ {
        self.carriers_hz
            .iter()
            .map(|&f| (f, LineKind::Carrier))
            .chain(self.sidebands_hz.iter().map(|&f| (f, LineKind::Sideband)))
    }

    /// Membership test `f in H`.
    pub fn contains(&self, freq_hz: f64) -> bool {
        self.centers()
            .any(|(c, _)| (freq_hz - c).abs() <= self.band_half_width_hz)
    }

    /// Copy with lines above `max_hz` removed.
    fn below(&self, max_hz: f64) -> HarmonicMap {
        let keep = |f: &f64| *f <= max_hz;
        let dropped = self.carriers_hz.iter().chain(&self.sidebands_hz).filter(|f| !keep(f)).count();
        if dropped > 0 {
            log::debug!("ignoring {dropped} harmonic lines above {max_hz} Hz");
        }
        HarmonicMap {
            carriers_hz: self.carriers_hz.iter().copied().filter(keep).collect(),
            sidebands_hz: self.sidebands_hz.iter().copied().filter(keep).collect(),
            band_half_width_hz: self.band_half_width_hz,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Carrier,
    Sideband,
}

/// Carriers `m * GMF` and sidebands `m * GMF +/- j * f_shaft`.
pub fn derive_harmonics(spec: &KinematicSpec) -> Result<HarmonicMap> {
    spec.validate()?;
    let gmf = spec.gear_mesh_hz();
    let shaft = spec.shaft_hz();
    let carriers_hz: Vec<f64> = (1..=spec.n_harmonics).map(|m| m as f64 * gmf).collect();
    let mut sidebands_hz = Vec::with_capacity(carriers_hz.len() * 2 * spec.n_sidebands_per_harmonic as usize);
    for &c in &carriers_hz {
        for j in 1..=spec.n_sidebands_per_harmonic {
            sidebands_hz.push(c - j as f64 * shaft);
            sidebands_hz.push(c + j as f64 * shaft);
        }
    }
    Ok(HarmonicMap {
        carriers_hz,
        sidebands_hz,
        band_half_width_hz: spec.band_half_width_hz,
    })
}

/// Per-coefficient protected/background flags on the DCT grid.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BandClassification {
    pub protected: Vec<bool>,
}

impl BandClassification {
    pub fn all_background(window_len: usize) -> Self {
        BandClassification {
            protected: vec![false; window_len],
        }
    }

    pub fn len(&self) -> usize {
        self.protected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.protected.is_empty()
    }

    pub fn protected_count(&self) -> usize {
        self.protected.iter().filter(|&&p| p).count()
    }
}

/// Flags DCT bin `k` (nominal frequency `k fs / 2N`) when it lies within the
/// half-width of any line. Lines above Nyquist are ignored.
pub fn classify_bins(map: &HarmonicMap, window_len: usize, sample_rate_hz: f64) -> BandClassification {
    let nyquist = sample_rate_hz / 2.0;
    let map = map.below(nyquist);
    let spacing = sample_rate_hz / (2.0 * window_len as f64);
    let protected = (0..window_len)
        .map(|k| map.contains(k as f64 * spacing))
        .collect();
    BandClassification { protected }
}

/// Integrated band energies from a PSD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEnergies {
    pub carrier: f64,
    pub sideband: f64,
    pub broadband: f64,
}

/// Index of the nearest line within the half-width of `freq`, if any.
fn nearest_line(map: &HarmonicMap, freq: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, (c, _)) in map.centers().enumerate() {
        let d = (freq - c).abs();
        if d <= map.band_half_width_hz && best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

fn check_range(psd: &PsdEstimate, map: &HarmonicMap) -> Result<()> {
    let max_hz = psd.max_freq_hz();
    for (c, _) in map.centers() {
        if c - map.band_half_width_hz < 0.0 || c + map.band_half_width_hz > max_hz {
            return Err(Error::BandOutOfRange { center_hz: c, max_hz });
        }
    }
    Ok(())
}

/// Energy integrated around every line, in [`HarmonicMap::centers`] order.
///
/// Each PSD bin counts toward its nearest line only, so overlapping bands
/// are not double counted.
pub fn line_energies(psd: &PsdEstimate, map: &HarmonicMap) -> Result<Vec<f64>> {
    check_range(psd, map)?;
    let df = psd.resolution_hz();
    let mut out = vec![0.0; map.carriers_hz.len() + map.sidebands_hz.len()];
    for (&f, &p) in psd.freqs_hz.iter().zip(&psd.power) {
        if let Some(i) = nearest_line(map, f) {
            out[i] += p * df;
        }
    }
    Ok(out)
}

/// Carrier, sideband and total energy of a PSD.
pub fn scr_band_energies(psd: &PsdEstimate, map: &HarmonicMap) -> Result<BandEnergies> {
    let per_line = line_energies(psd, map)?;
    let n_carriers = map.carriers_hz.len();
    Ok(BandEnergies {
        carrier: per_line[..n_carriers].iter().sum(),
        sideband: per_line[n_carriers..].iter().sum(),
        broadband: psd.total_power(),
    })
}
