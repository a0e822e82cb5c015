//! TOML configuration with `[kinematics]`, `[quant]`, `[scorer]`, `[bench]`
//! and `[synth]` sections. Every key is optional; command-line flags
//! override what the file sets.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use vibcodec::codec::{BitBudget, EncoderConfig, ScorerWeights, Selection, StepRule};
use vibcodec::harmonic::{default_half_width, KinematicSpec};

use crate::error::{Result, ToolError};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub kinematics: Kinematics,
    pub quant: Quant,
    pub scorer: Scorer,
    pub bench: Bench,
    pub synth: Synth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Kinematics {
    pub shaft_rpm: f64,
    pub pinion_teeth: u32,
    pub n_harmonics: u32,
    pub n_sidebands_per_harmonic: u32,
    /// Two DCT bins plus 5 Hz when unset.
    pub band_half_width_hz: Option<f64>,
}

impl Default for Kinematics {
    fn default() -> Self {
        let k = KinematicSpec::gearbox_default(20_000.0, 1024);
        Kinematics {
            shaft_rpm: k.shaft_rpm,
            pinion_teeth: k.pinion_teeth,
            n_harmonics: k.n_harmonics,
            n_sidebands_per_harmonic: k.n_sidebands_per_harmonic,
            band_half_width_hz: None,
        }
    }
}

impl Kinematics {
    pub fn spec(&self, sample_rate_hz: f64, window_len: usize) -> Result<KinematicSpec> {
        let spec = KinematicSpec {
            shaft_rpm: self.shaft_rpm,
            pinion_teeth: self.pinion_teeth,
            n_harmonics: self.n_harmonics,
            n_sidebands_per_harmonic: self.n_sidebands_per_harmonic,
            band_half_width_hz: self
                .band_half_width_hz
                .unwrap_or_else(|| default_half_width(sample_rate_hz, window_len)),
        };
        spec.validate().map_err(|e| ToolError::usage(format!("[kinematics] {e}")))?;
        Ok(spec)
    }

    /// A kinematics file is either a full config or just the keys of the
    /// `[kinematics]` section.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| ToolError::file(path, e))?;
        let value: toml::Table = toml::from_str(&text).map_err(|e| ToolError::usage(format!("{}: {e}", path.display())))?;
        let table = match value.get("kinematics") {
            Some(toml::Value::Table(t)) => t.clone(),
            _ => value,
        };
        table
            .try_into()
            .map_err(|e| ToolError::usage(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Quant {
    pub cr: f64,
    pub window_len: usize,
    pub token_len: usize,
    /// Fixed base step; unset picks the smallest non-saturating step per frame.
    pub delta0: Option<f64>,
    /// `delta0 = RMS(coefficients) / rms_divisor` per frame.
    pub rms_divisor: Option<f64>,
    pub alpha: f64,
    pub fine_bits: u8,
    pub coarse_bits: u8,
    /// Payload bits per frame.
    pub budget: Option<u64>,
}

impl Default for Quant {
    fn default() -> Self {
        let e = EncoderConfig::default();
        Quant {
            cr: e.compression_ratio,
            window_len: 1024,
            token_len: e.token_len,
            delta0: None,
            rms_divisor: None,
            alpha: e.alpha,
            fine_bits: e.fine_bits,
            coarse_bits: e.coarse_bits,
            budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scorer {
    pub w: [f64; 3],
    pub b: f64,
}

impl Default for Scorer {
    fn default() -> Self {
        let s = ScorerWeights::default();
        Scorer { w: s.w, b: s.b }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bench {
    pub crs: Vec<f64>,
    pub codecs: Vec<String>,
    pub window_len: usize,
    pub seed: u64,
    /// Wall-clock columns; off writes zeros so reports are reproducible.
    pub timing: bool,
}

impl Default for Bench {
    fn default() -> Self {
        Bench {
            crs: vec![4.0, 8.0, 16.0, 32.0, 64.0],
            codecs: ["epicmt", "dct", "pca", "no-hpq", "no-sats"].map(String::from).to_vec(),
            window_len: 1024,
            seed: 0,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    Wav,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Synth {
    pub seed: u64,
    pub sample_rate_hz: f64,
    pub window_len: usize,
    pub windows_per_class: usize,
    pub noise_snr_db: f64,
    pub format: FileFormat,
}

impl Default for Synth {
    fn default() -> Self {
        Synth {
            seed: 0,
            sample_rate_hz: 20_000.0,
            window_len: 1024,
            windows_per_class: 250,
            noise_snr_db: 20.0,
            format: FileFormat::Wav,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| ToolError::usage(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| ToolError::usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| ToolError::usage(e.to_string()))
    }

    pub fn load_or_default(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Config::default()), Config::load)
    }

    pub fn weights(&self) -> ScorerWeights {
        ScorerWeights {
            w: self.scorer.w,
            b: self.scorer.b,
        }
    }

    /// The encoder settings of the `[quant]` and `[scorer]` sections.
    pub fn encoder_config(&self) -> Result<EncoderConfig> {
        let q = &self.quant;
        let step_rule = match (q.delta0, q.rms_divisor) {
            (Some(_), Some(_)) => return Err(ToolError::usage("set at most one of delta0 and rms_divisor")),
            (Some(d), None) => StepRule::Fixed(d),
            (None, Some(r)) => StepRule::RmsFraction(r),
            (None, None) => StepRule::NoSaturation,
        };
        let cfg = EncoderConfig {
            token_len: q.token_len,
            compression_ratio: q.cr,
            step_rule,
            alpha: q.alpha,
            fine_bits: q.fine_bits,
            coarse_bits: q.coarse_bits,
            weights: self.weights(),
            selection: Selection::Adaptive,
            budget: q.budget.map(BitBudget::new),
            refine_hint: false,
        };
        cfg.validate().map_err(|e| ToolError::usage(format!("[quant] {e}")))?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let c = Config::parse("").unwrap();
        assert_eq!(c, Config::default());
        let e = c.encoder_config().unwrap();
        assert_eq!(e, EncoderConfig::default());
    }

    #[test]
    fn sections_override_defaults() {
        let c = Config::parse(
            "[kinematics]\nshaft_rpm = 1800.0\n[quant]\ncr = 8.0\ndelta0 = 0.01\nbudget = 900\n[scorer]\nw = [1.0, 0.0, 0.0]\n[bench]\ncrs = [2.0]\ncodecs = [\"dct\"]\n[synth]\nformat = \"csv\"\n",
        )
        .unwrap();
        assert_eq!(c.kinematics.shaft_rpm, 1800.0);
        let e = c.encoder_config().unwrap();
        assert_eq!(e.compression_ratio, 8.0);
        assert_eq!(e.step_rule, StepRule::Fixed(0.01));
        assert_eq!(e.budget, Some(BitBudget::new(900)));
        assert_eq!(e.weights.w, [1.0, 0.0, 0.0]);
        assert_eq!(c.bench.codecs, vec!["dct".to_string()]);
        assert_eq!(c.synth.format, FileFormat::Csv);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        assert!(Config::parse("[quant]\nfoo = 1\n").is_err());
        assert!(Config::parse("[extra]\n").is_err());
        let c = Config::parse("[quant]\nfine_bits = 3\ncoarse_bits = 4\n").unwrap();
        assert!(matches!(c.encoder_config(), Err(ToolError::Usage(_))));
        let c = Config::parse("[quant]\ndelta0 = 1.0\nrms_divisor = 64.0\n").unwrap();
        assert!(c.encoder_config().is_err());
    }

    #[test]
    fn kinematics_half_width_defaults_to_grid() {
        let k = Kinematics::default().spec(20_000.0, 1024).unwrap();
        assert!((k.band_half_width_hz - (2.0 * 20_000.0 / 2048.0 + 5.0)).abs() < 1e-12);
    }
}
