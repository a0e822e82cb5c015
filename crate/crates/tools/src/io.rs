//! Signal files (CSV, WAV) and the corpus manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Result, ToolError};

/// Samples plus their rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<f64>,
    pub sample_rate_hz: f64,
}

/// A CSV column picked by zero-based index or by header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Index(usize),
    Name(String),
}

impl Default for Column {
    fn default() -> Self {
        Column::Index(0)
    }
}

impl FromStr for Column {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse() {
            Ok(i) => Column::Index(i),
            Err(_) => Column::Name(s.to_string()),
        })
    }
}

/// Reads one numeric column. The header row is optional when the column is
/// given by index: a first row that does not parse as a number is taken as
/// a header. Rows are numbered from 1 in errors.
pub fn load_csv(path: &Path, column: &Column, sample_rate_hz: f64) -> Result<Signal> {
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(ToolError::usage("CSV input needs a positive sample rate"));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| ToolError::file(path, e))?;
    let mut index = match column {
        Column::Index(i) => Some(*i),
        Column::Name(_) => None,
    };
    let mut samples = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let row = row + 1;
        let record = record.map_err(|e| ToolError::file(path, e))?;
        let Some(col) = index else {
            let Column::Name(name) = column else { unreachable!() };
            let found = record.iter().position(|h| h == name);
            index = Some(found.ok_or_else(|| ToolError::file(path, format!("no column named {name:?}")))?);
            continue;
        };
        let field = record
            .get(col)
            .ok_or_else(|| ToolError::file(path, format!("row {row} has no column {col}")))?;
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => samples.push(v),
            Ok(_) => return Err(ToolError::file(path, format!("row {row}: value {field:?} is not finite"))),
            Err(_) if row == 1 => {}
            Err(_) => return Err(ToolError::file(path, format!("row {row}: {field:?} is not a number"))),
        }
    }
    if samples.is_empty() {
        return Err(ToolError::file(path, "no samples"));
    }
    Ok(Signal {
        samples,
        sample_rate_hz,
    })
}

/// Reads the first channel of a WAV file.
pub fn load_wav(path: &Path) -> Result<Signal> {
    load_wav_channel(path, 0)
}

/// 16-bit (and other integer) PCM is scaled to [-1, 1); 32-bit float is
/// taken as is.
pub fn load_wav_channel(path: &Path, channel: usize) -> Result<Signal> {
    let reader = hound::WavReader::open(path).map_err(|e| ToolError::file(path, e))?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channel >= channels {
        return Err(ToolError::file(path, format!("channel {channel} requested, file has {channels}")));
    }
    let interleaved: Vec<f64> = match spec.sample_format {
        hound::SampleFormat::Float => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<_, _>>(),
        hound::SampleFormat::Int => {
            let scale = (1u64 << (spec.bits_per_sample - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| v as f64 / scale))
                .collect::<std::result::Result<_, _>>()
        }
    }
    .map_err(|e| ToolError::file(path, e))?;
    let samples: Vec<f64> = interleaved.into_iter().skip(channel).step_by(channels).collect();
    if samples.is_empty() {
        return Err(ToolError::file(path, "no samples"));
    }
    Ok(Signal {
        samples,
        sample_rate_hz: spec.sample_rate as f64,
    })
}

/// Mono 32-bit float WAV.
pub fn write_wav(path: &Path, signal: &Signal) -> Result<()> {
    let rate = signal.sample_rate_hz.round();
    if !(rate >= 1.0 && rate <= u32::MAX as f64) {
        return Err(ToolError::usage(format!("sample rate {} cannot be stored in a WAV header", signal.sample_rate_hz)));
    }
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: rate as u32,
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let mut w = hound::WavWriter::create(path, spec).map_err(|e| ToolError::file(path, e))?;
    for &s in &signal.samples {
        w.write_sample(s as f32).map_err(|e| ToolError::file(path, e))?;
    }
    w.finalize().map_err(|e| ToolError::file(path, e))
}

/// One sample per row, no header, shortest round-trip formatting.
pub fn write_csv(path: &Path, samples: &[f64]) -> Result<()> {
    let mut text = String::with_capacity(samples.len() * 12);
    for s in samples {
        let _ = writeln!(text, "{s}");
    }
    fs::write(path, text).map_err(|e| ToolError::file(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalFormat {
    Wav,
    Csv,
}

impl SignalFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("wav") => Ok(SignalFormat::Wav),
            Some("csv") | Some("txt") => Ok(SignalFormat::Csv),
            _ => Err(ToolError::usage(format!("{}: expected a .wav or .csv file", path.display()))),
        }
    }
}

/// Loads a signal by extension; CSV input needs `sample_rate_hz`.
pub fn load_signal(path: &Path, column: &Column, sample_rate_hz: Option<f64>) -> Result<Signal> {
    match SignalFormat::from_path(path)? {
        SignalFormat::Wav => {
            let channel = match column {
                Column::Index(i) => *i,
                Column::Name(_) => return Err(ToolError::usage("WAV channels are selected by index")),
            };
            let s = load_wav_channel(path, channel)?;
            if let Some(fs) = sample_rate_hz {
                if (fs - s.sample_rate_hz).abs() > 1e-9 * fs {
                    return Err(ToolError::usage(format!(
                        "{}: file rate {} Hz differs from the requested {fs} Hz",
                        path.display(),
                        s.sample_rate_hz
                    )));
                }
            }
            Ok(s)
        }
        SignalFormat::Csv => {
            let fs = sample_rate_hz.ok_or_else(|| ToolError::usage("CSV input needs --sample-rate"))?;
            load_csv(path, column, fs)
        }
    }
}

pub fn save_signal(path: &Path, signal: &Signal) -> Result<()> {
    match SignalFormat::from_path(path)? {
        SignalFormat::Wav => write_wav(path, signal),
        SignalFormat::Csv => write_csv(path, &signal.samples),
    }
}

const MANIFEST_VERSION: u32 = 1;
const VERSION_TAG: &str = "# vibcodec manifest v";

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    /// As written in the manifest; relative paths are resolved against the
    /// manifest's directory.
    pub path: PathBuf,
    pub label: String,
    pub sample_rate_hz: f64,
    pub channel: usize,
}

/// Lines of `path,label,rate,channel`. `#` starts a comment; an optional
/// `path,label,rate,channel` header line is skipped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub base_dir: PathBuf,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if let Some(v) = line.strip_prefix(VERSION_TAG) {
                let version: u32 = v
                    .trim()
                    .parse()
                    .map_err(|_| ToolError::usage(format!("manifest line {line_no}: bad version tag")))?;
                if version != MANIFEST_VERSION {
                    return Err(ToolError::usage(format!("unsupported manifest version {version}")));
                }
                continue;
            }
            if line.is_empty() || line.starts_with('#') || line == "path,label,rate,channel" {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [path, label, rate, channel] = fields[..] else {
                return Err(ToolError::usage(format!("manifest line {line_no}: expected path,label,rate,channel")));
            };
            if path.is_empty() || label.is_empty() {
                return Err(ToolError::usage(format!("manifest line {line_no}: empty path or label")));
            }
            let sample_rate_hz: f64 = rate
                .parse()
                .ok()
                .filter(|r: &f64| r.is_finite() && *r > 0.0)
                .ok_or_else(|| ToolError::usage(format!("manifest line {line_no}: bad rate {rate:?}")))?;
            let channel = channel
                .parse()
                .map_err(|_| ToolError::usage(format!("manifest line {line_no}: bad channel {channel:?}")))?;
            entries.push(ManifestEntry {
                path: PathBuf::from(path),
                label: label.to_string(),
                sample_rate_hz,
                channel,
            });
        }
        Ok(Manifest {
            base_dir: base_dir.to_path_buf(),
            entries,
        })
    }

    /// Parses the file and checks that every entry exists.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| ToolError::file(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let m = Manifest::parse(&text, base)?;
        for e in &m.entries {
            let p = m.resolve(e);
            if !p.is_file() {
                return Err(ToolError::io(format!("manifest entry {} not found", p.display())));
            }
        }
        Ok(m)
    }

    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            self.base_dir.join(&entry.path)
        }
    }

    pub fn load_entry(&self, entry: &ManifestEntry) -> Result<Signal> {
        let path = self.resolve(entry);
        load_signal(&path, &Column::Index(entry.channel), Some(entry.sample_rate_hz))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{VERSION_TAG}{MANIFEST_VERSION}\npath,label,rate,channel\n");
        for e in &self.entries {
            let _ = writeln!(s, "{},{},{},{}", e.path.display(), e.label, e.sample_rate_hz, e.channel);
        }
        s
    }
}
