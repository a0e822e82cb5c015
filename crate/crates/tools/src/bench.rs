//! Compression-ratio sweeps of several codecs over a set of files.
//!
//! Files are cut into disjoint windows (hop = window, no taper) so every
//! codec sees the same blocks. `bits` counts payload bits plus 16 bits per
//! transmitted index, summed over a file's windows.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use vibcodec::baselines::{ablation_no_hpq, ablation_no_sats, cs_random_encode, dct_topk_encode, PcaCodec};
use vibcodec::codec::{frame_bits, BitBudget, EncodedFrame, Encoder, EncoderConfig, Selection};
use vibcodec::decoder::synthesize_frame;
use vibcodec::dsp::SignalWindow;
use vibcodec::harmonic::{classify_bins, derive_harmonics};
use vibcodec::metrics::{evaluate, MetricsConfig};
use vibcodec::synth::segment;
use vibcodec::Error;

use crate::config::Kinematics;
use crate::error::{Result, ToolError};
use crate::io::Signal;
use crate::plot::{line_chart, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CodecKind {
    /// Harmonic-preserving token codec.
    Epicmt,
    Dct,
    Pca,
    NoHpq,
    NoSats,
    /// Seeded random DCT coefficients, standing in for compressed sensing.
    Cs,
}

impl CodecKind {
    pub const ALL: [CodecKind; 6] = [
        CodecKind::Epicmt,
        CodecKind::Dct,
        CodecKind::Pca,
        CodecKind::NoHpq,
        CodecKind::NoSats,
        CodecKind::Cs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CodecKind::Epicmt => "epicmt",
            CodecKind::Dct => "dct",
            CodecKind::Pca => "pca",
            CodecKind::NoHpq => "no-hpq",
            CodecKind::NoSats => "no-sats",
            CodecKind::Cs => "cs",
        }
    }
}

impl fmt::Display for CodecKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodecKind {
    type Err = ToolError;

    fn from_str(s: &str) -> Result<Self> {
        CodecKind::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<_> = CodecKind::ALL.iter().map(|c| c.name()).collect();
                ToolError::usage(format!("unknown codec {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

pub struct BenchInput {
    pub name: String,
    pub signal: Signal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchOptions {
    pub crs: Vec<f64>,
    #[serde(serialize_with = "codec_names")]
    pub codecs: Vec<CodecKind>,
    pub window_len: usize,
    pub seed: u64,
    pub timing: bool,
    /// Base settings of the token codecs; the CR is set per sweep point.
    pub encoder: EncoderConfig,
    pub kinematics: Kinematics,
}

fn codec_names<S: serde::Serializer>(codecs: &[CodecKind], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(codecs.iter().map(|c| c.name()))
}

impl BenchOptions {
    fn validate(&self) -> Result<()> {
        if self.crs.is_empty() || self.codecs.is_empty() {
            return Err(ToolError::usage("need at least one CR and one codec"));
        }
        if let Some(cr) = self.crs.iter().find(|c| !(c.is_finite() && **c >= 1.0)) {
            return Err(ToolError::usage(format!("compression ratio {cr} must be at least 1")));
        }
        if self.window_len < 2 || !self.window_len.is_power_of_two() {
            return Err(ToolError::usage(format!("window length {} is not a power of two", self.window_len)));
        }
        Ok(())
    }

    fn keep_count(&self, cr: f64) -> usize {
        ((self.window_len as f64 / cr).round() as usize).clamp(1, self.window_len)
    }
}

/// One row per (codec, CR, file). Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub codec: String,
    pub cr: f64,
    pub file: String,
    pub window: usize,
    pub bits: u64,
    pub snr_db: f64,
    pub prd_percent: f64,
    pub scr_consistency: f64,
    pub scr_sideband: f64,
    pub gda_loss: f64,
    pub mec_loss: f64,
    pub cwt_loss: f64,
    pub ac_loss: f64,
    pub encode_us: u64,
    pub decode_us: u64,
}

/// PCA codecs per CR, fitted once on every window of every input.
fn fit_pca(inputs: &[BenchInput], opts: &BenchOptions) -> Result<Vec<PcaCodec>> {
    let n = opts.window_len;
    let mut train = Vec::new();
    for input in inputs {
        for w in segment(&input.signal.samples, input.signal.sample_rate_hz, n, n)? {
            train.push(w.into_samples());
        }
    }
    if train.is_empty() {
        return Err(ToolError::io("no input holds a full window"));
    }
    let fs = inputs[0].signal.sample_rate_hz;
    let want = opts.crs.iter().map(|&cr| opts.keep_count(cr)).max().unwrap_or(1).min(train.len());
    let full = match PcaCodec::fit(&train, want, fs) {
        Err(Error::RankDeficient { rank, .. }) => {
            log::info!("pca: training rank {rank} caps the component count");
            PcaCodec::fit(&train, rank, fs)?
        }
        other => other?,
    };
    opts.crs
        .iter()
        .map(|&cr| Ok(full.truncated(opts.keep_count(cr).min(full.n_components()))?))
        .collect()
}

struct Coded {
    frame: Option<EncodedFrame>,
    encode_us: u64,
}

fn micros(t: Instant) -> u64 {
    t.elapsed().as_micros() as u64
}

fn bench_file(input: &BenchInput, opts: &BenchOptions, pca: &[PcaCodec]) -> Result<Vec<BenchRow>> {
    let n = opts.window_len;
    let fs = input.signal.sample_rate_hz;
    let kin = opts.kinematics.spec(fs, n)?;
    let map = derive_harmonics(&kin)?;
    let cls = classify_bins(&map, n, fs);
    let windows = segment(&input.signal.samples, fs, n, n)?;
    if windows.is_empty() {
        return Err(ToolError::io(format!("{}: shorter than one {n}-sample window", input.name)));
    }
    let x = &input.signal.samples[..windows.len() * n];
    let metrics = MetricsConfig::new(fs)?;
    let q = opts.encoder.fine_bits;
    let mut rows = Vec::new();
    for (ci, &cr) in opts.crs.iter().enumerate() {
        let cfg = EncoderConfig {
            compression_ratio: cr,
            ..opts.encoder.clone()
        };
        let encoder = Encoder::new(cfg.clone(), cls.clone())?;
        let k = opts.keep_count(cr);
        for &codec in &opts.codecs {
            let mut bits = 0;
            let (mut encode_us, mut decode_us) = (0, 0);
            let mut xhat = Vec::with_capacity(x.len());
            for (wi, w) in windows.iter().enumerate() {
                let seed = opts.seed.wrapping_add(wi as u64);
                let coded = encode_one(codec, w, &encoder, &cfg, &cls, k, q, seed, pca.get(ci))?;
                encode_us += coded.encode_us;
                let t = Instant::now();
                let recon = match &coded.frame {
                    Some(f) if codec == CodecKind::Pca => pca[ci].decode(f)?,
                    Some(f) => synthesize_frame(f)?.into_samples(),
                    None => vec![0.0; n],
                };
                decode_us += micros(t);
                bits += coded.frame.as_ref().map_or(0, EncodedFrame::transmitted_bits);
                xhat.extend(recon);
            }
            let r = evaluate(x, &xhat, &map, &metrics)?;
            if !opts.timing {
                (encode_us, decode_us) = (0, 0);
            }
            rows.push(BenchRow {
                codec: codec.name().into(),
                cr,
                file: input.name.clone(),
                window: n,
                bits,
                snr_db: r.snr_db,
                prd_percent: r.prd_percent,
                scr_consistency: r.scr_consistency,
                scr_sideband: r.scr_sideband,
                gda_loss: r.gda_loss,
                mec_loss: r.mec_loss,
                cwt_loss: r.cwt_loss,
                ac_loss: r.ac_loss,
                encode_us,
                decode_us,
            });
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn encode_one(
    codec: CodecKind,
    w: &SignalWindow,
    encoder: &Encoder,
    cfg: &EncoderConfig,
    cls: &vibcodec::harmonic::BandClassification,
    k: usize,
    q: u8,
    seed: u64,
    pca: Option<&PcaCodec>,
) -> Result<Coded> {
    // the uniform ablation gets the payload the full codec spent on this window
    let budget = if codec == CodecKind::NoHpq {
        Some(frame_bits(&encoder.encode(w)?.frame))
    } else {
        None
    };
    let t = Instant::now();
    let frame = match codec {
        CodecKind::Epicmt => Some(encoder.encode(w)?.frame),
        CodecKind::Dct => Some(dct_topk_encode(w, k, q)?),
        CodecKind::Cs => Some(cs_random_encode(w, k, q, seed)?),
        CodecKind::Pca => Some(pca.ok_or_else(|| ToolError::usage("pca codec was not fitted"))?.encode(w)?),
        CodecKind::NoSats => Some(ablation_no_sats(w, cls, cfg, Selection::SeededRandom(seed))?.frame),
        CodecKind::NoHpq => {
            let cfg = EncoderConfig {
                budget: budget.map(BitBudget::new),
                ..cfg.clone()
            };
            match ablation_no_hpq(w, cls, &cfg) {
                Ok(out) => Some(out.frame),
                Err(Error::BudgetInfeasible { .. }) => None,
                Err(e) => return Err(e.into()),
            }
        }
    };
    Ok(Coded {
        frame,
        encode_us: micros(t),
    })
}

/// Runs the sweep; files are processed in parallel and rows come back
/// sorted by (codec, CR, file).
pub fn run(inputs: &[BenchInput], opts: &BenchOptions) -> Result<Vec<BenchRow>> {
    opts.validate()?;
    if inputs.is_empty() {
        return Err(ToolError::usage("no input files"));
    }
    let pca = if opts.codecs.contains(&CodecKind::Pca) {
        fit_pca(inputs, opts)?
    } else {
        Vec::new()
    };
    let per_file: Vec<Result<Vec<BenchRow>>> = inputs.par_iter().map(|i| bench_file(i, opts, &pca)).collect();
    let mut rows = Vec::new();
    for r in per_file {
        rows.extend(r?);
    }
    rows.sort_by(|a, b| {
        a.codec
            .cmp(&b.codec)
            .then(a.cr.total_cmp(&b.cr))
            .then_with(|| a.file.cmp(&b.file))
    });
    Ok(rows)
}

#[derive(Serialize)]
struct JsonReport<'a> {
    settings: &'a BenchOptions,
    welch: vibcodec::dsp::WelchConfig,
    notes: [&'static str; 4],
    rows: &'a [BenchRow],
}

const NOTES: [&str; 4] = [
    "bits = payload bits + 16 bits per transmitted index, summed over the file's windows",
    "cs = DCT coefficients picked by seeded random selection, standing in for compressed sensing",
    "pca = fitted on the benchmarked windows themselves, components capped by the training rank",
    "no-hpq = alpha 0 and fine width everywhere, at the payload the full codec used for the same window",
];

/// Mean of `metric` over files per (codec, CR).
fn curves(rows: &[BenchRow], metric: fn(&BenchRow) -> f64) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    for row in rows {
        let idx = match out.iter().position(|s| s.name == row.codec) {
            Some(i) => i,
            None => {
                out.push(Series {
                    name: row.codec.clone(),
                    points: Vec::new(),
                });
                out.len() - 1
            }
        };
        out[idx].points.push((row.cr, metric(row)));
    }
    for s in &mut out {
        let mut merged: Vec<(f64, f64, usize)> = Vec::new();
        for &(x, y) in &s.points {
            match merged.iter_mut().find(|m| m.0 == x) {
                Some(m) => {
                    m.1 += y;
                    m.2 += 1;
                }
                None => merged.push((x, y, 1)),
            }
        }
        merged.sort_by(|a, b| a.0.total_cmp(&b.0));
        s.points = merged.into_iter().map(|(x, y, c)| (x, y / c as f64)).collect();
    }
    out
}

/// Writes `bench.csv`, `bench.json` and the SNR/PRD/SCR-vs-CR plots.
pub fn write_reports(rows: &[BenchRow], opts: &BenchOptions, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| ToolError::file(out_dir, e))?;
    let csv_path = out_dir.join("bench.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| ToolError::file(&csv_path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| ToolError::file(&csv_path, e))?;
    }
    if rows.is_empty() {
        w.write_record([
            "codec", "cr", "file", "window", "bits", "snr_db", "prd_percent", "scr_consistency", "scr_sideband",
            "gda_loss", "mec_loss", "cwt_loss", "ac_loss", "encode_us", "decode_us",
        ])
        .map_err(|e| ToolError::file(&csv_path, e))?;
    }
    w.flush().map_err(|e| ToolError::file(&csv_path, e))?;

    let report = JsonReport {
        settings: opts,
        welch: vibcodec::dsp::WelchConfig::default(),
        notes: NOTES,
        rows,
    };
    let json_path = out_dir.join("bench.json");
    let text = serde_json::to_string_pretty(&report).map_err(|e| ToolError::file(&json_path, e))?;
    fs::write(&json_path, text + "\n").map_err(|e| ToolError::file(&json_path, e))?;

    type Plot = (&'static str, &'static str, &'static str, fn(&BenchRow) -> f64);
    let plots: [Plot; 3] = [
        ("snr_vs_cr.svg", "SNR vs compression ratio", "SNR (dB)", |r| r.snr_db),
        ("prd_vs_cr.svg", "PRD vs compression ratio", "PRD (%)", |r| r.prd_percent),
        ("scr_vs_cr.svg", "SCR (diagnostic/broadband) vs compression ratio", "SCR", |r| r.scr_consistency),
    ];
    for (file, title, ylabel, metric) in plots {
        let svg = line_chart(title, "compression ratio", ylabel, &curves(rows, metric), true);
        let p = out_dir.join(file);
        fs::write(&p, svg).map_err(|e| ToolError::file(&p, e))?;
    }
    Ok(())
}
