//! The `vibcodec` command line: `synth`, `encode`, `decode` and `bench`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};
use rayon::prelude::*;
use vibcodec::codec::{pack_frame, BitBudget, EncodedFrame, Encoder, FrameReader, StepRule};
use vibcodec::decoder::{decode_stream, encode_stream, refine_stream, RefineConfig};
use vibcodec::harmonic::{classify_bins, derive_harmonics};
use vibcodec::synth::{segment, CorpusSpec};

use crate::bench::{self, BenchInput, BenchOptions, CodecKind};
use crate::config::{Config, FileFormat, Kinematics};
use crate::error::{Result, ToolError};
use crate::io::{load_signal, save_signal, Column, Manifest, ManifestEntry, Signal};

#[derive(Debug, Parser)]
#[command(name = "vibcodec", version, about = "Harmonic-preserving vibration codec")]
pub struct Cli {
    /// TOML configuration; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the synthetic gearbox corpus, one file per window.
    Synth(SynthArgs),
    /// Compress a WAV or CSV signal into a frame stream.
    Encode(EncodeArgs),
    /// Reconstruct a signal from a frame stream.
    Decode(DecodeArgs),
    /// Sweep codecs and compression ratios over a manifest of files.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<FileFormat>,
    #[arg(long)]
    pub windows_per_class: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Target ratio N/K of coefficients to kept coefficients.
    #[arg(long)]
    pub cr: Option<f64>,
    /// TOML file with the gearbox kinematics.
    #[arg(long, value_name = "FILE")]
    pub kinematics: Option<PathBuf>,
    /// Fixed base quantiser step.
    #[arg(long)]
    pub delta0: Option<f64>,
    /// Step ratio between background and protected bins.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub fine_bits: Option<u8>,
    #[arg(long)]
    pub coarse_bits: Option<u8>,
    /// Payload bits per frame.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub token_len: Option<usize>,
    #[arg(long)]
    pub window_len: Option<usize>,
    /// Required for CSV input.
    #[arg(long)]
    pub sample_rate: Option<f64>,
    /// CSV column (index or header name) or WAV channel.
    #[arg(long, default_value = "0")]
    pub column: Column,
    /// Mark frames as wanting decoder-side refinement.
    #[arg(long)]
    pub refine_hint: bool,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Projection steps onto the protected-band targets.
    #[arg(long, default_value_t = 0)]
    pub refine: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    pub manifest: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub crs: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub codecs: Option<Vec<String>>,
    #[arg(long, value_name = "DIR", default_value = "bench_out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub window_len: Option<usize>,
    /// Write zero timings so reports are byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    init_logging(cli.verbose);
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .format_timestamp(None)
        .try_init();
}

pub fn run(cli: &Cli) -> Result<()> {
    let config = Config::load_or_default(cli.config.as_deref())?;
    match &cli.command {
        Command::Synth(a) => synth(&config, a),
        Command::Encode(a) => encode(&config, a),
        Command::Decode(a) => decode(a),
        Command::Bench(a) => bench_cmd(&config, a),
    }
}

fn synth(config: &Config, args: &SynthArgs) -> Result<()> {
    let s = &config.synth;
    let seed = args.seed.unwrap_or(s.seed);
    let format = args.format.unwrap_or(s.format);
    let mut spec = CorpusSpec::default_corpus(seed);
    spec.sample_rate_hz = s.sample_rate_hz;
    spec.window_len = s.window_len;
    spec.windows_per_class = args.windows_per_class.unwrap_or(s.windows_per_class);
    spec.kinematics = config.kinematics.spec(s.sample_rate_hz, s.window_len)?;
    for c in &mut spec.classes {
        c.profile.noise_snr_db = s.noise_snr_db;
    }
    let classes = spec.generate()?;
    let ext = match format {
        FileFormat::Wav => "wav",
        FileFormat::Csv => "csv",
    };
    let mut manifest = Manifest {
        base_dir: args.out.clone(),
        entries: Vec::new(),
    };
    for class in &classes {
        let dir = args.out.join(&class.label);
        fs::create_dir_all(&dir).map_err(|e| ToolError::file(&dir, e))?;
        let windows = segment(&class.samples, spec.sample_rate_hz, spec.window_len, spec.window_len)?;
        let entries: Vec<ManifestEntry> = windows
            .into_par_iter()
            .enumerate()
            .map(|(i, w)| {
                let rel = PathBuf::from(&class.label).join(format!("{}_{i:04}.{ext}", class.label));
                let signal = Signal {
                    samples: w.into_samples(),
                    sample_rate_hz: spec.sample_rate_hz,
                };
                save_signal(&args.out.join(&rel), &signal)?;
                Ok(ManifestEntry {
                    path: rel,
                    label: class.label.clone(),
                    sample_rate_hz: spec.sample_rate_hz,
                    channel: 0,
                })
            })
            .collect::<Result<_>>()?;
        manifest.entries.extend(entries);
    }
    let mpath = args.out.join("manifest.csv");
    fs::write(&mpath, manifest.to_text()).map_err(|e| ToolError::file(&mpath, e))?;

    let classes_json: Vec<_> = spec
        .classes
        .iter()
        .map(|c| {
            serde_json::json!({
                "label": c.label,
                "harmonic_amplitudes": c.profile.harmonic_amplitudes,
                "sideband_mod_index": c.profile.sideband_mod_index,
                "noise_snr_db": c.profile.noise_snr_db,
                "seed": c.profile.seed,
            })
        })
        .collect();
    let k = &spec.kinematics;
    let meta = serde_json::json!({
        "seed": seed,
        "sample_rate_hz": spec.sample_rate_hz,
        "window_len": spec.window_len,
        "windows_per_class": spec.windows_per_class,
        "format": ext,
        "kinematics": {
            "shaft_rpm": k.shaft_rpm,
            "pinion_teeth": k.pinion_teeth,
            "n_harmonics": k.n_harmonics,
            "n_sidebands_per_harmonic": k.n_sidebands_per_harmonic,
            "band_half_width_hz": k.band_half_width_hz,
        },
        "classes": classes_json,
    });
    let jpath = args.out.join("corpus.json");
    let text = serde_json::to_string_pretty(&meta).map_err(|e| ToolError::file(&jpath, e))?;
    fs::write(&jpath, text + "\n").map_err(|e| ToolError::file(&jpath, e))?;
    println!(
        "wrote {} files in {} classes to {}",
        manifest.entries.len(),
        classes.len(),
        args.out.display()
    );
    Ok(())
}

fn encode(config: &Config, args: &EncodeArgs) -> Result<()> {
    let signal = load_signal(&args.input, &args.column, args.sample_rate)?;
    let fs = signal.sample_rate_hz;
    let n = args.window_len.unwrap_or(config.quant.window_len);
    let mut cfg = config.encoder_config()?;
    if let Some(cr) = args.cr {
        cfg.compression_ratio = cr;
    }
    if let Some(d) = args.delta0 {
        cfg.step_rule = StepRule::Fixed(d);
    }
    if let Some(a) = args.alpha {
        cfg.alpha = a;
    }
    if let Some(b) = args.fine_bits {
        cfg.fine_bits = b;
    }
    if let Some(b) = args.coarse_bits {
        cfg.coarse_bits = b;
    }
    if let Some(b) = args.budget {
        cfg.budget = Some(BitBudget::new(b));
    }
    if let Some(d) = args.token_len {
        cfg.token_len = d;
    }
    cfg.refine_hint |= args.refine_hint;
    cfg.validate().map_err(|e| ToolError::usage(e.to_string()))?;

    let kin = match &args.kinematics {
        Some(p) => Kinematics::load(p)?,
        None => config.kinematics.clone(),
    };
    let map = derive_harmonics(&kin.spec(fs, n)?)?;
    let encoder = Encoder::new(cfg, classify_bins(&map, n, fs))?;
    if signal.samples.len() < n {
        return Err(ToolError::io(format!(
            "{}: {} samples, fewer than one {n}-sample window",
            args.input.display(),
            signal.samples.len()
        )));
    }
    let outcomes = encode_stream(&signal.samples, fs, &encoder)?;

    let mut bytes = Vec::new();
    let (mut kept, mut bits) = (0usize, 0u64);
    for (i, o) in outcomes.iter().enumerate() {
        let f = &o.frame;
        let packed = pack_frame(f);
        println!(
            "frame {i}: {} tokens, {} coefficients, {} payload bits, {} bytes",
            f.kept_count(),
            f.codes.len(),
            f.payload_bits(),
            packed.len()
        );
        kept += f.codes.len();
        bits += f.transmitted_bits();
        bytes.extend(packed);
    }
    fs::write(&args.output, &bytes).map_err(|e| ToolError::file(&args.output, e))?;

    let frames = outcomes.len();
    let coeffs = frames * n;
    let pcm_bits = (coeffs * 16) as f64;
    println!(
        "{frames} frames, achieved CR {:.2} (coefficients), {:.2} vs 16-bit PCM (payload + indices), {:.2} vs 16-bit PCM (file)",
        coeffs as f64 / kept.max(1) as f64,
        pcm_bits / bits.max(1) as f64,
        pcm_bits / (bytes.len() * 8) as f64,
    );
    Ok(())
}

fn read_frames(path: &Path) -> Result<(Vec<Option<EncodedFrame>>, usize)> {
    let bytes = fs::read(path).map_err(|e| ToolError::file(path, e))?;
    let mut frames = Vec::new();
    let mut bad = 0;
    let mut reader = FrameReader::new(&bytes);
    loop {
        let at = reader.offset();
        match reader.next() {
            None => break,
            Some(Ok(f)) => frames.push(Some(f)),
            Some(Err(e)) => {
                log::warn!("frame {} at byte {at}: {e}; replaced by silence", frames.len());
                bad += 1;
                frames.push(None);
            }
        }
    }
    Ok((frames, bad))
}

fn decode(args: &DecodeArgs) -> Result<()> {
    let (frames, bad) = read_frames(&args.input)?;
    let Some(first) = frames.iter().flatten().next() else {
        return Err(ToolError::io(format!("{}: no valid frames", args.input.display())));
    };
    let (n, rate) = (first.window_len(), first.header.sample_rate_hz);
    if let Some(f) = frames.iter().flatten().find(|f| f.window_len() != n || f.header.sample_rate_hz != rate) {
        return Err(ToolError::io(format!(
            "{}: mixed frame shapes ({n} samples at {rate} Hz and {} at {} Hz)",
            args.input.display(),
            f.window_len(),
            f.header.sample_rate_hz
        )));
    }
    let mut samples = decode_stream(&frames)?;
    if args.refine > 0 {
        samples = refine_stream(&samples, &frames, &RefineConfig::constant(args.refine, 0.5, 1.0))?;
    }
    let signal = Signal {
        samples,
        sample_rate_hz: rate as f64,
    };
    save_signal(&args.output, &signal)?;
    println!(
        "{} frames, {bad} corrupted, {} samples written to {}",
        frames.len(),
        signal.samples.len(),
        args.output.display()
    );
    Ok(())
}

fn bench_cmd(config: &Config, args: &BenchArgs) -> Result<()> {
    let manifest = Manifest::load(&args.manifest)?;
    if manifest.entries.is_empty() {
        return Err(ToolError::usage(format!("{}: no entries", args.manifest.display())));
    }
    let b = &config.bench;
    let codecs = args
        .codecs
        .as_ref()
        .unwrap_or(&b.codecs)
        .iter()
        .map(|s| s.parse::<CodecKind>())
        .collect::<Result<Vec<_>>>()?;
    let opts = BenchOptions {
        crs: args.crs.clone().unwrap_or_else(|| b.crs.clone()),
        codecs,
        window_len: args.window_len.unwrap_or(b.window_len),
        seed: args.seed.unwrap_or(b.seed),
        timing: b.timing && !args.no_timing,
        encoder: config.encoder_config()?,
        kinematics: config.kinematics.clone(),
    };
    let inputs = manifest
        .entries
        .par_iter()
        .map(|e| {
            Ok(BenchInput {
                name: e.path.display().to_string(),
                signal: manifest.load_entry(e)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = bench::run(&inputs, &opts)?;
    bench::write_reports(&rows, &opts, &args.out)?;

    println!("{:<8} {:>6} {:>10} {:>10} {:>8}", "codec", "cr", "snr_db", "prd_%", "scr");
    for codec in &opts.codecs {
        for &cr in &opts.crs {
            let sel: Vec<_> = rows.iter().filter(|r| r.codec == codec.name() && r.cr == cr).collect();
            let mean = |f: fn(&bench::BenchRow) -> f64| sel.iter().map(|r| f(r)).sum::<f64>() / sel.len().max(1) as f64;
            println!(
                "{:<8} {:>6} {:>10.2} {:>10.2} {:>8.4}",
                codec.name(),
                cr,
                mean(|r| r.snr_db),
                mean(|r| r.prd_percent),
                mean(|r| r.scr_consistency)
            );
        }
    }
    println!("{} rows written to {}", rows.len(), args.out.display());
    Ok(())
}
