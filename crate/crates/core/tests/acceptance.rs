//! Acceptance suite, run without the libtest harness so that every criterion
//! prints its `PASS`/`FAIL` line under a plain `cargo test`. Exits non-zero
//! when a criterion outside `KNOWN_RED` fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use vibcodec::baselines::{ablation_no_hpq, dct_topk_encode};
use vibcodec::codec::{
    frame_bits, pack_frame, parse_frame, quantize_value, BitBudget, CodecFamily, EncodedFrame, Encoder, EncoderConfig,
    FrameHeader, StepRule,
};
use vibcodec::decoder::{
    analysis_windows, decode_stream, encode_stream, pc_refine, protected_deviation, refine_stream, stream_deviation,
    stream_interior, synthesize_frame, ProjectionTargets, RefineConfig,
};
use vibcodec::diagnostics::{accuracy_delta, CentroidModel, FeatureExtractor};
use vibcodec::dsp::{dct2_ortho, welch_psd, SignalWindow, WelchConfig};
use vibcodec::harmonic::{
    classify_bins, derive_harmonics, scr_band_energies, BandClassification, HarmonicMap, KinematicSpec,
};
use vibcodec::metrics::{ac_loss, cwt_loss, gda_loss, mec_loss, prd, scr_consistency, snr, default_mec_edges};
use vibcodec::synth::{segment, split_per_class, synth_gear, CorpusSpec};
use vibcodec::Error;

const FS: f64 = 20_000.0;
const N: usize = 1024;

/// Criteria known not to hold; they still run and print `FAIL`. See the
/// README section "Known failing criteria".
const KNOWN_RED: &[u32] = &[3, 5];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn setup() -> (KinematicSpec, HarmonicMap, BandClassification) {
    let kin = KinematicSpec::gearbox_default(FS, N);
    let map = derive_harmonics(&kin).unwrap();
    let cls = classify_bins(&map, N, FS);
    (kin, map, cls)
}

/// 50 block windows drawn evenly from the four corpus classes.
fn synthetic_windows(seed: u64) -> Vec<SignalWindow> {
    let mut spec = CorpusSpec::default_corpus(seed);
    spec.windows_per_class = 13;
    spec.labeled_windows().unwrap().into_iter().map(|(_, w)| w).take(50).collect()
}

fn config(cr: f64) -> EncoderConfig {
    EncoderConfig {
        compression_ratio: cr,
        ..EncoderConfig::default()
    }
}

fn roundtrip(window: &SignalWindow, encoder: &Encoder) -> Vec<f64> {
    let frame = encoder.encode(window).unwrap().frame;
    synthesize_frame(&frame).unwrap().into_samples()
}

fn random_frame(rng: &mut ChaCha8Rng) -> EncodedFrame {
    let n = 1usize << rng.random_range(0..=10);
    let d = 1usize << rng.random_range(0..=n.trailing_zeros());
    let total = n / d;
    let coarse = rng.random_range(2..=16u8);
    let fine = rng.random_range(coarse..=16u8);
    let family = [
        CodecFamily::HarmonicTokens,
        CodecFamily::DctTopK,
        CodecFamily::Pca,
        CodecFamily::RandomDct,
    ][rng.random_range(0..4)];
    let header = FrameHeader {
        family,
        refine_hint: rng.random(),
        sample_rate_hz: rng.random_range(1..=200_000),
        window_len: n as u16,
        token_len: d as u16,
        total_tokens: total as u16,
        delta0: rng.random_range(1e-6f32..10.0),
        alpha: rng.random_range(0.0f32..8.0),
        fine_bits: fine,
        coarse_bits: coarse,
    };
    let band_bitmap = (0..n).map(|_| rng.random_bool(0.3)).collect();
    let kept_indices = (0..total as u16).filter(|_| rng.random_bool(0.4)).collect();
    let mut frame = EncodedFrame {
        header,
        band_bitmap,
        kept_indices,
        codes: Vec::new(),
    };
    let widths: Vec<u8> = frame.code_widths().collect();
    frame.codes = widths
        .into_iter()
        .map(|w| quantize_value(rng.random_range(-70_000.0..70_000.0), 1.0, w).0)
        .collect();
    frame
}

fn wire_round_trip() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let f = random_frame(&mut rng);
        if parse_frame(&pack_frame(&f)).as_ref() != Ok(&f) {
            mismatches += 1;
        }
    }
    let mut accepted = 0;
    let valid = pack_frame(&random_frame(&mut rng));
    for i in 0..10_000 {
        let bytes: Vec<u8> = if i % 2 == 0 {
            let len = rng.random_range(0..200);
            (0..len).map(|_| rng.random()).collect()
        } else {
            // mutations of a valid frame reach deeper into the parser
            let mut b = valid.clone();
            for _ in 0..rng.random_range(1..4) {
                let at = rng.random_range(0..b.len());
                b[at] = rng.random();
            }
            b.truncate(rng.random_range(0..=b.len()));
            b
        };
        let outcome = std::panic::catch_unwind(|| parse_frame(&bytes).is_ok());
        match outcome {
            Ok(true) => accepted += 1,
            Ok(false) => {}
            Err(_) => return verdict(false, format!("parser panicked on fuzz input {i}")),
        }
    }
    let elapsed = start.elapsed();
    verdict(
        mismatches == 0 && elapsed < Duration::from_secs(30),
        format!("1000 round trips, {mismatches} mismatches; 10000 fuzz inputs, 0 panics, {accepted} accepted; {elapsed:.2?}"),
    )
}

fn budget_enforcement() -> Verdict {
    let start = Instant::now();
    let (_, _, cls) = setup();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut over, mut infeasible, mut wrong_error) = (0, 0, 0);
    for _ in 0..1000 {
        let amp = rng.random_range(0.01..100.0);
        let samples: Vec<f64> = (0..N).map(|_| amp * rng.sample::<f64, _>(StandardNormal)).collect();
        let window = SignalWindow::new(samples, FS, 0).unwrap();
        let b_max = rng.random_range(0..6000u64);
        let cfg = EncoderConfig {
            compression_ratio: [1.0, 2.0, 4.0, 8.0, 16.0][rng.random_range(0..5)],
            budget: Some(BitBudget::new(b_max)),
            ..EncoderConfig::default()
        };
        match Encoder::new(cfg, cls.clone()).unwrap().encode(&window) {
            Ok(out) => {
                if frame_bits(&out.frame) > b_max {
                    over += 1;
                }
            }
            Err(Error::BudgetInfeasible { .. }) if b_max < 32 => infeasible += 1,
            Err(_) => wrong_error += 1,
        }
    }
    let mut uniform_mismatch = 0;
    for (i, q) in [2u8, 4, 8, 12, 16].into_iter().enumerate() {
        for r in [1.0, 3.0, 4.0, 16.0, 128.0] {
            let samples: Vec<f64> = (0..N).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let window = SignalWindow::new(samples, FS, i).unwrap();
            let cfg = EncoderConfig {
                compression_ratio: r,
                fine_bits: q,
                coarse_bits: q,
                ..EncoderConfig::default()
            };
            let frame = Encoder::new(cfg, cls.clone()).unwrap().encode(&window).unwrap().frame;
            let k = ((128.0 / r).round() as u64).max(1);
            if frame_bits(&frame) != k * 8 * q as u64 {
                uniform_mismatch += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        over == 0 && wrong_error == 0 && uniform_mismatch == 0 && elapsed < Duration::from_secs(60),
        format!(
            "1000 encodes: {over} over budget, {infeasible} correctly infeasible, {wrong_error} unexpected errors; \
             uniform K*d*q mismatches {uniform_mismatch}/25; {elapsed:.2?}"
        ),
    )
}

/// Stream-interior SNR of 50 half-overlapping windows with a per-window step.
fn near_lossless_snr(step_for: impl Fn(&[f64]) -> StepRule) -> f64 {
    let (kin, _, cls) = setup();
    let profile = CorpusSpec::default_corpus(3).classes[2].profile.clone();
    let len = 49 * N / 2 + N;
    let signal = synth_gear(&kin, &profile, len as f64 / FS, FS).unwrap();
    let windows = analysis_windows(&signal, FS, N).unwrap();
    assert_eq!(windows.len(), 50);
    let frames: Vec<Option<EncodedFrame>> = windows
        .iter()
        .map(|w| {
            let cfg = EncoderConfig {
                compression_ratio: 1.0,
                fine_bits: 16,
                coarse_bits: 16,
                alpha: 0.0,
                step_rule: step_for(&dct2_ortho(w.samples())),
                ..EncoderConfig::default()
            };
            Some(Encoder::new(cfg, cls.clone()).unwrap().encode(w).unwrap().frame)
        })
        .collect();
    let out = decode_stream(&frames).unwrap();
    let range = stream_interior(frames.len(), N);
    snr(&signal[range.clone()], &out[range]).unwrap()
}

fn near_lossless() -> Verdict {
    let max_abs = |c: &[f64]| c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let literal = near_lossless_snr(|c| StepRule::Fixed(1e-6 * max_abs(c)));
    let finest = near_lossless_snr(|_| StepRule::NoSaturation);
    verdict(
        literal >= 60.0,
        format!(
            "delta0 = 1e-6*max|c|: {literal:.2} dB (16-bit codes saturate above 3.3% of max|c|); \
             finest non-saturating 16-bit step: {finest:.2} dB"
        ),
    )
}

fn monotonicity() -> Verdict {
    let (_, _, cls) = setup();
    let windows = synthetic_windows(4);
    let crs = [4.0, 8.0, 16.0, 32.0, 64.0];
    let mean = |v: Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    let ours: Vec<f64> = crs
        .iter()
        .map(|&cr| {
            let enc = Encoder::new(config(cr), cls.clone()).unwrap();
            mean(windows.iter().map(|w| snr(w.samples(), &roundtrip(w, &enc)).unwrap()).collect())
        })
        .collect();
    let dct: Vec<f64> = crs
        .iter()
        .map(|&cr| {
            let k = (N as f64 / cr).round() as usize;
            mean(
                windows
                    .iter()
                    .map(|w| {
                        let f = dct_topk_encode(w, k, 8).unwrap();
                        snr(w.samples(), synthesize_frame(&f).unwrap().samples()).unwrap()
                    })
                    .collect(),
            )
        })
        .collect();
    let non_increasing = |v: &[f64]| v.windows(2).all(|p| p[1] <= p[0] + 0.2);
    let fmt = |v: &[f64]| v.iter().map(|s| format!("{s:.2}")).collect::<Vec<_>>().join(" ");
    verdict(
        non_increasing(&ours) && non_increasing(&dct),
        format!("mean SNR dB at CR 4..64: codec [{}], dct [{}]", fmt(&ours), fmt(&dct)),
    )
}

fn relative_error(reference: f64, value: f64) -> f64 {
    (value - reference).abs() / reference
}

/// Carrier plus sideband energy.
fn band_energy(x: &[f64], map: &HarmonicMap, welch: &WelchConfig) -> f64 {
    let e = scr_band_energies(&welch_psd(x, FS, welch).unwrap(), map).unwrap();
    e.carrier + e.sideband
}

fn harmonic_protection() -> Verdict {
    let (_, map, cls) = setup();
    let welch = WelchConfig::default();
    let mut lines = Vec::new();
    let mut pass = true;
    for seed in 0..5u64 {
        let windows: Vec<SignalWindow> = CorpusSpec::default_corpus(seed)
            .labeled_windows()
            .unwrap()
            .into_iter()
            .map(|(_, w)| w)
            .collect();
        let reference: Vec<(f64, f64)> = windows
            .iter()
            .map(|w| {
                let x = w.samples();
                (scr_consistency(x, FS, &map, &welch).unwrap(), band_energy(x, &map, &welch))
            })
            .collect();
        for cr in [16.0, 32.0, 64.0] {
            let enc = Encoder::new(config(cr), cls.clone()).unwrap();
            // [scr error, band energy error, kept tokens] for HP and uniform
            let mut acc = [[0.0; 3]; 2];
            for (w, &(scr_ref, band_ref)) in windows.iter().zip(&reference) {
                let frame = enc.encode(w).unwrap().frame;
                let budget = EncoderConfig {
                    budget: Some(BitBudget::new(frame_bits(&frame))),
                    ..config(cr)
                };
                let flat = match ablation_no_hpq(w, &cls, &budget) {
                    Ok(out) => Some(out.frame),
                    // nothing fits: the receiver sees silence
                    Err(Error::BudgetInfeasible { .. }) => None,
                    Err(e) => panic!("{e}"),
                };
                for (slot, f) in acc.iter_mut().zip([Some(frame), flat]) {
                    let Some(f) = f else {
                        slot[0] += 1.0;
                        slot[1] += 1.0;
                        continue;
                    };
                    let xhat = synthesize_frame(&f).unwrap().into_samples();
                    slot[0] += relative_error(scr_ref, scr_consistency(&xhat, FS, &map, &welch).unwrap());
                    slot[1] += relative_error(band_ref, band_energy(&xhat, &map, &welch));
                    slot[2] += f.kept_count() as f64;
                }
            }
            let count = windows.len() as f64;
            let [hp, flat] = acc.map(|a| a.map(|v| v / count));
            pass &= hp[0] <= flat[0];
            lines.push(format!(
                "s{seed}/cr{cr}: scr {:.4} vs {:.4}, band {:.4} vs {:.4}, K {:.1} vs {:.1}",
                hp[0], flat[0], hp[1], flat[1], hp[2], flat[2]
            ));
        }
    }
    verdict(pass, format!("HP vs uniform at equal bits: {}", lines.join("; ")))
}

fn peak_retention() -> Verdict {
    let (kin, _, cls) = setup();
    let windows = synthetic_windows(6);
    let welch = WelchConfig::default();
    let gmf = kin.gear_mesh_hz();
    let peaks = |x: &[f64]| -> Vec<usize> {
        let psd = welch_psd(x, FS, &welch).unwrap();
        let res = psd.resolution_hz();
        (1..=3)
            .map(|m| {
                let f = m as f64 * gmf;
                let lo = ((f - 100.0) / res).floor() as usize;
                let hi = ((f + 100.0) / res).ceil() as usize;
                psd.peak_bin_in(lo, hi)
            })
            .collect()
    };
    let mut pass = true;
    let mut lines = Vec::new();
    for cr in [1.0, 2.0, 4.0, 8.0, 16.0] {
        let enc = Encoder::new(config(cr), cls.clone()).unwrap();
        let ok = windows
            .iter()
            .filter(|w| {
                let a = peaks(w.samples());
                let b = peaks(&roundtrip(w, &enc));
                a.iter().zip(&b).all(|(p, q)| p.abs_diff(*q) <= 1)
            })
            .count();
        let frac = ok as f64 / windows.len() as f64;
        pass &= frac >= 0.95;
        lines.push(format!("cr{cr}: {:.0}%", 100.0 * frac));
    }
    verdict(pass, format!("windows with all 3 peaks within 1 bin: {}", lines.join(", ")))
}

fn downstream_preservation() -> Verdict {
    let start = Instant::now();
    let (_, map, cls) = setup();
    let extractor = FeatureExtractor::new(map, FS);
    let enc = Encoder::new(config(8.0), cls).unwrap();
    let (mut acc_o, mut acc_r) = (0.0, 0.0);
    let mut lines = Vec::new();
    for seed in 0..5u64 {
        let windows = CorpusSpec::default_corpus(seed).labeled_windows().unwrap();
        let (train, test) = split_per_class(&windows, 200);
        let feats: Vec<_> = train
            .iter()
            .map(|(l, w)| (l.clone(), extractor.extract(w.samples()).unwrap()))
            .collect();
        let model = CentroidModel::fit(&feats).unwrap();
        let originals: Vec<Vec<f64>> = test.iter().map(|(_, w)| w.samples().to_vec()).collect();
        let recons: Vec<Vec<f64>> = test.iter().map(|(_, w)| roundtrip(w, &enc)).collect();
        let labels: Vec<String> = test.iter().map(|(l, _)| l.clone()).collect();
        let (o, r) = accuracy_delta(&model, &extractor, &originals, &recons, &labels).unwrap();
        acc_o += o / 5.0;
        acc_r += r / 5.0;
        lines.push(format!("{:.1}/{:.1}", 100.0 * o, 100.0 * r));
    }
    let elapsed = start.elapsed();
    verdict(
        acc_r >= acc_o - 0.05 && elapsed < Duration::from_secs(120),
        format!(
            "accuracy original {:.1}%, reconstructed {:.1}% (per seed {}); {elapsed:.2?}",
            100.0 * acc_o,
            100.0 * acc_r,
            lines.join(" ")
        ),
    )
}

fn metric_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let len = rng.random_range(2..300);
        let x: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        let e = rng.random_range(1e-4..10.0);
        let xhat: Vec<f64> = x.iter().map(|v| v + e * rng.sample::<f64, _>(StandardNormal)).collect();
        let (s, p) = (snr(&x, &xhat).unwrap(), prd(&x, &xhat).unwrap());
        worst = worst.max((s + 20.0 * (p / 100.0).log10()).abs());
    }
    if worst > 1e-9 {
        failures.push(format!("snr/prd identity off by {worst:e}"));
    }
    let edges = default_mec_edges(FS);
    for trial in 0..5 {
        let x: Vec<f64> = (0..N).map(|_| rng.sample(StandardNormal)).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.7 * v + 0.5 * rng.sample::<f64, _>(StandardNormal)).collect();
        let zero = [
            ("mse", 0.0),
            ("gda", gda_loss(&x, &x).unwrap()),
            ("mec", mec_loss(&x, &x, FS, &edges).unwrap()),
            ("cwt", cwt_loss(&x, &x, FS).unwrap()),
            ("ac", ac_loss(&x, &x, 64).unwrap()),
        ];
        for (name, v) in zero {
            if v.abs() > 1e-12 {
                failures.push(format!("{name}(x, x) = {v:e}"));
            }
        }
        let (a, b) = (rng.random_range(0.1..10.0), rng.random_range(-5.0..5.0));
        let shifted: Vec<f64> = y.iter().map(|v| a * v + b).collect();
        let g = gda_loss(&x, &y).unwrap();
        if (gda_loss(&x, &shifted).unwrap() - g).abs() > 1e-9 {
            failures.push(format!("gda not affine invariant in trial {trial}"));
        }
        let pairs = [
            ("mec", mec_loss(&x, &y, FS, &edges).unwrap(), mec_loss(&y, &x, FS, &edges).unwrap()),
            ("cwt", cwt_loss(&x, &y, FS).unwrap(), cwt_loss(&y, &x, FS).unwrap()),
            ("ac", ac_loss(&x, &y, 64).unwrap(), ac_loss(&y, &x, 64).unwrap()),
        ];
        for (name, u, v) in pairs {
            if (u - v).abs() > 1e-9 * u.abs().max(1.0) {
                failures.push(format!("{name} asymmetric: {u} vs {v}"));
            }
        }
    }
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!("1000 snr/prd pairs (max error {worst:.1e}), zero losses at x, gda affine invariance, mec/cwt/ac symmetry")
        } else {
            failures.join("; ")
        },
    )
}

fn refine_contraction() -> Verdict {
    let (kin, _, cls) = setup();
    let profile = CorpusSpec::default_corpus(9).classes[3].profile.clone();
    let len = 99 * N / 2 + N;
    let signal = synth_gear(&kin, &profile, len as f64 / FS, FS).unwrap();
    let enc = Encoder::new(config(8.0), cls.clone()).unwrap();
    let frames: Vec<Option<EncodedFrame>> = encode_stream(&signal, FS, &enc)
        .unwrap()
        .into_iter()
        .map(|o| Some(o.frame))
        .collect();
    assert_eq!(frames.len(), 100);
    let stream = decode_stream(&frames).unwrap();
    let cfg = |k| RefineConfig::constant(k, 0.5, 1.0);

    // per frame: the tapered stream segment is what the frame's analysis sees
    let taper = vibcodec::dsp::sqrt_hann(N);
    let mut frame_violations = 0;
    let mut identity_broken = 0;
    for (i, frame) in frames.iter().enumerate() {
        let frame = frame.as_ref().unwrap();
        let targets = ProjectionTargets::from_frame(frame, &cls).unwrap();
        let seg: Vec<f64> = stream[i * N / 2..i * N / 2 + N].iter().zip(&taper).map(|(a, w)| a * w).collect();
        let devs: Vec<f64> = (0..=4)
            .map(|k| protected_deviation(&pc_refine(&seg, &targets, &cfg(k)).unwrap(), &targets).unwrap())
            .collect();
        if devs.windows(2).any(|p| p[1] > p[0] * (1.0 + 1e-12) + 1e-12) {
            frame_violations += 1;
        }
        let same = pc_refine(&seg, &targets, &cfg(0)).unwrap() == seg
            && pc_refine(&seg, &targets, &RefineConfig::constant(4, 0.5, 0.0)).unwrap() == seg;
        if !same {
            identity_broken += 1;
        }
    }
    let stream_devs: Vec<f64> = (0..=4)
        .map(|k| stream_deviation(&refine_stream(&stream, &frames, &cfg(k)).unwrap(), &frames).unwrap())
        .collect();
    let stream_ok = stream_devs.windows(2).all(|p| p[1] <= p[0] * (1.0 + 1e-12));
    let stream_identity = refine_stream(&stream, &frames, &cfg(0)).unwrap() == stream
        && refine_stream(&stream, &frames, &RefineConfig::constant(4, 0.5, 0.0)).unwrap() == stream;
    verdict(
        frame_violations == 0 && identity_broken == 0 && stream_ok && stream_identity,
        format!(
            "100 frames: {frame_violations} increases, {identity_broken} identity breaks; stream deviation {}",
            stream_devs.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>().join(" -> ")
        ),
    )
}

fn sats_cardinality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad = Vec::new();
    for tokens in [8usize, 16, 128] {
        let n = tokens * 8;
        let map = derive_harmonics(&KinematicSpec::gearbox_default(FS, n)).unwrap();
        let cls = classify_bins(&map, n, FS);
        let samples: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let window = SignalWindow::new(samples, FS, 0).unwrap();
        for r in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let frame = Encoder::new(config(r), cls.clone()).unwrap().encode(&window).unwrap().frame;
            let expected = ((tokens as f64 / r).round() as usize).max(1);
            if frame.kept_count() != expected {
                bad.push(format!("N={tokens} R={r}: {} != {expected}", frame.kept_count()));
            }
        }
    }
    verdict(
        bad.is_empty(),
        if bad.is_empty() { "15 grid points match max(1, round(N/R))".into() } else { bad.join("; ") },
    )
}

fn performance() -> Verdict {
    let (kin, _, cls) = setup();
    let profile = CorpusSpec::default_corpus(11).classes[1].profile.clone();
    let signal = synth_gear(&kin, &profile, N as f64 / FS, FS).unwrap();
    let window = segment(&signal, FS, N, N).unwrap().remove(0);
    let enc = Encoder::new(config(16.0), cls).unwrap();
    let mut times: Vec<Duration> = (0..201)
        .map(|_| {
            let t = Instant::now();
            let bytes = pack_frame(&enc.encode(&window).unwrap().frame);
            let out = synthesize_frame(&parse_frame(&bytes).unwrap()).unwrap();
            std::hint::black_box(out);
            t.elapsed()
        })
        .skip(1)
        .collect();
    times.sort();
    let (median, p95) = (times[times.len() / 2], times[times.len() * 95 / 100]);
    verdict(
        p95 < Duration::from_millis(5),
        format!("encode+pack+parse+decode median {median:.2?}, p95 {p95:.2?}"),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Verdict); 11] = [
        (1, "wire round trip", wire_round_trip),
        (2, "budget enforcement", budget_enforcement),
        (3, "near-lossless path", near_lossless),
        (4, "monotonicity", monotonicity),
        (5, "harmonic protection", harmonic_protection),
        (6, "harmonic peak retention", peak_retention),
        (7, "downstream preservation", downstream_preservation),
        (8, "metric identities", metric_identities),
        (9, "refine contraction", refine_contraction),
        (10, "selection cardinality", sats_cardinality),
        (11, "performance envelope", performance),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let v = run();
        let known = KNOWN_RED.contains(&id);
        let tag = match (v.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("[{tag}] #{id} {name}: {}", v.detail);
        if !v.pass && !known {
            unexpected.push(id);
        }
    }
    let red = KNOWN_RED.len();
    if !unexpected.is_empty() {
        eprintln!("acceptance: unexpected failures {unexpected:?}");
        std::process::exit(1);
    }
    println!("acceptance: no unexpected failures ({red} known red)");
}
