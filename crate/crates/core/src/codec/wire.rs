//! Byte layout of a single frame and a resynchronising reader for
//! concatenated frame streams.
//!
//! Layout (integers little-endian):
//!
//! ```text
//! "EPMF" | version u8 | flags u8 | sample_rate u32 | window_len u16
//! token_len u16 | total_tokens u16 | kept_count u16 | delta0 f32 | alpha f32
//! fine_bits u8 | coarse_bits u8 | band bitmap | kept indices (u16 each)
//! payload (codes MSB-first, zero padded) | crc32 u32
//! ```
//!
//! Flags: bit 0 is the refinement hint, bits 1-2 hold the codec family,
//! bits 3-7 are reserved and must be zero.

use alloc::vec;
use alloc::vec::Vec;

use super::frame::{CodecFamily, EncodedFrame, FrameHeader};

pub const MAGIC: [u8; 4] = *b"EPMF";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 28;
const CRC_LEN: usize = 4;
const RESERVED_FLAGS: u8 = 0b1111_1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WireError {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("reserved flag bits set: {0:#04x}")]
    UnsupportedFlags(u8),
    #[error("truncated frame: need {needed} bytes, have {available}")]
    Truncated { needed: usize, available: usize },
    #[error("invalid header: {0}")]
    InvalidHeader(&'static str),
    #[error("kept count {kept} exceeds total tokens {total}")]
    KeptExceedsTotal { kept: usize, total: usize },
    #[error("kept indices not strictly ascending at position {position}")]
    IndicesNotAscending { position: usize },
    #[error("kept index {index} out of range for {total} tokens")]
    IndexOutOfRange { index: usize, total: usize },
    #[error("crc mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    CrcMismatch { stored: u32, computed: u32 },
    #[error("{count} trailing bytes after frame")]
    TrailingBytes { count: usize },
}

struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    filled: u32,
}

impl BitWriter {
    fn new(capacity_bits: u64) -> Self {
        BitWriter {
            bytes: Vec::with_capacity(capacity_bits.div_ceil(8) as usize),
            acc: 0,
            filled: 0,
        }
    }

    fn push(&mut self, value: u32, width: u8) {
        let mask = (1u64 << width) - 1;
        self.acc = (self.acc << width) | (value as u64 & mask);
        self.filled += width as u32;
        while self.filled >= 8 {
            self.filled -= 8;
            self.bytes.push((self.acc >> self.filled) as u8);
        }
        self.acc &= (1u64 << self.filled) - 1;
    }

    fn finish(mut self) -> Vec<u8> {
        if self.filled > 0 {
            self.bytes.push((self.acc << (8 - self.filled)) as u8);
        }
        self.bytes
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl BitReader<'_> {
    fn read(&mut self, width: u8) -> u32 {
        let mut v = 0u32;
        for _ in 0..width {
            let bit = (self.bytes[self.pos / 8] >> (7 - self.pos % 8)) & 1;
            v = (v << 1) | bit as u32;
            self.pos += 1;
        }
        v
    }
}

fn sign_extend(raw: u32, width: u8) -> i32 {
    let shift = 32 - width as u32;
    ((raw << shift) as i32) >> shift
}

/// Serialises a frame. The frame is expected to satisfy its own invariants
/// (see [`EncodedFrame`]); codes wider than their declared width are
/// truncated to it.
pub fn pack_frame(frame: &EncodedFrame) -> Vec<u8> {
    debug_assert!(frame.validate().is_ok(), "packing an invalid frame");
    let h = &frame.header;
    let n = h.window_len as usize;
    let mut out = Vec::with_capacity(HEADER_LEN + n.div_ceil(8) + 2 * frame.kept_count() + CRC_LEN);
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(u8::from(h.refine_hint) | (h.family.bits() << 1));
    out.extend_from_slice(&h.sample_rate_hz.to_le_bytes());
    out.extend_from_slice(&h.window_len.to_le_bytes());
    out.extend_from_slice(&h.token_len.to_le_bytes());
    out.extend_from_slice(&h.total_tokens.to_le_bytes());
    out.extend_from_slice(&(frame.kept_count() as u16).to_le_bytes());
    out.extend_from_slice(&h.delta0.to_le_bytes());
    out.extend_from_slice(&h.alpha.to_le_bytes());
    out.push(h.fine_bits);
    out.push(h.coarse_bits);

    let mut bitmap = vec![0u8; n.div_ceil(8)];
    for (i, _) in frame.band_bitmap.iter().enumerate().take(n).filter(|(_, &p)| p) {
        bitmap[i / 8] |= 1 << (i % 8);
    }
    out.extend_from_slice(&bitmap);
    for idx in &frame.kept_indices {
        out.extend_from_slice(&idx.to_le_bytes());
    }

    let mut writer = BitWriter::new(frame.payload_bits());
    for (&code, width) in frame.codes.iter().zip(frame.code_widths()) {
        writer.push(code as u32, width);
    }
    out.extend_from_slice(&writer.finish());

    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn need(bytes: &[u8], needed: usize) -> Result<(), WireError> {
    if bytes.len() < needed {
        Err(WireError::Truncated {
            needed,
            available: bytes.len(),
        })
    } else {
        Ok(())
    }
}

/// Parses one frame from the start of `bytes` and returns it with the number
/// of bytes it occupied. Anything after the frame is ignored.
pub fn parse_frame_prefix(bytes: &[u8]) -> Result<(EncodedFrame, usize), WireError> {
    let head = &bytes[..bytes.len().min(4)];
    if head != &MAGIC[..head.len()] {
        return Err(WireError::BadMagic);
    }
    need(bytes, 6)?;
    if bytes[4] != VERSION {
        return Err(WireError::UnsupportedVersion(bytes[4]));
    }
    let flags = bytes[5];
    if flags & RESERVED_FLAGS != 0 {
        return Err(WireError::UnsupportedFlags(flags));
    }
    need(bytes, HEADER_LEN)?;
    let header = FrameHeader {
        family: CodecFamily::from_bits(flags >> 1),
        refine_hint: flags & 1 == 1,
        sample_rate_hz: u32_at(bytes, 6),
        window_len: u16_at(bytes, 10),
        token_len: u16_at(bytes, 12),
        total_tokens: u16_at(bytes, 14),
        delta0: f32::from_bits(u32_at(bytes, 18)),
        alpha: f32::from_bits(u32_at(bytes, 22)),
        fine_bits: bytes[26],
        coarse_bits: bytes[27],
    };
    let kept = u16_at(bytes, 16) as usize;
    header.validate()?;
    let total = header.total_tokens as usize;
    if kept > total {
        return Err(WireError::KeptExceedsTotal { kept, total });
    }

    let n = header.window_len as usize;
    let bitmap_at = HEADER_LEN;
    let indices_at = bitmap_at + n.div_ceil(8);
    let payload_at = indices_at + 2 * kept;
    need(bytes, payload_at)?;

    let band_bitmap: Vec<bool> = (0..n)
        .map(|i| bytes[bitmap_at + i / 8] >> (i % 8) & 1 == 1)
        .collect();
    let kept_indices: Vec<u16> = (0..kept).map(|j| u16_at(bytes, indices_at + 2 * j)).collect();
    for (pos, pair) in kept_indices.windows(2).enumerate() {
        if pair[1] <= pair[0] {
            return Err(WireError::IndicesNotAscending { position: pos + 1 });
        }
    }
    if let Some(&last) = kept_indices.last() {
        if last as usize >= total {
            return Err(WireError::IndexOutOfRange {
                index: last as usize,
                total,
            });
        }
    }

    let mut frame = EncodedFrame {
        header,
        band_bitmap,
        kept_indices,
        codes: Vec::new(),
    };
    let payload_len = frame.payload_bits().div_ceil(8) as usize;
    let crc_at = payload_at + payload_len;
    let end = crc_at + CRC_LEN;
    need(bytes, end)?;

    let stored = u32_at(bytes, crc_at);
    let computed = crc32fast::hash(&bytes[..crc_at]);
    if stored != computed {
        return Err(WireError::CrcMismatch { stored, computed });
    }

    let mut reader = BitReader {
        bytes: &bytes[payload_at..crc_at],
        pos: 0,
    };
    let widths: Vec<u8> = frame.code_widths().collect();
    frame.codes = widths
        .into_iter()
        .map(|w| sign_extend(reader.read(w), w))
        .collect();
    Ok((frame, end))
}

/// Parses exactly one frame; extra bytes are an error.
pub fn parse_frame(bytes: &[u8]) -> Result<EncodedFrame, WireError> {
    let (frame, used) = parse_frame_prefix(bytes)?;
    if used != bytes.len() {
        return Err(WireError::TrailingBytes {
            count: bytes.len() - used,
        });
    }
    Ok(frame)
}

/// Iterates over concatenated frames. A frame that fails to parse yields one
/// error, after which the reader skips ahead to the next magic.
pub struct FrameReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> FrameReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        FrameReader { bytes, pos: 0 }
    }

    /// Byte offset of the next unread frame.
    pub fn offset(&self) -> usize {
        self.pos
    }

    fn next_magic(&self, from: usize) -> usize {
        self.bytes[from.min(self.bytes.len())..]
            .windows(MAGIC.len())
            .position(|w| w == MAGIC)
            .map_or(self.bytes.len(), |p| from + p)
    }
}

impl Iterator for FrameReader<'_> {
    type Item = Result<EncodedFrame, WireError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.pos >= self.bytes.len() {
            return None;
        }
        match parse_frame_prefix(&self.bytes[self.pos..]) {
            Ok((frame, used)) => {
                self.pos += used;
                Some(Ok(frame))
            }
            Err(e) => {
                self.pos = self.next_magic(self.pos + 1);
                Some(Err(e))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::quant::code_range;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_frame(rng: &mut ChaCha8Rng) -> EncodedFrame {
        let n = 1usize << rng.random_range(0..=10);
        let d = 1usize << rng.random_range(0..=n.trailing_zeros());
        let total = n / d;
        let coarse = rng.random_range(2..=16u8);
        let fine = rng.random_range(coarse..=16u8);
        let family = CodecFamily::from_bits(rng.random_range(0..4));
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
        let band_bitmap: Vec<bool> = (0..n).map(|_| rng.random_bool(0.3)).collect();
        let kept_indices: Vec<u16> = (0..total as u16).filter(|_| rng.random_bool(0.4)).collect();
        let mut frame = EncodedFrame {
            header,
            band_bitmap,
            kept_indices,
            codes: Vec::new(),
        };
        let widths: Vec<u8> = frame.code_widths().collect();
        frame.codes = widths
            .into_iter()
            .map(|w| {
                let (lo, hi) = code_range(w);
                rng.random_range(lo..=hi)
            })
            .collect();
        frame
    }

    fn sample_frame() -> EncodedFrame {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        loop {
            let f = random_frame(&mut rng);
            if f.kept_count() >= 2 && f.window_len() >= 16 {
                return f;
            }
        }
    }

    fn reseal(bytes: &mut [u8]) {
        let at = bytes.len() - CRC_LEN;
        let crc = crc32fast::hash(&bytes[..at]);
        bytes[at..].copy_from_slice(&crc.to_le_bytes());
    }

    #[test]
    fn round_trip_random_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let f = random_frame(&mut rng);
            let bytes = pack_frame(&f);
            assert_eq!(parse_frame(&bytes).unwrap(), f);
        }
    }

    #[test]
    fn payload_length_matches_bit_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let f = random_frame(&mut rng);
            let bytes = pack_frame(&f);
            let fixed = HEADER_LEN + f.window_len().div_ceil(8) + 2 * f.kept_count() + CRC_LEN;
            assert_eq!(bytes.len() - fixed, f.payload_bits().div_ceil(8) as usize);
        }
    }

    #[test]
    fn empty_kept_set_parses() {
        let mut f = sample_frame();
        f.kept_indices.clear();
        f.codes.clear();
        let bytes = pack_frame(&f);
        assert_eq!(bytes.len(), HEADER_LEN + f.window_len().div_ceil(8) + CRC_LEN);
        assert_eq!(parse_frame(&bytes).unwrap(), f);
    }

    #[test]
    fn every_truncation_is_reported() {
        let bytes = pack_frame(&sample_frame());
        for cut in 1..bytes.len() {
            let err = parse_frame(&bytes[..cut]).unwrap_err();
            assert!(matches!(err, WireError::Truncated { .. }), "cut {cut}: {err:?}");
        }
    }

    #[test]
    fn distinct_error_kinds() {
        let good = pack_frame(&sample_frame());

        let mut b = good.clone();
        b[0] = b'X';
        assert_eq!(parse_frame(&b), Err(WireError::BadMagic));

        let mut b = good.clone();
        b[4] = 2;
        assert_eq!(parse_frame(&b), Err(WireError::UnsupportedVersion(2)));

        let mut b = good.clone();
        b[5] |= 0x40;
        assert!(matches!(parse_frame(&b), Err(WireError::UnsupportedFlags(_))));

        let mut b = good.clone();
        let total = u16_at(&b, 14);
        b[16..18].copy_from_slice(&(total + 1).to_le_bytes());
        assert!(matches!(parse_frame(&b), Err(WireError::KeptExceedsTotal { .. })));

        let f = sample_frame();
        let mut b = good.clone();
        let at = HEADER_LEN + f.window_len().div_ceil(8);
        b[at + 2..at + 4].copy_from_slice(&f.kept_indices[0].to_le_bytes());
        reseal(&mut b);
        assert!(matches!(parse_frame(&b), Err(WireError::IndicesNotAscending { position: 1 })));

        let mut b = good.clone();
        let last = at + 2 * (f.kept_count() - 1);
        b[last..last + 2].copy_from_slice(&u16::MAX.to_le_bytes());
        assert!(matches!(parse_frame(&b), Err(WireError::IndexOutOfRange { .. })));

        let mut b = good.clone();
        let crc_at = b.len() - CRC_LEN - 1;
        b[crc_at] ^= 0x01;
        assert!(matches!(parse_frame(&b), Err(WireError::CrcMismatch { .. })));

        let mut b = good.clone();
        b.push(0);
        assert_eq!(parse_frame(&b), Err(WireError::TrailingBytes { count: 1 }));

        let mut b = good;
        b[10..12].copy_from_slice(&1000u16.to_le_bytes());
        assert!(matches!(parse_frame(&b), Err(WireError::InvalidHeader(_))));
    }

    #[test]
    fn fuzz_random_bytes() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for i in 0..10_000 {
            let len = rng.random_range(0..512);
            let mut bytes: Vec<u8> = (0..len).map(|_| rng.random()).collect();
            // Half the inputs start with a plausible header so deeper paths run.
            if i % 2 == 0 && len >= 6 {
                bytes[..4].copy_from_slice(&MAGIC);
                bytes[4] = VERSION;
                bytes[5] &= 0x07;
            }
            let _ = parse_frame(&bytes);
        }
    }

    #[test]
    fn single_bit_flips_never_parse_silently_wrong() {
        let f = sample_frame();
        let good = pack_frame(&f);
        for byte in 0..good.len() {
            for bit in 0..8 {
                let mut b = good.clone();
                b[byte] ^= 1 << bit;
                if let Ok(parsed) = parse_frame(&b) {
                    panic!("flip at {byte}:{bit} parsed as {parsed:?}");
                }
            }
        }
    }

    #[test]
    fn reader_resyncs_after_corruption() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let frames: Vec<EncodedFrame> = (0..4).map(|_| random_frame(&mut rng)).collect();
        let mut stream = Vec::new();
        let mut starts = Vec::new();
        for f in &frames {
            starts.push(stream.len());
            stream.extend_from_slice(&pack_frame(f));
        }
        // corrupt the CRC region of frame 1
        let end1 = starts[2];
        stream[end1 - 1] ^= 0xff;
        let items: Vec<_> = FrameReader::new(&stream).collect();
        assert_eq!(items.len(), 4);
        assert_eq!(items[0].as_ref().unwrap(), &frames[0]);
        assert!(items[1].is_err());
        assert_eq!(items[2].as_ref().unwrap(), &frames[2]);
        assert_eq!(items[3].as_ref().unwrap(), &frames[3]);
    }

    #[test]
    fn reader_on_garbage_tail() {
        let f = sample_frame();
        let mut stream = pack_frame(&f);
        stream.extend_from_slice(b"noise");
        let items: Vec<_> = FrameReader::new(&stream).collect();
        assert_eq!(items.len(), 2);
        assert!(items[0].is_ok());
        assert_eq!(items[1], Err(WireError::BadMagic));
    }
}
