use alloc::vec;
use alloc::vec::Vec;

use super::quant::{code_range, dequantize, QuantParams};
use super::wire::WireError;

/// Which codec produced a frame; carried in the flag byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CodecFamily {
    /// Skimmed spectral tokens with harmonic-preserving quantisation.
    HarmonicTokens,
    /// Largest-magnitude DCT coefficients.
    DctTopK,
    /// PCA projection scores.
    Pca,
    /// Seeded random DCT coefficient selection (compressed-sensing stand-in).
    RandomDct,
}

impl CodecFamily {
    pub(crate) fn bits(self) -> u8 {
        match self {
            CodecFamily::HarmonicTokens => 0,
            CodecFamily::DctTopK => 1,
            CodecFamily::Pca => 2,
            CodecFamily::RandomDct => 3,
        }
    }

    pub(crate) fn from_bits(bits: u8) -> Self {
        match bits & 0b11 {
            0 => CodecFamily::HarmonicTokens,
            1 => CodecFamily::DctTopK,
            2 => CodecFamily::Pca,
            _ => CodecFamily::RandomDct,
        }
    }
}

/// Fixed-size frame header fields (the kept count is implied by
/// [`EncodedFrame::kept_indices`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameHeader {
    pub family: CodecFamily,
    pub refine_hint: bool,
    pub sample_rate_hz: u32,
    pub window_len: u16,
    pub token_len: u16,
    pub total_tokens: u16,
    pub delta0: f32,
    pub alpha: f32,
    pub fine_bits: u8,
    pub coarse_bits: u8,
}

impl FrameHeader {
    pub fn quant_params(&self) -> QuantParams {
        QuantParams {
            delta0: self.delta0 as f64,
            alpha: self.alpha as f64,
            fine_bits: self.fine_bits,
            coarse_bits: self.coarse_bits,
        }
    }

    pub(crate) fn validate(&self) -> Result<(), WireError> {
        let n = self.window_len as usize;
        let d = self.token_len as usize;
        if n == 0 || !n.is_power_of_two() {
            return Err(WireError::InvalidHeader("window_len must be a power of two"));
        }
        if d == 0 || !n.is_multiple_of(d) {
            return Err(WireError::InvalidHeader("token_len must divide window_len"));
        }
        if self.total_tokens as usize != n / d {
            return Err(WireError::InvalidHeader("total_tokens must equal window_len / token_len"));
        }
        if self.sample_rate_hz == 0 {
            return Err(WireError::InvalidHeader("sample_rate_hz must be positive"));
        }
        if !(self.delta0.is_finite() && self.delta0 > 0.0) {
            return Err(WireError::InvalidHeader("delta0 must be positive and finite"));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(WireError::InvalidHeader("alpha must be non-negative and finite"));
        }
        if self.quant_params().validate().is_err() {
            return Err(WireError::InvalidHeader("bit widths out of range"));
        }
        Ok(())
    }
}

/// The compressed representation of one window.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedFrame {
    pub header: FrameHeader,
    /// One flag per coefficient, true for protected.
    pub band_bitmap: Vec<bool>,
    /// Strictly ascending token indices.
    pub kept_indices: Vec<u16>,
    /// One code per coefficient of each kept token, token by token.
    pub codes: Vec<i32>,
}

impl EncodedFrame {
    pub fn kept_count(&self) -> usize {
        self.kept_indices.len()
    }

    pub fn token_len(&self) -> usize {
        self.header.token_len as usize
    }

    pub fn window_len(&self) -> usize {
        self.header.window_len as usize
    }

    /// Coefficient indices of the kept tokens, in payload order.
    pub fn kept_coefficients(&self) -> impl Iterator<Item = usize> + '_ {
        let d = self.token_len();
        self.kept_indices
            .iter()
            .flat_map(move |&t| (t as usize * d)..(t as usize + 1) * d)
    }

    /// Declared width of each payload code, in payload order.
    pub fn code_widths(&self) -> impl Iterator<Item = u8> + '_ {
        let params = self.header.quant_params();
        self.kept_coefficients()
            .map(move |i| params.width(self.band_bitmap[i]))
    }

    /// Payload bits: the sum over kept coefficients of their code widths.
    pub fn payload_bits(&self) -> u64 {
        self.code_widths().map(u64::from).sum()
    }

    /// Payload plus 16 bits of side information per transmitted index.
    pub fn transmitted_bits(&self) -> u64 {
        self.payload_bits() + 16 * self.kept_count() as u64
    }

    /// Full coefficient vector with dropped tokens zeroed and kept codes
    /// scaled by their band step.
    pub fn dequantized_coefficients(&self) -> Vec<f64> {
        let params = self.header.quant_params();
        let mut out = vec![0.0; self.window_len()];
        for (i, &code) in self.kept_coefficients().zip(&self.codes) {
            out[i] = dequantize(code, params.step(self.band_bitmap[i]));
        }
        out
    }

    pub(crate) fn validate(&self) -> Result<(), WireError> {
        self.header.validate()?;
        if self.band_bitmap.len() != self.window_len() {
            return Err(WireError::InvalidHeader("band bitmap length differs from window_len"));
        }
        let total = self.header.total_tokens as usize;
        if self.kept_count() > total {
            return Err(WireError::KeptExceedsTotal {
                kept: self.kept_count(),
                total,
            });
        }
        for (pos, pair) in self.kept_indices.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(WireError::IndicesNotAscending { position: pos + 1 });
            }
        }
        if let Some(&last) = self.kept_indices.last() {
            if last as usize >= total {
                return Err(WireError::IndexOutOfRange { index: last as usize, total });
            }
        }
        if self.codes.len() != self.kept_count() * self.token_len() {
            return Err(WireError::InvalidHeader("code count differs from kept_count * token_len"));
        }
        for (code, width) in self.codes.iter().zip(self.code_widths()) {
            let (lo, hi) = code_range(width);
            if *code < lo || *code > hi {
                return Err(WireError::InvalidHeader("code exceeds its declared width"));
            }
        }
        Ok(())
    }
}

/// Total payload bits of a frame.
pub fn frame_bits(frame: &EncodedFrame) -> u64 {
    frame.payload_bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(token_len: u16, window_len: u16) -> FrameHeader {
        FrameHeader {
            family: CodecFamily::HarmonicTokens,
            refine_hint: false,
            sample_rate_hz: 20_000,
            window_len,
            token_len,
            total_tokens: window_len / token_len,
            delta0: 0.1,
            alpha: 3.0,
            fine_bits: 8,
            coarse_bits: 4,
        }
    }

    #[test]
    fn uniform_widths_give_k_d_q() {
        let frame = EncodedFrame {
            header: FrameHeader {
                coarse_bits: 8,
                ..header(1, 64)
            },
            band_bitmap: vec![false; 64],
            kept_indices: (0..32).collect(),
            codes: vec![0; 32],
        };
        assert_eq!(frame_bits(&frame), 256);
    }

    #[test]
    fn empty_frame_has_no_payload() {
        let frame = EncodedFrame {
            header: header(8, 64),
            band_bitmap: vec![false; 64],
            kept_indices: vec![],
            codes: vec![],
        };
        assert_eq!(frame_bits(&frame), 0);
    }

    #[test]
    fn mixed_widths_sum_per_coefficient() {
        let mut bitmap = vec![false; 16];
        bitmap[0] = true;
        bitmap[1] = true;
        let frame = EncodedFrame {
            header: header(4, 16),
            band_bitmap: bitmap,
            kept_indices: vec![0, 2],
            codes: vec![0; 8],
        };
        // [8, 8, 4, 4] + [4, 4, 4, 4]
        assert_eq!(frame_bits(&frame), 40);
        assert_eq!(frame.transmitted_bits(), 72);
    }

    #[test]
    fn family_bits_round_trip() {
        for f in [
            CodecFamily::HarmonicTokens,
            CodecFamily::DctTopK,
            CodecFamily::Pca,
            CodecFamily::RandomDct,
        ] {
            assert_eq!(CodecFamily::from_bits(f.bits()), f);
        }
    }
}
