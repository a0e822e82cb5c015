//! Cloud-side reconstruction: frame synthesis, overlap-add and projection
//! refinement.

mod refine;
mod stream;

pub use refine::{pc_refine, protected_deviation, refine_stream, stream_deviation, ProjectionTargets, RefineConfig};
pub use stream::{analysis_windows, decode_stream, encode_stream, overlap_add, stream_interior};

use crate::codec::{CodecFamily, EncodedFrame};
use crate::dsp::{idct2_ortho, SignalWindow};
use crate::error::{Error, Result};
use crate::harmonic::BandClassification;

fn check_spectral(frame: &EncodedFrame) -> Result<()> {
    match frame.header.family {
        CodecFamily::Pca => Err(Error::WrongFamily(CodecFamily::Pca)),
        _ => Ok(()),
    }
}

/// Rebuilds a window from a frame whose band bitmap must match
/// `classification`.
pub fn synthesize(frame: &EncodedFrame, classification: &BandClassification) -> Result<SignalWindow> {
    if frame.band_bitmap != classification.protected {
        return Err(Error::HeaderMismatch);
    }
    synthesize_frame(frame)
}

/// Rebuilds a window using the bitmap carried by the frame itself.
pub fn synthesize_frame(frame: &EncodedFrame) -> Result<SignalWindow> {
    check_spectral(frame)?;
    frame.validate()?;
    let samples = idct2_ortho(&frame.dequantized_coefficients());
    SignalWindow::new(samples, frame.header.sample_rate_hz as f64, 0)
}
