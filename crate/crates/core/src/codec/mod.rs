//! Edge-side compression: token framing, signal-adaptive token skimming,
//! harmonic-preserving quantisation, bit-budget enforcement and the frame
//! wire format.

pub(crate) mod encoder;
mod frame;
mod quant;
mod scorer;
mod select;
mod token;
pub mod wire;

pub use encoder::{encode, BitBudget, EncodeOutcome, Encoder, EncoderConfig, Selection, StepRule, DEFAULT_TOKEN_LEN};
pub use frame::{frame_bits, CodecFamily, EncodedFrame, FrameHeader};
pub use quant::{dequantize, quantize_hp, quantize_value, QuantParams, QuantizedToken};
pub use scorer::{score_tokens, token_features, train_scorer, ScorerWeights, TrainedScorer, FEATURE_COUNT};
pub use select::select_tokens;
pub use token::{tokenize, Token};
pub use wire::{pack_frame, parse_frame, parse_frame_prefix, FrameReader, WireError};
