//! Error types shared by every module of the codec.

use alloc::string::String;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Validation and processing failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("sample {index} is not finite")]
    NonFiniteSample { index: usize },
    #[error("length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("signal of {len} samples is shorter than the required {required}")]
    SignalTooShort { len: usize, required: usize },
    #[error("analytic signal needs an even length, got {len}")]
    OddLength { len: usize },
    #[error("input has zero variance")]
    ZeroVariance,
    #[error("reference signal is all zero")]
    AllZeroReference,
    #[error("empty input")]
    EmptyInput,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("frequency band around {center_hz} Hz lies outside the spectrum range (0, {max_hz}) Hz")]
    BandOutOfRange { center_hz: f64, max_hz: f64 },
    #[error("frequency {max_hz} Hz violates Nyquist for sample rate {sample_rate_hz} Hz")]
    NyquistViolation { max_hz: f64, sample_rate_hz: f64 },
    #[error("token length {token_len} does not divide window length {window_len}")]
    TokenLength { token_len: usize, window_len: usize },
    #[error("budget infeasible: {b_max} bits cannot hold one {min_bits}-bit token")]
    BudgetInfeasible { b_max: u64, min_bits: u64 },
    #[error("training data must contain both keep and drop labels")]
    SingleClass,
    #[error("requested {requested} components but training rank is {rank}")]
    RankDeficient { requested: usize, rank: usize },
    #[error("frame header does not match the band classification")]
    HeaderMismatch,
    #[error("feature vector has length {actual}, model expects {expected}")]
    FeatureLength { expected: usize, actual: usize },
    #[error("frame codec family {0:?} cannot be decoded by this path")]
    WrongFamily(crate::codec::CodecFamily),
    #[error(transparent)]
    Wire(#[from] crate::codec::wire::WireError),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
