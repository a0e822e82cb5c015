//! Harmonic-preserving, bit-budgeted lossy codec for machinery vibration
//! signals.
//!
//! A window is moved to an orthonormal DCT-II basis, split into frequency
//! tokens, gated by a learned-or-default importance score, and quantised with
//! a finer step inside the gear-mesh harmonic and sideband bands. Frames are
//! self-describing byte strings (see [`codec::wire`]).
//!
//! The crate is `no_std` + `alloc` unless the `std` feature is on.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod baselines;
pub mod codec;
pub mod decoder;
pub mod diagnostics;
pub mod dsp;
mod error;
pub mod fft;
pub mod harmonic;
pub mod metrics;
pub mod synth;

pub use error::{Error, Result};
