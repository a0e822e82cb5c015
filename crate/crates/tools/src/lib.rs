//! Command-line tools around the `vibcodec` codec: file I/O, configuration,
//! corpus synthesis and benchmarking.

pub mod bench;
pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod plot;
