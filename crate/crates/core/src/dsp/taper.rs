use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Periodic Hann window, `0.5 (1 - cos(2 pi n / N))`.
pub fn hann_periodic(len: usize) -> Vec<f64> {
    (0..len)
        .map(|n| 0.5 * (1.0 - (2.0 * PI * n as f64 / len as f64).cos()))
        .collect()
}

/// Square root of the periodic Hann window, `sin(pi n / N)`.
///
/// Used as both analysis and synthesis taper; at a hop of `N/2` the squared
/// taper sums to exactly one.
pub fn sqrt_hann(len: usize) -> Vec<f64> {
    (0..len)
        .map(|n| (PI * n as f64 / len as f64).sin())
        .collect()
}
