//! Complex FFT for arbitrary lengths.
//!
//! Power-of-two sizes use an iterative radix-2 kernel with a precomputed
//! twiddle table. Every other size goes through Bluestein's chirp-z
//! algorithm on top of a power-of-two plan.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

pub use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// A reusable transform plan for one length.
#[derive(Debug, Clone)]
pub struct Fft {
    len: usize,
    kernel: Kernel,
}

#[derive(Debug, Clone)]
enum Kernel {
    Radix2(Radix2),
    Bluestein(Bluestein),
}

impl Fft {
    pub fn new(len: usize) -> Self {
        let kernel = if len.is_power_of_two() {
            Kernel::Radix2(Radix2::new(len))
        } else {
            Kernel::Bluestein(Bluestein::new(len))
        };
        Fft { len, kernel }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Forward transform, `X[k] = sum_n x[n] e^{-2 pi i n k / N}`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len, "buffer length does not match plan");
        match &self.kernel {
            Kernel::Radix2(r) => r.process(buf),
            Kernel::Bluestein(b) => b.process(buf),
        }
    }

    /// Inverse transform including the 1/N normalisation.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        for v in buf.iter_mut() {
            *v = v.conj();
        }
        self.forward(buf);
        let scale = 1.0 / self.len as f64;
        for v in buf.iter_mut() {
            *v = v.conj() * scale;
        }
    }
}

#[derive(Debug, Clone)]
struct Radix2 {
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    fn new(len: usize) -> Self {
        let half = len / 2;
        let twiddles = (0..half)
            .map(|k| {
                let angle = -2.0 * PI * k as f64 / len as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        Radix2 { twiddles }
    }

    fn process(&self, buf: &mut [Complex64]) {
        let n = buf.len();
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                buf.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for start in (0..n).step_by(size) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            size *= 2;
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    len: usize,
    chirp: Vec<Complex64>,
    kernel_spectrum: Vec<Complex64>,
    inner: Radix2,
    inner_len: usize,
}

impl Bluestein {
    fn new(len: usize) -> Self {
        let inner_len = (2 * len).saturating_sub(1).max(1).next_power_of_two();
        // k^2 mod 2N keeps the chirp angle small for large k.
        let chirp: Vec<Complex64> = (0..len)
            .map(|k| {
                let k2 = ((k as u128 * k as u128) % (2 * len as u128)) as f64;
                let angle = -PI * k2 / len as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        let inner = Radix2::new(inner_len);
        let mut kernel = vec![Complex64::new(0.0, 0.0); inner_len];
        if len > 0 {
            kernel[0] = chirp[0].conj();
            for k in 1..len {
                kernel[k] = chirp[k].conj();
                kernel[inner_len - k] = chirp[k].conj();
            }
        }
        inner.process(&mut kernel);
        Bluestein {
            len,
            chirp,
            kernel_spectrum: kernel,
            inner,
            inner_len,
        }
    }

    fn process(&self, buf: &mut [Complex64]) {
        if self.len == 0 {
            return;
        }
        let mut work = vec![Complex64::new(0.0, 0.0); self.inner_len];
        for (w, (x, c)) in work.iter_mut().zip(buf.iter().zip(&self.chirp)) {
            *w = x * c;
        }
        self.inner.process(&mut work);
        for (w, k) in work.iter_mut().zip(&self.kernel_spectrum) {
            *w *= k;
        }
        // inverse via conjugation
        for w in work.iter_mut() {
            *w = w.conj();
        }
        self.inner.process(&mut work);
        let scale = 1.0 / self.inner_len as f64;
        for (out, (w, c)) in buf.iter_mut().zip(work.iter().zip(&self.chirp)) {
            *out = w.conj() * scale * c;
        }
    }
}

/// One-shot forward transform of a real signal.
pub fn fft_real(signal: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = signal.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Fft::new(buf.len()).forward(&mut buf);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (j, v)| {
                    let angle = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    acc + v * Complex64::new(angle.cos(), angle.sin())
                })
            })
            .collect()
    }

    fn pseudo_signal(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|i| {
                let t = i as f64;
                Complex64::new((0.37 * t).sin() + 0.1 * t.cos(), (1.3 * t).cos() * 0.5)
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft_for_various_lengths() {
        for &n in &[1usize, 2, 3, 5, 8, 12, 16, 30, 64, 100, 128] {
            let x = pseudo_signal(n);
            let expected = naive_dft(&x);
            let mut got = x.clone();
            Fft::new(n).forward(&mut got);
            for (a, b) in got.iter().zip(&expected) {
                assert!((a - b).norm() < 1e-9 * (n as f64), "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        for &n in &[7usize, 64, 96, 1024] {
            let x = pseudo_signal(n);
            let plan = Fft::new(n);
            let mut buf = x.clone();
            plan.forward(&mut buf);
            plan.inverse(&mut buf);
            for (a, b) in buf.iter().zip(&x) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
