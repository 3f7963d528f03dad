//! Thin wrapper over `rustfft` with a per-thread planner cache.
//!
//! Both directions are unnormalized: `forward` computes
//! `X[k] = sum_x x[x] e^{-2 pi i k x / n}` and `inverse` the conjugate sum.
//! Callers apply `1/n` (or `1/sqrt(n)`) where their convention needs it.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub fn forward_in_place(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(buf);
}

pub fn inverse_in_place(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    fft.process(buf);
}

pub fn forward(input: &[Complex64]) -> Vec<Complex64> {
    let mut buf = input.to_vec();
    forward_in_place(&mut buf);
    buf
}

pub fn inverse(input: &[Complex64]) -> Vec<Complex64> {
    let mut buf = input.to_vec();
    inverse_in_place(&mut buf);
    buf
}

/// Unitary forward DFT (scaled by `1/sqrt(n)`).
pub fn unitary_forward(input: &[Complex64]) -> Vec<Complex64> {
    let mut buf = forward(input);
    let scale = 1.0 / (input.len() as f64).sqrt();
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// Unitary inverse DFT (scaled by `1/sqrt(n)`).
pub fn unitary_inverse(input: &[Complex64]) -> Vec<Complex64> {
    let mut buf = inverse(input);
    let scale = 1.0 / (input.len() as f64).sqrt();
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(t, v)| {
                        let ang = -2.0 * std::f64::consts::PI * (k * t) as f64 / n as f64;
                        v * Complex64::from_polar(1.0, ang)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let x: Vec<Complex64> = (0..12)
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let fast = forward(&x);
        let slow = naive_dft(&x);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_round_trip() {
        let x: Vec<Complex64> = (0..16)
            .map(|i| Complex64::new(i as f64, -(i as f64)))
            .collect();
        let back = unitary_inverse(&unitary_forward(&x));
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
