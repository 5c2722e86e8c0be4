//! Thin 2D transform helper over rustfft.
//!
//! Both directions are unnormalized, matching the analysis/synthesis
//! convention used by the reconstruction core: forward sums
//! `x[n] e^{-2 pi i k n / N}`, inverse sums `X[k] e^{+2 pi i k n / N}`.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

pub(crate) struct Dft2 {
    height: usize,
    width: usize,
    row_fft: Arc<dyn Fft<f64>>,
    col_fft: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex<f64>>,
    transposed: Vec<Complex<f64>>,
}

impl Dft2 {
    pub fn new(height: usize, width: usize, direction: FftDirection) -> Self {
        let mut planner = FftPlanner::new();
        let row_fft = planner.plan_fft(width, direction);
        let col_fft = planner.plan_fft(height, direction);
        let scratch_len = row_fft
            .get_inplace_scratch_len()
            .max(col_fft.get_inplace_scratch_len());
        Dft2 {
            height,
            width,
            row_fft,
            col_fft,
            scratch: vec![Complex::default(); scratch_len],
            transposed: vec![Complex::default(); height * width],
        }
    }

    /// In-place 2D transform of a row-major height x width buffer.
    pub fn process(&mut self, data: &mut [Complex<f64>]) {
        assert_eq!(data.len(), self.height * self.width);
        self.row_fft.process_with_scratch(data, &mut self.scratch);
        transpose(data, &mut self.transposed, self.height, self.width);
        self.col_fft
            .process_with_scratch(&mut self.transposed, &mut self.scratch);
        transpose(&self.transposed, data, self.width, self.height);
    }
}

fn transpose(src: &[Complex<f64>], dst: &mut [Complex<f64>], rows: usize, cols: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct O(N^2 M^2) DFT used as oracle.
    fn dft2_direct(data: &[Complex<f64>], height: usize, width: usize) -> Vec<Complex<f64>> {
        let mut out = vec![Complex::default(); height * width];
        for k in 0..height {
            for l in 0..width {
                let mut acc = Complex::new(0.0, 0.0);
                for m in 0..height {
                    for n in 0..width {
                        let phase = -2.0
                            * std::f64::consts::PI
                            * (k as f64 * m as f64 / height as f64
                                + l as f64 * n as f64 / width as f64);
                        acc += data[m * width + n] * Complex::new(phase.cos(), phase.sin());
                    }
                }
                out[k * width + l] = acc;
            }
        }
        out
    }

    #[test]
    fn matches_direct_dft_on_random_input() {
        let (h, w) = (6, 8);
        let mut state = 1u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let data: Vec<Complex<f64>> = (0..h * w).map(|_| Complex::new(next(), next())).collect();
        let expected = dft2_direct(&data, h, w);
        let mut got = data.clone();
        Dft2::new(h, w, FftDirection::Forward).process(&mut got);
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).norm() < 1e-9, "fft mismatch: {g} vs {e}");
        }
    }

    #[test]
    fn forward_then_inverse_scales_by_area() {
        let (h, w) = (4, 4);
        let data: Vec<Complex<f64>> =
            (0..16).map(|i| Complex::new(i as f64, -(i as f64) / 3.0)).collect();
        let mut buf = data.clone();
        Dft2::new(h, w, FftDirection::Forward).process(&mut buf);
        Dft2::new(h, w, FftDirection::Inverse).process(&mut buf);
        for (g, e) in buf.iter().zip(&data) {
            assert!((g / 16.0 - e).norm() < 1e-12);
        }
    }
}
