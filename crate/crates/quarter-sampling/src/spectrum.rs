//! Normalized amplitude spectra of sampling masks.
//!
//! A regular mask is an impulse comb, so its spectrum carries replicas of
//! the dominant peak and the subsampled signal aliases. Non-regular masks
//! spread that energy into weak noise, leaving a single dominant peak.
//! `aliasing_ratio` summarizes this as the largest non-DC magnitude
//! relative to the DC peak.

use rustfft::num_complex::Complex;
use rustfft::FftDirection;

use crate::error::{Error, Result};
use crate::fft::Dft2;
use crate::mask::SamplingMask;

/// Magnitudes of the 2D DFT of a binary grid, normalized so the maximum
/// (the DC peak, for any non-empty mask) equals 1.
#[derive(Clone, Debug)]
pub struct Spectrum {
    height: usize,
    width: usize,
    magnitudes: Vec<f64>,
}

impl Spectrum {
    /// Spectrum of an arbitrary binary grid. Mostly useful for comparing
    /// against hypothetical sensors (e.g. the all-open grid) that are not
    /// valid 1/4-sampling masks.
    pub fn of_bits(height: usize, width: usize, bits: &[bool]) -> Result<Self> {
        if height == 0 || width == 0 || bits.len() != height * width {
            return Err(Error::InvalidArgument(format!(
                "bit grid of {} entries does not match {height}x{width}",
                bits.len()
            )));
        }
        if !bits.iter().any(|&b| b) {
            return Err(Error::InvalidInput("empty grid has no spectrum peak".into()));
        }
        let mut buf: Vec<Complex<f64>> = bits
            .iter()
            .map(|&b| Complex::new(if b { 1.0 } else { 0.0 }, 0.0))
            .collect();
        Dft2::new(height, width, FftDirection::Forward).process(&mut buf);
        let mut magnitudes: Vec<f64> = buf.iter().map(|c| c.norm()).collect();
        let max = magnitudes.iter().cloned().fold(0.0, f64::max);
        for m in &mut magnitudes {
            *m /= max;
        }
        Ok(Spectrum {
            height,
            width,
            magnitudes,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Normalized magnitude at frequency (k, l).
    pub fn magnitude(&self, k: usize, l: usize) -> f64 {
        self.magnitudes[k * self.width + l]
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Renders the spectrum as a PGM for inspection: DC shifted to the
    /// center, magnitudes mapped through log10(1 + 100 m) / log10(101)
    /// onto [0, 255].
    pub fn to_log_pgm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        let denom = 101f64.log10();
        for r in 0..self.height {
            for c in 0..self.width {
                let k = (r + self.height / 2) % self.height;
                let l = (c + self.width / 2) % self.width;
                let v = (1.0 + 100.0 * self.magnitude(k, l)).log10() / denom;
                out.push((v * 255.0).round().clamp(0.0, 255.0) as u8);
            }
        }
        out
    }
}

/// Normalized amplitude spectrum of a sampling mask.
pub fn amplitude_spectrum(mask: &SamplingMask) -> Spectrum {
    Spectrum::of_bits(mask.height(), mask.width(), mask.bits())
        .expect("valid masks are non-empty")
}

/// The `count` largest magnitudes with their frequency coordinates,
/// sorted descending; ties broken by row-major frequency order.
pub fn dominant_peaks(spec: &Spectrum, count: usize) -> Result<Vec<((usize, usize), f64)>> {
    if count == 0 {
        return Err(Error::InvalidArgument("peak count must be >= 1".into()));
    }
    if count > spec.height * spec.width {
        return Err(Error::InvalidArgument(format!(
            "peak count {count} exceeds {} frequencies",
            spec.height * spec.width
        )));
    }
    let mut order: Vec<usize> = (0..spec.magnitudes.len()).collect();
    order.sort_by(|&a, &b| {
        spec.magnitudes[b]
            .partial_cmp(&spec.magnitudes[a])
            .expect("magnitudes are finite")
            .then(a.cmp(&b))
    });
    Ok(order
        .into_iter()
        .take(count)
        .map(|i| ((i / spec.width, i % spec.width), spec.magnitudes[i]))
        .collect())
}

/// Peak sidelobe level: the largest magnitude at any frequency other than
/// (0, 0). 1.0 for regular masks (full replicas of the DC peak), small for
/// masks that are non-regular over the whole sensor.
pub fn aliasing_ratio(spec: &Spectrum) -> f64 {
    spec.magnitudes[1..].iter().cloned().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::QuadrantTemplate;
    use crate::rng::SplitMix64;
    use rustfft::num_complex::Complex;

    fn regular_mask(n: usize) -> SamplingMask {
        QuadrantTemplate::from_cells(2, vec![0]).unwrap().tile(n, n).unwrap()
    }

    #[test]
    fn regular_mask_has_four_unit_peaks_at_comb_frequencies() {
        let spec = amplitude_spectrum(&regular_mask(16));
        for k in 0..16 {
            for l in 0..16 {
                let mag = spec.magnitude(k, l);
                if (k == 0 || k == 8) && (l == 0 || l == 8) {
                    assert!((mag - 1.0).abs() < 1e-9, "peak at ({k},{l}) = {mag}");
                } else {
                    assert!(mag < 1e-9, "unexpected energy at ({k},{l}) = {mag}");
                }
            }
        }
    }

    #[test]
    fn all_open_grid_concentrates_at_dc() {
        let spec = Spectrum::of_bits(8, 8, &[true; 64]).unwrap();
        assert_eq!(spec.magnitude(0, 0), 1.0);
        assert_eq!(aliasing_ratio(&spec), 0.0);
        let peaks = dominant_peaks(&spec, 1).unwrap();
        assert_eq!(peaks, vec![((0, 0), 1.0)]);
    }

    #[test]
    fn random_full_sensor_mask_has_unique_dc_peak() {
        for seed in 0..20 {
            let mask = SamplingMask::full_sensor(32, 32, seed).unwrap();
            let spec = amplitude_spectrum(&mask);
            assert_eq!(spec.magnitude(0, 0), 1.0);
            let ratio = aliasing_ratio(&spec);
            assert!(ratio < 1.0, "seed {seed}: sidelobe {ratio} not below DC");
            let peaks = dominant_peaks(&spec, 2).unwrap();
            assert_eq!(peaks[0].0, (0, 0));
            assert!(peaks[1].1 < 1.0);
        }
    }

    #[test]
    fn dominant_peaks_orders_regular_comb_row_major() {
        let spec = amplitude_spectrum(&regular_mask(16));
        let peaks = dominant_peaks(&spec, 4).unwrap();
        let coords: Vec<(usize, usize)> = peaks.iter().map(|p| p.0).collect();
        assert_eq!(coords, vec![(0, 0), (0, 8), (8, 0), (8, 8)]);
        for (_, mag) in peaks {
            assert!((mag - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn dominant_peaks_validates_count() {
        let spec = amplitude_spectrum(&regular_mask(4));
        assert!(dominant_peaks(&spec, 0).is_err());
        assert!(dominant_peaks(&spec, 17).is_err());
        assert_eq!(dominant_peaks(&spec, 16).unwrap().len(), 16);
    }

    #[test]
    fn spectrum_matches_direct_dft_summation() {
        let mask = SamplingMask::full_sensor(12, 16, 7).unwrap();
        let spec = amplitude_spectrum(&mask);
        // direct O(M^2 N^2) oracle
        let (h, w) = (12usize, 16usize);
        let mut mags = vec![0.0f64; h * w];
        for k in 0..h {
            for l in 0..w {
                let mut acc = Complex::new(0.0, 0.0);
                for m in 0..h {
                    for n in 0..w {
                        if mask.bit(m, n) {
                            let phase = -2.0
                                * std::f64::consts::PI
                                * (k as f64 * m as f64 / h as f64 + l as f64 * n as f64 / w as f64);
                            acc += Complex::new(phase.cos(), phase.sin());
                        }
                    }
                }
                mags[k * w + l] = acc.norm();
            }
        }
        let max = mags.iter().cloned().fold(0.0, f64::max);
        for k in 0..h {
            for l in 0..w {
                let expected = mags[k * w + l] / max;
                assert!(
                    (spec.magnitude(k, l) - expected).abs() < 1e-9,
                    "({k},{l}): {} vs {expected}",
                    spec.magnitude(k, l)
                );
            }
        }
    }

    #[test]
    fn smaller_blocks_alias_more_than_full_sensor_masks() {
        let trials = 20;
        let mut rng = SplitMix64::new(2024);
        let mut mean = |b: Option<u32>| -> f64 {
            let mut acc = 0.0;
            for _ in 0..trials {
                let seed = rng.next_u64();
                let mask = match b {
                    Some(b) => QuadrantTemplate::generate(b, seed).unwrap().tile(64, 64).unwrap(),
                    None => SamplingMask::full_sensor(64, 64, seed).unwrap(),
                };
                acc += aliasing_ratio(&amplitude_spectrum(&mask));
            }
            acc / trials as f64
        };
        let m4 = mean(Some(4));
        let m_max = mean(None);
        assert!(
            m4 >= m_max,
            "mean aliasing ratio b=4 ({m4:.3}) should be >= b=max ({m_max:.3})"
        );
    }

    #[test]
    fn log_pgm_centers_dc() {
        let spec = amplitude_spectrum(&regular_mask(8));
        let bytes = spec.to_log_pgm_bytes();
        let data = &bytes[bytes.len() - 64..];
        // DC (magnitude 1) lands at display position (4, 4)
        assert_eq!(data[4 * 8 + 4], 255);
    }
}
