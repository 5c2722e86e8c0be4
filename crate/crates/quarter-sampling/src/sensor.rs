//! Sensor acquisition models: the plain low-resolution sensor and the
//! masked sensor that samples one quadrant of every large pixel.

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::mask::SamplingMask;

/// An image acquired through a sampling mask, paired with the mask that
/// identifies which pixels are valid. Covered positions hold 0.
#[derive(Clone, Debug)]
pub struct MaskedImage {
    image: GrayImage,
    mask: SamplingMask,
}

impl MaskedImage {
    /// Pairs an image with its mask, validating that dimensions match and
    /// that every covered position is exactly 0.
    pub fn new(image: GrayImage, mask: SamplingMask) -> Result<Self> {
        if image.height() != mask.height() || image.width() != mask.width() {
            return Err(Error::InvalidArgument(format!(
                "image {}x{} and mask {}x{} dimension mismatch",
                image.height(),
                image.width(),
                mask.height(),
                mask.width()
            )));
        }
        for m in 0..image.height() {
            for n in 0..image.width() {
                if !mask.bit(m, n) && image.get(m, n) != 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "covered position ({m},{n}) holds {} instead of 0",
                        image.get(m, n)
                    )));
                }
            }
        }
        Ok(MaskedImage { image, mask })
    }

    pub fn image(&self) -> &GrayImage {
        &self.image
    }

    pub fn mask(&self) -> &SamplingMask {
        &self.mask
    }

    pub fn height(&self) -> usize {
        self.image.height()
    }

    pub fn width(&self) -> usize {
        self.image.width()
    }
}

/// Simulates a plain low-resolution sensor: every output pixel integrates
/// its 2x2 high-resolution source block with uniform area weighting, so
/// the result is the block mean at half resolution per axis.
pub fn acquire_lr(hr: &GrayImage) -> Result<GrayImage> {
    if !hr.height().is_multiple_of(2) || !hr.width().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "LR acquisition needs even dimensions, got {}x{}",
            hr.height(),
            hr.width()
        )));
    }
    GrayImage::from_fn(hr.height() / 2, hr.width() / 2, |u, v| {
        let (m, n) = (2 * u, 2 * v);
        (hr.get(m, n) + hr.get(m, n + 1) + hr.get(m + 1, n) + hr.get(m + 1, n + 1)) / 4.0
    })
}

/// Simulates the masked sensor: the elementwise product of the signal with
/// the binary mask. Open positions hold exactly the values an HR sensor
/// would acquire; no fill-factor gain is applied.
pub fn acquire_masked(hr: &GrayImage, mask: &SamplingMask) -> Result<MaskedImage> {
    if hr.height() != mask.height() || hr.width() != mask.width() {
        return Err(Error::InvalidArgument(format!(
            "image {}x{} and mask {}x{} dimension mismatch",
            hr.height(),
            hr.width(),
            mask.height(),
            mask.width()
        )));
    }
    let image = GrayImage::from_fn(hr.height(), hr.width(), |m, n| {
        if mask.bit(m, n) {
            hr.get(m, n)
        } else {
            0.0
        }
    })?;
    Ok(MaskedImage { image, mask: mask.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::QuadrantTemplate;
    use crate::rng::SplitMix64;

    #[test]
    fn lr_of_constant_is_constant() {
        let hr = GrayImage::filled(6, 8, 42.0).unwrap();
        let lr = acquire_lr(&hr).unwrap();
        assert_eq!(lr.height(), 3);
        assert_eq!(lr.width(), 4);
        assert!(lr.pixels().iter().all(|&p| p == 42.0));
    }

    #[test]
    fn lr_averages_each_block() {
        let hr = GrayImage::from_pixels(2, 2, vec![0.0, 255.0, 255.0, 0.0]).unwrap();
        let lr = acquire_lr(&hr).unwrap();
        assert_eq!(lr.pixels(), &[127.5]);
    }

    #[test]
    fn lr_aliases_nyquist_checkerboard_to_flat_gray() {
        let hr = GrayImage::from_fn(8, 8, |m, n| if (m + n) % 2 == 0 { 0.0 } else { 255.0 })
            .unwrap();
        let lr = acquire_lr(&hr).unwrap();
        assert!(lr.pixels().iter().all(|&p| p == 127.5));
    }

    #[test]
    fn lr_rejects_odd_dimensions() {
        let hr = GrayImage::filled(3, 4, 0.0).unwrap();
        assert!(acquire_lr(&hr).is_err());
    }

    #[test]
    fn lr_upsample_is_exact_exactly_for_blockwise_constant_images() {
        // constant on every 2x2 block: nearest-neighbor upsampling of the
        // LR acquisition restores the image bit-exactly
        let blocky = GrayImage::from_fn(6, 6, |m, n| ((m / 2) * 3 + n / 2) as f64 * 20.0).unwrap();
        let lr = acquire_lr(&blocky).unwrap();
        for m in 0..6 {
            for n in 0..6 {
                assert_eq!(lr.get(m / 2, n / 2).to_bits(), blocky.get(m, n).to_bits());
            }
        }
        // any block that is not constant leaves a nonzero difference
        let mut pixels = blocky.pixels().to_vec();
        pixels[0] += 8.0;
        let perturbed = GrayImage::from_pixels(6, 6, pixels).unwrap();
        let lr = acquire_lr(&perturbed).unwrap();
        let differs = (0..6).any(|m| (0..6).any(|n| lr.get(m / 2, n / 2) != perturbed.get(m, n)));
        assert!(differs);
    }

    #[test]
    fn masked_keeps_open_values_bit_exact() {
        let mut rng = SplitMix64::new(11);
        let hr = GrayImage::from_fn(8, 8, |_, _| rng.next_f64() * 255.0).unwrap();
        let mask = SamplingMask::full_sensor(8, 8, 3).unwrap();
        let out = acquire_masked(&hr, &mask).unwrap();
        let mut open = 0;
        for m in 0..8 {
            for n in 0..8 {
                if mask.bit(m, n) {
                    assert_eq!(out.image().get(m, n).to_bits(), hr.get(m, n).to_bits());
                    open += 1;
                } else {
                    assert_eq!(out.image().get(m, n), 0.0);
                }
            }
        }
        assert_eq!(open, 8 * 8 / 4);
    }

    #[test]
    fn regular_mask_keeps_even_positions_only() {
        let hr = GrayImage::filled(4, 4, 9.0).unwrap();
        let mask = QuadrantTemplate::from_cells(2, vec![0]).unwrap().tile(4, 4).unwrap();
        let out = acquire_masked(&hr, &mask).unwrap();
        for m in 0..4 {
            for n in 0..4 {
                let expect = if m % 2 == 0 && n % 2 == 0 { 9.0 } else { 0.0 };
                assert_eq!(out.image().get(m, n), expect);
            }
        }
    }

    #[test]
    fn masked_rejects_dimension_mismatch() {
        let hr = GrayImage::filled(4, 4, 1.0).unwrap();
        let mask = SamplingMask::full_sensor(4, 6, 0).unwrap();
        assert!(acquire_masked(&hr, &mask).is_err());
    }

    #[test]
    fn masked_image_validates_covered_zeros() {
        let mask = SamplingMask::full_sensor(4, 4, 1).unwrap();
        let bad = GrayImage::filled(4, 4, 1.0).unwrap();
        assert!(MaskedImage::new(bad, mask.clone()).is_err());
        let good = GrayImage::from_fn(4, 4, |m, n| if mask.bit(m, n) { 50.0 } else { 0.0 })
            .unwrap();
        assert!(MaskedImage::new(good, mask).is_ok());
    }
}
