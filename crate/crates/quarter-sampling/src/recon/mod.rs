//! Reconstruction of full high-resolution images from masked acquisitions.
//!
//! Two methods are built in: frequency-selective extrapolation ([`fse`]),
//! the principal method, and scattered linear interpolation ([`lin`]) as
//! the baseline. Both preserve known samples bit-exactly. The
//! [`Reconstructor`] trait is the pluggable slot the benchmark harness
//! uses, so further methods (e.g. kernel regression) can be dropped in
//! without touching the harness.

mod fse;
mod lin;

pub use fse::{reconstruct_fse, BlockDiagnostics, FseConfig, FseReconstructor};
pub use lin::{reconstruct_lin, LinReconstructor};

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::sensor::MaskedImage;

/// A full reconstruction plus provenance.
#[derive(Clone, Debug)]
pub struct ReconResult {
    pub image: GrayImage,
    pub method_id: String,
    /// Per-block iteration diagnostics; populated by FSE when
    /// [`FseConfig::track_energy`] is set.
    pub block_diagnostics: Option<Vec<BlockDiagnostics>>,
}

/// A reconstruction method usable by the benchmark harness.
pub trait Reconstructor: Sync {
    /// Stable label used in reports ("fse", "lin", ...).
    fn id(&self) -> &str;

    fn reconstruct(&self, input: &MaskedImage) -> Result<ReconResult>;
}

/// Peak signal-to-noise ratio in dB over all pixels with peak 255:
/// `10 log10(255^2 / MSE)`. Returns +infinity for identical images.
pub fn psnr(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    if reference.height() != test.height() || reference.width() != test.width() {
        return Err(Error::InvalidArgument(format!(
            "psnr dimension mismatch: {}x{} vs {}x{}",
            reference.height(),
            reference.width(),
            test.height(),
            test.width()
        )));
    }
    let n = reference.pixels().len() as f64;
    let sse: f64 = reference
        .pixels()
        .iter()
        .zip(test.pixels())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    if sse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse / n;
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_images_have_infinite_psnr() {
        let img = GrayImage::filled(4, 4, 100.0).unwrap();
        assert_eq!(psnr(&img, &img).unwrap(), f64::INFINITY);
    }

    #[test]
    fn full_scale_error_is_zero_db() {
        let a = GrayImage::filled(4, 4, 0.0).unwrap();
        let b = GrayImage::filled(4, 4, 255.0).unwrap();
        assert!((psnr(&a, &b).unwrap() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn one_percent_error_is_forty_db() {
        let a = GrayImage::filled(8, 8, 0.0).unwrap();
        let b = GrayImage::filled(8, 8, 2.55).unwrap();
        assert!((psnr(&a, &b).unwrap() - 40.0).abs() < 1e-9);
    }

    #[test]
    fn psnr_is_symmetric() {
        let a = GrayImage::from_fn(4, 4, |m, n| (m * 13 + n * 7) as f64).unwrap();
        let b = GrayImage::from_fn(4, 4, |m, n| (m * 5 + n * 11) as f64).unwrap();
        assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
    }

    #[test]
    fn psnr_is_invariant_under_identical_permutation() {
        let a = GrayImage::from_fn(4, 4, |m, n| (m * 13 + n * 7) as f64).unwrap();
        let b = GrayImage::from_fn(4, 4, |m, n| (m * 5 + n * 11) as f64).unwrap();
        // reverse both pixel buffers with the same permutation
        let rev = |img: &GrayImage| {
            let mut p = img.pixels().to_vec();
            p.reverse();
            GrayImage::from_pixels(4, 4, p).unwrap()
        };
        let direct = psnr(&a, &b).unwrap();
        let permuted = psnr(&rev(&a), &rev(&b)).unwrap();
        assert_eq!(direct, permuted);
    }

    #[test]
    fn psnr_rejects_dimension_mismatch() {
        let a = GrayImage::filled(4, 4, 0.0).unwrap();
        let b = GrayImage::filled(4, 6, 0.0).unwrap();
        assert!(psnr(&a, &b).is_err());
    }
}
