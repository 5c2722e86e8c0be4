//! Non-regular 1/4 sampling for single-sensor resolution enhancement.
//!
//! Covering a low-resolution image sensor with a binary mask that opens
//! exactly one quadrant of every large pixel turns it into a non-regular
//! sampler on a grid with twice the resolution per axis. This crate
//! generates such masks from repeatable block templates, simulates the
//! masked acquisition, reconstructs the full high-resolution image, and
//! benchmarks how the template block size affects reconstruction quality.
//!
//! The pieces, in pipeline order:
//!
//! - [`mask`] - quadrant templates, tiled sampling masks, mask diagnostics
//! - [`sensor`] - plain low-resolution and masked sensor simulation
//! - [`spectrum`] - normalized amplitude spectra and aliasing analysis
//! - [`recon`] - frequency-selective extrapolation, scattered linear
//!   interpolation, and PSNR
//! - [`bench`] - the mask-set sampling and PSNR measurement protocol
//! - [`synth`] - deterministic natural-looking test images
//!
//! Every operation is a pure function of its inputs; all randomness flows
//! from explicit 64-bit seeds, so whole experiments are reproducible from
//! their configuration alone.
//!
//! See the `examples/` directory for one runnable walkthrough per stage,
//! and the `qsamp` binary for the same capabilities in CLI form.

pub mod bench;
pub mod cli;
pub mod error;
mod fft;
pub mod image;
pub mod mask;
pub mod recon;
pub mod rng;
pub mod sensor;
pub mod spectrum;
pub mod synth;

pub use error::{Error, Result};
pub use image::GrayImage;
pub use mask::{BlockSize, MaskDiagnostics, QuadrantTemplate, SamplingMask};
pub use sensor::MaskedImage;

/// Version identifier embedded in benchmark reports and printed by
/// `qsamp --version`.
pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
