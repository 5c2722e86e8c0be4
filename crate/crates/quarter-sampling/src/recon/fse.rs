//! Frequency-selective extrapolation: block-wise greedy sparse
//! approximation in the 2D Fourier basis.
//!
//! The image is processed in raster order over non-overlapping B x B
//! target blocks. Each block sits in the center of an F x F support
//! window (reflected at image boundaries). The window content is modeled
//! as a sparse sum of Fourier basis functions, chosen greedily: in every
//! iteration the basis function with the strongest weighted-residual
//! projection is selected and a compensated fraction `gamma` of that
//! projection is moved from the residual into the model. Conjugate-
//! symmetric frequency pairs are selected and updated jointly, keeping
//! the model real. Evaluating the model at the unknown positions of the
//! target block fills them in; known samples are never touched.
//!
//! The weight field `w[x] = rho^(dist to window center)` concentrates the
//! fit on positions near the block and makes the residual projection
//! `Rw = DFT(r .* w)` cheap to maintain: subtracting a basis function
//! from the residual shifts the weight spectrum, so each iteration is a
//! pointwise update of `Rw` with the precomputed `DFT(w)` rather than a
//! fresh transform.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rustfft::num_complex::Complex;
use rustfft::FftDirection;

use crate::error::{Error, Result};
use crate::fft::Dft2;
use crate::image::GrayImage;
use crate::recon::{ReconResult, Reconstructor};
use crate::sensor::MaskedImage;

/// Parameters of the frequency-selective extrapolation.
#[derive(Clone, Debug, PartialEq)]
pub struct FseConfig {
    /// Support window side F (power of two). The window border is
    /// `(fft_size - block_size) / 2` pixels on each side.
    pub fft_size: usize,
    /// Target block side B; the image is processed in B x B blocks.
    pub block_size: usize,
    /// Number of greedy basis selections per block.
    pub iterations: usize,
    /// Spatial weight decay rho in (0, 1): known samples are weighted
    /// rho^d with d the Euclidean distance to the window center.
    pub decay: f64,
    /// Orthogonality-deficiency compensation gamma in (0, 1]: the
    /// fraction of the residual projection moved into the model per
    /// selection.
    pub compensation: f64,
    /// Weight multiplier delta for pixels reconstructed by previously
    /// processed blocks when they serve as support for later blocks.
    pub feedback_confidence: f64,
    /// Whether previously reconstructed pixels join later support
    /// windows at all. Disabling this makes blocks independent.
    pub feedback: bool,
    /// Record the weighted residual energy after every iteration of
    /// every block (diagnostics; costs an extra spatial pass).
    pub track_energy: bool,
}

impl Default for FseConfig {
    fn default() -> Self {
        FseConfig {
            fft_size: 32,
            block_size: 4,
            iterations: 200,
            decay: 0.7,
            compensation: 0.5,
            feedback_confidence: 0.5,
            feedback: true,
            track_energy: false,
        }
    }
}

impl FseConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.fft_size.is_power_of_two() || self.fft_size < 2 {
            return Err(Error::InvalidArgument(format!(
                "fft_size must be a power of two >= 2, got {}",
                self.fft_size
            )));
        }
        if self.block_size == 0 {
            return Err(Error::InvalidArgument("block_size must be positive".into()));
        }
        if self.fft_size < 2 * self.block_size {
            return Err(Error::InvalidArgument(format!(
                "fft_size {} must be at least twice block_size {}",
                self.fft_size, self.block_size
            )));
        }
        if !(self.fft_size - self.block_size).is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "fft_size {} minus block_size {} must leave an even border",
                self.fft_size, self.block_size
            )));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidArgument("iterations must be >= 1".into()));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "decay must lie in (0, 1), got {}",
                self.decay
            )));
        }
        if !(self.compensation > 0.0 && self.compensation <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "compensation must lie in (0, 1], got {}",
                self.compensation
            )));
        }
        if !(0.0..=1.0).contains(&self.feedback_confidence) {
            return Err(Error::InvalidArgument(format!(
                "feedback_confidence must lie in [0, 1], got {}",
                self.feedback_confidence
            )));
        }
        Ok(())
    }

    /// Window border on each side of the target block.
    pub fn border(&self) -> usize {
        (self.fft_size - self.block_size) / 2
    }

    fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |k: &str, v: &str| Error::Format(format!("bad value {v:?} for {k}"));
        match key {
            "fft_size" => self.fft_size = value.parse().map_err(|_| bad(key, value))?,
            "block_size" => self.block_size = value.parse().map_err(|_| bad(key, value))?,
            "iterations" => self.iterations = value.parse().map_err(|_| bad(key, value))?,
            "decay" => self.decay = value.parse().map_err(|_| bad(key, value))?,
            "compensation" => self.compensation = value.parse().map_err(|_| bad(key, value))?,
            "feedback_confidence" => {
                self.feedback_confidence = value.parse().map_err(|_| bad(key, value))?
            }
            "feedback" => {
                self.feedback = match value {
                    "on" | "true" | "1" => true,
                    "off" | "false" | "0" => false,
                    _ => return Err(bad(key, value)),
                }
            }
            _ => {
                return Err(Error::Format(format!("unknown config key {key:?}")));
            }
        }
        Ok(())
    }

    /// Parses a `key = value` config file body; unset keys keep their
    /// defaults. `#` starts a comment.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = FseConfig::default();
        for (key, value) in crate::bench::kv_lines(text) {
            cfg.apply_kv(&key, &value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_str(&text)
    }

    /// The `key = value` rendering of every parameter, used for config
    /// files and report metadata.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "fft_size = {}", self.fft_size);
        let _ = writeln!(s, "block_size = {}", self.block_size);
        let _ = writeln!(s, "iterations = {}", self.iterations);
        let _ = writeln!(s, "decay = {}", self.decay);
        let _ = writeln!(s, "compensation = {}", self.compensation);
        let _ = writeln!(s, "feedback_confidence = {}", self.feedback_confidence);
        let _ = writeln!(s, "feedback = {}", if self.feedback { "on" } else { "off" });
        s
    }
}

/// Iteration diagnostics for one target block.
#[derive(Clone, Debug)]
pub struct BlockDiagnostics {
    pub block_row: usize,
    pub block_col: usize,
    pub iterations_run: usize,
    /// Weighted residual energy sum(w r^2); entry 0 is the initial
    /// energy, entry t the energy after iteration t.
    pub weighted_residual_energy: Vec<f64>,
}

/// Pixel provenance during reconstruction.
const ST_UNKNOWN: u8 = 0;
const ST_OPEN: u8 = 1;
const ST_RECONSTRUCTED: u8 = 2;

/// Reconstructs the full image by frequency-selective extrapolation.
pub fn reconstruct_fse(input: &MaskedImage, cfg: &FseConfig) -> Result<ReconResult> {
    cfg.validate()?;
    let (h, w_img) = (input.height(), input.width());
    let f = cfg.fft_size;
    let bsz = cfg.block_size;
    let border = cfg.border();
    let fsz = f * f;
    let half_rows = f / 2 + 1;

    let mut work: Vec<f64> = input.image().pixels().to_vec();
    let mut status: Vec<u8> = input
        .mask()
        .bits()
        .iter()
        .map(|&b| if b { ST_OPEN } else { ST_UNKNOWN })
        .collect();

    // rho^(distance to window center), fixed relative to the window
    let center = (f as f64 - 1.0) / 2.0;
    let shape: Vec<f64> = (0..fsz)
        .map(|x| {
            let (i, j) = ((x / f) as f64, (x % f) as f64);
            cfg.decay.powf(((i - center).powi(2) + (j - center).powi(2)).sqrt())
        })
        .collect();

    // phase tables for the diagnostic spatial-residual update
    let (cos_tab, sin_tab): (Vec<f64>, Vec<f64>) = (0..f)
        .map(|t| {
            let th = 2.0 * std::f64::consts::PI * t as f64 / f as f64;
            (th.cos(), th.sin())
        })
        .unzip();

    let mut fwd = Dft2::new(f, f, FftDirection::Forward);
    let mut inv = Dft2::new(f, f, FftDirection::Inverse);

    // per-block buffers, reused across blocks
    let mut row_map = vec![0usize; f];
    let mut col_map = vec![0usize; f];
    let mut wfield = vec![0.0f64; fsz];
    let mut values = vec![0.0f64; fsz];
    let mut cbuf: Vec<Complex<f64>> = vec![Complex::default(); fsz];
    let mut gbuf: Vec<Complex<f64>> = vec![Complex::default(); fsz];
    let mut w_re = vec![0.0f64; fsz];
    let mut w_im = vec![0.0f64; fsz];
    let mut rw_re = vec![0.0f64; half_rows * f];
    let mut rw_im = vec![0.0f64; half_rows * f];
    let mut residual = vec![0.0f64; fsz];

    let mut diagnostics = cfg.track_energy.then(Vec::new);

    let blocks_v = h.div_ceil(bsz);
    let blocks_h = w_img.div_ceil(bsz);
    for block_row in 0..blocks_v {
        for block_col in 0..blocks_h {
            let m0 = block_row * bsz;
            let n0 = block_col * bsz;
            for (i, r) in row_map.iter_mut().enumerate() {
                *r = reflect(m0 as isize - border as isize + i as isize, h);
            }
            for (j, c) in col_map.iter_mut().enumerate() {
                *c = reflect(n0 as isize - border as isize + j as isize, w_img);
            }

            // gather the support window: weights and known values
            for (i, &row) in row_map.iter().enumerate() {
                let src_row = row * w_img;
                for (j, &col) in col_map.iter().enumerate() {
                    let src = src_row + col;
                    let x = i * f + j;
                    let factor = match status[src] {
                        ST_OPEN => 1.0,
                        ST_RECONSTRUCTED if cfg.feedback => cfg.feedback_confidence,
                        _ => 0.0,
                    };
                    let wv = shape[x] * factor;
                    wfield[x] = wv;
                    values[x] = if wv > 0.0 { work[src] } else { 0.0 };
                }
            }

            // weight spectrum W = DFT(w)
            for (c, &wv) in cbuf.iter_mut().zip(&wfield) {
                *c = Complex::new(wv, 0.0);
            }
            fwd.process(&mut cbuf);
            let w0 = cbuf[0].re;
            for (x, c) in cbuf.iter().enumerate() {
                w_re[x] = c.re;
                w_im[x] = c.im;
            }

            // residual projection Rw = DFT(r .* w), upper half-plane only
            for (c, (&v, &wv)) in cbuf.iter_mut().zip(values.iter().zip(&wfield)) {
                *c = Complex::new(v * wv, 0.0);
            }
            fwd.process(&mut cbuf);
            for x in 0..half_rows * f {
                rw_re[x] = cbuf[x].re;
                rw_im[x] = cbuf[x].im;
            }

            for g in gbuf.iter_mut() {
                *g = Complex::default();
            }

            let mut energies = if cfg.track_energy {
                for (r, (&v, &wv)) in residual.iter_mut().zip(values.iter().zip(&wfield)) {
                    *r = if wv > 0.0 { v } else { 0.0 };
                }
                let e0: f64 = residual
                    .iter()
                    .zip(&wfield)
                    .map(|(&r, &wv)| wv * r * r)
                    .sum();
                Some(vec![e0])
            } else {
                None
            };

            let mut iterations_run = 0;
            if w0 > 0.0 {
                let gamma = cfg.compensation;
                let mut best = scan_max(&rw_re, &rw_im, half_rows * f);
                for _ in 0..cfg.iterations {
                    let (best_idx, best_norm) = best;
                    if best_norm <= 0.0 {
                        break;
                    }
                    iterations_run += 1;
                    let (kr, kc) = (best_idx / f, best_idx % f);
                    let (mr, mc) = ((f - kr) % f, (f - kc) % f);
                    let self_conjugate = kr == mr && kc == mc;
                    let c_re = gamma * rw_re[best_idx] / w0;
                    let mut c_im = gamma * rw_im[best_idx] / w0;
                    if self_conjugate {
                        c_im = 0.0;
                        gbuf[kr * f + kc].re += c_re;
                        subtract_shifted(&mut rw_re, &mut rw_im, &w_re, &w_im, f, half_rows, kr, kc, c_re, c_im);
                    } else {
                        gbuf[kr * f + kc] += Complex::new(c_re, c_im);
                        gbuf[mr * f + mc] += Complex::new(c_re, -c_im);
                        subtract_shifted(&mut rw_re, &mut rw_im, &w_re, &w_im, f, half_rows, kr, kc, c_re, c_im);
                        subtract_shifted(&mut rw_re, &mut rw_im, &w_re, &w_im, f, half_rows, mr, mc, c_re, -c_im);
                    }
                    if let Some(energies) = energies.as_mut() {
                        // mirror the frequency-domain step on the spatial
                        // residual and log sum(w r^2)
                        let scale = if self_conjugate { 1.0 } else { 2.0 };
                        for xr in 0..f {
                            let t_row = (kr * xr) % f;
                            let mut t = t_row;
                            for xc in 0..f {
                                let x = xr * f + xc;
                                residual[x] -=
                                    scale * (c_re * cos_tab[t] - c_im * sin_tab[t]);
                                t += kc;
                                if t >= f {
                                    t -= f;
                                }
                            }
                        }
                        let e: f64 = residual
                            .iter()
                            .zip(&wfield)
                            .map(|(&r, &wv)| wv * r * r)
                            .sum();
                        energies.push(e);
                    }
                    best = scan_max(&rw_re, &rw_im, half_rows * f);
                }
            }

            // evaluate the model and fill the unknown block positions
            inv.process(&mut gbuf);
            for i in 0..bsz.min(h.saturating_sub(m0)) {
                for j in 0..bsz.min(w_img.saturating_sub(n0)) {
                    let dst = (m0 + i) * w_img + (n0 + j);
                    if status[dst] == ST_UNKNOWN {
                        let g = gbuf[(border + i) * f + (border + j)].re;
                        work[dst] = g.clamp(0.0, 255.0);
                        status[dst] = ST_RECONSTRUCTED;
                    }
                }
            }

            if let Some(diags) = diagnostics.as_mut() {
                diags.push(BlockDiagnostics {
                    block_row,
                    block_col,
                    iterations_run,
                    weighted_residual_energy: energies.take().unwrap_or_default(),
                });
            }
        }
    }

    Ok(ReconResult {
        image: GrayImage::from_pixels(h, w_img, work)?,
        method_id: "fse".into(),
        block_diagnostics: diagnostics,
    })
}

/// Index and squared magnitude of the first row-major maximum of |Rw|
/// over the stored half-plane. By conjugate symmetry this is also the
/// first row-major maximum over the full frequency plane.
///
/// Magnitudes within a relative epsilon count as tied so that exact
/// mathematical ties (regular masks replicate the spectrum exactly) are
/// broken by the row-major rule instead of floating-point noise.
#[inline]
fn scan_max(re: &[f64], im: &[f64], len: usize) -> (usize, f64) {
    let mut best_idx = 0;
    let mut best_norm = 0.0f64;
    for x in 0..len {
        let n = re[x] * re[x] + im[x] * im[x];
        if n > best_norm * (1.0 + 1e-9) {
            best_norm = n;
            best_idx = x;
        }
    }
    (best_idx, best_norm)
}

/// Rw[p] -= c * W[p - k] over the stored half-plane, with the index
/// shift taken cyclically. Rows are split at the wrap column so the
/// inner loops stay contiguous.
#[allow(clippy::too_many_arguments)]
#[inline]
fn subtract_shifted(
    rw_re: &mut [f64],
    rw_im: &mut [f64],
    w_re: &[f64],
    w_im: &[f64],
    f: usize,
    half_rows: usize,
    kr: usize,
    kc: usize,
    c_re: f64,
    c_im: f64,
) {
    let split = f - kc; // pc in [0, split) uses W cols [kc', ...): see below
    for pr in 0..half_rows {
        let wr = (pr + f - kr) % f;
        let rw_row_re = &mut rw_re[pr * f..(pr + 1) * f];
        let rw_row_im = &mut rw_im[pr * f..(pr + 1) * f];
        let w_row_re = &w_re[wr * f..(wr + 1) * f];
        let w_row_im = &w_im[wr * f..(wr + 1) * f];
        // pc in [kc, f): W col pc - kc in [0, f - kc)
        for (pc, wc) in (kc..f).zip(0..split) {
            let (wre, wim) = (w_row_re[wc], w_row_im[wc]);
            rw_row_re[pc] -= c_re * wre - c_im * wim;
            rw_row_im[pc] -= c_re * wim + c_im * wre;
        }
        // pc in [0, kc): W col pc + f - kc in [f - kc, f)
        for (pc, wc) in (0..kc).zip(split..f) {
            let (wre, wim) = (w_row_re[wc], w_row_im[wc]);
            rw_row_re[pc] -= c_re * wre - c_im * wim;
            rw_row_im[pc] -= c_re * wim + c_im * wre;
        }
    }
}

/// Symmetric boundary reflection (the edge sample is repeated:
/// -1 -> 0, -2 -> 1, n -> n-1), folded until in range.
#[inline]
fn reflect(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - 1 - i;
        } else {
            return i as usize;
        }
    }
}

/// [`Reconstructor`] wrapper around [`reconstruct_fse`].
#[derive(Clone, Debug, Default)]
pub struct FseReconstructor {
    pub config: FseConfig,
}

impl FseReconstructor {
    pub fn new(config: FseConfig) -> Self {
        FseReconstructor { config }
    }
}

impl Reconstructor for FseReconstructor {
    fn id(&self) -> &str {
        "fse"
    }

    fn reconstruct(&self, input: &MaskedImage) -> Result<ReconResult> {
        reconstruct_fse(input, &self.config)
    }
}
