//! Grayscale images and their on-disk formats.
//!
//! `GrayImage` is the common currency of the whole pipeline: a row-major
//! grid of finite intensities on the 8-bit luma scale [0, 255], stored as
//! f64 so reconstruction results keep sub-integer precision.
//!
//! Two file formats are supported. Binary PGM (P5, maxval 255) is the
//! canonical lossless interchange format; PNG is accepted for ingestion
//! convenience, with color inputs converted to grayscale using the
//! Rec. 601 luma weights (0.299, 0.587, 0.114).

use std::fs;
use std::io::BufWriter;
use std::path::Path;

use crate::error::{Error, Result};

/// Rec. 601 luma weights used for color-to-grayscale conversion.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// A row-major grid of intensities in [0, 255].
#[derive(Clone, Debug, PartialEq)]
pub struct GrayImage {
    height: usize,
    width: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    /// Constant image of the given value.
    pub fn filled(height: usize, width: usize, value: f64) -> Result<Self> {
        Self::from_pixels(height, width, vec![value; height * width])
    }

    /// Builds an image from a per-pixel function of (row, col).
    pub fn from_fn(
        height: usize,
        width: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(height * width);
        for m in 0..height {
            for n in 0..width {
                pixels.push(f(m, n));
            }
        }
        Self::from_pixels(height, width, pixels)
    }

    /// Wraps a row-major pixel buffer, validating shape, finiteness, and range.
    pub fn from_pixels(height: usize, width: usize, pixels: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidArgument(format!(
                "image dimensions must be positive, got {height}x{width}"
            )));
        }
        if pixels.len() != height * width {
            return Err(Error::InvalidArgument(format!(
                "pixel buffer has {} entries, expected {}",
                pixels.len(),
                height * width
            )));
        }
        for &p in &pixels {
            if !p.is_finite() || !(0.0..=255.0).contains(&p) {
                return Err(Error::InvalidInput(format!(
                    "pixel value {p} outside the finite range [0, 255]"
                )));
            }
        }
        Ok(GrayImage {
            height,
            width,
            pixels,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    /// Top-left crop, used to trim odd-sized inputs to even dimensions.
    pub fn crop(&self, height: usize, width: usize) -> Result<Self> {
        if height > self.height || width > self.width {
            return Err(Error::InvalidArgument(format!(
                "crop {height}x{width} exceeds image {}x{}",
                self.height, self.width
            )));
        }
        Self::from_fn(height, width, |m, n| self.get(m, n))
    }

    /// Quantizes to 8-bit samples (round half away from zero, clamped).
    pub fn to_u8(&self) -> Vec<u8> {
        self.pixels
            .iter()
            .map(|&p| p.round().clamp(0.0, 255.0) as u8)
            .collect()
    }

    /// Encodes as binary PGM (P5, maxval 255).
    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.to_u8());
        out
    }

    /// Decodes a binary PGM (P5) buffer with maxval <= 255.
    pub fn from_pgm_bytes(bytes: &[u8]) -> Result<Self> {
        let (header, data) = parse_pnm_header(bytes)?;
        if header.magic != "P5" {
            return Err(Error::Format(format!(
                "expected PGM magic P5, found {}",
                header.magic
            )));
        }
        if header.maxval == 0 || header.maxval > 255 {
            return Err(Error::Format(format!(
                "unsupported PGM maxval {} (8-bit only)",
                header.maxval
            )));
        }
        let n = header.width * header.height;
        if data.len() < n {
            return Err(Error::Format(format!(
                "PGM data truncated: {} bytes for {} pixels",
                data.len(),
                n
            )));
        }
        let pixels = data[..n].iter().map(|&b| b as f64).collect();
        GrayImage::from_pixels(header.height, header.width, pixels)
    }

    /// Encodes as an 8-bit grayscale PNG.
    pub fn to_png_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        {
            let mut encoder =
                png::Encoder::new(BufWriter::new(&mut out), self.width as u32, self.height as u32);
            encoder.set_color(png::ColorType::Grayscale);
            encoder.set_depth(png::BitDepth::Eight);
            let mut writer = encoder
                .write_header()
                .map_err(|e| Error::Format(format!("png encode: {e}")))?;
            writer
                .write_image_data(&self.to_u8())
                .map_err(|e| Error::Format(format!("png encode: {e}")))?;
        }
        Ok(out)
    }

    /// Decodes an 8-bit PNG, converting color to grayscale with Rec. 601
    /// luma weights. Alpha channels are ignored.
    pub fn from_png_bytes(bytes: &[u8]) -> Result<Self> {
        let decoder = png::Decoder::new(bytes);
        let mut reader = decoder
            .read_info()
            .map_err(|e| Error::Format(format!("png decode: {e}")))?;
        let mut buf = vec![0u8; reader.output_buffer_size()];
        let info = reader
            .next_frame(&mut buf)
            .map_err(|e| Error::Format(format!("png decode: {e}")))?;
        if info.bit_depth != png::BitDepth::Eight {
            return Err(Error::Format(format!(
                "unsupported PNG bit depth {:?} (8-bit only)",
                info.bit_depth
            )));
        }
        let (w, h) = (info.width as usize, info.height as usize);
        let data = &buf[..info.buffer_size()];
        let [wr, wg, wb] = LUMA_WEIGHTS;
        let pixels: Vec<f64> = match info.color_type {
            png::ColorType::Grayscale => data.iter().map(|&v| v as f64).collect(),
            png::ColorType::GrayscaleAlpha => data.chunks_exact(2).map(|p| p[0] as f64).collect(),
            png::ColorType::Rgb => data
                .chunks_exact(3)
                .map(|p| wr * p[0] as f64 + wg * p[1] as f64 + wb * p[2] as f64)
                .collect(),
            png::ColorType::Rgba => data
                .chunks_exact(4)
                .map(|p| wr * p[0] as f64 + wg * p[1] as f64 + wb * p[2] as f64)
                .collect(),
            other => {
                return Err(Error::Format(format!(
                    "unsupported PNG color type {other:?}"
                )))
            }
        };
        GrayImage::from_pixels(h, w, pixels)
    }

    /// Loads from a path, dispatching on the `.pgm`/`.png` extension.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        match extension(path)?.as_str() {
            "pgm" => Self::from_pgm_bytes(&bytes),
            "png" => Self::from_png_bytes(&bytes),
            ext => Err(Error::InvalidArgument(format!(
                "unsupported image extension .{ext} (use .pgm or .png)"
            ))),
        }
    }

    /// Saves to a path, dispatching on the `.pgm`/`.png` extension.
    /// Values are quantized to 8 bits either way.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let bytes = match extension(path)?.as_str() {
            "pgm" => self.to_pgm_bytes(),
            "png" => self.to_png_bytes()?,
            ext => {
                return Err(Error::InvalidArgument(format!(
                    "unsupported image extension .{ext} (use .pgm or .png)"
                )))
            }
        };
        fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }
}

fn extension(path: &Path) -> Result<String> {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .ok_or_else(|| {
            Error::InvalidArgument(format!("{}: missing file extension", path.display()))
        })
}

pub(crate) struct PnmHeader {
    pub magic: String,
    pub width: usize,
    pub height: usize,
    pub maxval: usize,
}

/// Parses a PNM header (magic, width, height, maxval) tolerating comments
/// and arbitrary whitespace, and returns the raster that follows the
/// single whitespace byte after maxval.
pub(crate) fn parse_pnm_header(bytes: &[u8]) -> Result<(PnmHeader, &[u8])> {
    let mut pos = 0usize;
    let mut fields: Vec<String> = Vec::new();
    while fields.len() < 4 {
        // skip whitespace and comments
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("truncated PNM header".into()));
        }
        fields.push(
            std::str::from_utf8(&bytes[start..pos])
                .map_err(|_| Error::Format("non-ASCII PNM header".into()))?
                .to_string(),
        );
    }
    // exactly one whitespace byte separates maxval from the raster
    if pos >= bytes.len() {
        return Err(Error::Format("PNM header not followed by raster".into()));
    }
    pos += 1;
    let parse = |s: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| Error::Format(format!("bad PNM header field {s:?}")))
    };
    Ok((
        PnmHeader {
            magic: fields[0].clone(),
            width: parse(&fields[1])?,
            height: parse(&fields[2])?,
            maxval: parse(&fields[3])?,
        },
        &bytes[pos..],
    ))
}
