//! Non-regular 1/4-sampling masks built from repeatable block templates.
//!
//! Every mask exposes exactly one high-resolution pixel per aligned 2x2
//! cell of the sensor (the 1/4-sampling property). Which quadrant of each
//! cell is open comes from a `QuadrantTemplate`: a b x b block of choices
//! that is repeated across the sensor. `b = 2` yields the four regular
//! masks; `b = max` treats the whole sensor as a single template.
//!
//! For a block of size b there are `4^(b^2/4)` possible masks, so templates
//! with b >= 8 are sampled rather than enumerated.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Template block size: a fixed even side length, or the whole sensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockSize {
    Fixed(u32),
    Max,
}

impl BlockSize {
    /// Stable 64-bit code for seeding per-block-size random streams.
    pub(crate) fn stream_tag(self) -> u64 {
        match self {
            BlockSize::Fixed(b) => b as u64,
            BlockSize::Max => u64::MAX,
        }
    }
}

impl PartialOrd for BlockSize {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Fixed sizes ascending, `max` after every fixed size.
impl Ord for BlockSize {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use BlockSize::*;
        match (self, other) {
            (Fixed(a), Fixed(b)) => a.cmp(b),
            (Fixed(_), Max) => std::cmp::Ordering::Less,
            (Max, Fixed(_)) => std::cmp::Ordering::Greater,
            (Max, Max) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for BlockSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockSize::Fixed(b) => write!(f, "{b}"),
            BlockSize::Max => write!(f, "max"),
        }
    }
}

impl FromStr for BlockSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("max") {
            return Ok(BlockSize::Max);
        }
        let b: u32 = s
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad block size {s:?}")))?;
        validate_block_size(b)?;
        Ok(BlockSize::Fixed(b))
    }
}

fn validate_block_size(b: u32) -> Result<()> {
    if b < 2 || !b.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "block size must be even and >= 2, got {b}"
        )));
    }
    Ok(())
}

fn validate_sensor_dims(height: usize, width: usize) -> Result<()> {
    if height == 0 || width == 0 || !height.is_multiple_of(2) || !width.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "sensor dimensions must be positive and even, got {height}x{width}"
        )));
    }
    Ok(())
}

/// Number of distinct 1/4-sampling masks for a block of size b:
/// 4 raised to the number of 2x2 cells in the block, i.e. `4^(b^2/4)`.
pub fn count_masks(b: u32) -> Result<BigUint> {
    validate_block_size(b)?;
    // 4^(b^2/4) = 2^(b^2/2)
    let bits = (b as u64) * (b as u64) / 2;
    Ok(BigUint::from(1u8) << bits)
}

/// The compact stored form of a periodic mask: one open-quadrant index per
/// 2x2 cell of a b x b block. Quadrants are numbered row-major within the
/// cell: 0 = top-left, 1 = top-right, 2 = bottom-left, 3 = bottom-right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadrantTemplate {
    block_size: u32,
    cells: Vec<u8>,
}

impl QuadrantTemplate {
    /// Draws every cell independently and uniformly from {0,1,2,3} using
    /// the pinned SplitMix64 generator; the same (b, seed) always yields
    /// the identical template.
    pub fn generate(b: u32, seed: u64) -> Result<Self> {
        Self::generate_with(b, &mut SplitMix64::new(seed))
    }

    /// Draws a template from an already-running generator stream.
    pub(crate) fn generate_with(b: u32, rng: &mut SplitMix64) -> Result<Self> {
        validate_block_size(b)?;
        let side = (b / 2) as usize;
        let cells = (0..side * side).map(|_| rng.next_quadrant()).collect();
        Ok(QuadrantTemplate {
            block_size: b,
            cells,
        })
    }

    pub fn from_cells(b: u32, cells: Vec<u8>) -> Result<Self> {
        validate_block_size(b)?;
        let side = (b / 2) as usize;
        if cells.len() != side * side {
            return Err(Error::InvalidArgument(format!(
                "template for b={b} needs {} cells, got {}",
                side * side,
                cells.len()
            )));
        }
        if let Some(&bad) = cells.iter().find(|&&c| c > 3) {
            return Err(Error::InvalidArgument(format!(
                "quadrant index {bad} outside 0..=3"
            )));
        }
        Ok(QuadrantTemplate {
            block_size: b,
            cells,
        })
    }

    /// The template at position `index` in lexicographic cell order
    /// (first cell is the most significant base-4 digit). Only available
    /// while the full enumeration fits in u64, i.e. b <= 10.
    pub fn from_index(b: u32, index: u64) -> Result<Self> {
        validate_block_size(b)?;
        let side = (b / 2) as usize;
        let ncells = side * side;
        if 2 * ncells > 64 {
            return Err(Error::InvalidArgument(format!(
                "b={b} has too many templates to enumerate by u64 index"
            )));
        }
        if ncells < 32 && index >= 1u64 << (2 * ncells) {
            return Err(Error::InvalidArgument(format!(
                "template index {index} out of range for b={b}"
            )));
        }
        let cells = (0..ncells)
            .map(|j| ((index >> (2 * (ncells - 1 - j))) & 3) as u8)
            .collect();
        Ok(QuadrantTemplate {
            block_size: b,
            cells,
        })
    }

    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    /// Cells in row-major order over the (b/2) x (b/2) grid.
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Side length of the cell grid, b/2.
    pub fn grid_side(&self) -> usize {
        (self.block_size / 2) as usize
    }

    pub fn cell(&self, cell_row: usize, cell_col: usize) -> u8 {
        self.cells[cell_row * self.grid_side() + cell_col]
    }

    /// Repeats the template to cover a height x width sensor. When the
    /// sensor is not a multiple of b the repetition is cropped at the
    /// right/bottom edges; because dimensions are even, cropping happens
    /// at cell granularity and the 1/4-sampling property is preserved.
    pub fn tile(&self, height: usize, width: usize) -> Result<SamplingMask> {
        validate_sensor_dims(height, width)?;
        let side = self.grid_side();
        let mut bits = vec![false; height * width];
        for m in 0..height {
            for n in 0..width {
                let cell_row = (m / 2) % side;
                let cell_col = (n / 2) % side;
                let quadrant = ((m % 2) * 2 + (n % 2)) as u8;
                bits[m * width + n] = self.cell(cell_row, cell_col) == quadrant;
            }
        }
        Ok(SamplingMask {
            height,
            width,
            bits,
            period: BlockSize::Fixed(self.block_size),
        })
    }

    /// The template expanded to its own b x b footprint.
    pub fn expand(&self) -> SamplingMask {
        let b = self.block_size as usize;
        self.tile(b, b).expect("b is even and positive")
    }

    /// Serializes to the QTPL v1 text format.
    pub fn to_qtpl_string(&self) -> String {
        let side = self.grid_side();
        let mut out = format!("QTPL v1\nb={}\n", self.block_size);
        for row in 0..side {
            let line: Vec<String> = (0..side)
                .map(|col| self.cell(row, col).to_string())
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the QTPL v1 text format.
    pub fn parse_qtpl(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some("QTPL v1") => {}
            other => {
                return Err(Error::Format(format!(
                    "expected 'QTPL v1' header, found {other:?}"
                )))
            }
        }
        let b: u32 = match lines.next().and_then(|l| l.strip_prefix("b=")) {
            Some(v) => v
                .parse()
                .map_err(|_| Error::Format(format!("bad block size line b={v:?}")))?,
            None => return Err(Error::Format("missing 'b=<int>' line".into())),
        };
        validate_block_size(b)?;
        let side = (b / 2) as usize;
        let mut cells = Vec::with_capacity(side * side);
        for row in 0..side {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("missing template row {row}")))?;
            let values: Vec<&str> = line.split_whitespace().collect();
            if values.len() != side {
                return Err(Error::Format(format!(
                    "template row {row} has {} entries, expected {side}",
                    values.len()
                )));
            }
            for v in values {
                let c: u8 = v
                    .parse()
                    .map_err(|_| Error::Format(format!("bad quadrant digit {v:?}")))?;
                if c > 3 {
                    return Err(Error::Format(format!("quadrant digit {c} outside 0..=3")));
                }
                cells.push(c);
            }
        }
        if lines.next().is_some() {
            return Err(Error::Format("trailing data after template rows".into()));
        }
        QuadrantTemplate::from_cells(b, cells)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_qtpl_string()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_qtpl(&text)
    }
}

/// A full-sensor binary sampling grid: true = sensitive to light.
///
/// Invariant: every aligned 2x2 cell contains exactly one open pixel, so
/// the open fraction is exactly 1/4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingMask {
    height: usize,
    width: usize,
    bits: Vec<bool>,
    period: BlockSize,
}

impl SamplingMask {
    /// A mask that is non-regular over the whole sensor: every 2x2 cell
    /// draws its open quadrant independently (b = max).
    pub fn full_sensor(height: usize, width: usize, seed: u64) -> Result<Self> {
        validate_sensor_dims(height, width)?;
        let mut rng = SplitMix64::new(seed);
        let mut bits = vec![false; height * width];
        for cell_row in 0..height / 2 {
            for cell_col in 0..width / 2 {
                let q = rng.next_quadrant() as usize;
                let m = cell_row * 2 + q / 2;
                let n = cell_col * 2 + q % 2;
                bits[m * width + n] = true;
            }
        }
        Ok(SamplingMask {
            height,
            width,
            bits,
            period: BlockSize::Max,
        })
    }

    /// Wraps a raw bit grid, validating the 1/4-sampling invariant.
    pub fn from_bits(
        height: usize,
        width: usize,
        bits: Vec<bool>,
        period: BlockSize,
    ) -> Result<Self> {
        validate_sensor_dims(height, width)?;
        if bits.len() != height * width {
            return Err(Error::InvalidArgument(format!(
                "bit grid has {} entries, expected {}",
                bits.len(),
                height * width
            )));
        }
        for cell_row in 0..height / 2 {
            for cell_col in 0..width / 2 {
                let (m, n) = (cell_row * 2, cell_col * 2);
                let open = bits[m * width + n] as u8
                    + bits[m * width + n + 1] as u8
                    + bits[(m + 1) * width + n] as u8
                    + bits[(m + 1) * width + n + 1] as u8;
                if open != 1 {
                    return Err(Error::InvalidInput(format!(
                        "cell at ({m},{n}) has {open} open pixels, expected exactly 1"
                    )));
                }
            }
        }
        Ok(SamplingMask {
            height,
            width,
            bits,
            period,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// The template block size this mask was tiled from.
    pub fn period(&self) -> BlockSize {
        self.period
    }

    #[inline]
    pub fn bit(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn open_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Open positions in row-major order.
    pub fn open_positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| (i / self.width, i % self.width))
    }

    /// Encodes as binary PGM: 0 = covered, 255 = open. The template period
    /// is carried in a `# period_b=` header comment so it survives the
    /// round trip.
    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let mut out = format!(
            "P5\n# period_b={}\n{} {}\n255\n",
            self.period, self.width, self.height
        )
        .into_bytes();
        out.extend(self.bits.iter().map(|&b| if b { 255u8 } else { 0 }));
        out
    }

    /// Decodes a mask PGM written by [`to_pgm_bytes`](Self::to_pgm_bytes).
    /// Pixel values must be exactly 0 or 255 and the 1/4-sampling
    /// invariant must hold. Without a `# period_b=` comment the period is
    /// taken to be `max`.
    pub fn from_pgm_bytes(bytes: &[u8]) -> Result<Self> {
        let (header, data) = crate::image::parse_pnm_header(bytes)?;
        if header.magic != "P5" {
            return Err(Error::Format(format!(
                "expected PGM magic P5, found {}",
                header.magic
            )));
        }
        if header.maxval != 255 {
            return Err(Error::Format(format!(
                "mask PGM must have maxval 255, found {}",
                header.maxval
            )));
        }
        let n = header.width * header.height;
        if data.len() < n {
            return Err(Error::Format(format!(
                "mask PGM truncated: {} bytes for {} pixels",
                data.len(),
                n
            )));
        }
        let mut bits = Vec::with_capacity(n);
        for &v in &data[..n] {
            match v {
                0 => bits.push(false),
                255 => bits.push(true),
                other => {
                    return Err(Error::Format(format!(
                        "mask PGM pixel {other} is neither 0 nor 255"
                    )))
                }
            }
        }
        let period = parse_period_comment(bytes).unwrap_or(BlockSize::Max);
        SamplingMask::from_bits(header.height, header.width, bits, period)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_pgm_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_pgm_bytes(&bytes)
    }
}

fn parse_period_comment(bytes: &[u8]) -> Option<BlockSize> {
    // Comments only occur in the ASCII header, well before the raster.
    let head = &bytes[..bytes.len().min(256)];
    let text = String::from_utf8_lossy(head);
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# period_b=") {
            return rest.trim().parse().ok();
        }
    }
    None
}

/// Structural diagnostics of a mask: pathological constellations that are
/// known to hurt reconstruction.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskDiagnostics {
    /// Top-left corners of 2x2 solid open blocks ("super-pixels"): four
    /// sampling points from four neighboring cells forming one large pixel.
    pub superpixel_positions: Vec<(usize, usize)>,
    /// Number of unordered pairs of open pixels that are 4-neighbors.
    pub clump_score: usize,
    /// Open fraction; exactly 0.25 for any valid mask.
    pub density: f64,
}

/// Scans the mask for super-pixels and clumping. By the 1/4-sampling
/// invariant a 2x2 solid block necessarily straddles four distinct cells.
pub fn detect_superpixels(mask: &SamplingMask) -> MaskDiagnostics {
    let mut superpixels = Vec::new();
    for m in 0..mask.height() - 1 {
        for n in 0..mask.width() - 1 {
            if mask.bit(m, n) && mask.bit(m, n + 1) && mask.bit(m + 1, n) && mask.bit(m + 1, n + 1)
            {
                superpixels.push((m, n));
            }
        }
    }
    MaskDiagnostics {
        superpixel_positions: superpixels,
        clump_score: clump_metric(mask),
        density: mask.open_count() as f64 / (mask.height() * mask.width()) as f64,
    }
}

/// Counts unordered pairs of open pixels that are horizontally or
/// vertically adjacent. Diagonal neighbors are not counted: they occur
/// even in well-behaved masks, while 4-adjacency isolates the clumping
/// pathology.
pub fn clump_metric(mask: &SamplingMask) -> usize {
    let mut count = 0;
    for m in 0..mask.height() {
        for n in 0..mask.width() {
            if !mask.bit(m, n) {
                continue;
            }
            if n + 1 < mask.width() && mask.bit(m, n + 1) {
                count += 1;
            }
            if m + 1 < mask.height() && mask.bit(m + 1, n) {
                count += 1;
            }
        }
    }
    count
}
