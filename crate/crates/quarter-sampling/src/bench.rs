//! The measurement protocol: sample mask sets per block size, reconstruct
//! every (image, mask, method) combination, aggregate PSNR, and emit
//! table-shaped reports.
//!
//! Everything is a pure function of the [`BenchSpec`]: mask sets derive
//! from the master seed, work items run in any order and are sorted
//! canonically before aggregation, so two runs of the same spec produce
//! byte-identical CSV.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::mask::{count_masks, BlockSize, QuadrantTemplate, SamplingMask};
use crate::recon::{psnr, FseConfig, FseReconstructor, LinReconstructor, Reconstructor};
use crate::rng::{derive_seed, SplitMix64};
use crate::sensor::acquire_masked;

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// skipped. Returns pairs in file order (keys may repeat).
pub(crate) fn kv_lines(text: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            out.push((key.trim().to_string(), value.trim().to_string()));
        } else {
            out.push((line.to_string(), String::new()));
        }
    }
    out
}

/// Full description of a benchmark run.
#[derive(Clone, Debug)]
pub struct BenchSpec {
    /// Images in evaluation order.
    pub image_paths: Vec<PathBuf>,
    /// Template block sizes to evaluate.
    pub block_sizes: Vec<BlockSize>,
    /// Mask draws per block size (forced to 4 for b = 2, which is
    /// enumerated exhaustively).
    pub masks_per_b: usize,
    /// Reconstruction method labels ("fse", "lin", or plugged-in ids).
    pub methods: Vec<String>,
    /// Root of all randomness in the run.
    pub master_seed: u64,
    pub fse_config: FseConfig,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.image_paths.is_empty() {
            return Err(Error::InvalidArgument("spec lists no images".into()));
        }
        if self.block_sizes.is_empty() {
            return Err(Error::InvalidArgument("spec lists no block sizes".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("spec lists no methods".into()));
        }
        if self.masks_per_b == 0 {
            return Err(Error::InvalidArgument("masks_per_b must be >= 1".into()));
        }
        for &b in &self.block_sizes {
            if let BlockSize::Fixed(v) = b {
                if v != 2 && BigUint::from(self.masks_per_b) > count_masks(v)? {
                    return Err(Error::InvalidArgument(format!(
                        "masks_per_b {} exceeds the {} possible masks for b={v}",
                        self.masks_per_b,
                        count_masks(v)?
                    )));
                }
            }
        }
        self.fse_config.validate()
    }

    /// Parses the spec file format: `key = value` lines with repeated
    /// `image =` entries (paths resolved against `base_dir`), a
    /// comma-separated `block_sizes` list, and `fse.`-prefixed
    /// reconstruction parameters.
    pub fn parse_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut spec = BenchSpec {
            image_paths: Vec::new(),
            block_sizes: Vec::new(),
            masks_per_b: 16,
            methods: Vec::new(),
            master_seed: 0,
            fse_config: FseConfig::default(),
        };
        let mut fse_kv = String::new();
        for (key, value) in kv_lines(text) {
            match key.as_str() {
                "image" => spec.image_paths.push(base_dir.join(&value)),
                "block_sizes" => {
                    spec.block_sizes = value
                        .split(',')
                        .map(|s| s.trim().parse::<BlockSize>())
                        .collect::<Result<_>>()?;
                }
                "masks_per_b" => {
                    spec.masks_per_b = value
                        .parse()
                        .map_err(|_| Error::Format(format!("bad masks_per_b {value:?}")))?;
                }
                "methods" => {
                    spec.methods = value
                        .split(',')
                        .map(|s| s.trim().to_ascii_lowercase())
                        .filter(|s| !s.is_empty())
                        .collect();
                }
                "master_seed" => {
                    spec.master_seed = value
                        .parse()
                        .map_err(|_| Error::Format(format!("bad master_seed {value:?}")))?;
                }
                k if k.starts_with("fse.") => {
                    let _ = writeln!(fse_kv, "{} = {}", &k[4..], value);
                }
                other => {
                    return Err(Error::Format(format!("unknown spec key {other:?}")));
                }
            }
        }
        if !fse_kv.is_empty() {
            spec.fse_config = FseConfig::parse_str(&fse_kv)?;
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Loads a spec file; relative image paths resolve against the file's
    /// directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse_str(&text, base)
    }

    pub fn to_spec_string(&self) -> String {
        let mut s = String::new();
        for p in &self.image_paths {
            let _ = writeln!(s, "image = {}", p.display());
        }
        let blocks: Vec<String> = self.block_sizes.iter().map(|b| b.to_string()).collect();
        let _ = writeln!(s, "block_sizes = {}", blocks.join(","));
        let _ = writeln!(s, "masks_per_b = {}", self.masks_per_b);
        let _ = writeln!(s, "methods = {}", self.methods.join(","));
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        for line in self.fse_config.to_config_string().lines() {
            let _ = writeln!(s, "fse.{line}");
        }
        s
    }
}

/// Draws `count` distinct sampling masks for one block size, tiled to a
/// height x width sensor; a pure function of `(block, count, master_seed)`
/// plus the sensor size.
///
/// b = 2 ignores `count` and returns the exhaustive set of four regular
/// masks. Whenever `count` equals the total number of masks for an
/// enumerable block size, the set is the full lexicographic enumeration;
/// otherwise masks are drawn from the seeded stream, deduplicated by
/// template equality, re-drawing on collision.
pub fn sample_mask_set(
    block: BlockSize,
    count: usize,
    master_seed: u64,
    height: usize,
    width: usize,
) -> Result<Vec<SamplingMask>> {
    match block {
        BlockSize::Fixed(2) => (0..4)
            .map(|i| QuadrantTemplate::from_index(2, i)?.tile(height, width))
            .collect(),
        BlockSize::Fixed(b) => {
            let total = count_masks(b)?;
            if BigUint::from(count) > total {
                return Err(Error::InvalidArgument(format!(
                    "cannot draw {count} distinct masks for b={b}, only {total} exist"
                )));
            }
            if BigUint::from(count) == total {
                return (0..count as u64)
                    .map(|i| QuadrantTemplate::from_index(b, i)?.tile(height, width))
                    .collect();
            }
            let mut rng = SplitMix64::new(derive_seed(master_seed, block.stream_tag()));
            let mut seen = HashSet::new();
            let mut masks = Vec::with_capacity(count);
            while masks.len() < count {
                let t = QuadrantTemplate::generate_with(b, &mut rng)?;
                if seen.insert(t.cells().to_vec()) {
                    masks.push(t.tile(height, width)?);
                }
            }
            Ok(masks)
        }
        BlockSize::Max => {
            let mut rng = SplitMix64::new(derive_seed(master_seed, block.stream_tag()));
            let mut seen = HashSet::new();
            let mut masks = Vec::with_capacity(count);
            while masks.len() < count {
                let mask = SamplingMask::full_sensor(height, width, rng.next_u64())?;
                if seen.insert(mask.bits().to_vec()) {
                    masks.push(mask);
                }
            }
            Ok(masks)
        }
    }
}

/// One (image, block size, mask, method) measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub image_id: String,
    pub block: BlockSize,
    pub mask_index: usize,
    pub method: String,
    pub psnr_db: f64,
}

/// Per-(block size, method) PSNR summary over the mask set.
#[derive(Clone, Debug)]
pub struct MethodBlockAggregate {
    pub block: BlockSize,
    pub method: String,
    /// Mean PSNR over images, indexed by mask.
    pub per_mask_mean: Vec<f64>,
    /// (mask index, mean) of the best mask; ties take the lowest index.
    pub best: (usize, f64),
    /// (mask index, mean) of the worst mask; ties take the lowest index.
    pub worst: (usize, f64),
}

/// The Table-1-shaped output of a run.
#[derive(Clone, Debug)]
pub struct BenchReport {
    /// Canonically sorted measurement records.
    pub records: Vec<BenchRecord>,
    pub aggregates: Vec<MethodBlockAggregate>,
    /// Per-image failures (unreadable files etc.); the run continues
    /// without them.
    pub errors: Vec<String>,
    /// Ordered `key = value` configuration echo.
    pub metadata: Vec<(String, String)>,
    /// Block sizes in report order.
    pub blocks: Vec<BlockSize>,
    /// Method labels in report order.
    pub methods: Vec<String>,
}

struct LoadedImage {
    id: String,
    image: GrayImage,
}

/// Runs the benchmark with the built-in reconstructors.
pub fn run_benchmark(spec: &BenchSpec, jobs: usize) -> Result<BenchReport> {
    run_benchmark_with(spec, jobs, &[])
}

/// Runs the benchmark with additional reconstructors available for
/// method labels beyond the built-in "fse" and "lin"; a plugged-in
/// reconstructor whose id matches a built-in label overrides it.
pub fn run_benchmark_with(
    spec: &BenchSpec,
    jobs: usize,
    plugins: &[&dyn Reconstructor],
) -> Result<BenchReport> {
    spec.validate()?;
    let methods = resolve_methods(spec, plugins)?;

    let mut errors = Vec::new();
    let mut notes = Vec::new();
    let images = load_images(spec, &mut errors, &mut notes);
    if images.is_empty() {
        return Err(Error::InvalidInput(
            "no readable images; the effective dataset is empty".into(),
        ));
    }

    // one mask set per (block size, sensor dimensions); for fixed b the
    // underlying templates are identical across dimensions
    let mut mask_sets: HashMap<(BlockSize, usize, usize), Vec<SamplingMask>> = HashMap::new();
    for &block in &spec.block_sizes {
        for img in &images {
            let key = (block, img.image.height(), img.image.width());
            if let std::collections::hash_map::Entry::Vacant(e) = mask_sets.entry(key) {
                e.insert(sample_mask_set(
                    block,
                    spec.masks_per_b,
                    spec.master_seed,
                    img.image.height(),
                    img.image.width(),
                )?);
            }
        }
    }

    // flatten work items; collect() preserves item order, so the result
    // does not depend on scheduling
    struct Item<'a> {
        image: &'a LoadedImage,
        block: BlockSize,
        mask_index: usize,
        mask: &'a SamplingMask,
        method: &'a dyn Reconstructor,
    }
    let mut items = Vec::new();
    for img in &images {
        for &block in &spec.block_sizes {
            let set = &mask_sets[&(block, img.image.height(), img.image.width())];
            for (mask_index, mask) in set.iter().enumerate() {
                for method in &methods {
                    items.push(Item {
                        image: img,
                        block,
                        mask_index,
                        mask,
                        method: method.as_ref(),
                    });
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?;
    let outcomes: Vec<std::result::Result<BenchRecord, String>> = pool.install(|| {
        items
            .par_iter()
            .map(|item| {
                let run = || -> Result<f64> {
                    let masked = acquire_masked(&item.image.image, item.mask)?;
                    let recon = item.method.reconstruct(&masked)?;
                    psnr(&item.image.image, &recon.image)
                };
                match run() {
                    Ok(psnr_db) => Ok(BenchRecord {
                        image_id: item.image.id.clone(),
                        block: item.block,
                        mask_index: item.mask_index,
                        method: item.method.id().to_string(),
                        psnr_db,
                    }),
                    Err(e) => Err(format!(
                        "{} b={} mask={} {}: {e}",
                        item.image.id,
                        item.block,
                        item.mask_index,
                        item.method.id()
                    )),
                }
            })
            .collect()
    });
    let mut records = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => errors.push(e),
        }
    }
    sort_records(&mut records);

    let mut blocks = spec.block_sizes.clone();
    blocks.sort();
    blocks.dedup();
    let method_labels: Vec<String> = methods.iter().map(|m| m.id().to_string()).collect();
    let aggregates = compute_aggregates(&records, &blocks, &method_labels);

    let mut metadata = vec![
        ("version".to_string(), crate::VERSION.to_string()),
        ("master_seed".to_string(), spec.master_seed.to_string()),
        (
            "block_sizes".to_string(),
            blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","),
        ),
        ("masks_per_b".to_string(), spec.masks_per_b.to_string()),
        ("methods".to_string(), method_labels.join(",")),
    ];
    for line in spec.fse_config.to_config_string().lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            metadata.push((format!("fse.{k}"), v.to_string()));
        }
    }
    metadata.push((
        "grayscale".to_string(),
        "rec601 luma (0.299, 0.587, 0.114) at ingestion".to_string(),
    ));
    metadata.push(("psnr".to_string(), "all pixels, peak 255".to_string()));
    metadata.push((
        "image_order".to_string(),
        "as listed in the spec".to_string(),
    ));
    for note in notes {
        metadata.push(("image".to_string(), note));
    }
    for e in &errors {
        metadata.push(("error".to_string(), e.clone()));
    }

    Ok(BenchReport {
        records,
        aggregates,
        errors,
        metadata,
        blocks,
        methods: method_labels,
    })
}

fn load_images(
    spec: &BenchSpec,
    errors: &mut Vec<String>,
    notes: &mut Vec<String>,
) -> Vec<LoadedImage> {
    let mut images: Vec<LoadedImage> = Vec::new();
    let mut used_ids = HashSet::new();
    for path in &spec.image_paths {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let mut id = stem.replace([',', ' '], "_");
        let mut k = 2;
        while !used_ids.insert(id.clone()) {
            id = format!("{stem}#{k}");
            k += 1;
        }
        match GrayImage::load(path) {
            Ok(img) => {
                let (h, w) = (img.height(), img.width());
                let (eh, ew) = (h - h % 2, w - w % 2);
                if (eh, ew) != (h, w) {
                    eprintln!(
                        "warning: {}: odd dimensions {h}x{w}, cropping to {eh}x{ew}",
                        path.display()
                    );
                    notes.push(format!("{id} {eh}x{ew} (cropped from {h}x{w})"));
                    images.push(LoadedImage {
                        id,
                        image: img.crop(eh, ew).expect("crop within bounds"),
                    });
                } else {
                    notes.push(format!("{id} {h}x{w}"));
                    images.push(LoadedImage { id, image: img });
                }
            }
            Err(e) => errors.push(format!("{}: {e}", path.display())),
        }
    }
    images
}

struct PluginRef<'a>(&'a dyn Reconstructor);

impl Reconstructor for PluginRef<'_> {
    fn id(&self) -> &str {
        self.0.id()
    }

    fn reconstruct(&self, input: &crate::sensor::MaskedImage) -> Result<crate::recon::ReconResult> {
        self.0.reconstruct(input)
    }
}

fn resolve_methods<'a>(
    spec: &BenchSpec,
    plugins: &[&'a dyn Reconstructor],
) -> Result<Vec<Box<dyn Reconstructor + 'a>>> {
    let mut out: Vec<Box<dyn Reconstructor + 'a>> = Vec::new();
    for label in &spec.methods {
        if let Some(p) = plugins.iter().find(|p| p.id().eq_ignore_ascii_case(label)) {
            out.push(Box::new(PluginRef(*p)));
        } else if label.eq_ignore_ascii_case("fse") {
            out.push(Box::new(FseReconstructor::new(spec.fse_config.clone())));
        } else if label.eq_ignore_ascii_case("lin") {
            out.push(Box::new(LinReconstructor));
        } else {
            return Err(Error::InvalidArgument(format!(
                "unknown reconstruction method {label:?}"
            )));
        }
    }
    Ok(out)
}

fn sort_records(records: &mut [BenchRecord]) {
    records.sort_by(|a, b| {
        a.image_id
            .cmp(&b.image_id)
            .then(a.block.cmp(&b.block))
            .then(a.mask_index.cmp(&b.mask_index))
            .then(a.method.cmp(&b.method))
    });
}

/// Recomputes per-mask means and best/worst masks from raw records.
pub fn compute_aggregates(
    records: &[BenchRecord],
    blocks: &[BlockSize],
    methods: &[String],
) -> Vec<MethodBlockAggregate> {
    let mut out = Vec::new();
    for &block in blocks {
        for method in methods {
            let mut sums: Vec<(f64, usize)> = Vec::new();
            for r in records {
                if r.block == block && &r.method == method {
                    if sums.len() <= r.mask_index {
                        sums.resize(r.mask_index + 1, (0.0, 0));
                    }
                    sums[r.mask_index].0 += r.psnr_db;
                    sums[r.mask_index].1 += 1;
                }
            }
            if sums.is_empty() || sums.iter().any(|&(_, n)| n == 0) {
                continue;
            }
            let per_mask_mean: Vec<f64> = sums.iter().map(|&(s, n)| s / n as f64).collect();
            let best = per_mask_mean
                .iter()
                .enumerate()
                .fold((0usize, f64::NEG_INFINITY), |acc, (i, &v)| {
                    if v > acc.1 {
                        (i, v)
                    } else {
                        acc
                    }
                });
            let worst = per_mask_mean
                .iter()
                .enumerate()
                .fold((0usize, f64::INFINITY), |acc, (i, &v)| {
                    if v < acc.1 {
                        (i, v)
                    } else {
                        acc
                    }
                });
            out.push(MethodBlockAggregate {
                block,
                method: method.clone(),
                per_mask_mean,
                best,
                worst,
            });
        }
    }
    out
}

impl BenchReport {
    /// The aggregate for one (block size, method) pair, if present.
    pub fn aggregate(&self, block: BlockSize, method: &str) -> Option<&MethodBlockAggregate> {
        self.aggregates
            .iter()
            .find(|a| a.block == block && a.method == method)
    }
}

fn format_psnr(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.6}")
    }
}

/// Renders the full report as CSV: `#`-commented metadata, a header, and
/// one line per record. Byte-identical for identical specs.
pub fn emit_csv(report: &BenchReport) -> String {
    let mut out = String::new();
    for (k, v) in &report.metadata {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out.push_str("image_id,b,mask_index,method,psnr_db\n");
    for r in &report.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.image_id,
            r.block,
            r.mask_index,
            r.method,
            format_psnr(r.psnr_db)
        );
    }
    out
}

/// Renders the best-mask mean PSNR table: one row per block size
/// (ascending, `max` last), one column per method, two decimals.
pub fn emit_markdown(report: &BenchReport) -> Result<String> {
    if report.methods.is_empty() || report.records.is_empty() {
        return Err(Error::InvalidArgument("nothing to tabulate: empty report".into()));
    }
    let mut out = String::new();
    let _ = writeln!(out, "| b | {} |", report.methods.join(" | "));
    let _ = writeln!(
        out,
        "|---|{}|",
        report.methods.iter().map(|_| "---").collect::<Vec<_>>().join("|")
    );
    for &block in &report.blocks {
        let cells: Vec<String> = report
            .methods
            .iter()
            .map(|m| match self_aggregate(report, block, m) {
                Some(a) if a.best.1.is_infinite() => "inf".to_string(),
                Some(a) => format!("{:.2}", a.best.1),
                None => "-".to_string(),
            })
            .collect();
        let _ = writeln!(out, "| {block} | {} |", cells.join(" | "));
    }
    Ok(out)
}

fn self_aggregate<'a>(
    report: &'a BenchReport,
    block: BlockSize,
    method: &str,
) -> Option<&'a MethodBlockAggregate> {
    report.aggregate(block, method)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            other => Err(Error::InvalidArgument(format!("unknown table format {other:?}"))),
        }
    }
}

/// Renders a report in the requested format: Markdown gives the
/// best-mask table, CSV additionally carries the full per-record dump.
pub fn emit_table(report: &BenchReport, format: TableFormat) -> Result<String> {
    if report.methods.is_empty() || report.records.is_empty() {
        return Err(Error::InvalidArgument("nothing to tabulate: empty report".into()));
    }
    match format {
        TableFormat::Csv => Ok(emit_csv(report)),
        TableFormat::Markdown => emit_markdown(report),
    }
}

/// Parses a CSV report back into a [`BenchReport`] (metadata comments,
/// records, recomputed aggregates), so tables can be re-rendered without
/// re-running the benchmark.
pub fn parse_csv(text: &str) -> Result<BenchReport> {
    let mut metadata = Vec::new();
    let mut records = Vec::new();
    let mut methods: Vec<String> = Vec::new();
    let mut saw_header = false;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            match rest.split_once(" = ") {
                Some((k, v)) => metadata.push((k.trim().to_string(), v.trim().to_string())),
                None => metadata.push((rest.to_string(), String::new())),
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !saw_header {
            if line != "image_id,b,mask_index,method,psnr_db" {
                return Err(Error::Format(format!("unexpected CSV header {line:?}")));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Format(format!("bad CSV record {line:?}")));
        }
        let psnr_db = if fields[4] == "inf" {
            f64::INFINITY
        } else {
            fields[4]
                .parse()
                .map_err(|_| Error::Format(format!("bad psnr value {:?}", fields[4])))?
        };
        let record = BenchRecord {
            image_id: fields[0].to_string(),
            block: fields[1].parse()?,
            mask_index: fields[2]
                .parse()
                .map_err(|_| Error::Format(format!("bad mask index {:?}", fields[2])))?,
            method: fields[3].to_string(),
            psnr_db,
        };
        if !methods.contains(&record.method) {
            methods.push(record.method.clone());
        }
        records.push(record);
    }
    if !saw_header {
        return Err(Error::Format("missing CSV header".into()));
    }
    sort_records(&mut records);
    let mut blocks: Vec<BlockSize> = Vec::new();
    for r in &records {
        if !blocks.contains(&r.block) {
            blocks.push(r.block);
        }
    }
    blocks.sort();
    let aggregates = compute_aggregates(&records, &blocks, &methods);
    Ok(BenchReport {
        records,
        aggregates,
        errors: Vec::new(),
        metadata,
        blocks,
        methods,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn kv_lines_strips_comments_and_blanks() {
        let pairs = kv_lines("a = 1\n# note\n\n b=2 # trailing\n");
        assert_eq!(
            pairs,
            vec![("a".into(), "1".into()), ("b".into(), "2".into())]
        );
    }

    #[test]
    fn b2_mask_set_is_the_exhaustive_regular_four() {
        let set = sample_mask_set(BlockSize::Fixed(2), 256, 1234, 8, 8).unwrap();
        assert_eq!(set.len(), 4);
        // each mask is one of the four phase-shifted regular combs
        for (i, mask) in set.iter().enumerate() {
            let q = i;
            for m in 0..8 {
                for n in 0..8 {
                    let expect = m % 2 == q / 2 && n % 2 == q % 2;
                    assert_eq!(mask.bit(m, n), expect, "mask {i} at ({m},{n})");
                }
            }
        }
    }

    #[test]
    fn b4_full_draw_is_exhaustive() {
        let set = sample_mask_set(BlockSize::Fixed(4), 256, 7, 4, 4).unwrap();
        assert_eq!(set.len(), 256);
        let distinct: HashSet<Vec<bool>> = set.iter().map(|m| m.bits().to_vec()).collect();
        assert_eq!(distinct.len(), 256);
    }

    #[test]
    fn mask_sets_are_deterministic_and_distinct() {
        let a = sample_mask_set(BlockSize::Fixed(8), 32, 99, 16, 16).unwrap();
        let b = sample_mask_set(BlockSize::Fixed(8), 32, 99, 16, 16).unwrap();
        assert_eq!(a, b);
        let distinct: HashSet<Vec<bool>> = a.iter().map(|m| m.bits().to_vec()).collect();
        assert_eq!(distinct.len(), 32);

        let c = sample_mask_set(BlockSize::Max, 16, 99, 16, 16).unwrap();
        let d = sample_mask_set(BlockSize::Max, 16, 99, 16, 16).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn oversized_draw_is_rejected() {
        assert!(sample_mask_set(BlockSize::Fixed(4), 257, 0, 8, 8).is_err());
    }

    #[test]
    fn fixed_b_templates_do_not_depend_on_sensor_size() {
        let small = sample_mask_set(BlockSize::Fixed(8), 8, 5, 16, 16).unwrap();
        let large = sample_mask_set(BlockSize::Fixed(8), 8, 5, 32, 24).unwrap();
        for (a, b) in small.iter().zip(&large) {
            for m in 0..16 {
                for n in 0..16 {
                    assert_eq!(a.bit(m, n), b.bit(m, n));
                }
            }
        }
    }

    fn tiny_spec(dir: &Path) -> BenchSpec {
        let mut paths = Vec::new();
        for (name, img) in synth::desk_set(32, 32, 5) {
            let p = dir.join(format!("{name}.pgm"));
            img.save(&p).unwrap();
            paths.push(p);
        }
        BenchSpec {
            image_paths: paths,
            block_sizes: vec![BlockSize::Fixed(2), BlockSize::Fixed(4), BlockSize::Max],
            masks_per_b: 3,
            methods: vec!["lin".into()],
            master_seed: 11,
            fse_config: FseConfig::default(),
        }
    }

    #[test]
    fn benchmark_runs_and_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let spec = tiny_spec(dir.path());
        let a = run_benchmark(&spec, 2).unwrap();
        let b = run_benchmark(&spec, 1).unwrap();
        assert_eq!(emit_csv(&a), emit_csv(&b));
        // 6 images x (4 + 3 + 3 masks) x 1 method
        assert_eq!(a.records.len(), 6 * 10);
        assert!(a.errors.is_empty());
        // aggregates recompute exactly from records
        let again = compute_aggregates(&a.records, &a.blocks, &a.methods);
        for (x, y) in a.aggregates.iter().zip(&again) {
            assert_eq!(x.per_mask_mean, y.per_mask_mean);
            assert_eq!(x.best, y.best);
            assert_eq!(x.worst, y.worst);
            assert!(x.best.1 >= x.worst.1);
        }
    }

    #[test]
    fn constant_image_scores_infinite_psnr() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("flat.pgm");
        GrayImage::filled(16, 16, 50.0).unwrap().save(&p).unwrap();
        let spec = BenchSpec {
            image_paths: vec![p],
            block_sizes: vec![BlockSize::Max],
            masks_per_b: 2,
            methods: vec!["lin".into(), "fse".into()],
            master_seed: 3,
            fse_config: FseConfig {
                fft_size: 16,
                block_size: 4,
                iterations: 30,
                ..FseConfig::default()
            },
        };
        let report = run_benchmark(&spec, 1).unwrap();
        // both methods reproduce constants up to floating-point dust in
        // the interpolation weights / model coefficients
        for r in &report.records {
            assert!(r.psnr_db > 100.0, "{r:?}");
        }
    }

    #[test]
    fn unreadable_images_become_error_records() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("ok.pgm");
        GrayImage::filled(16, 16, 10.0).unwrap().save(&good).unwrap();
        let spec = BenchSpec {
            image_paths: vec![dir.path().join("missing.pgm"), good],
            block_sizes: vec![BlockSize::Max],
            masks_per_b: 1,
            methods: vec!["lin".into()],
            master_seed: 0,
            fse_config: FseConfig::default(),
        };
        let report = run_benchmark(&spec, 1).unwrap();
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.records.len(), 1);

        let all_bad = BenchSpec {
            image_paths: vec![dir.path().join("nope.pgm")],
            ..spec
        };
        assert!(run_benchmark(&all_bad, 1).is_err());
    }

    #[test]
    fn odd_sized_images_are_cropped() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("odd.pgm");
        GrayImage::filled(17, 15, 10.0).unwrap().save(&p).unwrap();
        let spec = BenchSpec {
            image_paths: vec![p],
            block_sizes: vec![BlockSize::Max],
            masks_per_b: 1,
            methods: vec!["lin".into()],
            master_seed: 0,
            fse_config: FseConfig::default(),
        };
        let report = run_benchmark(&spec, 1).unwrap();
        assert_eq!(report.records.len(), 1);
        assert!(report
            .metadata
            .iter()
            .any(|(k, v)| k == "image" && v.contains("cropped from 17x15")));
    }

    #[test]
    fn csv_round_trips_through_parse() {
        let dir = tempfile::tempdir().unwrap();
        let spec = tiny_spec(dir.path());
        let report = run_benchmark(&spec, 2).unwrap();
        let csv = emit_csv(&report);
        let parsed = parse_csv(&csv).unwrap();
        assert_eq!(parsed.blocks, report.blocks);
        assert_eq!(parsed.methods, report.methods);
        // psnr values survive at CSV precision (6 decimals)
        assert_eq!(parsed.records.len(), report.records.len());
        for (p, r) in parsed.records.iter().zip(&report.records) {
            assert_eq!((&p.image_id, p.block, p.mask_index), (&r.image_id, r.block, r.mask_index));
            assert!((p.psnr_db - r.psnr_db).abs() < 1e-6);
        }
        // re-rendering the parsed report is byte-stable
        assert_eq!(emit_csv(&parsed), csv);
        let md = emit_markdown(&parsed).unwrap();
        assert_eq!(md, emit_markdown(&report).unwrap());
    }

    #[test]
    fn markdown_orders_blocks_with_max_last() {
        let records = vec![
            BenchRecord {
                image_id: "i".into(),
                block: BlockSize::Max,
                mask_index: 0,
                method: "lin".into(),
                psnr_db: 30.0,
            },
            BenchRecord {
                image_id: "i".into(),
                block: BlockSize::Fixed(2),
                mask_index: 0,
                method: "lin".into(),
                psnr_db: 28.114,
            },
        ];
        let blocks = vec![BlockSize::Fixed(2), BlockSize::Max];
        let methods = vec!["lin".to_string()];
        let report = BenchReport {
            aggregates: compute_aggregates(&records, &blocks, &methods),
            records,
            errors: Vec::new(),
            metadata: Vec::new(),
            blocks,
            methods,
        };
        let md = emit_markdown(&report).unwrap();
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines[0], "| b | lin |");
        assert_eq!(lines[2], "| 2 | 28.11 |");
        assert_eq!(lines[3], "| max | 30.00 |");
    }

    #[test]
    fn empty_report_cannot_be_tabulated() {
        let report = BenchReport {
            records: Vec::new(),
            aggregates: Vec::new(),
            errors: Vec::new(),
            metadata: Vec::new(),
            blocks: Vec::new(),
            methods: Vec::new(),
        };
        assert!(emit_table(&report, TableFormat::Markdown).is_err());
        assert!(emit_table(&report, TableFormat::Csv).is_err());
    }

    #[test]
    fn spec_file_round_trip() {
        let text = "\
image = a.pgm
image = sub/b.png
block_sizes = 2, 8, max
masks_per_b = 5
methods = fse, lin
master_seed = 42
fse.iterations = 50
fse.decay = 0.8
";
        let spec = BenchSpec::parse_str(text, Path::new("/data")).unwrap();
        assert_eq!(spec.image_paths[0], PathBuf::from("/data/a.pgm"));
        assert_eq!(spec.image_paths[1], PathBuf::from("/data/sub/b.png"));
        assert_eq!(
            spec.block_sizes,
            vec![BlockSize::Fixed(2), BlockSize::Fixed(8), BlockSize::Max]
        );
        assert_eq!(spec.masks_per_b, 5);
        assert_eq!(spec.methods, vec!["fse", "lin"]);
        assert_eq!(spec.master_seed, 42);
        assert_eq!(spec.fse_config.iterations, 50);
        assert_eq!(spec.fse_config.decay, 0.8);
        // defaults survive
        assert_eq!(spec.fse_config.fft_size, 32);

        assert!(BenchSpec::parse_str("image = a.pgm\nbogus = 1\n", Path::new(".")).is_err());
    }

    #[test]
    fn unknown_method_is_rejected() {
        let spec = BenchSpec {
            image_paths: vec![PathBuf::from("x.pgm")],
            block_sizes: vec![BlockSize::Max],
            masks_per_b: 1,
            methods: vec!["skr".into()],
            master_seed: 0,
            fse_config: FseConfig::default(),
        };
        assert!(matches!(
            run_benchmark(&spec, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn plugged_in_reconstructor_is_used() {
        struct Echo;
        impl Reconstructor for Echo {
            fn id(&self) -> &str {
                "echo"
            }
            fn reconstruct(
                &self,
                input: &crate::sensor::MaskedImage,
            ) -> Result<crate::recon::ReconResult> {
                Ok(crate::recon::ReconResult {
                    image: input.image().clone(),
                    method_id: "echo".into(),
                    block_diagnostics: None,
                })
            }
        }
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("img.pgm");
        GrayImage::filled(8, 8, 200.0).unwrap().save(&p).unwrap();
        let spec = BenchSpec {
            image_paths: vec![p],
            block_sizes: vec![BlockSize::Max],
            masks_per_b: 2,
            methods: vec!["echo".into()],
            master_seed: 1,
            fse_config: FseConfig::default(),
        };
        let report = run_benchmark_with(&spec, 1, &[&Echo]).unwrap();
        assert_eq!(report.records.len(), 2);
        assert!(report.records.iter().all(|r| r.method == "echo"));
        // echo leaves covered pixels at 0, so PSNR is finite
        assert!(report.records.iter().all(|r| r.psnr_db.is_finite()));
    }
}
