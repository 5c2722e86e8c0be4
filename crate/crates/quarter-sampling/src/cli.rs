//! Command-line front end: every pipeline stage as a `qsamp` subcommand.
//!
//! Exit codes: 0 success, 1 invalid usage, 2 runtime failure. Every
//! failure prints a single `error: ...` line to stderr. All randomness
//! flows from explicit seeds, so invocations are reproducible.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::bench::{emit_csv, emit_markdown, emit_table, parse_csv, run_benchmark, BenchSpec, TableFormat};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::mask::{detect_superpixels, BlockSize, QuadrantTemplate, SamplingMask};
use crate::recon::{reconstruct_fse, reconstruct_lin, FseConfig};
use crate::sensor::{acquire_lr, acquire_masked, MaskedImage};
use crate::spectrum::{aliasing_ratio, amplitude_spectrum, dominant_peaks};

#[derive(Parser)]
#[command(
    name = "qsamp",
    version = crate::VERSION,
    about = "Non-regular 1/4-sampling masks, masked sensor simulation, and reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a sampling mask (PGM) or template (QTPL) from a seed
    MaskGen {
        /// Template block size: an even integer, or "max" for a mask that
        /// is non-regular over the whole sensor
        #[arg(long)]
        b: BlockSize,
        /// Sensor width in HR pixels (required for mask output)
        #[arg(long)]
        width: Option<usize>,
        /// Sensor height in HR pixels (required for mask output)
        #[arg(long)]
        height: Option<usize>,
        /// Generator seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path: .pgm writes the tiled mask, .qtpl the template
        #[arg(long)]
        out: PathBuf,
    },
    /// Print diagnostics of a mask: density, super-pixels, clumping
    MaskInspect {
        /// Mask file (PGM, 0 = covered, 255 = open)
        mask: PathBuf,
        /// List super-pixel positions
        #[arg(long)]
        superpixels: bool,
        /// Print the clump score only
        #[arg(long)]
        clumps: bool,
    },
    /// Write the normalized amplitude spectrum of a mask as a PGM image
    /// (DC centered, log-scaled: 255 * log10(1 + 100 m) / log10(101))
    MaskSpectrum {
        /// Mask file (PGM)
        mask: PathBuf,
        /// Output PGM path
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate sensor acquisition of an image
    Acquire {
        /// Input image (.pgm or .png; color is converted to grayscale)
        image: PathBuf,
        /// Sampling mask, required for --mode masked
        #[arg(long)]
        mask: Option<PathBuf>,
        /// "lr" for the plain low-resolution sensor, "masked" for the
        /// masked high-resolution acquisition
        #[arg(long)]
        mode: AcquireMode,
        /// Output image path
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct the full image from a masked acquisition
    Reconstruct {
        /// Masked image (covered positions must be 0)
        masked_image: PathBuf,
        /// The mask the image was acquired through
        #[arg(long)]
        mask: PathBuf,
        /// Reconstruction method
        #[arg(long)]
        method: Method,
        /// Optional key=value config file for the FSE parameters
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        fse_overrides: FseOverrides,
        /// Output image path
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a benchmark spec and write CSV + Markdown reports
    Bench {
        /// Benchmark spec file
        #[arg(long)]
        spec: PathBuf,
        /// Directory for report.csv and report.md
        #[arg(long)]
        out_dir: PathBuf,
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Re-render a benchmark CSV as a table
    Report {
        /// CSV report produced by `bench`
        csv: PathBuf,
        /// Output format
        #[arg(long)]
        format: Format,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum AcquireMode {
    Lr,
    Masked,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Method {
    Fse,
    Lin,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Format {
    Markdown,
    Csv,
}

/// Individual FSE parameter overrides, applied after any --config file.
#[derive(Args)]
struct FseOverrides {
    #[arg(long)]
    fft_size: Option<usize>,
    #[arg(long)]
    block_size: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    decay: Option<f64>,
    #[arg(long)]
    compensation: Option<f64>,
    #[arg(long)]
    feedback_confidence: Option<f64>,
    /// Disable feedback of previously reconstructed pixels
    #[arg(long)]
    no_feedback: bool,
}

impl FseOverrides {
    fn apply(&self, cfg: &mut FseConfig) {
        if let Some(v) = self.fft_size {
            cfg.fft_size = v;
        }
        if let Some(v) = self.block_size {
            cfg.block_size = v;
        }
        if let Some(v) = self.iterations {
            cfg.iterations = v;
        }
        if let Some(v) = self.decay {
            cfg.decay = v;
        }
        if let Some(v) = self.compensation {
            cfg.compensation = v;
        }
        if let Some(v) = self.feedback_confidence {
            cfg.feedback_confidence = v;
        }
        if self.no_feedback {
            cfg.feedback = false;
        }
    }
}

/// Parses and runs a command line; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            return 1;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::MaskGen {
            b,
            width,
            height,
            seed,
            out,
        } => mask_gen(b, width, height, seed, &out),
        Command::MaskInspect {
            mask,
            superpixels,
            clumps,
        } => mask_inspect(&mask, superpixels, clumps),
        Command::MaskSpectrum { mask, out } => {
            let mask = SamplingMask::load(&mask)?;
            let spec = amplitude_spectrum(&mask);
            fs::write(&out, spec.to_log_pgm_bytes()).map_err(|e| Error::io(&out, e))?;
            let peaks = dominant_peaks(&spec, 1)?;
            println!("dominant_peak: ({}, {}) magnitude {:.6}", peaks[0].0 .0, peaks[0].0 .1, peaks[0].1);
            println!("aliasing_ratio: {:.6}", aliasing_ratio(&spec));
            Ok(())
        }
        Command::Acquire {
            image,
            mask,
            mode,
            out,
        } => {
            let hr = GrayImage::load(&image)?;
            match mode {
                AcquireMode::Lr => acquire_lr(&hr)?.save(&out),
                AcquireMode::Masked => {
                    let mask_path = mask.ok_or_else(|| {
                        Error::InvalidArgument("--mode masked requires --mask".into())
                    })?;
                    let mask = SamplingMask::load(mask_path)?;
                    acquire_masked(&hr, &mask)?.image().save(&out)
                }
            }
        }
        Command::Reconstruct {
            masked_image,
            mask,
            method,
            config,
            fse_overrides,
            out,
        } => {
            let image = GrayImage::load(&masked_image)?;
            let mask = SamplingMask::load(&mask)?;
            let input = MaskedImage::new(image, mask)?;
            let result = match method {
                Method::Fse => {
                    let mut cfg = match config {
                        Some(path) => FseConfig::load(path)?,
                        None => FseConfig::default(),
                    };
                    fse_overrides.apply(&mut cfg);
                    reconstruct_fse(&input, &cfg)?
                }
                Method::Lin => reconstruct_lin(&input)?,
            };
            result.image.save(&out)
        }
        Command::Bench { spec, out_dir, jobs } => {
            let spec = BenchSpec::load(&spec)?;
            let report = run_benchmark(&spec, jobs)?;
            fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
            let csv_path = out_dir.join("report.csv");
            fs::write(&csv_path, emit_csv(&report)).map_err(|e| Error::io(&csv_path, e))?;
            let md = emit_markdown(&report)?;
            let md_path = out_dir.join("report.md");
            fs::write(&md_path, &md).map_err(|e| Error::io(&md_path, e))?;
            print!("{md}");
            for e in &report.errors {
                eprintln!("warning: {e}");
            }
            Ok(())
        }
        Command::Report { csv, format } => {
            let text = fs::read_to_string(&csv).map_err(|e| Error::io(&csv, e))?;
            let report = parse_csv(&text)?;
            let format = match format {
                Format::Markdown => TableFormat::Markdown,
                Format::Csv => TableFormat::Csv,
            };
            print!("{}", emit_table(&report, format)?);
            Ok(())
        }
    }
}

fn mask_gen(
    b: BlockSize,
    width: Option<usize>,
    height: Option<usize>,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let ext = out
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    match ext.as_str() {
        "qtpl" => match b {
            BlockSize::Fixed(b) => QuadrantTemplate::generate(b, seed)?.save(out),
            BlockSize::Max => Err(Error::InvalidArgument(
                "b=max masks cover the whole sensor; write a .pgm mask with --width/--height"
                    .into(),
            )),
        },
        "pgm" => {
            let (width, height) = match (width, height) {
                (Some(w), Some(h)) => (w, h),
                _ => {
                    return Err(Error::InvalidArgument(
                        "mask output needs --width and --height".into(),
                    ))
                }
            };
            let mask = match b {
                BlockSize::Fixed(b) => QuadrantTemplate::generate(b, seed)?.tile(height, width)?,
                BlockSize::Max => SamplingMask::full_sensor(height, width, seed)?,
            };
            mask.save(out)
        }
        other => Err(Error::InvalidArgument(format!(
            "mask-gen writes .pgm masks or .qtpl templates, not .{other}"
        ))),
    }
}

fn mask_inspect(path: &Path, superpixels: bool, clumps: bool) -> Result<()> {
    let mask = SamplingMask::load(path)?;
    let diag = detect_superpixels(&mask);
    if clumps && !superpixels {
        println!("clump_score: {}", diag.clump_score);
        return Ok(());
    }
    println!("size: {}x{}", mask.width(), mask.height());
    println!("period_b: {}", mask.period());
    println!("open_pixels: {}", mask.open_count());
    println!("density: {}", diag.density);
    println!("superpixels: {}", diag.superpixel_positions.len());
    println!("clump_score: {}", diag.clump_score);
    if superpixels {
        for (m, n) in &diag.superpixel_positions {
            println!("superpixel: ({m}, {n})");
        }
    }
    Ok(())
}
