//! A miniature end-to-end benchmark: sample mask sets for several block
//! sizes, reconstruct a small synthetic image set with FSE and LIN, and
//! print the best-mask PSNR table.
//!
//! This is the same protocol as `qsamp bench`, shrunk to finish in about
//! a minute. Use `make_test_images` + `qsamp bench` for the full
//! desk-scale run.
//!
//! Run: cargo run --release --example desk_bench

use quarter_sampling::bench::{emit_csv, emit_markdown, run_benchmark, BenchSpec};
use quarter_sampling::mask::BlockSize;
use quarter_sampling::recon::FseConfig;
use quarter_sampling::synth;

fn main() -> Result<(), quarter_sampling::Error> {
    let out = std::path::Path::new("desk_bench_out");
    std::fs::create_dir_all(out).map_err(|e| quarter_sampling::Error::io(out, e))?;

    let mut image_paths = Vec::new();
    for (name, img) in synth::desk_set(128, 128, 20140901) {
        let p = out.join(format!("{name}.pgm"));
        img.save(&p)?;
        image_paths.push(p);
    }

    let spec = BenchSpec {
        image_paths,
        block_sizes: vec![
            BlockSize::Fixed(2),
            BlockSize::Fixed(4),
            BlockSize::Fixed(8),
            BlockSize::Max,
        ],
        masks_per_b: 4,
        methods: vec!["fse".into(), "lin".into()],
        master_seed: 17,
        fse_config: FseConfig::default(),
    };

    let report = run_benchmark(&spec, 0)?;
    println!("best-mask mean PSNR (dB):\n");
    print!("{}", emit_markdown(&report)?);

    let csv_path = out.join("report.csv");
    std::fs::write(&csv_path, emit_csv(&report))
        .map_err(|e| quarter_sampling::Error::io(&csv_path, e))?;
    println!("\nfull records: {}", csv_path.display());
    Ok(())
}
