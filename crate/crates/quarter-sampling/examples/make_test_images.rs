//! Materialize the desk-scale benchmark inputs: four synthetic 512x512
//! grayscale images plus a ready-to-run spec file.
//!
//! Afterwards:
//!
//!     qsamp bench --spec bench-data/desk_scale.bench --out-dir bench-data/report
//!
//! Run: cargo run --release --example make_test_images

use quarter_sampling::bench::BenchSpec;
use quarter_sampling::mask::BlockSize;
use quarter_sampling::recon::FseConfig;
use quarter_sampling::synth;

fn main() -> Result<(), quarter_sampling::Error> {
    let root = std::path::Path::new("bench-data");
    let images = root.join("images");
    std::fs::create_dir_all(&images).map_err(|e| quarter_sampling::Error::io(&images, e))?;

    let mut image_paths = Vec::new();
    for (name, img) in synth::desk_set(512, 512, 20140901) {
        let p = images.join(format!("{name}.pgm"));
        img.save(&p)?;
        println!("wrote {}", p.display());
        image_paths.push(std::path::PathBuf::from("images").join(format!("{name}.pgm")));
    }

    let spec = BenchSpec {
        image_paths,
        block_sizes: vec![
            BlockSize::Fixed(2),
            BlockSize::Fixed(4),
            BlockSize::Fixed(8),
            BlockSize::Max,
        ],
        masks_per_b: 16,
        methods: vec!["fse".into(), "lin".into()],
        master_seed: 17,
        fse_config: FseConfig::default(),
    };
    let spec_path = root.join("desk_scale.bench");
    std::fs::write(&spec_path, spec.to_spec_string())
        .map_err(|e| quarter_sampling::Error::io(&spec_path, e))?;
    println!("wrote {}", spec_path.display());
    Ok(())
}
