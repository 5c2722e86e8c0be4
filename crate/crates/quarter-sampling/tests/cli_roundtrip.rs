//! End-to-end tests of the qsamp binary: exit codes, file outputs, and
//! bit-exact equivalence with direct library calls.

use std::path::Path;
use std::process::{Command, Output};

use quarter_sampling::image::GrayImage;
use quarter_sampling::mask::{QuadrantTemplate, SamplingMask};
use quarter_sampling::recon::{reconstruct_fse, reconstruct_lin, FseConfig};
use quarter_sampling::sensor::{acquire_lr, acquire_masked, MaskedImage};
use quarter_sampling::synth;

fn qsamp(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsamp"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn mask_gen_writes_regular_mask() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsamp(
        &["mask-gen", "--b", "2", "--seed", "0", "--width", "4", "--height", "4", "--out", "m.pgm"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mask = SamplingMask::load(dir.path().join("m.pgm")).unwrap();
    assert_eq!(mask.open_count(), 4);
    // bit-identical to the library path with the same parameters
    let lib = QuadrantTemplate::generate(2, 0).unwrap().tile(4, 4).unwrap();
    assert_eq!(mask, lib);
}

#[test]
fn mask_gen_template_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsamp(&["mask-gen", "--b", "8", "--seed", "9", "--out", "t.qtpl"], dir.path());
    assert_eq!(code(&out), 0);
    let tpl = QuadrantTemplate::load(dir.path().join("t.qtpl")).unwrap();
    assert_eq!(tpl, QuadrantTemplate::generate(8, 9).unwrap());
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsamp(&["frobnicate"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_mask_dimension_mismatch_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    // 8x8 masked image but a 16x16 mask
    let img = synth::blobs(8, 8, 1);
    let mask8 = SamplingMask::full_sensor(8, 8, 2).unwrap();
    acquire_masked(&img, &mask8)
        .unwrap()
        .image()
        .save(dir.path().join("masked.pgm"))
        .unwrap();
    SamplingMask::full_sensor(16, 16, 2)
        .unwrap()
        .save(dir.path().join("mask.pgm"))
        .unwrap();
    let out = qsamp(
        &["reconstruct", "masked.pgm", "--mask", "mask.pgm", "--method", "lin", "--out", "r.pgm"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("dimension"), "stderr: {stderr}");
    assert_eq!(stderr.lines().count(), 1, "one-line error contract");
}

#[test]
fn full_pipeline_matches_library_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let hr = synth::grain(32, 32, 5);
    hr.save(dir.path().join("hr.pgm")).unwrap();

    let gen = qsamp(
        &["mask-gen", "--b", "max", "--seed", "3", "--width", "32", "--height", "32", "--out", "mask.pgm"],
        dir.path(),
    );
    assert_eq!(code(&gen), 0);
    let acq = qsamp(
        &["acquire", "hr.pgm", "--mask", "mask.pgm", "--mode", "masked", "--out", "masked.pgm"],
        dir.path(),
    );
    assert_eq!(code(&acq), 0, "{}", String::from_utf8_lossy(&acq.stderr));
    for method in ["fse", "lin"] {
        let rec = qsamp(
            &["reconstruct", "masked.pgm", "--mask", "mask.pgm", "--method", method, "--out",
              &format!("recon_{method}.pgm")],
            dir.path(),
        );
        assert_eq!(code(&rec), 0, "{}", String::from_utf8_lossy(&rec.stderr));
    }

    // replicate with direct library calls on the same files
    let mask = SamplingMask::full_sensor(32, 32, 3).unwrap();
    let hr_loaded = GrayImage::load(dir.path().join("hr.pgm")).unwrap();
    let masked = acquire_masked(&hr_loaded, &mask).unwrap();
    let cli_masked = std::fs::read(dir.path().join("masked.pgm")).unwrap();
    assert_eq!(cli_masked, masked.image().to_pgm_bytes());

    // the CLI wrote quantized PGM; rebuild the masked image the way the
    // CLI read it back
    let reread = MaskedImage::new(
        GrayImage::from_pgm_bytes(&cli_masked).unwrap(),
        SamplingMask::load(dir.path().join("mask.pgm")).unwrap(),
    )
    .unwrap();
    let fse = reconstruct_fse(&reread, &FseConfig::default()).unwrap();
    let lin = reconstruct_lin(&reread).unwrap();
    let cli_fse = std::fs::read(dir.path().join("recon_fse.pgm")).unwrap();
    let cli_lin = std::fs::read(dir.path().join("recon_lin.pgm")).unwrap();
    assert_eq!(cli_fse, fse.image.to_pgm_bytes(), "fse output differs from library");
    assert_eq!(cli_lin, lin.image.to_pgm_bytes(), "lin output differs from library");
}

#[test]
fn acquire_lr_halves_resolution() {
    let dir = tempfile::tempdir().unwrap();
    let hr = synth::blobs(16, 24, 8);
    hr.save(dir.path().join("hr.pgm")).unwrap();
    let out = qsamp(&["acquire", "hr.pgm", "--mode", "lr", "--out", "lr.pgm"], dir.path());
    assert_eq!(code(&out), 0);
    let lr = GrayImage::load(dir.path().join("lr.pgm")).unwrap();
    assert_eq!((lr.height(), lr.width()), (8, 12));
    // the CLI averages the 8-bit file content, so compare from the same
    // quantized starting point
    let lib = acquire_lr(&GrayImage::load(dir.path().join("hr.pgm")).unwrap()).unwrap();
    assert_eq!(std::fs::read(dir.path().join("lr.pgm")).unwrap(), lib.to_pgm_bytes());
}

#[test]
fn mask_inspect_reports_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    QuadrantTemplate::from_cells(4, vec![3, 2, 1, 0])
        .unwrap()
        .tile(8, 8)
        .unwrap()
        .save(dir.path().join("m.pgm"))
        .unwrap();
    let out = qsamp(&["mask-inspect", "m.pgm", "--superpixels"], dir.path());
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("density: 0.25"), "{stdout}");
    assert!(stdout.contains("superpixel: (1, 1)"), "{stdout}");
}

#[test]
fn mask_spectrum_writes_pgm_and_ratio() {
    let dir = tempfile::tempdir().unwrap();
    QuadrantTemplate::generate(2, 0)
        .unwrap()
        .tile(16, 16)
        .unwrap()
        .save(dir.path().join("m.pgm"))
        .unwrap();
    let out = qsamp(&["mask-spectrum", "m.pgm", "--out", "spec.pgm"], dir.path());
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("aliasing_ratio: 1.000000"), "{stdout}");
    assert!(dir.path().join("spec.pgm").exists());
}

#[test]
fn bench_and_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("img")).unwrap();
    for (name, img) in synth::desk_set(32, 32, 9) {
        img.save(dir.path().join("img").join(format!("{name}.pgm"))).unwrap();
    }
    let spec = "\
image = img/blobs.pgm
image = img/grain.pgm
block_sizes = 2,max
masks_per_b = 2
methods = lin
master_seed = 5
";
    std::fs::write(dir.path().join("tiny.bench"), spec).unwrap();
    let out = qsamp(
        &["bench", "--spec", "tiny.bench", "--out-dir", "rep", "--jobs", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("rep/report.csv")).unwrap();
    assert!(csv.contains("image_id,b,mask_index,method,psnr_db"));
    let md = std::fs::read_to_string(dir.path().join("rep/report.md")).unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), md);

    // re-render the CSV through the report subcommand
    let rerender = qsamp(&["report", "rep/report.csv", "--format", "markdown"], dir.path());
    assert_eq!(code(&rerender), 0);
    assert_eq!(String::from_utf8_lossy(&rerender.stdout), md);

    // version identifier is embedded in the metadata block
    let version = qsamp(&["--version"], dir.path());
    let vstr = String::from_utf8_lossy(&version.stdout);
    assert!(vstr.contains(quarter_sampling::VERSION), "{vstr}");
    assert!(csv.contains(quarter_sampling::VERSION));
}
