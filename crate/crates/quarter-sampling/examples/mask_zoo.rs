//! Generate sampling masks across the whole template range - regular
//! (b = 2), small templates (b = 4, 8), and fully non-regular (b = max) -
//! and print their structural diagnostics.
//!
//! Writes templates (.qtpl) and masks (.pgm) into ./mask_zoo_out/.
//!
//! Run: cargo run --example mask_zoo

use quarter_sampling::mask::{count_masks, detect_superpixels, QuadrantTemplate, SamplingMask};

fn main() -> Result<(), quarter_sampling::Error> {
    let out = std::path::Path::new("mask_zoo_out");
    std::fs::create_dir_all(out).map_err(|e| quarter_sampling::Error::io(out, e))?;
    let (height, width) = (64, 64);
    let seed = 2014;

    println!("mask design space: N = 4^(b^2/4)");
    for b in [2u32, 4, 8, 16] {
        println!("  b={b:<3} -> {} possible masks", count_masks(b)?);
    }
    println!();

    for b in [2u32, 4, 8, 16] {
        let template = QuadrantTemplate::generate(b, seed)?;
        template.save(out.join(format!("template_b{b}.qtpl")))?;
        let mask = template.tile(height, width)?;
        mask.save(out.join(format!("mask_b{b}.pgm")))?;
        report(&format!("b={b}"), &mask);
    }

    let full = SamplingMask::full_sensor(height, width, seed)?;
    full.save(out.join("mask_bmax.pgm"))?;
    report("b=max", &full);

    // a deliberately pathological arrangement: four neighboring cells
    // concentrating their open quadrants into one 2x2 super-pixel
    let bad = QuadrantTemplate::from_cells(4, vec![3, 2, 1, 0])?.tile(height, width)?;
    bad.save(out.join("mask_superpixels.pgm"))?;
    report("super-pixel template", &bad);

    println!("\nwrote templates and masks to {}", out.display());
    Ok(())
}

fn report(label: &str, mask: &SamplingMask) {
    let diag = detect_superpixels(mask);
    println!(
        "{label:22} density {:.2}  super-pixels {:3}  clump score {:3}",
        diag.density,
        diag.superpixel_positions.len(),
        diag.clump_score
    );
}
