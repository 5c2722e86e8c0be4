//! Simulate the three acquisition paths for one scene: the plain
//! low-resolution sensor, the masked low-resolution sensor (1/4
//! sampling), and the hypothetical high-resolution reference.
//!
//! Writes all images to ./sensor_sim_out/.
//!
//! Run: cargo run --example sensor_sim

use quarter_sampling::mask::SamplingMask;
use quarter_sampling::sensor::{acquire_lr, acquire_masked};
use quarter_sampling::synth;

fn main() -> Result<(), quarter_sampling::Error> {
    let out = std::path::Path::new("sensor_sim_out");
    std::fs::create_dir_all(out).map_err(|e| quarter_sampling::Error::io(out, e))?;

    let hr = synth::facade(256, 256, 42);
    hr.save(out.join("hr_reference.pgm"))?;

    // what the unmasked low-resolution sensor measures: every large pixel
    // integrates its four quadrants
    let lr = acquire_lr(&hr)?;
    lr.save(out.join("lr_sensor.pgm"))?;
    println!(
        "LR sensor: {}x{} -> {}x{}",
        hr.width(),
        hr.height(),
        lr.width(),
        lr.height()
    );

    // the same sensor covered with a non-regular mask: open quadrants
    // sample the high-resolution grid directly, the rest reads 0
    let mask = SamplingMask::full_sensor(hr.height(), hr.width(), 42)?;
    mask.save(out.join("mask.pgm"))?;
    let masked = acquire_masked(&hr, &mask)?;
    masked.image().save(out.join("masked_sensor.pgm"))?;
    println!(
        "masked sensor: {} of {} pixels carry light",
        mask.open_count(),
        hr.width() * hr.height()
    );

    println!("wrote images to {}", out.display());
    Ok(())
}
