//! Deterministic natural-looking test images.
//!
//! The benchmark protocol needs grayscale photographs, but the repository
//! ships no image assets; these generators produce seeded stand-ins with
//! photograph-like statistics: energy concentrated at low frequencies,
//! smooth shading, edges, and localized fine detail (grain, a picket
//! strip, a chirp patch). Every scene is rendered sharp and then passed
//! through a mild Gaussian optical blur, the way a camera would see it;
//! without that step the synthetic step edges carry far more energy near
//! the Nyquist rate than any photograph.

use crate::image::GrayImage;
use crate::rng::{derive_seed, SplitMix64};

/// Smooth multi-octave value noise in [0, 1].
fn value_noise(height: usize, width: usize, cell: usize, octaves: usize, seed: u64) -> Vec<f64> {
    let mut out = vec![0.0f64; height * width];
    let mut amplitude = 1.0;
    let mut total = 0.0;
    let mut cell = cell.max(2);
    for octave in 0..octaves {
        let mut rng = SplitMix64::new(derive_seed(seed, octave as u64));
        let grid_h = height / cell + 2;
        let grid_w = width / cell + 2;
        let grid: Vec<f64> = (0..grid_h * grid_w).map(|_| rng.next_f64()).collect();
        for m in 0..height {
            let gm = m / cell;
            let fm = (m % cell) as f64 / cell as f64;
            for n in 0..width {
                let gn = n / cell;
                let fn_ = (n % cell) as f64 / cell as f64;
                let v00 = grid[gm * grid_w + gn];
                let v01 = grid[gm * grid_w + gn + 1];
                let v10 = grid[(gm + 1) * grid_w + gn];
                let v11 = grid[(gm + 1) * grid_w + gn + 1];
                // smoothstep-eased bilinear blend
                let (sm, sn) = (fm * fm * (3.0 - 2.0 * fm), fn_ * fn_ * (3.0 - 2.0 * fn_));
                let v = v00 * (1.0 - sm) * (1.0 - sn)
                    + v01 * (1.0 - sm) * sn
                    + v10 * sm * (1.0 - sn)
                    + v11 * sm * sn;
                out[m * width + n] += amplitude * v;
            }
        }
        total += amplitude;
        amplitude *= 0.5;
        cell = (cell / 2).max(2);
    }
    for v in &mut out {
        *v /= total;
    }
    out
}

/// Separable Gaussian blur with symmetric boundary handling: the optical
/// point-spread stand-in applied to every rendered scene.
fn gaussian_blur(px: &mut [f64], height: usize, width: usize, sigma: f64) {
    let radius = (3.0 * sigma).ceil() as isize;
    let kernel: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let norm: f64 = kernel.iter().sum();
    let reflect = |mut i: isize, n: isize| -> usize {
        loop {
            if i < 0 {
                i = -i - 1;
            } else if i >= n {
                i = 2 * n - 1 - i;
            } else {
                return i as usize;
            }
        }
    };
    let mut tmp = vec![0.0f64; height * width];
    for m in 0..height {
        for n in 0..width {
            let mut acc = 0.0;
            for (ki, k) in kernel.iter().enumerate() {
                let j = reflect(n as isize + ki as isize - radius, width as isize);
                acc += k * px[m * width + j];
            }
            tmp[m * width + n] = acc / norm;
        }
    }
    for n in 0..width {
        for m in 0..height {
            let mut acc = 0.0;
            for (ki, k) in kernel.iter().enumerate() {
                let i = reflect(m as isize + ki as isize - radius, height as isize);
                acc += k * tmp[i * width + n];
            }
            px[m * width + n] = acc / norm;
        }
    }
}

/// Optical blur width shared by all generators.
const LENS_SIGMA: f64 = 1.25;

fn finish(height: usize, width: usize, mut px: Vec<f64>) -> GrayImage {
    gaussian_blur(&mut px, height, width, LENS_SIGMA);
    GrayImage::from_pixels(height, width, px.into_iter().map(|v| v.clamp(0.0, 255.0)).collect())
        .expect("values clamped")
}

/// Soft cloudscape with disk-shaped objects: smooth shading dominated by
/// low frequencies, plus edges.
pub fn blobs(height: usize, width: usize, seed: u64) -> GrayImage {
    let base = value_noise(height, width, height.max(width) / 4, 4, derive_seed(seed, 1));
    let mut px: Vec<f64> = base.iter().map(|&v| 50.0 + 160.0 * v).collect();
    let mut rng = SplitMix64::new(derive_seed(seed, 2));
    for _ in 0..10 {
        let cm = rng.next_below(height) as f64;
        let cn = rng.next_below(width) as f64;
        let radius = 8.0 + rng.next_f64() * (height.min(width) as f64 / 7.0);
        let level = 30.0 + rng.next_f64() * 195.0;
        let blend = 0.5 + rng.next_f64() * 0.5;
        let m0 = (cm - radius).floor().max(0.0) as usize;
        let m1 = ((cm + radius).ceil() as usize).min(height - 1);
        let n0 = (cn - radius).floor().max(0.0) as usize;
        let n1 = ((cn + radius).ceil() as usize).min(width - 1);
        for m in m0..=m1 {
            for n in n0..=n1 {
                let d = ((m as f64 - cm).powi(2) + (n as f64 - cn).powi(2)).sqrt();
                if d <= radius {
                    // hard rim, softly shaded interior
                    let shade = level * (1.0 - 0.3 * d / radius);
                    let p = &mut px[m * width + n];
                    *p = *p * (1.0 - blend) + shade * blend;
                }
            }
        }
    }
    finish(height, width, px)
}

/// Fabric-like texture: smooth base with a gentle oriented weave below
/// the sensor Nyquist rate and a few fine scratches.
pub fn grain(height: usize, width: usize, seed: u64) -> GrayImage {
    let base = value_noise(height, width, 48, 4, derive_seed(seed, 1));
    let drift = value_noise(height, width, 64, 2, derive_seed(seed, 2));
    let mut rng = SplitMix64::new(derive_seed(seed, 3));
    let theta = rng.next_f64() * std::f64::consts::PI;
    let freq = 0.13 + rng.next_f64() * 0.05; // cycles/px
    let tau = 2.0 * std::f64::consts::PI;
    let mut px = vec![0.0f64; height * width];
    for m in 0..height {
        for n in 0..width {
            let x = m * width + n;
            let u = n as f64 * theta.cos() + m as f64 * theta.sin();
            let weave = (tau * (freq * u + 1.2 * drift[x])).sin();
            px[x] = 70.0 + 130.0 * base[x] + 7.0 * weave * (0.4 + 0.6 * drift[x]);
        }
    }
    // sparse thin scratches
    for _ in 0..8 {
        let m0 = rng.next_below(height) as f64;
        let n0 = rng.next_below(width) as f64;
        let ang = rng.next_f64() * std::f64::consts::PI;
        let len = 20.0 + rng.next_f64() * 60.0;
        let dark = rng.next_f64() < 0.5;
        let steps = len as usize;
        for s in 0..steps {
            let m = m0 + ang.sin() * s as f64;
            let n = n0 + ang.cos() * s as f64;
            if m < 0.0 || n < 0.0 || m >= height as f64 || n >= width as f64 {
                break;
            }
            let p = &mut px[m as usize * width + n as usize];
            *p = if dark { *p - 16.0 } else { *p + 16.0 };
        }
    }
    finish(height, width, px)
}

/// Architecture photographed at a slight angle: brick courses with soft
/// joints, window openings, a short slat segment, and a long roof edge.
/// Nothing is pixel-axis aligned; perfectly aligned step edges put all
/// their energy on one frequency ridge, which no camera ever delivers.
pub fn facade(height: usize, width: usize, seed: u64) -> GrayImage {
    let light = value_noise(height, width, height.max(width) / 3, 3, derive_seed(seed, 1));
    let mut rng = SplitMix64::new(derive_seed(seed, 2));
    let tilt = (5.0 + 5.0 * rng.next_f64()).to_radians();
    let (cos_t, sin_t) = (tilt.cos(), tilt.sin());
    let course = (22 + rng.next_below(10)) as f64;
    let brick_pitch = 2.0 * course;
    let mortar = 170.0;
    let brick_seed = rng.next_u64();
    // per-brick gray level from the brick's lattice coordinates
    let level = |bi: i64, bj: i64| -> f64 {
        let mut r = SplitMix64::new(
            brick_seed ^ ((bi as u64).wrapping_mul(0x9E37_79B9)) ^ (bj as u64).rotate_left(17),
        );
        85.0 + r.next_f64() * 70.0
    };
    // windows and the slat segment live in the same rotated frame
    let window_rects: Vec<(f64, f64, f64, f64)> = (0..2)
        .map(|_| {
            let um = rng.next_below(width) as f64;
            let vm = rng.next_below(height) as f64;
            let ww = (width / 7 + rng.next_below(width / 6)) as f64;
            let wh = (height / 5 + rng.next_below(height / 6)) as f64;
            (um, vm, ww, wh)
        })
        .collect();
    let slat_u = rng.next_below(width) as f64;
    let slat_v = (height - height / 6) as f64;
    let (slat_w, slat_h) = ((width / 5) as f64, (height / 16) as f64);

    let mut px = vec![0.0f64; height * width];
    for m in 0..height {
        for n in 0..width {
            let u = cos_t * n as f64 + sin_t * m as f64;
            let v = -sin_t * n as f64 + cos_t * m as f64;
            let bi = (v / course).floor() as i64;
            let row_offset = if bi.rem_euclid(2) == 0 { 0.0 } else { brick_pitch / 2.0 };
            let bj = ((u + row_offset) / brick_pitch).floor() as i64;
            let lv = level(bi, bj);
            let joint = (v - bi as f64 * course) < 1.5
                || ((u + row_offset) - bj as f64 * brick_pitch) < 1.5;
            let mut value = if joint { 0.5 * lv + 0.5 * mortar } else { lv };
            for &(um, vm, ww, wh) in &window_rects {
                let (du, dv) = (u - um, v - vm);
                if du.abs() < ww / 2.0 && dv.abs() < wh / 2.0 {
                    let frame = ww / 2.0 - du.abs() < 2.0 || wh / 2.0 - dv.abs() < 2.0;
                    value = if frame { 175.0 } else { 65.0 };
                }
            }
            if (u - slat_u).abs() < slat_w / 2.0 && (v - slat_v).abs() < slat_h / 2.0 {
                value = if u.rem_euclid(6.0) < 3.0 { 150.0 } else { 112.0 };
            }
            let x = m * width + n;
            if m * 3 < height && n + 2 * m > width / 2 {
                value = 0.35 * value + 18.0;
            }
            px[x] = value * (0.82 + 0.3 * light[x]);
        }
    }
    finish(height, width, px)
}

/// Landscape with a localized chirp patch: mostly smooth terrain, one
/// region sweeping toward high spatial frequency (the classic aliasing
/// probe, kept local like a fence in a photograph).
pub fn zone_plate(height: usize, width: usize, seed: u64) -> GrayImage {
    let base = value_noise(height, width, height.max(width) / 4, 4, derive_seed(seed, 1));
    let mut rng = SplitMix64::new(derive_seed(seed, 2));
    let cm = height as f64 * (0.3 + 0.4 * rng.next_f64());
    let cn = width as f64 * (0.3 + 0.4 * rng.next_f64());
    let patch_r = height.min(width) as f64 * 0.18;
    // instantaneous frequency ~0.18 cycles/px at the patch rim
    let k = 0.18 * std::f64::consts::PI / patch_r;
    let mut px = vec![0.0f64; height * width];
    for m in 0..height {
        for n in 0..width {
            let x = m * width + n;
            let r2 = (m as f64 - cm).powi(2) + (n as f64 - cn).powi(2);
            let r = r2.sqrt();
            let envelope = if r < patch_r {
                let t = r / patch_r;
                (1.0 - t * t).max(0.0)
            } else {
                0.0
            };
            px[x] = 60.0 + 140.0 * base[x] + 14.0 * envelope * (k * r2).cos();
        }
    }
    // tilted horizon
    let h0 = (height / 3 + rng.next_below(height / 4)) as f64;
    let slope = 0.06 + 0.1 * rng.next_f64();
    for n in 0..width {
        let horizon = h0 + slope * (n as f64 - width as f64 / 2.0);
        for m in 0..height {
            let d = m as f64 - horizon;
            let x = m * width + n;
            if d.abs() < 1.5 {
                px[x] = 0.5 * px[x] + 110.0;
            } else if d < 0.0 {
                px[x] = 0.75 * px[x] + 45.0;
            }
        }
    }
    finish(height, width, px)
}

/// Rolling terrain under soft light: low-frequency shading and gentle
/// bumps, no step edges at all.
pub fn meadow(height: usize, width: usize, seed: u64) -> GrayImage {
    let base = value_noise(height, width, height.max(width) / 3, 3, derive_seed(seed, 1));
    let mut rng = SplitMix64::new(derive_seed(seed, 2));
    let bumps: Vec<(f64, f64, f64, f64)> = (0..8)
        .map(|_| {
            (
                rng.next_below(height) as f64,
                rng.next_below(width) as f64,
                10.0 + rng.next_f64() * height.min(width) as f64 / 8.0,
                (rng.next_f64() - 0.5) * 110.0,
            )
        })
        .collect();
    let mut px = vec![0.0f64; height * width];
    for m in 0..height {
        for n in 0..width {
            let mut v = 55.0
                + 150.0 * base[m * width + n]
                + 18.0 * (m as f64 / height as f64 - n as f64 / width as f64);
            for &(cm, cn, s, a) in &bumps {
                let d2 = (m as f64 - cm).powi(2) + (n as f64 - cn).powi(2);
                v += a * (-d2 / (2.0 * s * s)).exp();
            }
            px[m * width + n] = v;
        }
    }
    finish(height, width, px)
}

/// Wind-shaped dunes: smooth oblique ridges over rolling ground.
pub fn dunes(height: usize, width: usize, seed: u64) -> GrayImage {
    let base = value_noise(height, width, height.max(width) / 3, 3, derive_seed(seed, 1));
    let warp = value_noise(height, width, height.max(width) / 6, 2, derive_seed(seed, 2));
    let mut rng = SplitMix64::new(derive_seed(seed, 3));
    let theta = 0.3 + rng.next_f64() * 0.9;
    let freq = 0.015 + rng.next_f64() * 0.015; // cycles/px, long ridges
    let tau = 2.0 * std::f64::consts::PI;
    let mut px = vec![0.0f64; height * width];
    for m in 0..height {
        for n in 0..width {
            let x = m * width + n;
            let u = n as f64 * theta.cos() + m as f64 * theta.sin();
            let ridge = (tau * (freq * u + 1.6 * warp[x])).sin();
            px[x] = 70.0 + 120.0 * base[x] + 34.0 * ridge * (0.5 + 0.5 * warp[x]);
        }
    }
    finish(height, width, px)
}

/// The six-image desk-scale set used by default benchmark specs.
pub fn desk_set(height: usize, width: usize, seed: u64) -> Vec<(String, GrayImage)> {
    vec![
        ("blobs".into(), blobs(height, width, derive_seed(seed, 101))),
        ("grain".into(), grain(height, width, derive_seed(seed, 102))),
        ("facade".into(), facade(height, width, derive_seed(seed, 103))),
        ("zoneplate".into(), zone_plate(height, width, derive_seed(seed, 104))),
        ("meadow".into(), meadow(height, width, derive_seed(seed, 105))),
        ("dunes".into(), dunes(height, width, derive_seed(seed, 106))),
    ]
}
