//! Scattered linear interpolation baseline.
//!
//! The open pixels are Delaunay-triangulated; every unknown pixel inside
//! the convex hull takes the barycentric linear interpolant of its
//! triangle's vertex values, which reproduces affine images exactly.
//! Unknown pixels outside the hull (a thin border strip, since every 2x2
//! cell contains a sample) take the value of the nearest open pixel,
//! with Euclidean ties broken by row-major order.

use spade::{DelaunayTriangulation, FloatTriangulation as _, HasPosition, Point2, Triangulation as _};

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::recon::{ReconResult, Reconstructor};
use crate::sensor::MaskedImage;

struct Sample {
    position: Point2<f64>,
    value: f64,
}

impl HasPosition for Sample {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.position
    }
}

/// Reconstructs the full image by scattered linear interpolation.
pub fn reconstruct_lin(input: &MaskedImage) -> Result<ReconResult> {
    let (h, w) = (input.height(), input.width());
    let image = input.image();
    let mask = input.mask();

    let samples: Vec<Sample> = mask
        .open_positions()
        .map(|(m, n)| Sample {
            position: Point2::new(n as f64, m as f64),
            value: image.get(m, n),
        })
        .collect();
    let triangulation = DelaunayTriangulation::<Sample>::bulk_load(samples)
        .map_err(|e| Error::InvalidInput(format!("triangulation failed: {e:?}")))?;
    if triangulation.num_inner_faces() == 0 {
        return Err(Error::DegenerateInput(
            "needs at least 3 non-collinear open pixels".into(),
        ));
    }
    let barycentric = triangulation.barycentric();

    let mut out = image.pixels().to_vec();
    for m in 0..h {
        for n in 0..w {
            if mask.bit(m, n) {
                continue;
            }
            let value = barycentric
                .interpolate(|v| v.data().value, Point2::new(n as f64, m as f64))
                .unwrap_or_else(|| nearest_open_value(mask, image, m, n));
            out[m * w + n] = value.clamp(0.0, 255.0);
        }
    }

    Ok(ReconResult {
        image: GrayImage::from_pixels(h, w, out)?,
        method_id: "lin".into(),
        block_diagnostics: None,
    })
}

/// Value of the open pixel closest to (m, n); ties by row-major order.
///
/// The 1/4-sampling invariant puts an open pixel in the same 2x2 cell as
/// any position, so an expanding Chebyshev ring search terminates after a
/// couple of rings.
fn nearest_open_value(
    mask: &crate::mask::SamplingMask,
    image: &GrayImage,
    m: usize,
    n: usize,
) -> f64 {
    let (h, w) = (mask.height(), mask.width());
    let mut best: Option<(usize, usize, usize)> = None; // (d2, row, col)
    let mut radius = 1usize;
    loop {
        let r0 = m.saturating_sub(radius);
        let r1 = (m + radius).min(h - 1);
        let c0 = n.saturating_sub(radius);
        let c1 = (n + radius).min(w - 1);
        for r in r0..=r1 {
            for c in c0..=c1 {
                // only the newly exposed ring
                let cheb = r.abs_diff(m).max(c.abs_diff(n));
                if cheb != radius || !mask.bit(r, c) {
                    continue;
                }
                let d2 = r.abs_diff(m).pow(2) + c.abs_diff(n).pow(2);
                let candidate = (d2, r, c);
                if best.is_none_or(|b| candidate < b) {
                    best = Some(candidate);
                }
            }
        }
        if let Some((d2, _, _)) = best {
            // a closer point could still hide in a farther ring only while
            // radius^2 < d2
            if radius * radius >= d2 {
                break;
            }
        }
        radius += 1;
        debug_assert!(radius <= h + w, "ring search ran away");
    }
    let (_, r, c) = best.expect("1/4 sampling guarantees an open pixel nearby");
    image.get(r, c)
}

/// [`Reconstructor`] wrapper around [`reconstruct_lin`].
#[derive(Clone, Copy, Debug, Default)]
pub struct LinReconstructor;

impl Reconstructor for LinReconstructor {
    fn id(&self) -> &str {
        "lin"
    }

    fn reconstruct(&self, input: &MaskedImage) -> Result<ReconResult> {
        reconstruct_lin(input)
    }
}
