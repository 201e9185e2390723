//! Seeded generators for test corpora: random endpoint conditions, random cs
//! words, and smooth bounded-curvature paths that are not piecewise
//! constant-curvature.

use rand::Rng;

use crate::cs::{CsElement, CsPath, Sample, SampledPath};
use crate::geometry::{DirectedPoint, Orientation, Vec2};

/// Uniform directed point in a centered square of the given half-width.
pub fn random_directed_point<R: Rng>(rng: &mut R, half_width: f64) -> DirectedPoint {
    DirectedPoint::from_xyh(
        rng.random_range(-half_width..half_width),
        rng.random_range(-half_width..half_width),
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

/// Random cs path with the given number of components.
pub fn random_cs_path<R: Rng>(rng: &mut R, components: usize) -> CsPath {
    let start = random_directed_point(rng, 3.0);
    let elements = (0..components)
        .map(|_| match rng.random_range(0u8..3) {
            0 => CsElement::arc(Orientation::Ccw, rng.random_range(0.1..1.8)),
            1 => CsElement::arc(Orientation::Cw, rng.random_range(0.1..1.8)),
            _ => CsElement::line(rng.random_range(0.2..2.0)),
        })
        .collect();
    CsPath::new(start, elements).expect("generated elements are valid")
}

/// Smooth bounded-curvature path: the signed curvature is a small sum of
/// sinusoids clamped below `max_curvature`, the heading its exact integral,
/// and the position a fine midpoint-rule integral of the heading. Unit speed
/// holds by construction; the declared endpoints are the integrated ones.
pub fn spline_path<R: Rng>(
    rng: &mut R,
    length: f64,
    max_curvature: f64,
    step: f64,
) -> SampledPath {
    let terms: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.random_range(0.2..1.0),
                rng.random_range(0.3..1.5),
                rng.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let raw_max: f64 = terms.iter().map(|(a, _, _)| a.abs()).sum();
    let scale = max_curvature / raw_max;
    let theta0 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    // Exact heading lift: integral of the sinusoid sum.
    let heading = |s: f64| -> f64 {
        let mut th = theta0;
        for &(a, b, c) in &terms {
            th += scale * a / b * ((c).cos() - (b * s + c).cos());
        }
        th
    };
    let start_pos = Vec2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    let n = (length / step).ceil() as usize;
    let substeps = 8;
    let mut samples = Vec::with_capacity(n + 1);
    let mut pos = start_pos;
    let mut s = 0.0;
    samples.push(Sample {
        s,
        position: pos,
        heading: heading(0.0),
    });
    for _ in 0..n {
        let ds = (length - s).min(step);
        let h = ds / substeps as f64;
        for k in 0..substeps {
            let mid = s + h * (k as f64 + 0.5);
            pos = pos + Vec2::from_angle(heading(mid)) * h;
        }
        s += ds;
        samples.push(Sample {
            s,
            position: pos,
            heading: heading(s),
        });
    }
    let start = DirectedPoint::new(samples[0].position, samples[0].heading);
    let end = DirectedPoint::new(
        samples.last().unwrap().position,
        samples.last().unwrap().heading,
    );
    SampledPath {
        samples,
        step_bound: step,
        start,
        end,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cs::validate_bounded_curvature;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spline_paths_respect_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let sp = spline_path(&mut rng, 5.0, 0.9, 0.01);
            let report = validate_bounded_curvature(&sp, 0.05).unwrap();
            assert!(report.valid, "{report:?}");
            assert!(report.max_abs_curvature < 0.95);
        }
    }

    #[test]
    fn spline_paths_are_not_piecewise_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sp = spline_path(&mut rng, 4.0, 0.8, 0.01);
        // Distinct interior curvature values rule out a cs path.
        let k = |i: usize| {
            crate::cs::menger_curvature(
                sp.samples[i - 1].position,
                sp.samples[i].position,
                sp.samples[i + 1].position,
            )
        };
        let (a, b) = (k(50), k(250));
        assert!((a - b).abs() > 1e-3, "{a} vs {b}");
    }
}
