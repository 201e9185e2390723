//! Closed-form curvature control for the projection flows, plus the flows
//! themselves applied to sampled paths.
//!
//! The model describes a unit-circle arc osculating a path point, expressed
//! in a local frame whose origin is the projection center: `x_offset` is the
//! distance from the center to the tangent circle's center along the
//! abscissa, and `u = x_offset + 1`. The second-order expansion of the radial
//! flow around the tangency gives a curvature of the form
//! `kappa(p, theta) = 2 B_p / (1 + (2 B_p theta)^2)^(3/2)` with
//! `kappa(0, 0) = -1` exactly and initial drift
//!
//! ```text
//! d kappa / dp (0, 0)  =  1 + x/(2(x+1)) + x/(2(x+1)^2)  >=  1
//! ```
//!
//! so the flow initially relaxes a tight clockwise bound (and tightens the
//! mirrored counterclockwise one). The returned derivative is the exact
//! p-derivative of the returned kappa, so finite differences of one
//! reproduce the other.

use crate::cs::{Sample, SampledPath};
use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, DirectedPoint, Vec2, EPS_GEOM};

/// Local frame for the radial-flow curvature model.
#[derive(Debug, Clone, Copy)]
pub struct LocalFrame {
    /// Fragment start: the tangency point, in world coordinates.
    pub z: DirectedPoint,
    /// Distance from the projection center to the tangent circle center.
    pub x_offset: f64,
    /// `x_offset + 1`.
    pub u: f64,
    /// Half-width of the angular window where the drift signs hold.
    pub theta_range: f64,
}

impl LocalFrame {
    pub fn new(z: DirectedPoint, x_offset: f64, theta_range: f64) -> Result<LocalFrame> {
        if x_offset < 0.0 || !x_offset.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "x_offset must be nonnegative, got {x_offset}"
            )));
        }
        if theta_range.is_nan() || theta_range <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "theta_range must be positive, got {theta_range}"
            )));
        }
        Ok(LocalFrame {
            z,
            x_offset,
            u: x_offset + 1.0,
            theta_range,
        })
    }

    pub fn curvature(&self, p: f64, theta: f64) -> RadialCurvature {
        radial_curvature(p, theta, self.x_offset)
    }
}

/// Curvature of the radially flowed arc model and its exact p-derivative.
#[derive(Debug, Clone, Copy)]
pub struct RadialCurvature {
    pub kappa: f64,
    pub d_kappa_dp: f64,
    /// Scale factor of the flow at the tangency, `1 - p + p/u`.
    pub a_p: f64,
    /// Leading curvature coefficient, `kappa(p, 0) = 2 B_p`.
    pub b_p: f64,
}

/// Initial curvature drift rate of the radial flow at the tangency.
pub fn radial_drift_rate(x_offset: f64) -> f64 {
    let u = x_offset + 1.0;
    1.0 + x_offset / (2.0 * u) + x_offset / (2.0 * u * u)
}

/// Curvature model for the flow applied to a clockwise arc
/// (`kappa(0,0) = -1`).
pub fn radial_curvature(p: f64, theta: f64, x_offset: f64) -> RadialCurvature {
    let u = x_offset + 1.0;
    let drift = radial_drift_rate(x_offset);
    let b_p = -0.5 + 0.5 * p * drift;
    let a_p = 1.0 - p + p / u;
    let g = 2.0 * b_p;
    let gt2 = (g * theta) * (g * theta);
    let kappa = g / (1.0 + gt2).powf(1.5);
    // d/dp [ g (1 + (g theta)^2)^(-3/2) ] with dg/dp = drift.
    let d_kappa_dp = drift * (1.0 - 2.0 * gt2) / (1.0 + gt2).powf(2.5);
    RadialCurvature {
        kappa,
        d_kappa_dp,
        a_p,
        b_p,
    }
}

/// Mirrored construction for a counterclockwise arc (`kappa(0,0) = +1`):
/// the drift sign flips.
pub fn radial_curvature_mirrored(p: f64, theta: f64, x_offset: f64) -> RadialCurvature {
    let base = radial_curvature(p, theta, x_offset);
    RadialCurvature {
        kappa: -base.kappa,
        d_kappa_dp: -base.d_kappa_dp,
        ..base
    }
}

/// Radial flow at parameter `p`: every sample moves along its ray from
/// `center`, its distance blending toward 1. Headings are recomputed by
/// central differences and lightly smoothed; the output is re-parameterized
/// by cumulative chord length.
pub fn radial_homotopy_step(path: &SampledPath, center: Vec2, p: f64) -> Result<SampledPath> {
    let mut positions = Vec::with_capacity(path.samples.len());
    for s in &path.samples {
        let q = s.position - center;
        let r = q.norm();
        if r <= EPS_GEOM {
            return Err(Error::SingularProjection);
        }
        let scale = 1.0 - p + p / r;
        positions.push(center + q * scale);
    }
    Ok(rebuild_sampled(path, positions))
}

/// Frame for the orthogonal flow: `origin` is a point of the target line and
/// `axis` its direction (the coordinate that survives the collapse).
#[derive(Debug, Clone, Copy)]
pub struct AxisFrame {
    pub origin: Vec2,
    pub axis: Vec2,
}

impl AxisFrame {
    pub fn new(origin: Vec2, axis: Vec2) -> AxisFrame {
        AxisFrame {
            origin,
            axis: axis.normalized(),
        }
    }

    /// (offset, along) coordinates of a point.
    pub fn coords(&self, p: Vec2) -> (f64, f64) {
        let d = p - self.origin;
        (d.cross(self.axis), d.dot(self.axis))
    }

    pub fn point(&self, offset: f64, along: f64) -> Vec2 {
        // offset = d x axis means offset is positive on the clockwise side.
        self.origin + self.axis * along + self.axis.perp_right() * offset
    }
}

/// Orthogonal flow at parameter `p`: the coordinate perpendicular to the
/// axis shrinks by `1 - p`, the along-axis coordinate is kept.
pub fn orthogonal_homotopy_step(path: &SampledPath, frame: &AxisFrame, p: f64) -> SampledPath {
    let positions = path
        .samples
        .iter()
        .map(|s| {
            let (offset, along) = frame.coords(s.position);
            frame.point(offset * (1.0 - p), along)
        })
        .collect();
    rebuild_sampled(path, positions)
}

/// Rebuild a sampled path from mapped positions: cumulative chord-length
/// parameterization, central-difference headings with one smoothing pass.
pub(crate) fn rebuild_sampled(original: &SampledPath, positions: Vec<Vec2>) -> SampledPath {
    let n = positions.len();
    let mut s_acc = Vec::with_capacity(n);
    let mut acc = 0.0;
    s_acc.push(0.0);
    for i in 1..n {
        acc += positions[i].distance(positions[i - 1]);
        s_acc.push(acc);
    }
    let mut headings = vec![0.0; n];
    for i in 0..n {
        let (a, b) = if i == 0 {
            (positions[0], positions[1.min(n - 1)])
        } else if i == n - 1 {
            (positions[n - 2], positions[n - 1])
        } else {
            (positions[i - 1], positions[i + 1])
        };
        let d = b - a;
        headings[i] = if d.norm() > 1e-12 {
            d.angle()
        } else if i > 0 {
            headings[i - 1]
        } else {
            original.samples[0].heading
        };
    }
    // One smoothing pass over the heading lift.
    if n >= 3 {
        let mut smoothed = headings.clone();
        for i in 1..n - 1 {
            let prev = headings[i - 1];
            let mid = prev + normalize_angle(headings[i] - prev);
            let next = prev + normalize_angle(headings[i + 1] - prev);
            smoothed[i] = normalize_angle((prev + mid + next) / 3.0);
        }
        headings = smoothed;
    }
    let samples: Vec<Sample> = (0..n)
        .map(|i| Sample {
            s: s_acc[i],
            position: positions[i],
            heading: headings[i],
        })
        .collect();
    let start = DirectedPoint::new(samples[0].position, samples[0].heading);
    let end = DirectedPoint::new(samples[n - 1].position, samples[n - 1].heading);
    SampledPath {
        samples,
        step_bound: original.step_bound,
        start,
        end,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cs::{menger_curvature, CsElement, CsPath};
    use crate::geometry::{Circle, Orientation};

    #[test]
    fn model_curvature_is_minus_one_at_rest() {
        for x in [0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let rc = radial_curvature(0.0, 0.0, x);
            assert!((rc.kappa + 1.0).abs() < 1e-15, "x = {x}");
            assert!((rc.a_p - 1.0).abs() < 1e-15);
            assert!((rc.b_p + 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn drift_matches_closed_form_evaluations() {
        // Direct evaluations of the drift expression.
        assert!((radial_curvature(0.0, 0.0, 0.0).d_kappa_dp - 1.0).abs() < 1e-15);
        assert!((radial_curvature(0.0, 0.0, 1.0).d_kappa_dp - 1.375).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_central_differences() {
        let h = 1e-6;
        for &x in &[0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0] {
            for i in 0..10 {
                let p = 0.01 * i as f64;
                for j in -5..=5 {
                    let theta = 0.02 * j as f64;
                    let rc = radial_curvature(p, theta, x);
                    let fd = (radial_curvature(p + h, theta, x).kappa
                        - radial_curvature(p - h, theta, x).kappa)
                        / (2.0 * h);
                    assert!(
                        (rc.d_kappa_dp - fd).abs() < 1e-6,
                        "p={p} theta={theta} x={x}: {} vs {}",
                        rc.d_kappa_dp,
                        fd
                    );
                }
            }
        }
    }

    #[test]
    fn drift_signs_match_both_orientations() {
        for &x in &[0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0] {
            assert!(radial_curvature(0.0, 0.0, x).d_kappa_dp > 0.0);
            let m = radial_curvature_mirrored(0.0, 0.0, x);
            assert!((m.kappa - 1.0).abs() < 1e-15);
            assert!(m.d_kappa_dp < 0.0);
        }
    }

    #[test]
    fn radial_step_identity_at_zero() {
        let p = CsPath::new(
            DirectedPoint::from_xyh(2.0, 0.0, 1.0),
            vec![CsElement::arc(Orientation::Ccw, 1.0)],
        )
        .unwrap();
        let sp = p.sample(0.01).unwrap();
        let mapped = radial_homotopy_step(&sp, Vec2::ZERO, 0.0).unwrap();
        for (a, b) in sp.samples.iter().zip(mapped.samples.iter()) {
            assert!(a.position.distance(b.position) < 1e-12);
        }
    }

    #[test]
    fn radial_step_projects_onto_unit_circle_at_one() {
        let center = Vec2::new(0.5, -0.3);
        let circle = Circle::unit(center, Orientation::Ccw);
        // A circle of radius 3 about the center, sampled directly.
        let samples: Vec<Sample> = (0..=200)
            .map(|i| {
                let ang = 2.0 * std::f64::consts::PI * (i as f64) / 200.0;
                Sample {
                    s: 3.0 * ang,
                    position: center + Vec2::from_angle(ang) * 3.0,
                    heading: ang + std::f64::consts::FRAC_PI_2,
                }
            })
            .collect();
        let sp = SampledPath {
            start: DirectedPoint::new(samples[0].position, samples[0].heading),
            end: DirectedPoint::new(samples[200].position, samples[200].heading),
            samples,
            step_bound: 0.1,
        };
        let mapped = radial_homotopy_step(&sp, center, 1.0).unwrap();
        for s in &mapped.samples {
            assert!((s.position.distance(circle.center) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_step_rejects_center_sample() {
        let sp = SampledPath {
            samples: vec![
                Sample {
                    s: 0.0,
                    position: Vec2::ZERO,
                    heading: 0.0,
                },
                Sample {
                    s: 1.0,
                    position: Vec2::new(1.0, 0.0),
                    heading: 0.0,
                },
            ],
            step_bound: 1.0,
            start: DirectedPoint::from_xyh(0.0, 0.0, 0.0),
            end: DirectedPoint::from_xyh(1.0, 0.0, 0.0),
        };
        assert!(matches!(
            radial_homotopy_step(&sp, Vec2::ZERO, 0.5),
            Err(Error::SingularProjection)
        ));
    }

    /// Sampled curvature at the middle of a mapped arc.
    fn mid_curvature(sp: &SampledPath) -> f64 {
        let m = sp.samples.len() / 2;
        menger_curvature(
            sp.samples[m - 1].position,
            sp.samples[m].position,
            sp.samples[m + 1].position,
        )
    }

    #[test]
    fn radial_flow_drift_signs_on_osculating_arcs() {
        // A clockwise arc bulging toward the projection center: curvature -1
        // rises toward 0 as the flow progresses. The mirrored arc falls.
        let d = 1.5;
        let center = Vec2::new(d + 1.0, 0.0);
        let circle = Circle::unit(center, Orientation::Cw);
        let phi0 = std::f64::consts::PI + 0.3;
        let start = DirectedPoint::new(circle.point_at(phi0), circle.tangent_at(phi0).angle());
        let arc = CsPath::new(start, vec![CsElement::arc(Orientation::Cw, 0.6)]).unwrap();
        let sp = arc.sample(0.002).unwrap();
        let k0 = mid_curvature(&sp);
        assert!((k0 + 1.0).abs() < 1e-3, "baseline {k0}");
        let k1 = mid_curvature(&radial_homotopy_step(&sp, Vec2::ZERO, 0.05).unwrap());
        assert!(k1 > k0 + 1e-4, "curvature should rise: {k0} -> {k1}");

        let mirrored = arc.reflected_x();
        let spm = mirrored.sample(0.002).unwrap();
        let m0 = mid_curvature(&spm);
        assert!((m0 - 1.0).abs() < 1e-3);
        let m1 = mid_curvature(&radial_homotopy_step(&spm, Vec2::ZERO, 0.05).unwrap());
        assert!(m1 < m0 - 1e-4, "curvature should fall: {m0} -> {m1}");
    }

    #[test]
    fn orthogonal_step_identity_and_collapse() {
        let p = CsPath::new(
            DirectedPoint::from_xyh(1.0, 2.0, 0.0),
            vec![CsElement::line(2.0)],
        )
        .unwrap();
        let sp = p.sample(0.1).unwrap();
        let frame = AxisFrame::new(Vec2::ZERO, Vec2::new(0.0, 1.0));
        let id = orthogonal_homotopy_step(&sp, &frame, 0.0);
        for (a, b) in sp.samples.iter().zip(id.samples.iter()) {
            assert!(a.position.distance(b.position) < 1e-12);
        }
        // A horizontal segment at height v0 collapses to the single point
        // (0, v0) at p = 1 (the degenerate limit the deformation engine
        // avoids by restricting orthogonal steps to the middle band).
        let collapsed = orthogonal_homotopy_step(&sp, &frame, 1.0);
        for s in &collapsed.samples {
            assert!(s.position.distance(Vec2::new(0.0, 2.0)) < 1e-12);
        }
    }

    #[test]
    fn orthogonal_flow_drift_signs_on_tangent_arcs() {
        // Clockwise arc tangent to the collapse axis: flattening toward the
        // axis raises curvature -1 toward 0; the mirrored arc falls.
        let center = Vec2::new(1.0, 0.0);
        let circle = Circle::unit(center, Orientation::Cw);
        let phi0 = std::f64::consts::PI + 0.3;
        let start = DirectedPoint::new(circle.point_at(phi0), circle.tangent_at(phi0).angle());
        let arc = CsPath::new(start, vec![CsElement::arc(Orientation::Cw, 0.6)]).unwrap();
        let sp = arc.sample(0.002).unwrap();
        let frame = AxisFrame::new(Vec2::ZERO, Vec2::new(0.0, 1.0));
        let k0 = mid_curvature(&sp);
        let k1 = mid_curvature(&orthogonal_homotopy_step(&sp, &frame, 0.05));
        assert!((k0 + 1.0).abs() < 1e-3);
        assert!(k1 > k0 + 1e-4, "{k0} -> {k1}");
        let mirrored = arc.reflected_x();
        let spm = mirrored.sample(0.002).unwrap();
        let m0 = mid_curvature(&spm);
        let m1 = mid_curvature(&orthogonal_homotopy_step(&spm, &frame, 0.05));
        assert!(m1 < m0 - 1e-4, "{m0} -> {m1}");
    }
}
