//! Planar primitives shared by every other module: points, angles, directed
//! points, unit circles and rigid motions.
//!
//! All constructions assume the curvature bound has been normalized to 1, so
//! every circle built here has unit radius. Angles handed across module
//! boundaries are normalized to `(-pi, pi]`; accumulated turning is kept
//! unnormalized where the lift matters (see the `winding` module).

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for coincidence/tangency predicates. Distance comparisons against
/// sharp thresholds (the `>= 4` proximity inequalities, tangency `= 2`) report
/// a boundary flag when the value falls inside this band.
pub const EPS_GEOM: f64 = 1e-9;

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at the given angle from the positive x-axis.
    pub fn from_angle(theta: f64) -> Self {
        Vec2::new(theta.cos(), theta.sin())
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product; positive when `other` is
    /// counterclockwise from `self`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Rotate by +90 degrees (counterclockwise).
    pub fn perp_left(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    /// Rotate by -90 degrees (clockwise).
    pub fn perp_right(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    pub fn rotated(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Normalize an angle to `(-pi, pi]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Smallest signed difference `a - b` normalized to `(-pi, pi]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    normalize_angle(a - b)
}

/// Counterclockwise sweep from angle `from` to angle `to`, in `[0, 2*pi)`.
pub fn ccw_sweep(from: f64, to: f64) -> f64 {
    (to - from).rem_euclid(2.0 * PI)
}

/// Clockwise sweep from angle `from` to angle `to`, in `[0, 2*pi)`.
pub fn cw_sweep(from: f64, to: f64) -> f64 {
    (from - to).rem_euclid(2.0 * PI)
}

/// Traversal orientation of a circular arc. `Ccw` is the word letter `L`
/// (turn left), `Cw` is `R` (turn right).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "L")]
    Ccw,
    #[serde(rename = "R")]
    Cw,
}

impl Orientation {
    /// Signed turning per unit arc length on a unit circle: +1 for `Ccw`,
    /// -1 for `Cw`.
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
        }
    }

    pub fn opposite(self) -> Orientation {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
        }
    }

    pub fn label(self) -> char {
        match self {
            Orientation::Ccw => 'L',
            Orientation::Cw => 'R',
        }
    }
}

/// An element of the tangent bundle: a planar position plus a unit heading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectedPoint {
    pub position: Vec2,
    /// Heading in radians, normalized to `(-pi, pi]`.
    pub heading: f64,
}

impl DirectedPoint {
    pub fn new(position: Vec2, heading: f64) -> Self {
        DirectedPoint {
            position,
            heading: normalize_angle(heading),
        }
    }

    pub fn from_xyh(x: f64, y: f64, heading: f64) -> Self {
        DirectedPoint::new(Vec2::new(x, y), heading)
    }

    pub fn direction(&self) -> Vec2 {
        Vec2::from_angle(self.heading)
    }

    /// Heading reversed by pi (time reversal of a path through this point).
    pub fn reversed(&self) -> DirectedPoint {
        DirectedPoint::new(self.position, self.heading + PI)
    }

    /// Reflection across the x-axis.
    pub fn reflected_x(&self) -> DirectedPoint {
        DirectedPoint::new(Vec2::new(self.position.x, -self.position.y), -self.heading)
    }

    /// C1 distance to another directed point: position gap plus heading gap.
    pub fn c1_distance(&self, other: &DirectedPoint) -> f64 {
        self.position.distance(other.position) + angle_diff(self.heading, other.heading).abs()
    }
}

/// A circle with a traversal orientation. Everything constructed in this crate
/// has unit radius (curvature bound 1), but the radius is kept explicit so
/// invariants can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
    pub orientation: Orientation,
}

impl Circle {
    pub fn unit(center: Vec2, orientation: Orientation) -> Self {
        Circle {
            center,
            radius: 1.0,
            orientation,
        }
    }

    /// Point on the circle at the given polar angle from the center.
    pub fn point_at(&self, angle: f64) -> Vec2 {
        self.center + Vec2::from_angle(angle) * self.radius
    }

    /// Polar angle of a point (not necessarily on the circle) about the center.
    pub fn angle_of(&self, point: Vec2) -> f64 {
        (point - self.center).angle()
    }

    /// Unit tangent at the given polar angle, in traversal direction.
    pub fn tangent_at(&self, angle: f64) -> Vec2 {
        let radial = Vec2::from_angle(angle);
        match self.orientation {
            Orientation::Ccw => radial.perp_left(),
            Orientation::Cw => radial.perp_right(),
        }
    }

    /// Sweep from angle `from` to angle `to` along the traversal direction,
    /// in `[0, 2*pi)`. Roundoff can push a geometrically zero sweep just
    /// below a full turn; such values snap back to zero so that degenerate
    /// tangent constructions do not grow spurious loops.
    pub fn sweep_between(&self, from: f64, to: f64) -> f64 {
        let sweep = match self.orientation {
            Orientation::Ccw => ccw_sweep(from, to),
            Orientation::Cw => cw_sweep(from, to),
        };
        if sweep > 2.0 * PI - 1e-9 {
            0.0
        } else {
            sweep
        }
    }
}

/// The two unit circles tangent to a directed point: `left` has its center at
/// 90 degrees to the left of the heading, `right` at 90 degrees to the right.
/// Their centers are always distance 2 apart.
pub fn adjacent_circles(x: &DirectedPoint) -> (Circle, Circle) {
    let dir = x.direction();
    let left = Circle::unit(x.position + dir.perp_left(), Orientation::Ccw);
    let right = Circle::unit(x.position + dir.perp_right(), Orientation::Cw);
    (left, right)
}

/// Adjacent circle on the requested turning side.
pub fn adjacent_circle(x: &DirectedPoint, side: Orientation) -> Circle {
    let (l, r) = adjacent_circles(x);
    match side {
        Orientation::Ccw => l,
        Orientation::Cw => r,
    }
}

/// A rigid motion of the plane (rotation followed by translation).
#[derive(Debug, Clone, Copy)]
pub struct RigidMotion {
    pub rotation: f64,
    pub translation: Vec2,
}

impl RigidMotion {
    pub fn identity() -> Self {
        RigidMotion {
            rotation: 0.0,
            translation: Vec2::ZERO,
        }
    }

    pub fn new(rotation: f64, translation: Vec2) -> Self {
        RigidMotion {
            rotation,
            translation,
        }
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        p.rotated(self.rotation) + self.translation
    }

    pub fn apply_directed(&self, x: &DirectedPoint) -> DirectedPoint {
        DirectedPoint::new(self.apply(x.position), x.heading + self.rotation)
    }
}

/// Rescale an endpoint condition with curvature bound `kappa` to the unit
/// bound. Positions are multiplied by `kappa`; headings are unchanged. Lengths
/// computed in the scaled picture divide by `kappa` to map back.
pub fn scale_to_unit_curvature(
    x: &DirectedPoint,
    y: &DirectedPoint,
    kappa: f64,
) -> Result<(DirectedPoint, DirectedPoint, f64)> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "curvature bound must be positive and finite, got {kappa}"
        )));
    }
    Ok((
        DirectedPoint::new(x.position * kappa, x.heading),
        DirectedPoint::new(y.position * kappa, y.heading),
        kappa,
    ))
}

/// Inverse of [`scale_to_unit_curvature`] on a single point.
pub fn unscale_point(p: Vec2, scale_factor: f64) -> Vec2 {
    p * (1.0 / scale_factor)
}

// ---------------------------------------------------------------------------
// Tangent constructions between unit circles
// ---------------------------------------------------------------------------

/// A tangent segment between two oriented unit circles: leave the first circle
/// at `from_angle`, travel straight to the second circle at `to_angle`. The
/// segment direction agrees with both traversal orientations.
#[derive(Debug, Clone, Copy)]
pub struct TangentSegment {
    pub from_angle: f64,
    pub to_angle: f64,
    pub start: Vec2,
    pub end: Vec2,
    pub length: f64,
}

/// Common tangent of two oriented unit circles that is compatible with both
/// orientations. Same orientations need an outer tangent (always exists, even
/// for coincident centers); opposite orientations need an inner tangent, which
/// exists only when the centers are at least 2 apart.
pub fn common_tangent(c1: &Circle, c2: &Circle) -> Option<TangentSegment> {
    let delta = c2.center - c1.center;
    let d = delta.norm();
    if c1.orientation == c2.orientation {
        // Outer tangent: both tangent points on the same side of the center
        // line. For coincident centers the circles coincide and the "tangent"
        // degenerates to a point; callers treat this as a zero segment.
        if d < EPS_GEOM {
            // Degenerate: same circle. Tangent point direction is arbitrary;
            // report a zero-length segment at angle 0 so arc sweeps still
            // close up. Callers special-case this.
            return None;
        }
        let dir = delta * (1.0 / d);
        let normal = match c1.orientation {
            // CCW travel along `dir` puts the circle center on the left, so
            // the tangent point sits on the right of the center: center + n
            // with n = dir rotated -90.
            Orientation::Ccw => dir.perp_right(),
            Orientation::Cw => dir.perp_left(),
        };
        let start = c1.center + normal;
        let end = c2.center + normal;
        Some(TangentSegment {
            from_angle: normal.angle(),
            to_angle: normal.angle(),
            start,
            end,
            length: d,
        })
    } else {
        // Inner tangent: crosses between the centers. Exact tangency
        // (centers distance 2, within tolerance) is accepted: the segment
        // degenerates to the touching point and the word becomes two arcs.
        if d < 2.0 - EPS_GEOM {
            return None;
        }
        // Tangent points p1 = c1 + u, p2 = c2 - u with (c2-c1).u = 2 and the
        // travel direction perpendicular to u, matching c1's orientation.
        let psi = (2.0 / d).min(1.0).acos();
        let dir = delta * (1.0 / d);
        let u = match c1.orientation {
            // For a CCW first circle the tangent point must be on the right
            // of travel; travel = u rotated +90. Choosing u = dir rotated
            // -psi makes travel point from p1 toward p2.
            Orientation::Ccw => dir.rotated(-psi),
            Orientation::Cw => dir.rotated(psi),
        };
        let start = c1.center + u;
        let end = c2.center - u;
        let length = (end - start).norm();
        Some(TangentSegment {
            from_angle: u.angle(),
            to_angle: (-u).angle(),
            start,
            end,
            length,
        })
    }
}

/// Centers of the unit circles tangent to both given unit circles (the middle
/// circle of a CCC word). Exists when the centers are at most 4 apart; there
/// are generically two, one on each side of the center line.
pub fn tangent_circle_centers(c1: Vec2, c2: Vec2) -> Vec<Vec2> {
    let delta = c2 - c1;
    let d = delta.norm();
    if !(EPS_GEOM..=4.0).contains(&d) {
        return Vec::new();
    }
    let mid = c1 + delta * 0.5;
    let h_sq = 4.0 - (d / 2.0) * (d / 2.0);
    if h_sq < 0.0 {
        return Vec::new();
    }
    let h = h_sq.sqrt();
    let n = delta.normalized().perp_left();
    if h < EPS_GEOM {
        vec![mid]
    } else {
        vec![mid + n * h, mid - n * h]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn adjacent_circles_axis_aligned() {
        let x = DirectedPoint::from_xyh(0.0, 0.0, 0.0);
        let (l, r) = adjacent_circles(&x);
        assert!(l.center.distance(Vec2::new(0.0, 1.0)) < 1e-15);
        assert!(r.center.distance(Vec2::new(0.0, -1.0)) < 1e-15);
        assert_eq!(l.orientation, Orientation::Ccw);
        assert_eq!(r.orientation, Orientation::Cw);
    }

    #[test]
    fn adjacent_circles_rotated_by_hand() {
        // Heading pi/2 at (1,1): left center rotates the heading +90 degrees.
        let x = DirectedPoint::from_xyh(1.0, 1.0, std::f64::consts::FRAC_PI_2);
        let (l, r) = adjacent_circles(&x);
        // Vector-algebra check: c_l = p + (-sin, cos), c_r = p + (sin, -cos).
        let expected_l = Vec2::new(1.0 - 1.0, 1.0 + 0.0);
        let expected_r = Vec2::new(1.0 + 1.0, 1.0 - 0.0);
        assert!(l.center.distance(expected_l) < 1e-12);
        assert!(r.center.distance(expected_r) < 1e-12);
    }

    #[test]
    fn scale_round_trip() {
        let x = DirectedPoint::from_xyh(3.0, 0.0, 0.3);
        let y = DirectedPoint::from_xyh(-1.0, 2.0, -1.1);
        let (xs, ys, s) = scale_to_unit_curvature(&x, &y, 2.0).unwrap();
        assert!(xs.position.distance(Vec2::new(6.0, 0.0)) < 1e-12);
        assert!(unscale_point(xs.position, s).distance(x.position) < 1e-12);
        assert!(unscale_point(ys.position, s).distance(y.position) < 1e-12);
        assert!(scale_to_unit_curvature(&x, &y, 0.0).is_err());
        assert!(scale_to_unit_curvature(&x, &y, -1.0).is_err());
        // kappa = 1 is the identity.
        let (x1, _, _) = scale_to_unit_curvature(&x, &y, 1.0).unwrap();
        assert_eq!(x1.position, x.position);
    }

    #[test]
    fn normalize_angle_range() {
        assert_eq!(normalize_angle(PI), PI);
        assert!((normalize_angle(-PI) - PI).abs() < 1e-15);
        assert!((normalize_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!(normalize_angle(2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn inner_tangent_exists_iff_far_enough() {
        let a = Circle::unit(Vec2::ZERO, Orientation::Ccw);
        let b = Circle::unit(Vec2::new(1.5, 0.0), Orientation::Cw);
        assert!(common_tangent(&a, &b).is_none());
        let c = Circle::unit(Vec2::new(3.0, 0.0), Orientation::Cw);
        let t = common_tangent(&a, &c).unwrap();
        // Tangent points are at distance 1 from each center and the segment
        // is perpendicular to both radii.
        assert!((t.start.distance(a.center) - 1.0).abs() < 1e-12);
        assert!((t.end.distance(c.center) - 1.0).abs() < 1e-12);
        let dir = (t.end - t.start).normalized();
        assert!(dir.dot(t.start - a.center).abs() < 1e-12);
    }

    proptest! {
        // adjacentCircles commutes with rigid motions.
        #[test]
        fn adjacent_circles_equivariant(
            px in -10.0..10.0f64, py in -10.0..10.0f64, h in -3.1..3.1f64,
            rot in -3.1..3.1f64, tx in -5.0..5.0f64, ty in -5.0..5.0f64,
        ) {
            let x = DirectedPoint::from_xyh(px, py, h);
            let g = RigidMotion::new(rot, Vec2::new(tx, ty));
            let (l0, r0) = adjacent_circles(&x);
            let (l1, r1) = adjacent_circles(&g.apply_directed(&x));
            prop_assert!(g.apply(l0.center).distance(l1.center) < 1e-9);
            prop_assert!(g.apply(r0.center).distance(r1.center) < 1e-9);
        }

        // Reflection across the x-axis swaps left and right circles.
        #[test]
        fn reflection_swaps_adjacent_circles(
            px in -10.0..10.0f64, py in -10.0..10.0f64, h in -3.1..3.1f64,
        ) {
            let x = DirectedPoint::from_xyh(px, py, h);
            let xr = x.reflected_x();
            let (l, r) = adjacent_circles(&x);
            let (lr, rr) = adjacent_circles(&xr);
            let mirror = |p: Vec2| Vec2::new(p.x, -p.y);
            prop_assert!(mirror(l.center).distance(rr.center) < 1e-9);
            prop_assert!(mirror(r.center).distance(lr.center) < 1e-9);
        }

        // The two adjacent centers are always distance 2 apart.
        #[test]
        fn adjacent_center_distance_is_two(
            px in -10.0..10.0f64, py in -10.0..10.0f64, h in -3.1..3.1f64,
        ) {
            let x = DirectedPoint::from_xyh(px, py, h);
            let (l, r) = adjacent_circles(&x);
            prop_assert!((l.center.distance(r.center) - 2.0).abs() < 1e-12);
        }
    }
}
