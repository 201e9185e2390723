//! Paths in circle/segment form and densely sampled smooth paths.
//!
//! A [`CsPath`] is a finite word of unit-circle arcs and line segments,
//! stored relative to a start pose: each arc is "turn left/right by this
//! sweep", each line is "go straight this far". The relative encoding makes
//! G1 continuity structural and keeps serialized paths rigid-motion
//! covariant. Absolute geometry (circle centers, tangency angles) is
//! recovered on demand via [`CsPath::placed`].
//!
//! A [`SampledPath`] is an arc-length-parameterized polyline with headings,
//! the exchange format for smooth (not piecewise-constant-curvature) paths
//! entering normalization.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    adjacent_circle, normalize_angle, Circle, DirectedPoint, Orientation, RigidMotion, Vec2,
    EPS_GEOM,
};

/// Elements below this length are treated as zero and dropped at
/// construction, keeping complexity well defined.
pub const MIN_ELEMENT_LENGTH: f64 = 1e-12;

/// Sanity cap on a single arc's sweep. Full loops are legitimate (winding
/// class representatives carry them as separate 2*pi elements).
pub const MAX_ARC_SWEEP: f64 = 4.0 * PI;

/// One component of a cs path, relative to the running endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CsElement {
    Arc {
        orientation: Orientation,
        /// Unsigned sweep in radians; the traversal sign comes from the
        /// orientation. Unit radius, so sweep equals arc length.
        sweep: f64,
    },
    Line { length: f64 },
}

impl CsElement {
    pub fn arc(orientation: Orientation, sweep: f64) -> Self {
        CsElement::Arc { orientation, sweep }
    }

    pub fn line(length: f64) -> Self {
        CsElement::Line { length }
    }

    pub fn length(&self) -> f64 {
        match *self {
            CsElement::Arc { sweep, .. } => sweep,
            CsElement::Line { length } => length,
        }
    }

    /// Signed turning contributed by this element.
    pub fn turning(&self) -> f64 {
        match *self {
            CsElement::Arc { orientation, sweep } => orientation.sign() * sweep,
            CsElement::Line { .. } => 0.0,
        }
    }

    pub fn is_arc(&self) -> bool {
        matches!(self, CsElement::Arc { .. })
    }
}

/// A bounded curvature path as a finite word of unit arcs and segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsPath {
    pub start: DirectedPoint,
    pub elements: Vec<CsElement>,
}

impl CsPath {
    /// Build a path, dropping zero-length elements and validating bounds.
    pub fn new(start: DirectedPoint, elements: Vec<CsElement>) -> Result<CsPath> {
        let mut kept = Vec::with_capacity(elements.len());
        for e in elements {
            let len = e.length();
            if !len.is_finite() || len < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "element length must be finite and nonnegative, got {len}"
                )));
            }
            if len < MIN_ELEMENT_LENGTH {
                continue;
            }
            if let CsElement::Arc { sweep, .. } = e {
                if sweep > MAX_ARC_SWEEP + EPS_GEOM {
                    return Err(Error::InvalidParameter(format!(
                        "arc sweep {sweep} exceeds the {MAX_ARC_SWEEP} cap"
                    )));
                }
            }
            kept.push(e);
        }
        Ok(CsPath {
            start,
            elements: kept,
        })
    }

    /// The empty path at a pose (length zero, complexity zero).
    pub fn empty(start: DirectedPoint) -> CsPath {
        CsPath {
            start,
            elements: Vec::new(),
        }
    }

    /// Number of components (arcs plus segments).
    pub fn complexity(&self) -> usize {
        self.elements.len()
    }

    pub fn length(&self) -> f64 {
        self.elements.iter().map(|e| e.length()).sum()
    }

    /// Total signed turning (sum of signed arc sweeps), counterclockwise
    /// positive. This is the unnormalized lift difference tau(s) - tau(0).
    pub fn total_turning(&self) -> f64 {
        self.elements.iter().map(|e| e.turning()).sum()
    }

    /// Endpoint pose reached by forward integration.
    pub fn end(&self) -> DirectedPoint {
        let mut pose = self.start;
        for e in &self.elements {
            pose = advance(pose, e);
        }
        pose
    }

    /// Absolute geometry of every element.
    pub fn placed(&self) -> Vec<PlacedElement> {
        let mut out = Vec::with_capacity(self.elements.len());
        let mut pose = self.start;
        for e in &self.elements {
            out.push(PlacedElement::place(pose, e));
            pose = advance(pose, e);
        }
        out
    }

    /// Pose at arc length `s` along the path, clamped to the ends.
    pub fn pose_at(&self, s: f64) -> DirectedPoint {
        let mut pose = self.start;
        let mut remaining = s.max(0.0);
        for e in &self.elements {
            let len = e.length();
            if remaining <= len {
                return PlacedElement::place(pose, e).pose_at(remaining);
            }
            remaining -= len;
            pose = advance(pose, e);
        }
        pose
    }

    /// Concatenate with a path starting where this one ends.
    pub fn concat(&self, other: &CsPath) -> Result<CsPath> {
        let end = self.end();
        if end.c1_distance(&other.start) > 1e-6 {
            return Err(Error::InvalidInput(format!(
                "concatenation gap {:.3e} exceeds tolerance",
                end.c1_distance(&other.start)
            )));
        }
        let mut elements = self.elements.clone();
        elements.extend(other.elements.iter().copied());
        Ok(CsPath {
            start: self.start,
            elements,
        })
    }

    /// Merge consecutive co-circular same-orientation arcs and collinear
    /// segments; drop zero-length elements. Length-preserving; never
    /// increases complexity. Arc merges respect the sweep cap.
    pub fn canonicalized(&self) -> CsPath {
        let mut out: Vec<CsElement> = Vec::with_capacity(self.elements.len());
        for &e in &self.elements {
            if e.length() < MIN_ELEMENT_LENGTH {
                continue;
            }
            if let Some(last) = out.last_mut() {
                match (*last, e) {
                    (CsElement::Line { length: a }, CsElement::Line { length: b }) => {
                        *last = CsElement::line(a + b);
                        continue;
                    }
                    (
                        CsElement::Arc {
                            orientation: o1,
                            sweep: s1,
                        },
                        CsElement::Arc {
                            orientation: o2,
                            sweep: s2,
                        },
                    ) if o1 == o2 && s1 + s2 <= MAX_ARC_SWEEP => {
                        *last = CsElement::arc(o1, s1 + s2);
                        continue;
                    }
                    _ => {}
                }
            }
            out.push(e);
        }
        CsPath {
            start: self.start,
            elements: out,
        }
    }

    /// Split at arc length `s`, yielding two paths sharing a junction pose.
    pub fn split_at(&self, s: f64) -> Result<(CsPath, CsPath)> {
        let total = self.length();
        if !(0.0..=total).contains(&s) {
            return Err(Error::InvalidParameter(format!(
                "split position {s} outside [0, {total}]"
            )));
        }
        let mut head = Vec::new();
        let mut tail = Vec::new();
        let mut pose = self.start;
        let mut remaining = s;
        let mut splitting = true;
        for &e in &self.elements {
            if splitting {
                let len = e.length();
                if remaining >= len - MIN_ELEMENT_LENGTH {
                    head.push(e);
                    remaining -= len;
                    pose = advance(pose, &e);
                } else {
                    if remaining > MIN_ELEMENT_LENGTH {
                        let (a, b) = split_element(&e, remaining);
                        head.push(a);
                        pose = advance(pose, &a);
                        tail.push(b);
                    } else {
                        tail.push(e);
                    }
                    splitting = false;
                }
            } else {
                tail.push(e);
            }
        }
        Ok((
            CsPath {
                start: self.start,
                elements: head,
            },
            CsPath {
                start: pose,
                elements: tail,
            },
        ))
    }

    /// Apply a rigid motion. Only the start pose moves; the word is
    /// motion-covariant by construction.
    pub fn transformed(&self, g: &RigidMotion) -> CsPath {
        CsPath {
            start: g.apply_directed(&self.start),
            elements: self.elements.clone(),
        }
    }

    /// Mirror image across the x-axis: arcs swap orientation.
    pub fn reflected_x(&self) -> CsPath {
        CsPath {
            start: self.start.reflected_x(),
            elements: self
                .elements
                .iter()
                .map(|e| match *e {
                    CsElement::Arc { orientation, sweep } => {
                        CsElement::arc(orientation.opposite(), sweep)
                    }
                    line => line,
                })
                .collect(),
        }
    }

    /// Arc-length sampling with spacing at most `step`; element junctions are
    /// always emitted exactly, and headings are analytic.
    pub fn sample(&self, step: f64) -> Result<SampledPath> {
        if step.is_nan() || step <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sampling step must be positive, got {step}"
            )));
        }
        let mut samples = Vec::new();
        let mut s0 = 0.0;
        samples.push(Sample {
            s: 0.0,
            position: self.start.position,
            heading: self.start.heading,
        });
        for placed in self.placed() {
            let len = placed.length();
            let n = (len / step).ceil().max(1.0) as usize;
            for i in 1..=n {
                let t = len * (i as f64) / (n as f64);
                let pose = placed.pose_at(t);
                samples.push(Sample {
                    s: s0 + t,
                    position: pose.position,
                    heading: pose.heading,
                });
            }
            s0 += len;
        }
        Ok(SampledPath {
            samples,
            step_bound: step,
            start: self.start,
            end: self.end(),
        })
    }
}

fn advance(pose: DirectedPoint, e: &CsElement) -> DirectedPoint {
    match *e {
        CsElement::Line { length } => {
            DirectedPoint::new(pose.position + pose.direction() * length, pose.heading)
        }
        CsElement::Arc { orientation, sweep } => {
            let circle = adjacent_circle(&pose, orientation);
            let a0 = circle.angle_of(pose.position);
            let signed = orientation.sign() * sweep;
            DirectedPoint::new(circle.point_at(a0 + signed), pose.heading + signed)
        }
    }
}

fn split_element(e: &CsElement, at: f64) -> (CsElement, CsElement) {
    match *e {
        CsElement::Line { length } => (CsElement::line(at), CsElement::line(length - at)),
        CsElement::Arc { orientation, sweep } => (
            CsElement::arc(orientation, at),
            CsElement::arc(orientation, sweep - at),
        ),
    }
}

/// An element with absolute geometry: an arc pinned to its circle, or a
/// segment pinned to its endpoints.
#[derive(Debug, Clone, Copy)]
pub enum PlacedElement {
    Arc {
        circle: Circle,
        start_angle: f64,
        /// Signed sweep: positive counterclockwise.
        sweep: f64,
        start_heading: f64,
    },
    Line { start: Vec2, end: Vec2, heading: f64 },
}

impl PlacedElement {
    pub fn place(pose: DirectedPoint, e: &CsElement) -> PlacedElement {
        match *e {
            CsElement::Line { length } => PlacedElement::Line {
                start: pose.position,
                end: pose.position + pose.direction() * length,
                heading: pose.heading,
            },
            CsElement::Arc { orientation, sweep } => {
                let circle = adjacent_circle(&pose, orientation);
                PlacedElement::Arc {
                    circle,
                    start_angle: circle.angle_of(pose.position),
                    sweep: orientation.sign() * sweep,
                    start_heading: pose.heading,
                }
            }
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            PlacedElement::Arc { sweep, .. } => sweep.abs(),
            PlacedElement::Line { start, end, .. } => end.distance(*start),
        }
    }

    /// Pose at arc length `t` in `[0, length]` along this element.
    pub fn pose_at(&self, t: f64) -> DirectedPoint {
        match self {
            PlacedElement::Line {
                start, end, heading, ..
            } => {
                let len = end.distance(*start);
                let f = if len > 0.0 { t / len } else { 0.0 };
                DirectedPoint::new(*start + (*end - *start) * f, *heading)
            }
            PlacedElement::Arc {
                circle,
                start_angle,
                sweep,
                start_heading,
            } => {
                let signed = sweep.signum() * t;
                DirectedPoint::new(
                    circle.point_at(start_angle + signed),
                    start_heading + signed,
                )
            }
        }
    }

    pub fn start_pose(&self) -> DirectedPoint {
        self.pose_at(0.0)
    }

    pub fn end_pose(&self) -> DirectedPoint {
        self.pose_at(self.length())
    }
}

/// One arc-length sample of a smooth path.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Sample {
    /// Arc length from the path start.
    pub s: f64,
    pub position: Vec2,
    pub heading: f64,
}

/// An arbitrary C1, piecewise-C2 path given as dense arc-length samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampledPath {
    pub samples: Vec<Sample>,
    /// Maximum sample spacing used to produce the samples.
    pub step_bound: f64,
    /// Declared endpoint condition.
    pub start: DirectedPoint,
    pub end: DirectedPoint,
}

impl SampledPath {
    pub fn length(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.s)
    }

    /// Total signed turning from the continuous heading lift.
    pub fn total_turning(&self) -> f64 {
        let mut total = 0.0;
        for w in self.samples.windows(2) {
            total += normalize_angle(w[1].heading - w[0].heading);
        }
        total
    }

    /// Sample index range covering arc lengths `[a, b]`.
    pub fn index_range(&self, a: f64, b: f64) -> (usize, usize) {
        let lo = self.samples.partition_point(|s| s.s < a - 1e-12);
        let hi = self.samples.partition_point(|s| s.s <= b + 1e-12);
        (lo, hi.max(lo + 1))
    }
}

/// Outcome of checking a sampled path against the unit curvature bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidityReport {
    /// Worst relative deviation of chord length from arc-length spacing.
    pub unit_speed_residual: f64,
    /// Largest absolute three-point curvature estimate.
    pub max_abs_curvature: f64,
    /// Interior sample indices where the estimate exceeds `1 + tol`.
    pub violations: Vec<usize>,
    pub endpoint_residual_start: f64,
    pub endpoint_residual_end: f64,
    pub valid: bool,
}

/// Tolerance used to compare declared endpoints against the samples.
const ENDPOINT_MATCH_TOL: f64 = 1e-6;

/// Estimate curvature along a sampled path and flag violations of the unit
/// bound. Curvature comes from the circle circumscribing consecutive sample
/// triples, which is robust to unit-speed drift (second differences amplify
/// spacing noise quadratically).
pub fn validate_bounded_curvature(path: &SampledPath, tol: f64) -> Result<ValidityReport> {
    if path.samples.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "curvature validation needs at least 3 samples, got {}",
            path.samples.len()
        )));
    }
    let mut unit_speed_residual: f64 = 0.0;
    for w in path.samples.windows(2) {
        let ds = w[1].s - w[0].s;
        if ds <= 0.0 {
            return Err(Error::InvalidInput(
                "arc lengths must be strictly increasing".into(),
            ));
        }
        let chord = w[1].position.distance(w[0].position);
        // A unit-speed arc of curvature kappa has chord/ds = sinc(kappa*ds/2),
        // so the residual stays O(ds^2) for valid paths.
        unit_speed_residual = unit_speed_residual.max((chord / ds - 1.0).abs());
    }
    let mut max_abs_curvature: f64 = 0.0;
    let mut violations = Vec::new();
    for i in 1..path.samples.len() - 1 {
        let k = menger_curvature(
            path.samples[i - 1].position,
            path.samples[i].position,
            path.samples[i + 1].position,
        );
        max_abs_curvature = max_abs_curvature.max(k.abs());
        if k.abs() > 1.0 + tol {
            violations.push(i);
        }
    }
    let first = &path.samples[0];
    let last = path.samples.last().unwrap();
    let endpoint_residual_start = DirectedPoint::new(first.position, first.heading)
        .c1_distance(&path.start);
    let endpoint_residual_end =
        DirectedPoint::new(last.position, last.heading).c1_distance(&path.end);
    let valid = violations.is_empty()
        && endpoint_residual_start < ENDPOINT_MATCH_TOL
        && endpoint_residual_end < ENDPOINT_MATCH_TOL;
    Ok(ValidityReport {
        unit_speed_residual,
        max_abs_curvature,
        violations,
        endpoint_residual_start,
        endpoint_residual_end,
        valid,
    })
}

/// Signed curvature of the circle through three points: positive when the
/// triple turns counterclockwise. Zero for collinear points.
pub fn menger_curvature(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    let ab = b - a;
    let bc = c - b;
    let ac = c - a;
    let denom = ab.norm() * bc.norm() * ac.norm();
    if denom < 1e-300 {
        return 0.0;
    }
    2.0 * ab.cross(bc) / denom
}
