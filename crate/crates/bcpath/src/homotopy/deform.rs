//! Continuous deformation of fragments onto their replacement paths, and
//! whole-path normalization to cs form.
//!
//! A replacement path splits the plane into bands: a wedge around each
//! circular component, bounded by the radial rays through the component
//! junctions, and a middle band over the straight component. Samples in a
//! wedge move under the radial flow of that component's circle; samples in
//! the middle band move under the orthogonal flow onto the segment's line.
//! On a boundary ray the two flows coincide exactly (both scale the normal
//! excess by `1 - p`), so every frame is a continuous path. Endpoints sit on
//! their tangent circles and on the segment line simultaneously, so they are
//! fixed points of every frame.

use serde::{Deserialize, Serialize};

use crate::cs::{CsPath, PlacedElement, Sample, SampledPath};
use crate::error::{Error, Result};
use crate::geometry::{angle_diff, DirectedPoint, Vec2};
use crate::winding::{winding_number_sampled, ClosurePath};

use super::curvature::rebuild_sampled;
use super::fragmentation::{fragment, replacement_path};

/// Default curvature overshoot tolerated in deformation frames, tied to the
/// sampling step.
pub const DEFAULT_FRAME_TOL: f64 = 0.02;

/// Engine parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Fragment length target (< 1).
    pub target_len: f64,
    /// Heading variation bound per fragment, radians.
    pub heading_variation: f64,
    /// Homotopy parameter steps per fragment deformation.
    pub p_steps: usize,
    /// Allowed curvature overshoot per frame.
    pub tol_frame: f64,
    /// Re-deform with doubled steps this many times before failing.
    pub retry_cap: usize,
    /// Recursively split a violating fragment this many times.
    pub split_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            target_len: 0.5,
            heading_variation: super::fragmentation::DEFAULT_HEADING_VARIATION,
            p_steps: 12,
            tol_frame: DEFAULT_FRAME_TOL,
            retry_cap: 1,
            split_cap: 3,
        }
    }
}

/// Per-frame diagnostics of a deformation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FrameStats {
    pub p: f64,
    pub max_curvature: f64,
    /// Worst endpoint position drift from the deformed path's endpoints.
    pub endpoint_residual: f64,
    pub winding: i64,
}

/// A one-parameter family of sampled paths realizing a bounded-curvature
/// deformation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeformationTrace {
    pub frames: Vec<SampledPath>,
    pub per_frame: Vec<FrameStats>,
}

impl DeformationTrace {
    pub fn final_frame(&self) -> &SampledPath {
        self.frames.last().expect("trace has at least one frame")
    }

    /// Largest C1 gap between consecutive frames, maximized over samples.
    pub fn max_consecutive_c1_distance(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.frames.windows(2) {
            if w[0].samples.len() != w[1].samples.len() {
                continue;
            }
            for (a, b) in w[0].samples.iter().zip(w[1].samples.iter()) {
                let d = a.position.distance(b.position) + angle_diff(a.heading, b.heading).abs();
                worst = worst.max(d);
            }
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// The banded flow
// ---------------------------------------------------------------------------

/// Region of one replacement component plus the flow acting there.
enum BandFlow {
    Radial { center: Vec2 },
    Orthogonal { origin: Vec2, axis: Vec2 },
}

/// Piecewise flow assembled from a replacement path.
struct BandedFlow {
    /// Junction poses separating consecutive bands.
    boundaries: Vec<DirectedPoint>,
    flows: Vec<BandFlow>,
}

impl BandedFlow {
    fn of(replacement: &CsPath) -> BandedFlow {
        let canon = replacement.canonicalized();
        let placed = canon.placed();
        let mut boundaries = Vec::new();
        let mut flows = Vec::new();
        for (i, e) in placed.iter().enumerate() {
            if i > 0 {
                boundaries.push(e.start_pose());
            }
            flows.push(match e {
                PlacedElement::Arc { circle, .. } => BandFlow::Radial {
                    center: circle.center,
                },
                PlacedElement::Line { start, end, .. } => BandFlow::Orthogonal {
                    origin: *start,
                    axis: (*end - *start).normalized(),
                },
            });
        }
        if flows.is_empty() {
            // Zero-length replacement: treat as a point anchor.
            flows.push(BandFlow::Orthogonal {
                origin: canon.start.position,
                axis: canon.start.direction(),
            });
        }
        BandedFlow { boundaries, flows }
    }

    fn map_point(&self, q: Vec2, p: f64) -> Vec2 {
        let mut region = self.flows.len() - 1;
        for (i, b) in self.boundaries.iter().enumerate() {
            if (q - b.position).dot(b.direction()) < 0.0 {
                region = i;
                break;
            }
        }
        match &self.flows[region] {
            BandFlow::Radial { center } => {
                let d = q - *center;
                let r = d.norm();
                if r < 1e-12 {
                    return q;
                }
                *center + d * (1.0 - p + p / r)
            }
            BandFlow::Orthogonal { origin, axis } => {
                let d = q - *origin;
                let along = d.dot(*axis);
                let offset = d.cross(*axis);
                *origin + *axis * along + axis.perp_right() * (offset * (1.0 - p))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Fragment deformation
// ---------------------------------------------------------------------------

/// Deform a fragment onto its replacement path through `p_steps` frames.
/// Every frame is validated against the curvature bound and the fixed
/// endpoint condition; the winding number is recorded per frame and must be
/// constant.
pub fn deform_fragment_to_replacement(
    fragment: &SampledPath,
    replacement: &CsPath,
    p_steps: usize,
    cfg: &EngineConfig,
) -> Result<DeformationTrace> {
    if p_steps < 2 {
        return Err(Error::InvalidParameter(
            "deformation needs at least two frames".into(),
        ));
    }
    // Already identical to the replacement: a single-frame trace.
    if fragment_matches_replacement(fragment, replacement) {
        let closure = ClosurePath::pin(&fragment.start, &fragment.end);
        let winding = winding_number_sampled(fragment, &closure)?;
        return Ok(DeformationTrace {
            frames: vec![fragment.clone()],
            per_frame: vec![FrameStats {
                p: 1.0,
                max_curvature: frame_max_curvature(fragment),
                endpoint_residual: 0.0,
                winding,
            }],
        });
    }
    let closure = ClosurePath::pin(&fragment.start, &fragment.end);
    let flow = BandedFlow::of(replacement);
    let mut steps = p_steps;
    let mut attempt = 0;
    loop {
        match run_flow(fragment, &flow, steps, cfg, &closure) {
            Ok(trace) => return Ok(trace),
            Err(e @ Error::CurvatureViolation { .. }) => {
                if attempt >= cfg.retry_cap {
                    return Err(e);
                }
                attempt += 1;
                steps *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

fn fragment_matches_replacement(fragment: &SampledPath, replacement: &CsPath) -> bool {
    if (fragment.length() - replacement.length()).abs() > 1e-9 {
        return false;
    }
    fragment.samples.iter().all(|s| {
        let pose = replacement.pose_at(s.s);
        pose.position.distance(s.position) < 1e-9
    })
}

fn frame_max_curvature(frame: &SampledPath) -> f64 {
    let mut max: f64 = 0.0;
    for w in frame.samples.windows(3) {
        max = max.max(
            crate::cs::menger_curvature(w[0].position, w[1].position, w[2].position).abs(),
        );
    }
    max
}

fn run_flow(
    fragment: &SampledPath,
    flow: &BandedFlow,
    steps: usize,
    cfg: &EngineConfig,
    closure: &ClosurePath,
) -> Result<DeformationTrace> {
    let mut frames = Vec::with_capacity(steps);
    let mut per_frame = Vec::with_capacity(steps);
    let mut winding0: Option<i64> = None;
    for j in 0..steps {
        let p = j as f64 / (steps - 1) as f64;
        let frame = if j == 0 {
            fragment.clone()
        } else {
            let positions: Vec<Vec2> = fragment
                .samples
                .iter()
                .map(|s| flow.map_point(s.position, p))
                .collect();
            rebuild_sampled(fragment, positions)
        };
        let max_curvature = frame_max_curvature(&frame);
        let endpoint_residual = frame.samples[0]
            .position
            .distance(fragment.start.position)
            .max(
                frame
                    .samples
                    .last()
                    .unwrap()
                    .position
                    .distance(fragment.end.position),
            );
        if max_curvature > 1.0 + cfg.tol_frame {
            return Err(Error::CurvatureViolation {
                frame: j,
                max_kappa: max_curvature,
            });
        }
        if endpoint_residual > 1e-6 {
            return Err(Error::InvalidInput(format!(
                "frame {j} lost its endpoints (residual {endpoint_residual:.2e})"
            )));
        }
        let winding = winding_number_sampled(&frame, closure)?;
        match winding0 {
            None => winding0 = Some(winding),
            Some(w0) if w0 != winding => {
                return Err(Error::CorruptedLift {
                    residual: (winding - w0) as f64,
                })
            }
            _ => {}
        }
        per_frame.push(FrameStats {
            p,
            max_curvature,
            endpoint_residual,
            winding,
        });
        frames.push(frame);
    }
    Ok(DeformationTrace { frames, per_frame })
}

// ---------------------------------------------------------------------------
// Whole-path normalization
// ---------------------------------------------------------------------------

/// Normalize an arbitrary bounded curvature path to cs form: fragment it,
/// deform each fragment onto its replacement, and concatenate. The returned
/// trace shows the whole path at every stage; its winding number against the
/// pinned closure of the endpoints is constant, and the final cs path shares
/// it.
pub fn normalize_to_cs(
    path: &SampledPath,
    cfg: &EngineConfig,
) -> Result<(CsPath, DeformationTrace)> {
    let report = crate::cs::validate_bounded_curvature(path, cfg.tol_frame)?;
    if !report.valid {
        return Err(Error::InvalidInput(format!(
            "input violates the curvature bound: {report:?}"
        )));
    }
    let closure = ClosurePath::pin(&path.start, &path.end);
    let frag = fragment(path, cfg.target_len, cfg.heading_variation)?;

    // Phase 1: deform every fragment (splitting recursively where the
    // curvature tolerance demands finer pieces).
    let mut deformed: Vec<(SampledPath, DeformationTrace)> = Vec::new();
    for i in 0..frag.fragment_count() {
        let piece = frag.fragment(path, i);
        deformed.extend(deform_with_splits(&piece, cfg, cfg.split_cap)?);
    }

    // Phase 2: stitch global frames. While piece `i` deforms, pieces before
    // it already show their replacement geometry and pieces after it are
    // still original.
    let mut frames: Vec<SampledPath> = Vec::new();
    let mut per_frame: Vec<FrameStats> = Vec::new();
    let mut prefix: Vec<Sample> = Vec::new();
    for i in 0..deformed.len() {
        let suffix = stitched_suffix(&deformed[i + 1..]);
        let trace = &deformed[i].1;
        for (frame, stats) in trace.frames.iter().zip(&trace.per_frame) {
            let stitched = stitch(&prefix, frame, &suffix);
            let winding = winding_number_sampled(&stitched, &closure)?;
            per_frame.push(FrameStats {
                p: stats.p,
                max_curvature: frame_max_curvature(&stitched),
                endpoint_residual: stitched.samples[0]
                    .position
                    .distance(path.start.position)
                    .max(
                        stitched
                            .samples
                            .last()
                            .unwrap()
                            .position
                            .distance(path.end.position),
                    ),
                winding,
            });
            frames.push(stitched);
        }
        // This piece now shows its final geometry; absorb it into the prefix.
        let last = trace.final_frame();
        let offset = prefix.last().map_or(0.0, |s| s.s);
        let skip_first = usize::from(!prefix.is_empty());
        for s in last.samples.iter().skip(skip_first) {
            prefix.push(Sample {
                s: offset + s.s,
                position: s.position,
                heading: s.heading,
            });
        }
    }

    // Assemble the cs path from the per-piece replacements.
    let mut cs: Option<CsPath> = None;
    for (piece, _) in &deformed {
        let repl = replacement_path(&piece.start, &piece.end)?;
        cs = Some(match cs {
            None => repl,
            Some(acc) => acc.concat(&repl)?,
        });
    }
    let cs = cs
        .ok_or_else(|| Error::InsufficientData("no fragments produced".into()))?
        .canonicalized();

    // The normalization must preserve the winding number exactly.
    let w_in = winding_number_sampled(path, &closure)?;
    let w_out = crate::winding::winding_number(&cs, &closure)?;
    if w_in != w_out {
        return Err(Error::CorruptedLift {
            residual: (w_out - w_in) as f64,
        });
    }
    Ok((
        cs,
        DeformationTrace {
            frames,
            per_frame,
        },
    ))
}

/// Deform a fragment, recursively splitting it when a frame violates the
/// curvature tolerance. Returns the pieces actually deformed, in path order,
/// with their traces.
fn deform_with_splits(
    piece: &SampledPath,
    cfg: &EngineConfig,
    splits_left: usize,
) -> Result<Vec<(SampledPath, DeformationTrace)>> {
    let replacement = replacement_path(&piece.start, &piece.end)?;
    match deform_fragment_to_replacement(piece, &replacement, cfg.p_steps, cfg) {
        Ok(trace) => Ok(vec![(piece.clone(), trace)]),
        Err(Error::CurvatureViolation { .. }) if splits_left > 0 && piece.samples.len() >= 7 => {
            let mid = piece.samples.len() / 2;
            let (a, b) = split_sampled(piece, mid);
            let mut out = deform_with_splits(&a, cfg, splits_left - 1)?;
            out.extend(deform_with_splits(&b, cfg, splits_left - 1)?);
            Ok(out)
        }
        Err(e) => Err(e),
    }
}

/// Original samples of the not-yet-deformed pieces, concatenated.
fn stitched_suffix(rest: &[(SampledPath, DeformationTrace)]) -> Vec<Sample> {
    let mut out: Vec<Sample> = Vec::new();
    for (piece, _) in rest {
        let offset = out.last().map_or(0.0, |s| s.s);
        let skip = usize::from(!out.is_empty());
        for s in piece.samples.iter().skip(skip) {
            out.push(Sample {
                s: offset + s.s,
                position: s.position,
                heading: s.heading,
            });
        }
    }
    out
}

fn split_sampled(path: &SampledPath, at: usize) -> (SampledPath, SampledPath) {
    let s_mid = path.samples[at].s;
    let head: Vec<Sample> = path.samples[..=at].to_vec();
    let tail: Vec<Sample> = path.samples[at..]
        .iter()
        .map(|s| Sample {
            s: s.s - s_mid,
            position: s.position,
            heading: s.heading,
        })
        .collect();
    let mid_pose = DirectedPoint::new(path.samples[at].position, path.samples[at].heading);
    (
        SampledPath {
            samples: head,
            step_bound: path.step_bound,
            start: path.start,
            end: mid_pose,
        },
        SampledPath {
            samples: tail,
            step_bound: path.step_bound,
            start: mid_pose,
            end: path.end,
        },
    )
}

/// Concatenate prefix samples, a middle frame, and suffix samples into one
/// sampled path (arc lengths rebased to be strictly increasing).
fn stitch(prefix: &[Sample], middle: &SampledPath, suffix: &[Sample]) -> SampledPath {
    let mut samples: Vec<Sample> = Vec::with_capacity(
        prefix.len() + middle.samples.len() + suffix.len(),
    );
    samples.extend_from_slice(prefix);
    let mut offset = samples.last().map_or(0.0, |s| s.s);
    let skip = usize::from(!samples.is_empty());
    for s in middle.samples.iter().skip(skip) {
        samples.push(Sample {
            s: offset + s.s,
            position: s.position,
            heading: s.heading,
        });
    }
    offset = samples.last().map_or(0.0, |s| s.s);
    let s0 = suffix.first().map_or(0.0, |s| s.s);
    for s in suffix.iter().skip(1) {
        samples.push(Sample {
            s: offset + (s.s - s0),
            position: s.position,
            heading: s.heading,
        });
    }
    let start = DirectedPoint::new(samples[0].position, samples[0].heading);
    let end = DirectedPoint::new(
        samples.last().unwrap().position,
        samples.last().unwrap().heading,
    );
    SampledPath {
        samples,
        step_bound: middle.step_bound,
        start,
        end,
    }
}
