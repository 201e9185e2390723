//! Moves on cs paths: figure-8 insertion (type I), segment pushes (type II),
//! the skew deformation turning an RSL word into an LSR word, and
//! replacement-based complexity reduction.

use std::f64::consts::PI;

use crate::cs::{CsElement, CsPath, SampledPath};
use crate::dubins::solve_all;
use crate::error::{Error, Result};
use crate::geometry::{
    adjacent_circle, common_tangent, Circle, DirectedPoint, Orientation, EPS_GEOM,
};
use crate::winding::{winding_number, ClosurePath};

use super::deform::{DeformationTrace, FrameStats};

/// Insert a figure-8 (a counterclockwise loop followed by a clockwise loop)
/// at an interior point of the path. Endpoints and winding are unchanged;
/// the length grows by `4*pi`.
pub fn type_i_operation(path: &CsPath, axis_s: f64) -> Result<CsPath> {
    let total = path.length();
    if axis_s < EPS_GEOM || axis_s > total - EPS_GEOM {
        return Err(Error::InvalidAxis(format!(
            "axis position {axis_s} too close to the path ends (length {total})"
        )));
    }
    let (head, tail) = path.split_at(axis_s)?;
    let mut elements = head.elements;
    elements.push(CsElement::arc(Orientation::Ccw, 2.0 * PI));
    elements.push(CsElement::arc(Orientation::Cw, 2.0 * PI));
    elements.extend(tail.elements);
    CsPath::new(path.start, elements)
}

/// Inverse of [`type_i_operation`]: remove the first adjacent pair of
/// opposite full loops and re-merge the split element halves.
pub fn collapse_figure_eight(path: &CsPath) -> Result<CsPath> {
    let is_full_loop = |e: &CsElement, o: Orientation| match *e {
        CsElement::Arc { orientation, sweep } => {
            orientation == o && (sweep - 2.0 * PI).abs() < 1e-9
        }
        _ => false,
    };
    for i in 0..path.elements.len().saturating_sub(1) {
        let (a, b) = (&path.elements[i], &path.elements[i + 1]);
        if (is_full_loop(a, Orientation::Ccw) && is_full_loop(b, Orientation::Cw))
            || (is_full_loop(a, Orientation::Cw) && is_full_loop(b, Orientation::Ccw))
        {
            let mut elements = path.elements.clone();
            elements.drain(i..=i + 1);
            return Ok(CsPath::new(path.start, elements)?.canonicalized());
        }
    }
    Err(Error::InvalidInput(
        "no adjacent opposite full-loop pair to collapse".into(),
    ))
}

/// Push the line element at `segment_index` with a unit disk, bowing it out
/// toward `side` to depth `push_depth`. The CSC neighborhood becomes CSCSC;
/// endpoints, winding number and validity are preserved, and the length
/// strictly grows for any positive depth.
pub fn type_ii_operation(
    path: &CsPath,
    segment_index: usize,
    push_depth: f64,
    side: Orientation,
) -> Result<CsPath> {
    if push_depth < 0.0 || !push_depth.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "push depth must be nonnegative, got {push_depth}"
        )));
    }
    if push_depth == 0.0 {
        return Ok(path.clone());
    }
    let Some(CsElement::Line { length }) = path.elements.get(segment_index).copied() else {
        return Err(Error::InvalidParameter(format!(
            "element {segment_index} is not a line"
        )));
    };
    // Poses at the segment ends.
    let s_before: f64 = path.elements[..segment_index].iter().map(|e| e.length()).sum();
    let p0 = path.pose_at(s_before);
    let p1 = path.pose_at(s_before + length);
    let dir = p0.direction();
    let normal = match side {
        Orientation::Ccw => dir.perp_left(),
        Orientation::Cw => dir.perp_right(),
    };
    // The disk pushes from the opposite side; its center starts one unit
    // away (tangent, identity) and crosses the line as the depth grows.
    let mid = p0.position + dir * (length / 2.0);
    let disk = Circle::unit(mid + normal * (push_depth - 1.0), side.opposite());
    let outer_a = adjacent_circle(&p0, side);
    let outer_b = adjacent_circle(&p1, side);
    let t1 = common_tangent(&outer_a, &disk).ok_or_else(|| {
        Error::PushInfeasible(format!(
            "no tangent from the entry circle to the pushed disk (centers {:.3} apart)",
            outer_a.center.distance(disk.center)
        ))
    })?;
    let t2 = common_tangent(&disk, &outer_b).ok_or_else(|| {
        Error::PushInfeasible(format!(
            "no tangent from the pushed disk to the exit circle (centers {:.3} apart)",
            disk.center.distance(outer_b.center)
        ))
    })?;
    let sweep_a = outer_a.sweep_between(outer_a.angle_of(p0.position), t1.from_angle);
    let sweep_m = disk.sweep_between(t1.to_angle, t2.from_angle);
    let sweep_b = outer_b.sweep_between(t2.to_angle, outer_b.angle_of(p1.position));
    let bump = vec![
        CsElement::arc(side, sweep_a),
        CsElement::line(t1.length),
        CsElement::arc(side.opposite(), sweep_m),
        CsElement::line(t2.length),
        CsElement::arc(side, sweep_b),
    ];
    // Turning must cancel exactly for the endpoints to stay fixed.
    let net = side.sign() * (sweep_a + sweep_b) - side.sign() * sweep_m;
    if net.abs() > 1e-6 {
        return Err(Error::PushInfeasible(format!(
            "bump turning does not cancel (net {net:.3e}); depth {push_depth} out of range"
        )));
    }
    let mut elements: Vec<CsElement> = path.elements[..segment_index].to_vec();
    elements.extend(bump);
    elements.extend(path.elements[segment_index + 1..].iter().copied());
    let out = CsPath::new(path.start, elements)?.canonicalized();
    if out.end().c1_distance(&path.end()) > 1e-9 {
        return Err(Error::PushInfeasible(
            "pushed path misses the original endpoint".into(),
        ));
    }
    Ok(out)
}

/// Deform an RSL word into an LSR word, when the middle segment is long
/// enough: grow a figure-8 at the segment midpoint, separate the loops,
/// slide them to the endpoint circles, and unfold.
pub fn skew_homotopy(path: &CsPath, p_steps: usize) -> Result<DeformationTrace> {
    let elems = &path.elements;
    let (a, ell, b) = match elems.as_slice() {
        [CsElement::Arc {
            orientation: Orientation::Cw,
            sweep: a,
        }, CsElement::Line { length }, CsElement::Arc {
            orientation: Orientation::Ccw,
            sweep: b,
        }] => (*a, *length, *b),
        _ => {
            return Err(Error::InvalidInput(
                "skew deformation expects an RSL word".into(),
            ))
        }
    };
    // The figure-8 gadget consumes up to 4 units of segment length while it
    // grows.
    if ell < 4.0 + 1e-9 {
        return Err(Error::SkewInfeasible(format!(
            "middle segment length {ell:.3} < 4; the twist cannot complete"
        )));
    }
    let x = path.start;
    let y = path.end();
    let closure = ClosurePath::pin(&x, &y);
    let steps = p_steps.max(8);
    let mut frames_cs: Vec<CsPath> = Vec::new();

    // Stage 1: twist the midpoint into a figure-8. The palindromic gadget
    // L(phi) R(2 phi) L(phi) displaces by 4 sin(phi) along the segment.
    for j in 0..=steps {
        let phi = PI * j as f64 / steps as f64;
        let rest = (ell - 4.0 * phi.sin()) / 2.0;
        frames_cs.push(CsPath::new(
            x,
            vec![
                CsElement::arc(Orientation::Cw, a),
                CsElement::line(rest),
                CsElement::arc(Orientation::Ccw, phi),
                CsElement::arc(Orientation::Cw, 2.0 * phi),
                CsElement::arc(Orientation::Ccw, phi),
                CsElement::line(rest),
                CsElement::arc(Orientation::Ccw, b),
            ],
        )?);
    }
    // Stage 2: roll the clockwise loop around the counterclockwise one until
    // the loops sit side by side at the midpoint.
    for j in 1..=steps {
        let psi = PI * j as f64 / steps as f64;
        frames_cs.push(CsPath::new(
            x,
            vec![
                CsElement::arc(Orientation::Cw, a),
                CsElement::line(ell / 2.0),
                CsElement::arc(Orientation::Ccw, PI + psi),
                CsElement::arc(Orientation::Cw, 2.0 * PI),
                CsElement::arc(Orientation::Ccw, PI - psi),
                CsElement::line(ell / 2.0),
                CsElement::arc(Orientation::Ccw, b),
            ],
        )?);
    }
    // Stage 3: slide the loops to the ends of the segment.
    for j in 1..=steps {
        let f = j as f64 / steps as f64;
        let outer = (1.0 - f) * ell / 2.0;
        let inner = ell - 2.0 * outer;
        frames_cs.push(CsPath::new(
            x,
            vec![
                CsElement::arc(Orientation::Cw, a),
                CsElement::line(outer),
                CsElement::arc(Orientation::Ccw, 2.0 * PI),
                CsElement::line(inner),
                CsElement::arc(Orientation::Cw, 2.0 * PI),
                CsElement::line(outer),
                CsElement::arc(Orientation::Ccw, b),
            ],
        )?);
    }
    // Stage 4: unfold. Shrinking the original outer arcs rotates the loop
    // circles around the endpoint circles; the middle segment re-aims as the
    // inner tangent of the two loop circles, and the loop sweeps unwind from
    // 2*pi to the final LSR arcs.
    let mut prev_lambda = 2.0 * PI;
    let mut prev_rho = 2.0 * PI;
    for j in 1..=steps {
        let f = j as f64 / steps as f64;
        let r1 = a * (1.0 - f);
        let r2 = b * (1.0 - f);
        // Pose after the shrunk entry arc; the loop circle is its left
        // adjacent circle.
        let entry = CsPath::new(x, vec![CsElement::arc(Orientation::Cw, r1)])?;
        let p_loop = entry.end();
        let c_left = adjacent_circle(&p_loop, Orientation::Ccw);
        // Pose where the exit arc begins, walked backward from y; the loop
        // circle is its right adjacent circle.
        let (ly, _) = (adjacent_circle(&y, Orientation::Ccw), ());
        let exit_start_angle = ly.angle_of(y.position) - r2;
        let q_loop = DirectedPoint::new(ly.point_at(exit_start_angle), y.heading - r2);
        let c_right = adjacent_circle(&q_loop, Orientation::Cw);
        let tangent = common_tangent(&c_left, &c_right).ok_or_else(|| {
            Error::SkewInfeasible(format!(
                "loop circles come closer than 2 while unfolding (distance {:.3})",
                c_left.center.distance(c_right.center)
            ))
        })?;
        let lambda_base =
            c_left.sweep_between(c_left.angle_of(p_loop.position), tangent.from_angle);
        let rho_base = c_right.sweep_between(tangent.to_angle, c_right.angle_of(q_loop.position));
        let lambda = unwrap_near(lambda_base, prev_lambda);
        let rho = unwrap_near(rho_base, prev_rho);
        if !(0.0..=4.0 * PI).contains(&lambda) || !(0.0..=4.0 * PI).contains(&rho) {
            return Err(Error::SkewInfeasible(format!(
                "unfold sweeps left the valid band (lambda {lambda:.3}, rho {rho:.3})"
            )));
        }
        prev_lambda = lambda;
        prev_rho = rho;
        frames_cs.push(CsPath::new(
            x,
            vec![
                CsElement::arc(Orientation::Cw, r1),
                CsElement::arc(Orientation::Ccw, lambda),
                CsElement::line(tangent.length),
                CsElement::arc(Orientation::Cw, rho),
                CsElement::arc(Orientation::Ccw, r2),
            ],
        )?);
    }

    // Validate and sample every frame.
    let mut frames: Vec<SampledPath> = Vec::new();
    let mut per_frame: Vec<FrameStats> = Vec::new();
    let mut w0: Option<i64> = None;
    for (j, cs) in frames_cs.iter().enumerate() {
        if cs.end().c1_distance(&y) > 1e-6 {
            return Err(Error::SkewInfeasible(format!(
                "frame {j} misses the endpoint by {:.2e}",
                cs.end().c1_distance(&y)
            )));
        }
        let winding = winding_number(cs, &closure)?;
        match w0 {
            None => w0 = Some(winding),
            Some(w) if w != winding => {
                return Err(Error::CorruptedLift {
                    residual: (winding - w) as f64,
                })
            }
            _ => {}
        }
        let has_arc = cs.elements.iter().any(CsElement::is_arc);
        per_frame.push(FrameStats {
            p: j as f64 / (frames_cs.len() - 1) as f64,
            max_curvature: if has_arc { 1.0 } else { 0.0 },
            endpoint_residual: cs.end().position.distance(y.position),
            winding,
        });
        frames.push(cs.sample(0.05)?);
    }
    // The final frame must be an LSR word.
    let last = frames_cs.last().unwrap().canonicalized();
    let word_ok = matches!(
        last.elements.as_slice(),
        [CsElement::Arc {
            orientation: Orientation::Ccw,
            ..
        }, CsElement::Line { .. }, CsElement::Arc {
            orientation: Orientation::Cw,
            ..
        }]
    );
    if !word_ok {
        return Err(Error::SkewInfeasible(format!(
            "unfold did not terminate in an LSR word: {:?}",
            last.elements
        )));
    }
    Ok(DeformationTrace { frames, per_frame })
}

fn unwrap_near(base: f64, prev: f64) -> f64 {
    let mut best = base;
    let mut best_gap = (base - prev).abs();
    for k in 1..=2 {
        let cand = base + 2.0 * PI * k as f64;
        let gap = (cand - prev).abs();
        if gap < best_gap {
            best = cand;
            best_gap = gap;
        }
    }
    best
}

/// Repeatedly simplify a cs path: merge mergeable neighbors, then replace
/// any short window of components by a strictly simpler candidate of equal
/// turning and no greater length. Terminates because complexity strictly
/// decreases each round.
pub fn reduce_complexity(path: &CsPath) -> CsPath {
    let mut current = path.canonicalized();
    loop {
        let merged = current.canonicalized();
        if merged.complexity() < current.complexity() {
            current = merged;
            continue;
        }
        match reduce_one_window(&current) {
            Some(next) => current = next,
            None => return current,
        }
    }
}

fn reduce_one_window(path: &CsPath) -> Option<CsPath> {
    let m = path.elements.len();
    for window in (2..=5.min(m)).rev() {
        for start in 0..=(m - window) {
            let s0: f64 = path.elements[..start].iter().map(|e| e.length()).sum();
            let s1: f64 = s0
                + path.elements[start..start + window]
                    .iter()
                    .map(|e| e.length())
                    .sum::<f64>();
            let a = path.pose_at(s0);
            let b = path.pose_at(s1);
            let window_len = s1 - s0;
            let window_turning: f64 = path.elements[start..start + window]
                .iter()
                .map(|e| e.turning())
                .sum();
            for cand in solve_all(&a, &b) {
                let Some(sub) = cand.path else { continue };
                if sub.complexity() >= window
                    || sub.length() > window_len + 1e-9
                    || (sub.total_turning() - window_turning).abs() > 1e-9
                {
                    continue;
                }
                let mut elements: Vec<CsElement> = path.elements[..start].to_vec();
                elements.extend(sub.elements.iter().copied());
                elements.extend(path.elements[start + window..].iter().copied());
                let out = CsPath {
                    start: path.start,
                    elements,
                };
                if out.end().c1_distance(&path.end()) < 1e-6 {
                    return Some(out);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dubins::minimal_path;
    use crate::geometry::Orientation::{Ccw, Cw};
    use crate::winding::winding_number;

    fn dp(x: f64, y: f64, h: f64) -> DirectedPoint {
        DirectedPoint::from_xyh(x, y, h)
    }

    fn lsl_example() -> CsPath {
        CsPath::new(
            dp(0.0, 0.0, 0.0),
            vec![
                CsElement::arc(Ccw, 0.8),
                CsElement::line(5.0),
                CsElement::arc(Ccw, 0.4),
            ],
        )
        .unwrap()
    }

    #[test]
    fn type_i_preserves_winding_and_adds_length() {
        let p = lsl_example();
        let closure = ClosurePath::pin(&p.start, &p.end());
        let n0 = winding_number(&p, &closure).unwrap();
        let twisted = type_i_operation(&p, p.length() / 2.0).unwrap();
        assert!(twisted.end().c1_distance(&p.end()) < 1e-9);
        assert!((twisted.length() - p.length() - 4.0 * PI).abs() < 1e-9);
        assert_eq!(winding_number(&twisted, &closure).unwrap(), n0);
    }

    #[test]
    fn type_i_round_trips_through_collapse() {
        let p = lsl_example();
        let twisted = type_i_operation(&p, 2.0).unwrap();
        let back = collapse_figure_eight(&twisted).unwrap();
        assert_eq!(back.complexity(), p.complexity());
        assert!((back.length() - p.length()).abs() < 1e-9);
        assert!(back.end().c1_distance(&p.end()) < 1e-9);
    }

    #[test]
    fn type_i_rejects_axis_at_ends() {
        let p = lsl_example();
        assert!(matches!(
            type_i_operation(&p, 0.0),
            Err(Error::InvalidAxis(_))
        ));
        assert!(matches!(
            type_i_operation(&p, p.length()),
            Err(Error::InvalidAxis(_))
        ));
    }

    #[test]
    fn type_ii_zero_depth_is_identity() {
        let p = lsl_example();
        let out = type_ii_operation(&p, 1, 0.0, Ccw).unwrap();
        assert_eq!(out, p);
    }

    #[test]
    fn type_ii_push_on_straight_path_gives_cscsc() {
        // The minimal path for the far parallel pair is a pure segment.
        let x = dp(0.0, 0.0, 0.0);
        let y = dp(4.0, 0.0, 0.0);
        let p = minimal_path(&x, &y).path().clone();
        assert_eq!(p.complexity(), 1);
        let pushed = type_ii_operation(&p, 0, 0.2, Cw).unwrap();
        assert_eq!(pushed.complexity(), 5, "{pushed:?}");
        assert!(pushed.length() > p.length());
        assert!(pushed.end().c1_distance(&y) < 1e-9);
        // Winding preserved.
        let closure = ClosurePath::pin(&x, &y);
        assert_eq!(
            winding_number(&pushed, &closure).unwrap(),
            winding_number(&p, &closure).unwrap()
        );
    }

    #[test]
    fn type_ii_depth_grows_length_without_bound() {
        let x = dp(0.0, 0.0, 0.0);
        let y = dp(4.0, 0.0, 0.0);
        let p = minimal_path(&x, &y).path().clone();
        let mut last_len = p.length();
        for depth in [1.0, 4.0, 16.0, 64.0] {
            let pushed = type_ii_operation(&p, 0, depth, Cw).unwrap();
            assert!(pushed.length() > last_len);
            last_len = pushed.length();
        }
        assert!(last_len > 100.0, "deep pushes reach length {last_len}");
    }

    #[test]
    fn skew_turns_rsl_into_lsr() {
        let rsl = CsPath::new(
            dp(0.0, 0.0, 0.0),
            vec![
                CsElement::arc(Cw, 0.9),
                CsElement::line(6.0),
                CsElement::arc(Ccw, 0.7),
            ],
        )
        .unwrap();
        let trace = skew_homotopy(&rsl, 24).unwrap();
        let w: Vec<i64> = trace.per_frame.iter().map(|f| f.winding).collect();
        assert!(w.windows(2).all(|p| p[0] == p[1]), "{w:?}");
        let last = trace.final_frame();
        assert!(last.end.c1_distance(&rsl.end()) < 1e-6);
    }

    #[test]
    fn skew_infeasible_on_short_segment() {
        let rsl = CsPath::new(
            dp(0.0, 0.0, 0.0),
            vec![
                CsElement::arc(Cw, 0.9),
                CsElement::line(1.5),
                CsElement::arc(Ccw, 0.7),
            ],
        )
        .unwrap();
        assert!(matches!(
            skew_homotopy(&rsl, 16),
            Err(Error::SkewInfeasible(_))
        ));
    }

    #[test]
    fn reduce_is_identity_on_minimal_paths() {
        let x = dp(0.0, 0.0, 0.4);
        let y = dp(3.0, 2.0, -0.7);
        let p = minimal_path(&x, &y).path().clone();
        let reduced = reduce_complexity(&p);
        assert_eq!(reduced.complexity(), p.complexity());
        assert!((reduced.length() - p.length()).abs() < 1e-9);
    }

    #[test]
    fn reduce_collapses_collinear_split_segments() {
        // CSC with its segment split by a zero-turn joint (the zero arc is
        // dropped at construction, leaving two collinear segments).
        let p = CsPath::new(
            dp(0.0, 0.0, 0.0),
            vec![
                CsElement::arc(Ccw, 0.5),
                CsElement::line(1.5),
                CsElement::arc(Ccw, 0.0),
                CsElement::line(1.5),
                CsElement::arc(Cw, 0.5),
            ],
        )
        .unwrap();
        assert_eq!(p.complexity(), 4);
        let reduced = reduce_complexity(&p);
        assert_eq!(reduced.complexity(), 3);
        assert!(reduced.length() <= p.length() + 1e-12);
        assert!(reduced.end().c1_distance(&p.end()) < 1e-9);
    }

    #[test]
    fn reduce_undoes_a_push() {
        let x = dp(0.0, 0.0, 0.0);
        let y = dp(4.0, 0.0, 0.0);
        let p = minimal_path(&x, &y).path().clone();
        let pushed = type_ii_operation(&p, 0, 0.3, Ccw).unwrap();
        assert!(pushed.complexity() > p.complexity());
        let reduced = reduce_complexity(&pushed);
        assert!(reduced.complexity() < pushed.complexity());
        assert!(reduced.length() <= pushed.length() + 1e-9);
        assert!(reduced.end().c1_distance(&y) < 1e-9);
    }

    #[test]
    fn reduce_never_removes_loops() {
        // A loop changes the turning; reduction must keep it.
        let p = CsPath::new(
            dp(0.0, 0.0, 0.0),
            vec![
                CsElement::line(2.0),
                CsElement::arc(Ccw, 2.0 * PI),
                CsElement::line(2.0),
            ],
        )
        .unwrap();
        let reduced = reduce_complexity(&p);
        assert!((reduced.total_turning() - p.total_turning()).abs() < 1e-9);
        assert!((reduced.length() - p.length()).abs() < 1e-9);
    }
}
