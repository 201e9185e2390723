//! Subdivision of bounded curvature paths into short fragments and the
//! replacement paths they deform onto.
//!
//! Every fragment is shorter than 1 and additionally keeps its heading
//! variation under a configured bound, which keeps the projection flows in
//! the regime where their curvature drift has a definite sign. A fragment
//! starting at `z` never leaves the region `R(z)` (inside the closed unit
//! disk at `z`, outside both open adjacent disks), and its endpoint pair
//! always admits a CSC replacement whose arcs are shorter than pi.

use serde::{Deserialize, Serialize};

use crate::cs::{CsElement, CsPath, SampledPath};
use crate::dubins::solve_all;
use crate::error::{Error, Result};
use crate::geometry::{adjacent_circles, DirectedPoint, Vec2, EPS_GEOM};

/// Default heading variation bound per fragment, in radians.
pub const DEFAULT_HEADING_VARIATION: f64 = 0.2;

/// A fragmentation: cut positions along a sampled path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fragmentation {
    /// Arc lengths of the cuts: `0 = t_0 < t_1 < ... < t_m = s`.
    pub times: Vec<f64>,
    /// Sample indices of the cuts.
    pub cut_indices: Vec<usize>,
    pub max_fragment_length: f64,
    /// Heading variation bound each fragment satisfies.
    pub fineness: f64,
}

impl Fragmentation {
    pub fn fragment_count(&self) -> usize {
        self.times.len() - 1
    }

    /// Fragment lengths (they sum to the path length exactly).
    pub fn lengths(&self) -> Vec<f64> {
        self.times.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Extract fragment `i` as a standalone sampled path with arc length
    /// rebased to zero.
    pub fn fragment(&self, path: &SampledPath, i: usize) -> SampledPath {
        let (lo, hi) = (self.cut_indices[i], self.cut_indices[i + 1]);
        let s0 = path.samples[lo].s;
        let samples: Vec<_> = path.samples[lo..=hi]
            .iter()
            .map(|s| crate::cs::Sample {
                s: s.s - s0,
                position: s.position,
                heading: s.heading,
            })
            .collect();
        let start = DirectedPoint::new(samples[0].position, samples[0].heading);
        let end = DirectedPoint::new(
            samples.last().unwrap().position,
            samples.last().unwrap().heading,
        );
        SampledPath {
            samples,
            step_bound: path.step_bound,
            start,
            end,
        }
    }
}

/// Cut a sampled path into fragments of length at most `target_len` (< 1)
/// whose heading variation stays below `heading_variation`.
pub fn fragment(
    path: &SampledPath,
    target_len: f64,
    heading_variation: f64,
) -> Result<Fragmentation> {
    if target_len.is_nan() || target_len <= 0.0 || target_len >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "fragment target length must lie in (0, 1), got {target_len}"
        )));
    }
    if heading_variation.is_nan() || heading_variation <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "heading variation bound must be positive, got {heading_variation}"
        )));
    }
    if path.samples.len() < 2 {
        return Err(Error::InsufficientData(
            "fragmentation needs at least two samples".into(),
        ));
    }
    if path.step_bound > target_len / 4.0 {
        return Err(Error::InvalidParameter(format!(
            "sample spacing {} too coarse for fragments of length {}",
            path.step_bound, target_len
        )));
    }
    let mut cut_indices = vec![0usize];
    let mut times = vec![0.0];
    let mut frag_start_s = 0.0;
    let mut lift = path.samples[0].heading;
    let mut lift_min = lift;
    let mut lift_max = lift;
    for i in 1..path.samples.len() {
        let w = &path.samples[i];
        lift += crate::geometry::normalize_angle(w.heading - path.samples[i - 1].heading);
        let new_min = lift_min.min(lift);
        let new_max = lift_max.max(lift);
        let too_long = w.s - frag_start_s > target_len;
        let too_bent = new_max - new_min > heading_variation;
        let last = i == path.samples.len() - 1;
        if (too_long || too_bent) && !last {
            // Cut at the previous sample; the current one opens a fragment.
            let cut = i - 1;
            if cut > *cut_indices.last().unwrap() {
                cut_indices.push(cut);
                times.push(path.samples[cut].s);
                frag_start_s = path.samples[cut].s;
                lift_min = lift;
                lift_max = lift;
                continue;
            }
        }
        lift_min = new_min;
        lift_max = new_max;
    }
    cut_indices.push(path.samples.len() - 1);
    times.push(path.samples.last().unwrap().s);
    Ok(Fragmentation {
        times,
        cut_indices,
        max_fragment_length: target_len,
        fineness: heading_variation,
    })
}

/// The region a fragment starting at `z` can never leave: the closed unit
/// disk centered at `z` minus the interiors of the two adjacent disks.
#[derive(Debug, Clone, Copy)]
pub struct RegionRz {
    pub z: DirectedPoint,
    left_center: Vec2,
    right_center: Vec2,
}

impl RegionRz {
    pub fn new(z: DirectedPoint) -> RegionRz {
        let (l, r) = adjacent_circles(&z);
        RegionRz {
            z,
            left_center: l.center,
            right_center: r.center,
        }
    }

    /// Exact membership: inside the closed unit disk at `z` and outside both
    /// open adjacent disks.
    pub fn contains(&self, p: Vec2) -> bool {
        p.distance(self.z.position) <= 1.0 + EPS_GEOM
            && p.distance(self.left_center) >= 1.0 - EPS_GEOM
            && p.distance(self.right_center) >= 1.0 - EPS_GEOM
    }
}

/// The CSC path a fragment deforms onto: minimal among the CSC words whose
/// circular components are both shorter than pi. Exists for every genuine
/// fragment endpoint pair.
pub fn replacement_path(start: &DirectedPoint, end: &DirectedPoint) -> Result<CsPath> {
    let mut best: Option<CsPath> = None;
    for cand in solve_all(start, end) {
        if cand.word.is_ccc() {
            continue;
        }
        let Some(path) = cand.path else { continue };
        let arcs_short = path.elements.iter().all(|e| match e {
            CsElement::Arc { sweep, .. } => *sweep < std::f64::consts::PI - EPS_GEOM,
            CsElement::Line { .. } => true,
        });
        if !arcs_short {
            continue;
        }
        let better = best
            .as_ref()
            .is_none_or(|b| path.length() < b.length() - EPS_GEOM);
        if better {
            best = Some(path);
        }
    }
    best.ok_or_else(|| {
        Error::FragmentInvalid(format!(
            "no short-arc replacement exists between {:?} and {:?}",
            start, end
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Orientation::{Ccw, Cw};
    use crate::proximity::{classify, Condition};

    fn dp(x: f64, y: f64, h: f64) -> DirectedPoint {
        DirectedPoint::from_xyh(x, y, h)
    }

    fn wiggly_path() -> CsPath {
        CsPath::new(
            dp(0.0, 0.0, 0.0),
            vec![
                CsElement::arc(Ccw, 0.8),
                CsElement::line(1.2),
                CsElement::arc(Cw, 1.1),
                CsElement::line(0.5),
                CsElement::arc(Ccw, 0.4),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fragments_are_short_and_sum_to_total() {
        let p = wiggly_path();
        let sp = p.sample(0.02).unwrap();
        let f = fragment(&sp, 0.9, 10.0).unwrap(); // length-limited only
        assert!(f.fragment_count() >= 4, "pigeonhole: {}", f.fragment_count());
        let lengths = f.lengths();
        assert!(lengths.iter().all(|&l| l < 1.0));
        let total: f64 = lengths.iter().sum();
        assert!((total - p.length()).abs() < 1e-9);
    }

    #[test]
    fn fragments_satisfy_condition_d() {
        let p = wiggly_path();
        let sp = p.sample(0.02).unwrap();
        let f = fragment(&sp, 0.5, DEFAULT_HEADING_VARIATION).unwrap();
        for i in 0..f.fragment_count() {
            let frag = f.fragment(&sp, i);
            let r = classify(&frag.start, &frag.end);
            assert_eq!(r.condition, Condition::D, "fragment {i}: {r:?}");
        }
    }

    #[test]
    fn fragment_samples_stay_in_region_rz() {
        let p = wiggly_path();
        let sp = p.sample(0.02).unwrap();
        let f = fragment(&sp, 0.5, DEFAULT_HEADING_VARIATION).unwrap();
        for i in 0..f.fragment_count() {
            let frag = f.fragment(&sp, i);
            let region = RegionRz::new(frag.start);
            for s in &frag.samples {
                assert!(region.contains(s.position), "fragment {i} sample {s:?}");
            }
        }
    }

    #[test]
    fn replacement_reproduces_straight_fragment() {
        let start = dp(0.0, 0.0, 0.0);
        let end = dp(0.4, 0.0, 0.0);
        let r = replacement_path(&start, &end).unwrap();
        assert_eq!(r.complexity(), 1);
        assert!((r.length() - 0.4).abs() < 1e-9);
    }

    #[test]
    fn replacement_for_quarter_arc_has_short_arcs() {
        let arc = CsPath::new(dp(0.0, 0.0, 0.0), vec![CsElement::arc(Ccw, 0.5)]).unwrap();
        let r = replacement_path(&arc.start, &arc.end()).unwrap();
        assert!(r.end().c1_distance(&arc.end()) < 1e-9);
        for e in &r.elements {
            if let CsElement::Arc { sweep, .. } = e {
                assert!(*sweep < std::f64::consts::PI);
            }
        }
    }

    #[test]
    fn fragmentation_rejects_bad_parameters() {
        let sp = wiggly_path().sample(0.02).unwrap();
        assert!(fragment(&sp, 0.0, 0.2).is_err());
        assert!(fragment(&sp, 1.0, 0.2).is_err());
        assert!(fragment(&sp, 0.5, 0.0).is_err());
        let coarse = wiggly_path().sample(0.4).unwrap();
        assert!(fragment(&coarse, 0.5, 0.2).is_err());
    }
}
