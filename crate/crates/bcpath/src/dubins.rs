//! Analytic shortest bounded-curvature paths between directed points.
//!
//! The six candidate words (LSL, RSR, LSR, RSL, LRL, RLR) are built
//! constructively from tangent lines and tangent circles between the
//! endpoints' adjacent circles, never from precomputed trigonometric tables,
//! so degenerate cases (coincident circles, zero segments) fall out of the
//! predicates. A CCC word competes for the minimum only when its middle arc
//! exceeds pi; shorter-middle variants are still returned, flagged, because
//! the classifier uses them as deformation targets.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cs::{CsElement, CsPath};
use crate::error::{Error, Result};
use crate::geometry::{
    adjacent_circle, common_tangent, tangent_circle_centers, Circle, DirectedPoint, Orientation,
    EPS_GEOM,
};
use crate::winding::{winding_number, ClosurePath};

/// The six Dubins words in canonical tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DubinsWord {
    Lsl,
    Rsr,
    Lsr,
    Rsl,
    Lrl,
    Rlr,
}

impl DubinsWord {
    pub const ALL: [DubinsWord; 6] = [
        DubinsWord::Lsl,
        DubinsWord::Rsr,
        DubinsWord::Lsr,
        DubinsWord::Rsl,
        DubinsWord::Lrl,
        DubinsWord::Rlr,
    ];

    /// Position in the canonical order LSL < RSR < LSR < RSL < LRL < RLR.
    pub fn canonical_rank(self) -> usize {
        Self::ALL.iter().position(|&w| w == self).unwrap()
    }

    pub fn is_ccc(self) -> bool {
        matches!(self, DubinsWord::Lrl | DubinsWord::Rlr)
    }

    /// (first, last) turn orientations.
    fn outer_orientations(self) -> (Orientation, Orientation) {
        use Orientation::{Ccw, Cw};
        match self {
            DubinsWord::Lsl => (Ccw, Ccw),
            DubinsWord::Rsr => (Cw, Cw),
            DubinsWord::Lsr => (Ccw, Cw),
            DubinsWord::Rsl => (Cw, Ccw),
            DubinsWord::Lrl => (Ccw, Ccw),
            DubinsWord::Rlr => (Cw, Cw),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DubinsWord::Lsl => "LSL",
            DubinsWord::Rsr => "RSR",
            DubinsWord::Lsr => "LSR",
            DubinsWord::Rsl => "RSL",
            DubinsWord::Lrl => "LRL",
            DubinsWord::Rlr => "RLR",
        }
    }
}

/// One evaluated word.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DubinsCandidate {
    pub word: DubinsWord,
    /// Constructed path; `None` when the word's tangent construction does not
    /// exist for this endpoint condition.
    pub path: Option<CsPath>,
    pub length: f64,
    /// The construction exists (tangent or tangent circle found).
    pub feasible: bool,
    /// May compete for the global minimum: CSC always, CCC only with middle
    /// arc longer than pi.
    pub minimizer_eligible: bool,
    /// Middle arc sweep for CCC words.
    pub middle_sweep: Option<f64>,
}

impl DubinsCandidate {
    fn infeasible(word: DubinsWord) -> Self {
        DubinsCandidate {
            word,
            path: None,
            length: f64::INFINITY,
            feasible: false,
            minimizer_eligible: false,
            middle_sweep: None,
        }
    }
}

/// Residual allowed between a constructed candidate's endpoint and the goal.
const ENDPOINT_RESIDUAL: f64 = 1e-9;

/// Evaluate all six words. Infeasibility is data, not an error.
pub fn solve_all(x: &DirectedPoint, y: &DirectedPoint) -> Vec<DubinsCandidate> {
    DubinsWord::ALL
        .iter()
        .map(|&w| solve_word(x, y, w))
        .collect()
}

/// Construct a single word.
pub fn solve_word(x: &DirectedPoint, y: &DirectedPoint, word: DubinsWord) -> DubinsCandidate {
    let (o1, o2) = word.outer_orientations();
    let c1 = adjacent_circle(x, o1);
    let c2 = adjacent_circle(y, o2);
    let candidate = if word.is_ccc() {
        solve_ccc(x, y, word, &c1, &c2)
    } else {
        solve_csc(x, y, word, &c1, &c2)
    };
    match candidate {
        Some(c) => c,
        None => DubinsCandidate::infeasible(word),
    }
}

fn solve_csc(
    x: &DirectedPoint,
    y: &DirectedPoint,
    word: DubinsWord,
    c1: &Circle,
    c2: &Circle,
) -> Option<DubinsCandidate> {
    let (o1, o2) = word.outer_orientations();
    let elements = if c1.orientation == c2.orientation
        && c1.center.distance(c2.center) < EPS_GEOM
    {
        // Coincident same-orientation circles: the word degenerates to a
        // single arc (possibly of zero sweep when x = y).
        let sweep = c1.sweep_between(c1.angle_of(x.position), c1.angle_of(y.position));
        vec![CsElement::arc(o1, sweep)]
    } else {
        let tangent = common_tangent(c1, c2)?;
        let sweep1 = c1.sweep_between(c1.angle_of(x.position), tangent.from_angle);
        let sweep2 = c2.sweep_between(tangent.to_angle, c2.angle_of(y.position));
        vec![
            CsElement::arc(o1, sweep1),
            CsElement::line(tangent.length),
            CsElement::arc(o2, sweep2),
        ]
    };
    finish_candidate(x, y, word, elements, None)
}

fn solve_ccc(
    x: &DirectedPoint,
    y: &DirectedPoint,
    word: DubinsWord,
    c1: &Circle,
    c2: &Circle,
) -> Option<DubinsCandidate> {
    let (o1, o2) = word.outer_orientations();
    let om = o1.opposite();
    let mut best: Option<DubinsCandidate> = None;
    for c3_center in tangent_circle_centers(c1.center, c2.center) {
        let c3 = Circle::unit(c3_center, om);
        // Tangency points sit midway between centers (both unit radius).
        let t1 = c1.center + (c3.center - c1.center) * 0.5;
        let t2 = c2.center + (c3.center - c2.center) * 0.5;
        let sweep1 = c1.sweep_between(c1.angle_of(x.position), c1.angle_of(t1));
        let sweep_m = c3.sweep_between(c3.angle_of(t1), c3.angle_of(t2));
        let sweep2 = c2.sweep_between(c2.angle_of(t2), c2.angle_of(y.position));
        let elements = vec![
            CsElement::arc(o1, sweep1),
            CsElement::arc(om, sweep_m),
            CsElement::arc(o2, sweep2),
        ];
        if let Some(c) = finish_candidate(x, y, word, elements, Some(sweep_m)) {
            let better = match &best {
                None => true,
                // Prefer eligible variants, then shorter length.
                Some(b) => match (c.minimizer_eligible, b.minimizer_eligible) {
                    (true, false) => true,
                    (false, true) => false,
                    _ => c.length < b.length,
                },
            };
            if better {
                best = Some(c);
            }
        }
    }
    best
}

fn finish_candidate(
    x: &DirectedPoint,
    y: &DirectedPoint,
    word: DubinsWord,
    elements: Vec<CsElement>,
    middle_sweep: Option<f64>,
) -> Option<DubinsCandidate> {
    let path = CsPath::new(*x, elements).ok()?;
    // Constructions are verified, never trusted: a candidate that misses the
    // goal is reported infeasible.
    if path.end().c1_distance(y) > ENDPOINT_RESIDUAL {
        return None;
    }
    let minimizer_eligible = match middle_sweep {
        Some(m) => m > PI,
        None => true,
    };
    Some(DubinsCandidate {
        word,
        length: path.length(),
        path: Some(path),
        feasible: true,
        minimizer_eligible,
        middle_sweep,
    })
}

/// The minimal-length path and any length ties.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimalPath {
    /// All minimizers within the geometric tolerance, canonical word order
    /// first.
    pub minimizers: Vec<DubinsCandidate>,
    /// More than one word attains the minimum.
    pub multiple: bool,
}

impl MinimalPath {
    /// The canonical minimizer.
    pub fn primary(&self) -> &DubinsCandidate {
        &self.minimizers[0]
    }

    pub fn path(&self) -> &CsPath {
        self.primary().path.as_ref().unwrap()
    }

    pub fn length(&self) -> f64 {
        self.primary().length
    }
}

/// Minimal-length bounded curvature path from `x` to `y`: the shortest
/// eligible candidate among the six words. At least one CSC word is always
/// feasible, so this cannot fail.
pub fn minimal_path(x: &DirectedPoint, y: &DirectedPoint) -> MinimalPath {
    let mut eligible: Vec<DubinsCandidate> = solve_all(x, y)
        .into_iter()
        .filter(|c| c.feasible && c.minimizer_eligible)
        .collect();
    debug_assert!(!eligible.is_empty(), "no feasible Dubins word");
    let best = eligible
        .iter()
        .map(|c| c.length)
        .fold(f64::INFINITY, f64::min);
    eligible.retain(|c| c.length <= best + EPS_GEOM);
    eligible.sort_by_key(|c| c.word.canonical_rank());
    let multiple = eligible.len() > 1;
    MinimalPath {
        minimizers: eligible,
        multiple,
    }
}

/// Where extra full loops may be attached to a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LoopSite {
    /// Prepend loops on an adjacent circle of the start pose.
    Start(Orientation),
    /// Append loops on an adjacent circle of the end pose.
    End(Orientation),
    /// Stack loops onto an existing arc element (same circle).
    Element(usize),
}

/// Insert `count` full loops of the site's orientation.
fn with_loops(base: &CsPath, site: LoopSite, orientation: Orientation, count: u32) -> CsPath {
    let loop_elem = CsElement::arc(orientation, 2.0 * PI);
    let mut elements = base.elements.clone();
    let at = match site {
        LoopSite::Start(_) => 0,
        LoopSite::End(_) => elements.len(),
        LoopSite::Element(i) => i,
    };
    for _ in 0..count {
        elements.insert(at, loop_elem);
    }
    CsPath {
        start: base.start,
        elements,
    }
}

/// All enumerated candidates in the winding class `n`: base words plus up to
/// `loop_cap` full loops placed on the first, middle, or last circular
/// component (or freshly attached at either endpoint circle). Sorted by
/// length; every returned path has winding number exactly `n` (verified).
pub fn in_class_candidates(
    x: &DirectedPoint,
    y: &DirectedPoint,
    closure: &ClosurePath,
    n: i64,
    loop_cap: u32,
) -> Result<Vec<CsPath>> {
    let mut out: Vec<CsPath> = Vec::new();
    let mut consider = |candidate: CsPath| -> Result<()> {
        if winding_number(&candidate, closure)? == n {
            out.push(candidate);
        }
        Ok(())
    };

    for base in solve_all(x, y) {
        let Some(path) = base.path else { continue };
        let base_w = winding_number(&path, closure)?;
        if base_w == n {
            consider(path.clone())?;
            continue;
        }
        let diff = n - base_w;
        let orientation = if diff > 0 {
            Orientation::Ccw
        } else {
            Orientation::Cw
        };
        let count = diff.unsigned_abs() as u32;
        if count > loop_cap {
            continue;
        }
        let mut sites = vec![LoopSite::Start(orientation), LoopSite::End(orientation)];
        for (i, e) in path.elements.iter().enumerate() {
            if let CsElement::Arc { orientation: o, .. } = e {
                if *o == orientation {
                    sites.push(LoopSite::Element(i));
                }
            }
        }
        for site in sites {
            consider(with_loops(&path, site, orientation, count))?;
        }
    }
    out.sort_by(|a, b| a.length().partial_cmp(&b.length()).unwrap());
    Ok(out)
}

/// Minimal-length path in the winding class `n`.
pub fn minimal_path_in_class(
    x: &DirectedPoint,
    y: &DirectedPoint,
    closure: &ClosurePath,
    n: i64,
    loop_cap: u32,
) -> Result<CsPath> {
    in_class_candidates(x, y, closure, n, loop_cap)?
        .into_iter()
        .next()
        .ok_or(Error::ClassUnreachableAtCap { n, cap: loop_cap })
}
