//! The classification decision procedure: for each winding number, how many
//! homotopy classes the space carries, whether they are free, and a minimal
//! representative of each.
//!
//! The class counts come from a decision table keyed on the proximity
//! condition and on whether the queried winding equals the index of the
//! global minimum: every class is a single free class except at that index
//! under condition D, where the space splits into a free class and either
//! the trapped-region class or an isolated point. The table is not
//! re-derived by search; it is verified by constructing representatives and
//! checking their invariants (winding, membership, embeddedness, freeness
//! witnesses).

use serde::{Deserialize, Serialize};

use crate::crossings::self_crossings;
use crate::cs::{CsElement, CsPath};
use crate::dubins::{in_class_candidates, minimal_path};
use crate::error::{Error, Result};
use crate::geometry::{DirectedPoint, Orientation};
use crate::homotopy::type_ii_operation;
use crate::proximity::{
    classify_with_resolution, membership_delta_omega, Condition, DSubcase, OmegaRegion,
    ProximityReport,
};
use crate::winding::{class_index_k, winding_number, ClosurePath};

/// Kind of homotopy class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassKind {
    /// Deformable to arbitrarily long paths.
    Free,
    /// Embedded paths trapped in the region between the adjacent disks.
    NonFreeOmega,
    /// A single path forming its own class.
    IsolatedPoint,
}

/// One homotopy class: kind, representative and diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassDescriptor {
    pub kind: ClassKind,
    pub representative: Option<CsPath>,
    pub minimal_length: f64,
    pub winding: i64,
    /// For trapped-region entries: every representative sample lies in the
    /// region's closure.
    pub in_omega: Option<bool>,
    /// Self-crossings of the open representative (0 for embedded ones).
    pub self_crossings: Option<usize>,
    /// Representative construction failed; never silent.
    pub error: Option<String>,
}

/// Classes of one winding number.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassEntry {
    pub n: i64,
    pub count: usize,
    pub classes: Vec<ClassDescriptor>,
}

/// The full classification of a path space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub proximity: ProximityReport,
    /// Winding index of the class containing the global minimum.
    pub k: i64,
    /// The global minimum's winding left the expected {-1, 0, 1} band
    /// (diagnostic, not a failure).
    pub k_outside_expected_band: bool,
    pub entries: Vec<ClassEntry>,
    /// The pinned closure used for all winding numbers.
    pub closure: ClosurePath,
    /// Diagnostics that do not invalidate the report.
    pub diagnostics: Vec<String>,
}

/// Extra loops allowed when hunting in-class representatives.
pub const DEFAULT_LOOP_CAP: u32 = 8;

/// Classify the path space of `(x, y)` for every winding number in
/// `n_range` (which must contain the global minimum's index).
pub fn classify_space(
    x: &DirectedPoint,
    y: &DirectedPoint,
    closure: &ClosurePath,
    n_range: impl IntoIterator<Item = i64>,
    omega_resolution: f64,
) -> Result<ClassificationReport> {
    let proximity = classify_with_resolution(x, y, omega_resolution);
    let index = class_index_k(x, y, closure)?;
    let k = index.k;
    let mut diagnostics = Vec::new();
    if index.outside_expected_band {
        diagnostics.push(format!(
            "global minimum winding k = {k} outside the expected band [-1, 1]"
        ));
    }
    let ns: Vec<i64> = n_range.into_iter().collect();
    if !ns.contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "winding range {ns:?} must contain the global minimum's class k = {k}"
        )));
    }
    let mut entries = Vec::with_capacity(ns.len());
    for &n in &ns {
        let entry = if proximity.condition == Condition::D && n == k {
            split_entry(x, y, closure, n, &proximity, &mut diagnostics)
        } else {
            single_free_entry(x, y, closure, n)
        };
        entries.push(entry);
    }
    Ok(ClassificationReport {
        proximity,
        k,
        k_outside_expected_band: index.outside_expected_band,
        entries,
        closure: closure.clone(),
        diagnostics,
    })
}

fn descriptor_for(path: CsPath, kind: ClassKind, closure: &ClosurePath) -> ClassDescriptor {
    let winding = winding_number(&path, closure).unwrap_or(i64::MIN);
    let crossings = self_crossings(&path);
    ClassDescriptor {
        kind,
        minimal_length: path.length(),
        winding,
        in_omega: None,
        self_crossings: Some(crossings.count),
        representative: Some(path),
        error: None,
    }
}

fn failed_descriptor(kind: ClassKind, n: i64, err: impl std::fmt::Display) -> ClassDescriptor {
    ClassDescriptor {
        kind,
        representative: None,
        minimal_length: f64::NAN,
        winding: n,
        in_omega: None,
        self_crossings: None,
        error: Some(err.to_string()),
    }
}

fn single_free_entry(
    x: &DirectedPoint,
    y: &DirectedPoint,
    closure: &ClosurePath,
    n: i64,
) -> ClassEntry {
    let class = match in_class_candidates(x, y, closure, n, DEFAULT_LOOP_CAP) {
        Ok(cands) if !cands.is_empty() => {
            descriptor_for(cands[0].clone(), ClassKind::Free, closure)
        }
        Ok(_) => failed_descriptor(
            ClassKind::Free,
            n,
            Error::ClassUnreachableAtCap {
                n,
                cap: DEFAULT_LOOP_CAP,
            },
        ),
        Err(e) => failed_descriptor(ClassKind::Free, n, e),
    };
    ClassEntry {
        n,
        count: 1,
        classes: vec![class],
    }
}

/// Condition D at the global minimum's index: two classes.
fn split_entry(
    x: &DirectedPoint,
    y: &DirectedPoint,
    closure: &ClosurePath,
    n: i64,
    proximity: &ProximityReport,
    diagnostics: &mut Vec<String>,
) -> ClassEntry {
    let mut classes = Vec::with_capacity(2);
    match proximity.d_subcase {
        Some(DSubcase::OmegaRegion) => {
            let omega = proximity.omega.as_ref().expect("subcase carries omega");
            // Trapped class: the global minimum, verified inside the region
            // and embedded.
            let global = minimal_path(x, y).path().clone();
            let mut desc = descriptor_for(global.clone(), ClassKind::NonFreeOmega, closure);
            match global.sample((omega.resolution * 2.0).min(0.05)) {
                Ok(sampled) => {
                    let membership = membership_delta_omega(&sampled, omega);
                    desc.in_omega = Some(membership.in_omega);
                    if !membership.in_omega {
                        desc.error = Some(format!(
                            "global minimum leaves the trapped region at sample {:?}",
                            membership.first_exit_sample
                        ));
                    }
                }
                Err(e) => desc.error = Some(e.to_string()),
            }
            if desc.winding.abs() != 1 {
                diagnostics.push(format!(
                    "trapped-class representative has winding {}, expected +1 or -1",
                    desc.winding
                ));
            }
            if desc.self_crossings != Some(0) {
                desc.error = Some(format!(
                    "trapped-class representative is not embedded ({:?} crossings)",
                    desc.self_crossings
                ));
            }
            classes.push(desc);
            // Free class: least in-class candidate that leaves the region.
            classes.push(free_outside_omega(x, y, closure, n, omega));
        }
        Some(DSubcase::SingleArc) | Some(DSubcase::TwoArc) => {
            let isolated = proximity
                .single_arc
                .clone()
                .or_else(|| proximity.two_arc.clone())
                .expect("subcase carries its witness path");
            let desc = descriptor_for(isolated.clone(), ClassKind::IsolatedPoint, closure);
            if desc.winding != n {
                diagnostics.push(format!(
                    "isolated point has winding {}, expected {n}",
                    desc.winding
                ));
            }
            classes.push(desc);
            // The complement of the isolated point is one free class; its
            // minimal representative is the best candidate distinct from the
            // isolated path.
            let free = match in_class_candidates(x, y, closure, n, DEFAULT_LOOP_CAP) {
                Ok(cands) => {
                    let distinct = cands.into_iter().find(|c| !paths_coincide(c, &isolated));
                    match distinct {
                        Some(c) => descriptor_for(c, ClassKind::Free, closure),
                        None => failed_descriptor(
                            ClassKind::Free,
                            n,
                            "no candidate distinct from the isolated point",
                        ),
                    }
                }
                Err(e) => failed_descriptor(ClassKind::Free, n, e),
            };
            classes.push(free);
        }
        None => {
            // Defensive: condition D always carries a subcase.
            classes.push(failed_descriptor(
                ClassKind::Free,
                n,
                "condition D without a subcase",
            ));
        }
    }
    ClassEntry {
        n,
        count: classes.len(),
        classes,
    }
}

fn free_outside_omega(
    x: &DirectedPoint,
    y: &DirectedPoint,
    closure: &ClosurePath,
    n: i64,
    omega: &OmegaRegion,
) -> ClassDescriptor {
    match in_class_candidates(x, y, closure, n, DEFAULT_LOOP_CAP) {
        Ok(cands) => {
            for cand in cands {
                let Ok(sampled) = cand.sample((omega.resolution * 2.0).min(0.05)) else {
                    continue;
                };
                if !membership_delta_omega(&sampled, omega).in_omega {
                    let mut d = descriptor_for(cand, ClassKind::Free, closure);
                    d.in_omega = Some(false);
                    return d;
                }
            }
            failed_descriptor(ClassKind::Free, n, "every candidate stayed inside the region")
        }
        Err(e) => failed_descriptor(ClassKind::Free, n, e),
    }
}

fn paths_coincide(a: &CsPath, b: &CsPath) -> bool {
    if (a.length() - b.length()).abs() > 1e-9 {
        return false;
    }
    let n = 16;
    (0..=n).all(|i| {
        let s = a.length() * i as f64 / n as f64;
        a.pose_at(s).c1_distance(&b.pose_at(s)) < 1e-6
    })
}

/// Freeness decision with evidence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FreenessReport {
    pub free: bool,
    /// For free classes: an in-class path longer than the requested bound.
    pub witness: Option<CsPath>,
    pub rationale: String,
}

/// Decide freeness of a class entry. Free entries come with a constructive
/// witness longer than `length_bound`, produced by pushing a segment of the
/// representative ever deeper; trapped and isolated entries are not free.
pub fn is_free_class(entry: &ClassDescriptor, length_bound: f64) -> Result<FreenessReport> {
    match entry.kind {
        ClassKind::NonFreeOmega => Ok(FreenessReport {
            free: false,
            witness: None,
            rationale: "paths confined to the trapped region have bounded length".into(),
        }),
        ClassKind::IsolatedPoint => Ok(FreenessReport {
            free: false,
            witness: None,
            rationale: "the class is a single path".into(),
        }),
        ClassKind::Free => {
            let rep = entry
                .representative
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("free entry without representative".into()))?;
            let witness = long_witness(rep, length_bound)?;
            Ok(FreenessReport {
                free: true,
                rationale: format!(
                    "segment pushes reached length {:.2} > {length_bound:.2}",
                    witness.length()
                ),
                witness: Some(witness),
            })
        }
    }
}

/// Push a segment of the path with growing depth until it exceeds the bound.
/// Representatives without a segment component (degenerate words, CCC) are
/// replaced by an equal-turning companion between the same endpoints that
/// carries one; equal turning keeps the companion in the same class.
fn long_witness(rep: &CsPath, length_bound: f64) -> Result<CsPath> {
    let has_segment = |p: &CsPath| {
        p.elements
            .iter()
            .position(|e| matches!(e, CsElement::Line { length } if *length > 1e-6))
    };
    let source = if has_segment(rep).is_some() {
        rep.clone()
    } else {
        segment_companion(rep)?
    };
    let segment_index = has_segment(&source).expect("companion carries a segment");
    let mut depth = 1.0;
    for _ in 0..60 {
        for side in [Orientation::Ccw, Orientation::Cw] {
            match type_ii_operation(&source, segment_index, depth, side) {
                Ok(pushed) if pushed.length() > length_bound => return Ok(pushed),
                _ => {}
            }
        }
        depth *= 2.0;
    }
    Err(Error::PushInfeasible(format!(
        "pushes failed to exceed {length_bound}"
    )))
}

/// A path with the same endpoints and the same total turning as `rep`
/// (hence the same winding class) containing a genuine segment: a candidate
/// word with loops stacked at the start to match the turning.
fn segment_companion(rep: &CsPath) -> Result<CsPath> {
    let x = rep.start;
    let y = rep.end();
    let target = rep.total_turning();
    for cand in crate::dubins::solve_all(&x, &y) {
        let Some(path) = cand.path else { continue };
        if !path
            .elements
            .iter()
            .any(|e| matches!(e, CsElement::Line { length } if *length > 1e-6))
        {
            continue;
        }
        let diff = (target - path.total_turning()) / (2.0 * std::f64::consts::PI);
        let loops = diff.round();
        if (diff - loops).abs() > 1e-9 {
            continue;
        }
        let orientation = if loops >= 0.0 {
            Orientation::Ccw
        } else {
            Orientation::Cw
        };
        let mut elements = vec![
            CsElement::arc(orientation, 2.0 * std::f64::consts::PI);
            loops.abs() as usize
        ];
        elements.extend(path.elements.iter().copied());
        let companion = CsPath::new(x, elements)?;
        if (companion.total_turning() - target).abs() < 1e-9 {
            return Ok(companion);
        }
    }
    Err(Error::PushInfeasible(
        "no equal-turning companion with a segment exists".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn dp(x: f64, y: f64, h: f64) -> DirectedPoint {
        DirectedPoint::from_xyh(x, y, h)
    }

    fn full_report(x: DirectedPoint, y: DirectedPoint) -> ClassificationReport {
        let closure = ClosurePath::pin(&x, &y);
        let k = class_index_k(&x, &y, &closure).unwrap().k;
        classify_space(&x, &y, &closure, k - 2..=k + 2, 0.02).unwrap()
    }

    #[test]
    fn condition_a_has_single_free_classes_everywhere() {
        let report = full_report(dp(0.0, 0.0, 0.0), dp(4.0, 0.0, 0.0));
        assert_eq!(report.proximity.condition, Condition::A);
        for entry in &report.entries {
            assert_eq!(entry.count, 1, "n = {}", entry.n);
            assert_eq!(entry.classes[0].kind, ClassKind::Free);
            assert_eq!(entry.classes[0].winding, entry.n);
        }
    }

    #[test]
    fn omega_instance_splits_exactly_at_k() {
        let report = full_report(dp(0.0, 0.0, 0.0), dp(1.0, 0.0, 0.0));
        assert_eq!(report.proximity.condition, Condition::D);
        assert_eq!(report.proximity.d_subcase, Some(DSubcase::OmegaRegion));
        let mut split_ns = Vec::new();
        for entry in &report.entries {
            if entry.count == 2 {
                split_ns.push(entry.n);
                let kinds: Vec<ClassKind> = entry.classes.iter().map(|c| c.kind).collect();
                assert!(kinds.contains(&ClassKind::NonFreeOmega), "{kinds:?}");
                assert!(kinds.contains(&ClassKind::Free));
                for c in &entry.classes {
                    assert!(c.error.is_none(), "{:?}", c.error);
                    assert_eq!(c.winding, entry.n);
                }
                let trapped = entry
                    .classes
                    .iter()
                    .find(|c| c.kind == ClassKind::NonFreeOmega)
                    .unwrap();
                assert_eq!(trapped.in_omega, Some(true));
                assert_eq!(trapped.self_crossings, Some(0));
                let free = entry
                    .classes
                    .iter()
                    .find(|c| c.kind == ClassKind::Free)
                    .unwrap();
                assert_eq!(free.in_omega, Some(false));
            } else {
                assert_eq!(entry.count, 1);
            }
        }
        assert_eq!(split_ns, vec![report.k]);
        assert_eq!(report.k.abs(), 1, "trapped class winding is +-1");
    }

    #[test]
    fn single_arc_instance_has_isolated_point_at_k() {
        let report = full_report(dp(0.0, 0.0, 0.0), dp(1.0, 1.0, PI / 2.0));
        assert_eq!(report.proximity.d_subcase, Some(DSubcase::SingleArc));
        let split: Vec<&ClassEntry> =
            report.entries.iter().filter(|e| e.count == 2).collect();
        assert_eq!(split.len(), 1);
        assert_eq!(split[0].n, report.k);
        let kinds: Vec<ClassKind> = split[0].classes.iter().map(|c| c.kind).collect();
        assert!(kinds.contains(&ClassKind::IsolatedPoint));
        assert!(kinds.contains(&ClassKind::Free));
        // The isolated representative is exactly the detected arc.
        let iso = split[0]
            .classes
            .iter()
            .find(|c| c.kind == ClassKind::IsolatedPoint)
            .unwrap();
        assert!((iso.minimal_length - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn freeness_witnesses_exceed_requested_bound() {
        let report = full_report(dp(0.0, 0.0, 0.0), dp(4.0, 0.0, 0.0));
        let entry = &report.entries[2].classes[0];
        let freeness = is_free_class(entry, 100.0).unwrap();
        assert!(freeness.free);
        let witness = freeness.witness.unwrap();
        assert!(witness.length() > 100.0);
        // The witness is a valid path with the same endpoints and winding.
        assert!(witness.end().c1_distance(&dp(4.0, 0.0, 0.0)) < 1e-9);
        assert_eq!(
            winding_number(&witness, &report.closure).unwrap(),
            entry.winding
        );
    }

    #[test]
    fn trapped_and_isolated_classes_are_not_free() {
        let report = full_report(dp(0.0, 0.0, 0.0), dp(1.0, 0.0, 0.0));
        let split = report.entries.iter().find(|e| e.count == 2).unwrap();
        let trapped = split
            .classes
            .iter()
            .find(|c| c.kind == ClassKind::NonFreeOmega)
            .unwrap();
        assert!(!is_free_class(trapped, 10.0).unwrap().free);

        let report2 = full_report(dp(0.0, 0.0, 0.0), dp(1.0, 1.0, PI / 2.0));
        let split2 = report2.entries.iter().find(|e| e.count == 2).unwrap();
        let iso = split2
            .classes
            .iter()
            .find(|c| c.kind == ClassKind::IsolatedPoint)
            .unwrap();
        assert!(!is_free_class(iso, 10.0).unwrap().free);
    }

    #[test]
    fn range_must_contain_k() {
        let x = dp(0.0, 0.0, 0.0);
        let y = dp(4.0, 0.0, 0.0);
        let closure = ClosurePath::pin(&x, &y);
        let k = class_index_k(&x, &y, &closure).unwrap().k;
        assert!(classify_space(&x, &y, &closure, [k + 5, k + 6], 0.02).is_err());
    }
}
