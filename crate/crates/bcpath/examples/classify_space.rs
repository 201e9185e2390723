//! The full homotopy classification: how many classes each winding number
//! carries, their kinds, and freeness witnesses.

use bcpath::classifier::{classify_space, is_free_class, ClassKind};
use bcpath::geometry::DirectedPoint;
use bcpath::winding::{class_index_k, ClosurePath};

fn report_for(label: &str, x: DirectedPoint, y: DirectedPoint) {
    let closure = ClosurePath::pin(&x, &y);
    let k = class_index_k(&x, &y, &closure).unwrap().k;
    let report = classify_space(&x, &y, &closure, k - 2..=k + 2, 0.01).unwrap();
    println!(
        "{label}: condition {:?}, k = {k}",
        report.proximity.condition
    );
    for entry in &report.entries {
        print!("  n = {:+}: {} class(es):", entry.n, entry.count);
        for class in &entry.classes {
            print!(
                " [{:?}, min length {:.4}]",
                class.kind, class.minimal_length
            );
        }
        println!();
        for class in &entry.classes {
            let freeness = is_free_class(class, 50.0).unwrap();
            if freeness.free {
                println!(
                    "      free: witness of length {:.1} > 50",
                    freeness.witness.unwrap().length()
                );
            } else {
                println!("      {:?}: not free ({})", class.kind, freeness.rationale);
            }
        }
    }
    for d in &report.diagnostics {
        println!("  diagnostic: {d}");
    }
    println!();
}

fn main() {
    report_for(
        "far parallel pair",
        DirectedPoint::from_xyh(0.0, 0.0, 0.0),
        DirectedPoint::from_xyh(4.0, 0.0, 0.0),
    );
    report_for(
        "close parallel pair (trapped region)",
        DirectedPoint::from_xyh(0.0, 0.0, 0.0),
        DirectedPoint::from_xyh(1.0, 0.0, 0.0),
    );
    report_for(
        "quarter-arc pair (isolated point)",
        DirectedPoint::from_xyh(0.0, 0.0, 0.0),
        DirectedPoint::from_xyh(1.0, 1.0, std::f64::consts::PI / 2.0),
    );

    // Count-2 classes appear exactly once, at the global minimum's class.
    let x = DirectedPoint::from_xyh(0.0, 0.0, 0.0);
    let y = DirectedPoint::from_xyh(1.0, 0.0, 0.0);
    let closure = ClosurePath::pin(&x, &y);
    let k = class_index_k(&x, &y, &closure).unwrap().k;
    let report = classify_space(&x, &y, &closure, k - 3..=k + 3, 0.01).unwrap();
    let split: Vec<i64> = report
        .entries
        .iter()
        .filter(|e| e.count == 2)
        .map(|e| e.n)
        .collect();
    println!("winding numbers with two classes: {split:?} (k = {k})");
    let trapped = report.entries.iter().find(|e| e.n == k).unwrap();
    let omega_class = trapped
        .classes
        .iter()
        .find(|c| c.kind == ClassKind::NonFreeOmega)
        .unwrap();
    println!(
        "trapped representative: length {:.4}, inside region: {:?}, self-crossings: {:?}",
        omega_class.minimal_length, omega_class.in_omega, omega_class.self_crossings
    );
}
