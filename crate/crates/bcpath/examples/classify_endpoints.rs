//! Classify endpoint conditions into the proximity conditions and inspect
//! the trapped region when it exists.

use std::f64::consts::PI;

use bcpath::geometry::DirectedPoint;
use bcpath::proximity::classify;
use bcpath::svg::classification_scene;

fn show(label: &str, x: DirectedPoint, y: DirectedPoint) {
    let report = classify(&x, &y);
    print!(
        "{label:<28} dLL {:>6.3} dRR {:>6.3} -> {:?}/{:?}",
        report.d_ll, report.d_rr, report.raw_condition, report.condition
    );
    if let Some(sub) = report.d_subcase {
        print!(" ({sub:?}");
        if let Some(omega) = &report.omega {
            print!(", area ~ {:.3}", omega.area_estimate);
        }
        print!(")");
    }
    if report.boundary {
        print!(" [boundary]");
    }
    println!();
}

fn main() {
    show(
        "far parallel (A)",
        DirectedPoint::from_xyh(0.0, 0.0, 0.0),
        DirectedPoint::from_xyh(4.0, 0.0, 0.0),
    );
    show(
        "half turn (B)",
        DirectedPoint::from_xyh(0.0, 0.0, 0.0),
        DirectedPoint::from_xyh(0.0, 2.0, PI),
    );
    show(
        "close opposed (C)",
        DirectedPoint::from_xyh(0.0, 0.0, 0.0),
        DirectedPoint::from_xyh(0.5, 0.0, PI),
    );
    show(
        "close parallel (D/region)",
        DirectedPoint::from_xyh(0.0, 0.0, 0.0),
        DirectedPoint::from_xyh(1.0, 0.0, 0.0),
    );
    show(
        "quarter arc (D/isolated)",
        DirectedPoint::from_xyh(0.0, 0.0, 0.0),
        DirectedPoint::from_xyh(1.0, 1.0, PI / 2.0),
    );

    // Render the trapped-region configuration.
    let x = DirectedPoint::from_xyh(0.0, 0.0, 0.0);
    let y = DirectedPoint::from_xyh(1.0, 0.0, 0.0);
    let report = classify(&x, &y);
    let out = std::env::temp_dir().join("bcpath_classify.svg");
    std::fs::write(&out, classification_scene(&x, &y, &report).to_svg()).unwrap();
    println!("\nwrote {}", out.display());
}
