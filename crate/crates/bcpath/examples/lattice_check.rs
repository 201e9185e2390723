//! Validate the analytic planners against the brute-force lattice oracle.

use bcpath::dubins::{minimal_path, minimal_path_in_class};
use bcpath::lattice::{shortest_path, shortest_path_in_class, LatticeConfig};
use bcpath::geometry::DirectedPoint;
use bcpath::winding::{class_index_k, ClosurePath};

fn main() {
    let x = DirectedPoint::from_xyh(0.0, 0.0, 0.3);
    let y = DirectedPoint::from_xyh(3.0, 1.0, -1.2);
    let analytic = minimal_path(&x, &y).length();
    println!("analytic minimum: {analytic:.4}");

    // The oracle is a true upper bound (its path really runs start to goal),
    // and the gap shrinks with the step.
    for step in [0.2, 0.1] {
        let cfg = LatticeConfig::with_step(step);
        let o = shortest_path(&x, &y, &cfg).unwrap();
        println!(
            "step {step}: oracle {:.4} (gap {:+.4}, slack {:.3}, {} expansions)",
            o.length,
            o.length - analytic,
            cfg.slack(analytic),
            o.expanded
        );
        assert!(analytic <= o.length + 1e-9);
    }

    // Winding-constrained search: the turning-augmented lattice validates
    // the in-class minima.
    let closure = ClosurePath::pin(&x, &y);
    let k = class_index_k(&x, &y, &closure).unwrap().k;
    let cfg = LatticeConfig::with_step_guided(0.25);
    for n in [k, k + 1] {
        let rep = minimal_path_in_class(&x, &y, &closure, n, 8).unwrap();
        let o = shortest_path_in_class(&x, &y, &closure, n, &cfg).unwrap();
        println!(
            "class n = {n:+}: analytic {:.4}, oracle {:.4} (gap {:+.4})",
            rep.length(),
            o.length,
            o.length - rep.length()
        );
        assert!(rep.length() <= o.length + 1e-9);
    }
}
