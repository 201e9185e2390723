//! Plan minimal-length bounded-curvature paths between directed points and
//! inspect all six candidate words.

use bcpath::dubins::{minimal_path, solve_all};
use bcpath::geometry::DirectedPoint;

fn main() {
    // Collinear, same heading: the path degenerates to a straight segment.
    let x = DirectedPoint::from_xyh(0.0, 0.0, 0.0);
    let y = DirectedPoint::from_xyh(4.0, 0.0, 0.0);
    let m = minimal_path(&x, &y);
    println!(
        "straight case: word {} length {:.6} (ties: {:?})",
        m.primary().word.label(),
        m.length(),
        m.minimizers.iter().map(|c| c.word.label()).collect::<Vec<_>>()
    );

    // A generic pair: all six words, feasibility and lengths.
    let x = DirectedPoint::from_xyh(0.0, 0.0, 0.6);
    let y = DirectedPoint::from_xyh(2.5, 1.5, -2.2);
    println!("\ncandidates for a generic pair:");
    for cand in solve_all(&x, &y) {
        match (cand.feasible, cand.minimizer_eligible) {
            (true, eligible) => println!(
                "  {:<3} length {:>8.4}  {}{}",
                cand.word.label(),
                cand.length,
                if eligible { "" } else { "(middle arc <= pi, not a minimizer) " },
                cand.middle_sweep
                    .map(|m| format!("middle sweep {m:.3}"))
                    .unwrap_or_default()
            ),
            (false, _) => println!("  {:<3} infeasible", cand.word.label()),
        }
    }
    let m = minimal_path(&x, &y);
    println!(
        "minimum: {} with length {:.4}",
        m.primary().word.label(),
        m.length()
    );

    // Close endpoints: tangent constructions degenerate gracefully.
    let x = DirectedPoint::from_xyh(0.0, 0.0, 0.0);
    let y = DirectedPoint::from_xyh(0.0, 2.0, std::f64::consts::PI);
    let m = minimal_path(&x, &y);
    println!(
        "\nhalf-turn case: word {} length {:.6} (single left arc of length pi)",
        m.primary().word.label(),
        m.length()
    );
}
