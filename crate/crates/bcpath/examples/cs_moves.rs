//! Discrete moves on cs paths: figure-8 twists, segment pushes, the
//! RSL-to-LSR skew deformation, and complexity reduction.

use std::f64::consts::PI;

use bcpath::cs::{CsElement, CsPath};
use bcpath::dubins::minimal_path;
use bcpath::geometry::{DirectedPoint, Orientation};
use bcpath::homotopy::{
    collapse_figure_eight, reduce_complexity, skew_homotopy, type_i_operation, type_ii_operation,
};
use bcpath::winding::{winding_number, ClosurePath};

fn main() {
    let x = DirectedPoint::from_xyh(0.0, 0.0, 0.0);
    let y = DirectedPoint::from_xyh(4.0, 0.0, 0.0);
    let base = minimal_path(&x, &y).path().clone();
    let closure = ClosurePath::pin(&x, &y);
    println!(
        "base path: complexity {}, length {:.3}, winding {}",
        base.complexity(),
        base.length(),
        winding_number(&base, &closure).unwrap()
    );

    // Type I: a figure-8 adds two opposite loops; winding is unchanged and
    // collapsing the 8 restores the original.
    let twisted = type_i_operation(&base, 2.0).unwrap();
    println!(
        "after figure-8: complexity {}, length {:.3} (+{:.3}), winding {}",
        twisted.complexity(),
        twisted.length(),
        twisted.length() - base.length(),
        winding_number(&twisted, &closure).unwrap()
    );
    let restored = collapse_figure_eight(&twisted).unwrap();
    println!(
        "collapsed back: complexity {}, length drift {:.2e}",
        restored.complexity(),
        (restored.length() - base.length()).abs()
    );

    // Type II: pushing the segment with a disk produces a CSCSC path; deeper
    // pushes grow the length without bound.
    for depth in [0.3, 2.0, 10.0] {
        let pushed = type_ii_operation(&base, 0, depth, Orientation::Ccw).unwrap();
        println!(
            "push depth {depth:>4}: complexity {}, length {:.3}",
            pushed.complexity(),
            pushed.length()
        );
    }

    // Reduction undoes the push: strictly smaller complexity, never longer.
    let pushed = type_ii_operation(&base, 0, 0.5, Orientation::Cw).unwrap();
    let reduced = reduce_complexity(&pushed);
    println!(
        "reduce: complexity {} -> {}, length {:.3} -> {:.3}",
        pushed.complexity(),
        reduced.complexity(),
        pushed.length(),
        reduced.length()
    );

    // Skew deformation: an RSL word becomes an LSR word when the middle
    // segment leaves room for the twist.
    let rsl = CsPath::new(
        DirectedPoint::from_xyh(0.0, 0.0, 0.0),
        vec![
            CsElement::arc(Orientation::Cw, 0.8),
            CsElement::line(6.0),
            CsElement::arc(Orientation::Ccw, PI / 3.0),
        ],
    )
    .unwrap();
    match skew_homotopy(&rsl, 24) {
        Ok(trace) => {
            let windings: Vec<i64> = trace.per_frame.iter().map(|f| f.winding).collect();
            let constant = windings.windows(2).all(|w| w[0] == w[1]);
            println!(
                "skew: {} frames, winding constant: {constant}",
                trace.frames.len()
            );
        }
        Err(e) => println!("skew failed: {e}"),
    }
    // A short middle segment leaves no room: the deformation refuses.
    let short = CsPath::new(
        DirectedPoint::from_xyh(0.0, 0.0, 0.0),
        vec![
            CsElement::arc(Orientation::Cw, 0.8),
            CsElement::line(1.0),
            CsElement::arc(Orientation::Ccw, 0.5),
        ],
    )
    .unwrap();
    println!("short-segment skew: {:?}", skew_homotopy(&short, 16).err());
}
