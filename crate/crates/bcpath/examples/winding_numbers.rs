//! Winding numbers: pin a closure path, measure turning maps, and find
//! minimal representatives per winding class.

use std::f64::consts::PI;

use bcpath::cs::{CsElement, CsPath};
use bcpath::dubins::{minimal_path, minimal_path_in_class};
use bcpath::geometry::{DirectedPoint, Orientation};
use bcpath::winding::{class_index_k, relative_winding, winding_number, ClosurePath, TurningMap};

fn main() {
    let x = DirectedPoint::from_xyh(0.0, 0.0, 0.0);
    let y = DirectedPoint::from_xyh(4.0, 0.0, 0.0);

    // The closure is a fixed minimal path from the goal back to the start;
    // ties are broken canonically and the choice is pinned for the session.
    let closure = ClosurePath::pin(&x, &y);
    println!(
        "closure word {} (tie broken: {}), turning {:+.4}",
        closure.word.label(),
        closure.tie_broken,
        closure.total_turning()
    );

    let base = minimal_path(&x, &y).path().clone();
    let tau = TurningMap::of(&base);
    println!(
        "minimal path turning map breakpoints: {:?}",
        tau.breakpoints
    );
    let n = winding_number(&base, &closure).unwrap();
    println!("winding of the minimal path: {n}");
    let k = class_index_k(&x, &y, &closure).unwrap();
    println!("class of the global minimum: k = {} (in band: {})", k.k, !k.outside_expected_band);

    // Appending a full counterclockwise loop raises the winding by one.
    let mut elements = base.elements.clone();
    elements.push(CsElement::arc(Orientation::Ccw, 2.0 * PI));
    let looped = CsPath::new(base.start, elements).unwrap();
    println!(
        "after one ccw loop: winding {}",
        winding_number(&looped, &closure).unwrap()
    );

    // Minimal representatives across classes.
    for n in k.k - 2..=k.k + 2 {
        let rep = minimal_path_in_class(&x, &y, &closure, n, 8).unwrap();
        println!(
            "class n = {n:+}: minimal length {:.4}, complexity {}",
            rep.length(),
            rep.complexity()
        );
    }

    // Relative winding of closed model curves.
    let circle = CsPath::new(x, vec![CsElement::arc(Orientation::Ccw, 2.0 * PI)]).unwrap();
    println!(
        "relative winding of a ccw unit circle: {:.1}",
        relative_winding(&circle).rho
    );
}
