//! Render a small gallery: paths with adjacent circles, a classified
//! endpoint configuration with its trapped region, and a deformation
//! filmstrip.

use bcpath::dubins::{minimal_path, minimal_path_in_class};
use bcpath::geometry::{adjacent_circles, DirectedPoint};
use bcpath::homotopy::{normalize_to_cs, EngineConfig};
use bcpath::proximity::classify;
use bcpath::svg::{classification_scene, filmstrip, Scene};
use bcpath::synth::spline_path;
use bcpath::winding::ClosurePath;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let dir = std::env::temp_dir().join("bcpath_gallery");
    std::fs::create_dir_all(&dir).unwrap();

    // Minimal paths in several winding classes, over the adjacent circles.
    let x = DirectedPoint::from_xyh(0.0, 0.0, 0.5);
    let y = DirectedPoint::from_xyh(3.0, -1.0, -0.8);
    let closure = ClosurePath::pin(&x, &y);
    let mut scene = Scene::new();
    for c in [adjacent_circles(&x), adjacent_circles(&y)] {
        scene.add_circle(&c.0, "#aaaaaa");
        scene.add_circle(&c.1, "#aaaaaa");
    }
    scene.add_cs_path(minimal_path(&x, &y).path(), "#1a5276", false);
    for (n, color) in [(0i64, "#117a65"), (1, "#b9770e")] {
        if let Ok(rep) = minimal_path_in_class(&x, &y, &closure, n, 8) {
            scene.add_cs_path(&rep, color, true);
        }
    }
    let file = dir.join("winding_classes.svg");
    std::fs::write(&file, scene.to_svg()).unwrap();
    println!("wrote {}", file.display());

    // Trapped-region configuration.
    let a = DirectedPoint::from_xyh(0.0, 0.0, 0.0);
    let b = DirectedPoint::from_xyh(1.0, 0.0, 0.0);
    let report = classify(&a, &b);
    let file = dir.join("trapped_region.svg");
    std::fs::write(&file, classification_scene(&a, &b, &report).to_svg()).unwrap();
    println!("wrote {}", file.display());

    // Normalization filmstrip.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let smooth = spline_path(&mut rng, 4.0, 0.85, 0.01);
    let (_, trace) = normalize_to_cs(&smooth, &EngineConfig::default()).unwrap();
    let file = dir.join("normalization_filmstrip.svg");
    std::fs::write(&file, filmstrip(&trace, 4)).unwrap();
    println!("wrote {}", file.display());
}
