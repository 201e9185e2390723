//! Normalize a smooth bounded-curvature path to circle/segment form through
//! fragmentation and replacement, tracking the deformation frame by frame.

use bcpath::cs::validate_bounded_curvature;
use bcpath::homotopy::{fragment, normalize_to_cs, EngineConfig, RegionRz};
use bcpath::svg::filmstrip;
use bcpath::synth::spline_path;
use bcpath::winding::{winding_number, winding_number_sampled, ClosurePath};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let smooth = spline_path(&mut rng, 6.0, 0.9, 0.01);
    let report = validate_bounded_curvature(&smooth, 0.05).unwrap();
    println!(
        "input: length {:.3}, max |curvature| {:.3}, valid: {}",
        smooth.length(),
        report.max_abs_curvature,
        report.valid
    );

    // Fragments are short and bend little; each stays trapped in the region
    // of its start point.
    let frag = fragment(&smooth, 0.5, 0.2).unwrap();
    println!("fragments: {}", frag.fragment_count());
    let all_contained = (0..frag.fragment_count()).all(|i| {
        let piece = frag.fragment(&smooth, i);
        let region = RegionRz::new(piece.start);
        piece.samples.iter().all(|s| region.contains(s.position))
    });
    println!("every fragment sample inside its start region: {all_contained}");

    let closure = ClosurePath::pin(&smooth.start, &smooth.end);
    let w_before = winding_number_sampled(&smooth, &closure).unwrap();

    let (cs, trace) = normalize_to_cs(&smooth, &EngineConfig::default()).unwrap();
    let w_after = winding_number(&cs, &closure).unwrap();
    let worst = trace
        .per_frame
        .iter()
        .map(|f| f.max_curvature)
        .fold(0.0f64, f64::max);
    println!(
        "output: {} components, length {:.3} (input {:.3})",
        cs.complexity(),
        cs.length(),
        smooth.length()
    );
    println!(
        "trace: {} frames, worst frame curvature {:.4}, winding {} -> {}",
        trace.frames.len(),
        worst,
        w_before,
        w_after
    );

    let out = std::env::temp_dir().join("bcpath_normalize_filmstrip.svg");
    std::fs::write(&out, filmstrip(&trace, 4)).unwrap();
    println!("wrote {}", out.display());
}
