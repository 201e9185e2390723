//! SVG output for paths, endpoint configurations, trapped regions and
//! deformation filmstrips.
//!
//! World coordinates have y pointing up; SVG has y pointing down, so every
//! y is negated at emit time. The scale is 50 px per unit length. Arcs are
//! emitted as native SVG arc segments, chunked to stay representable.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::cs::{CsPath, PlacedElement, SampledPath};
use crate::geometry::{Circle, DirectedPoint, Vec2};
use crate::homotopy::DeformationTrace;
use crate::proximity::{OmegaRegion, ProximityReport};

/// Pixels per world unit.
pub const SCALE: f64 = 50.0;

#[derive(Debug, Clone)]
enum Item {
    Path { d: String, stroke: String, width: f64, dash: bool },
    Circle { center: Vec2, radius: f64, stroke: String },
    Rect { corner: Vec2, size: f64, fill: String },
    Arrow { at: DirectedPoint, color: String },
    Label { at: Vec2, text: String },
}

/// A renderable scene with automatic bounds.
#[derive(Debug, Default, Clone)]
pub struct Scene {
    items: Vec<Item>,
    min: Option<Vec2>,
    max: Option<Vec2>,
}

impl Scene {
    pub fn new() -> Scene {
        Scene::default()
    }

    fn grow(&mut self, p: Vec2, pad: f64) {
        let lo = Vec2::new(p.x - pad, p.y - pad);
        let hi = Vec2::new(p.x + pad, p.y + pad);
        self.min = Some(match self.min {
            None => lo,
            Some(m) => Vec2::new(m.x.min(lo.x), m.y.min(lo.y)),
        });
        self.max = Some(match self.max {
            None => hi,
            Some(m) => Vec2::new(m.x.max(hi.x), m.y.max(hi.y)),
        });
    }

    pub fn add_cs_path(&mut self, path: &CsPath, stroke: &str, dashed: bool) {
        let d = cs_path_data(path);
        for placed in path.placed() {
            let n = 8;
            for i in 0..=n {
                let t = placed.length() * i as f64 / n as f64;
                self.grow(placed.pose_at(t).position, 0.2);
            }
        }
        self.grow(path.start.position, 0.2);
        self.items.push(Item::Path {
            d,
            stroke: stroke.into(),
            width: 2.0,
            dash: dashed,
        });
        self.items.push(Item::Arrow {
            at: path.start,
            color: stroke.into(),
        });
    }

    pub fn add_sampled_path(&mut self, path: &SampledPath, stroke: &str, width: f64) {
        let mut d = String::new();
        for (i, s) in path.samples.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.3} {:.3} ", s.position.x * SCALE, -s.position.y * SCALE);
            self.grow(s.position, 0.1);
        }
        self.items.push(Item::Path {
            d,
            stroke: stroke.into(),
            width,
            dash: false,
        });
    }

    pub fn add_circle(&mut self, circle: &Circle, stroke: &str) {
        self.grow(circle.center, circle.radius + 0.1);
        self.items.push(Item::Circle {
            center: circle.center,
            radius: circle.radius,
            stroke: stroke.into(),
        });
    }

    pub fn add_omega(&mut self, omega: &OmegaRegion) {
        for row in 0..omega.rows {
            for col in 0..omega.cols {
                if omega.mask[row * omega.cols + col] {
                    let corner = omega.origin
                        + Vec2::new(
                            col as f64 * omega.resolution,
                            row as f64 * omega.resolution,
                        );
                    self.grow(corner, omega.resolution);
                    self.items.push(Item::Rect {
                        corner,
                        size: omega.resolution,
                        fill: "#f4a940".into(),
                    });
                }
            }
        }
    }

    pub fn add_label(&mut self, at: Vec2, text: &str) {
        self.grow(at, 0.5);
        self.items.push(Item::Label {
            at,
            text: text.into(),
        });
    }

    pub fn to_svg(&self) -> String {
        let min = self.min.unwrap_or(Vec2::new(-1.0, -1.0));
        let max = self.max.unwrap_or(Vec2::new(1.0, 1.0));
        let (x0, y0) = (min.x * SCALE, -max.y * SCALE);
        let (w, h) = ((max.x - min.x) * SCALE, (max.y - min.y) * SCALE);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.1} {y0:.1} {w:.1} {h:.1}" width="{w:.0}" height="{h:.0}">"#
        );
        let _ = writeln!(
            out,
            r#"<rect x="{x0:.1}" y="{y0:.1}" width="{w:.1}" height="{h:.1}" fill="white"/>"#
        );
        for item in &self.items {
            match item {
                Item::Rect { corner, size, fill } => {
                    let _ = writeln!(
                        out,
                        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}" stroke="none"/>"#,
                        corner.x * SCALE,
                        -(corner.y + size) * SCALE,
                        size * SCALE,
                        size * SCALE
                    );
                }
                Item::Circle { center, radius, stroke } => {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="{stroke}" stroke-width="1" stroke-dasharray="4 3"/>"#,
                        center.x * SCALE,
                        -center.y * SCALE,
                        radius * SCALE
                    );
                }
                Item::Path { d, stroke, width, dash } => {
                    let dash_attr = if *dash {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        out,
                        r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"{dash_attr} stroke-linecap="round"/>"#
                    );
                }
                Item::Arrow { at, color } => {
                    let tip = at.position + at.direction() * 0.25;
                    let left = at.position + at.direction().rotated(2.7) * 0.12;
                    let right = at.position + at.direction().rotated(-2.7) * 0.12;
                    let _ = writeln!(
                        out,
                        r#"<path d="M{:.2} {:.2} L{:.2} {:.2} L{:.2} {:.2} Z" fill="{color}"/>"#,
                        tip.x * SCALE,
                        -tip.y * SCALE,
                        left.x * SCALE,
                        -left.y * SCALE,
                        right.x * SCALE,
                        -right.y * SCALE
                    );
                }
                Item::Label { at, text } => {
                    let _ = writeln!(
                        out,
                        r#"<text x="{:.2}" y="{:.2}" font-size="14" font-family="sans-serif">{text}</text>"#,
                        at.x * SCALE,
                        -at.y * SCALE
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

/// SVG path data for a cs path (native arc segments, chunked below pi/2).
fn cs_path_data(path: &CsPath) -> String {
    let mut d = String::new();
    let start = path.start.position;
    let _ = write!(d, "M{:.3} {:.3} ", start.x * SCALE, -start.y * SCALE);
    for placed in path.placed() {
        match placed {
            PlacedElement::Line { end, .. } => {
                let _ = write!(d, "L{:.3} {:.3} ", end.x * SCALE, -end.y * SCALE);
            }
            PlacedElement::Arc {
                circle,
                start_angle,
                sweep,
                ..
            } => {
                let chunks = (sweep.abs() / (PI / 2.0)).ceil().max(1.0) as usize;
                for i in 1..=chunks {
                    let a = start_angle + sweep * i as f64 / chunks as f64;
                    let p = circle.point_at(a);
                    // Flipping y reverses the drawing orientation.
                    let flag = if sweep > 0.0 { 0 } else { 1 };
                    let r = circle.radius * SCALE;
                    let _ = write!(
                        d,
                        "A{r:.3} {r:.3} 0 0 {flag} {:.3} {:.3} ",
                        p.x * SCALE,
                        -p.y * SCALE
                    );
                }
            }
        }
    }
    d
}

/// Scene for an endpoint classification: the four adjacent circles, the
/// trapped region when present, and any witness paths.
pub fn classification_scene(
    x: &DirectedPoint,
    y: &DirectedPoint,
    report: &ProximityReport,
) -> Scene {
    let mut scene = Scene::new();
    if let Some(omega) = &report.omega {
        scene.add_omega(omega);
    }
    let (lx, rx) = crate::geometry::adjacent_circles(x);
    let (ly, ry) = crate::geometry::adjacent_circles(y);
    for c in [&lx, &rx, &ly, &ry] {
        scene.add_circle(c, "#888888");
    }
    for (path, color) in [
        (&report.single_arc, "#c0392b"),
        (&report.two_arc, "#c0392b"),
        (&report.c_witness, "#2471a3"),
    ] {
        if let Some(p) = path {
            scene.add_cs_path(p, color, false);
        }
    }
    scene.add_label(
        x.position + Vec2::new(-0.4, -0.4),
        &format!("{:?}/{:?}", report.raw_condition, report.condition),
    );
    scene
}

/// Filmstrip of a deformation trace: frames drawn left to right, a few per
/// row.
pub fn filmstrip(trace: &DeformationTrace, columns: usize) -> String {
    let columns = columns.max(1);
    let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for frame in &trace.frames {
        for s in &frame.samples {
            min = Vec2::new(min.x.min(s.position.x), min.y.min(s.position.y));
            max = Vec2::new(max.x.max(s.position.x), max.y.max(s.position.y));
        }
    }
    let cell_w = (max.x - min.x) + 1.0;
    let cell_h = (max.y - min.y) + 1.0;
    let mut scene = Scene::new();
    // Show at most one strip's worth of frames, evenly thinned.
    let shown = columns * 4;
    let step = (trace.frames.len().max(1) + shown - 1) / shown.max(1);
    for (slot, idx) in (0..trace.frames.len()).step_by(step.max(1)).enumerate() {
        let (row, col) = (slot / columns, slot % columns);
        let offset = Vec2::new(col as f64 * cell_w, -(row as f64) * cell_h);
        let frame = &trace.frames[idx];
        let shifted = SampledPath {
            samples: frame
                .samples
                .iter()
                .map(|s| crate::cs::Sample {
                    s: s.s,
                    position: s.position + offset - min,
                    heading: s.heading,
                })
                .collect(),
            step_bound: frame.step_bound,
            start: frame.start,
            end: frame.end,
        };
        scene.add_sampled_path(&shifted, "#1a5276", 1.5);
    }
    scene.to_svg()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cs::CsElement;
    use crate::geometry::Orientation::Ccw;

    #[test]
    fn svg_document_is_well_formed() {
        let p = CsPath::new(
            DirectedPoint::from_xyh(0.0, 0.0, 0.0),
            vec![CsElement::arc(Ccw, 3.5), CsElement::line(2.0)],
        )
        .unwrap();
        let mut scene = Scene::new();
        scene.add_cs_path(&p, "#000000", false);
        let svg = scene.to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("<path"));
        assert!(svg.matches("A").count() >= 2, "arc chunked into segments");
    }

    #[test]
    fn classification_scene_renders_omega() {
        let x = DirectedPoint::from_xyh(0.0, 0.0, 0.0);
        let y = DirectedPoint::from_xyh(1.0, 0.0, 0.0);
        let report = crate::proximity::classify_with_resolution(&x, &y, 0.05);
        let svg = classification_scene(&x, &y, &report).to_svg();
        assert!(svg.contains("<rect"), "omega cells rendered");
        assert!(svg.contains("<circle"));
    }
}
