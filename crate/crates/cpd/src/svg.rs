//! SVG rendering of power diagrams with cells filled by side count.

use std::fmt::Write;

use cpd_core::geometry::{PowerDiagram, WeightedGenerator};
use cpd_core::search::{side_count, SIDE_ANGLE_TOLERANCE};

/// Fill colour for a cell with `sides` sides.
pub fn side_color(sides: usize) -> &'static str {
    match sides {
        4 => "orange",
        5 => "red",
        6 => "yellow",
        7 => "pink",
        _ => "lightgrey",
    }
}

pub fn render(diagram: &PowerDiagram, gens: &[WeightedGenerator]) -> String {
    let size = 600.0;
    let (lo, hi) = diagram.domain.bounding_box();
    let span = (hi.x - lo.x).max(hi.y - lo.y);
    let scale = size / span;
    let px = |x: f64| (x - lo.x) * scale;
    let py = |y: f64| (hi.y - y) * scale;
    let width = (hi.x - lo.x) * scale;
    let height = (hi.y - lo.y) * scale;
    let stroke = 1.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-2 -2 {:.3} {:.3}" width="{:.0}" height="{:.0}">"#,
        width + 4.0,
        height + 4.0,
        width + 4.0,
        height + 4.0
    );
    for cell in &diagram.cells {
        let Some(poly) = &cell.polygon else { continue };
        let points: Vec<String> = poly.vertices().iter().map(|v| format!("{:.3},{:.3}", px(v.x), py(v.y))).collect();
        let sides = side_count(poly, SIDE_ANGLE_TOLERANCE);
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{}" stroke="black" stroke-width="{stroke}" data-generator="{}" data-sides="{sides}"/>"#,
            points.join(" "),
            side_color(sides),
            cell.generator
        );
    }
    for g in gens {
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="2" fill="black"/>"#, px(g.site.x), py(g.site.y));
    }
    let outline: Vec<String> = diagram.domain.vertices().iter().map(|v| format!("{:.3},{:.3}", px(v.x), py(v.y))).collect();
    let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="2"/>"#, outline.join(" "));
    s.push_str("</svg>\n");
    s
}
