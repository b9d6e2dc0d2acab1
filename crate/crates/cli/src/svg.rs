//! SVG rendering of a packing.
//!
//! Container y points up, SVG y points down; every y is flipped against the
//! container height. Output depends only on the [`PackResult`], element order
//! follows the lane list and the packing order.

use std::fmt::Write;

use circlepack::geometry::LanePart;
use circlepack::PackResult;

// large, medium, small, tiny 3, tiny 4, very tiny 5+
const PALETTE: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2"];

pub fn class_color(class: u32) -> &'static str {
    PALETTE[(class as usize).min(PALETTE.len() - 1)]
}

fn n(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

/// Renders `result` at `scale` pixels per unit.
pub fn render_svg(result: &PackResult, scale: f64) -> String {
    let bounds = result.container.bounds();
    let (w, h) = (bounds.width() * scale, bounds.height() * scale);
    let x = |v: f64| n((v - bounds.x0) * scale);
    let y = |v: f64| n((bounds.y1 - v) * scale);
    let stroke = n((scale / 500.0).max(0.25));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        n(w), n(h), n(w), n(h)
    );
    let _ = writeln!(
        s,
        r##"<rect class="container" x="0" y="0" width="{}" height="{}" fill="#ffffff" stroke="#000000" stroke-width="{stroke}"/>"##,
        n(w), n(h)
    );

    let _ = writeln!(s, r#"<g class="lanes" fill="none">"#);
    for lane in &result.lanes {
        let r = lane.frame.rect;
        let main = lane.id.part == LanePart::Main;
        let _ = writeln!(
            s,
            r##"<rect data-lane="{}" x="{}" y="{}" width="{}" height="{}" stroke="{}" stroke-width="{stroke}"{}/>"##,
            lane.id,
            x(r.x0),
            y(r.y1),
            n(r.width() * scale),
            n(r.height() * scale),
            if main { "#333333" } else { "#999999" },
            if main { "" } else { r#" stroke-dasharray="4 2""# },
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g class="circles" fill-opacity="0.8" stroke="#222222" stroke-width="{}">"##, n((scale / 1000.0).max(0.1)));
    for c in &result.placements {
        let _ = writeln!(
            s,
            r#"<circle data-i="{}" data-class="{}" cx="{}" cy="{}" r="{}" fill="{}"/>"#,
            c.seq,
            c.class.0,
            x(c.center.x),
            y(c.center.y),
            n(c.r * scale),
            class_color(c.class.0)
        );
    }
    let _ = writeln!(s, "</g>");

    let labels: Vec<_> = result.lanes.iter().filter(|l| l.id.part == LanePart::Main).collect();
    let _ = writeln!(
        s,
        r##"<g class="labels" font-family="sans-serif" font-size="{}" fill="#000000">"##,
        n((0.04 * scale).max(6.0))
    );
    for lane in labels {
        let r = lane.frame.rect;
        let pad = 0.01 * scale;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            n((r.x0 - bounds.x0) * scale + pad),
            n((bounds.y1 - r.y1) * scale + pad + 0.04 * scale),
            lane.id
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use circlepack::{pack_rect_online, pack_square_online, SquareMode};

    #[test]
    fn number_format() {
        assert_eq!(n(1.0), "1");
        assert_eq!(n(0.12345), "0.1235");
        assert_eq!(n(-0.00001), "0");
        assert_eq!(n(250.5), "250.5");
    }

    #[test]
    fn empty_square_has_outlines_only() {
        let res = pack_square_online(SquareMode::General, &[]).unwrap();
        let svg = render_svg(&res, 500.0);
        assert!(svg.contains(r#"viewBox="0 0 500 500""#));
        assert!(!svg.contains("<circle"));
        for l in ["L0", "L1", "L2", "L3", "L4"] {
            assert!(svg.contains(&format!(">{l}</text>")), "{l}");
        }
    }

    #[test]
    fn circles_follow_packing_order() {
        let res = pack_rect_online(2.0, &[0.3, 0.1, 0.05, 0.2]).unwrap();
        let svg = render_svg(&res, 100.0);
        assert!(svg.contains(r#"viewBox="0 0 200 100""#));
        let order: Vec<usize> = svg
            .lines()
            .filter_map(|l| l.split("data-i=\"").nth(1))
            .map(|t| t.split('"').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(order, vec![0, 1, 2, 3]);
        // first circle touches the bottom, so its cy is height - r
        assert!(svg.contains(r#"data-i="0" data-class="1" cx="30" cy="70" r="30""#));
    }
}
