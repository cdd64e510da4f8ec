//! Deterministic SVG drawings of lattice polygons.

use std::fmt::Write;

use num_traits::ToPrimitive;
use toric_diamond_core::ConvexLatticePolygon;

/// Drawing parameters. The defaults give 40 px per lattice unit with 10%
/// padding around the bounding box of the polygon and the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct SvgOptions {
    pub padding: f64,
    pub unit: f64,
    pub dot_radius: f64,
    pub title: Option<String>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            padding: 0.1,
            unit: 40.0,
            dot_radius: 2.0,
            title: None,
        }
    }
}

/// Lattice dots are omitted beyond this many points.
const MAX_DOTS: i64 = 40_000;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Axes, lattice dots, the polygon outline and one `(x,y)` label per vertex.
/// Lattice coordinates have y pointing up; the flip happens only here.
pub fn render_svg(p: &ConvexLatticePolygon, opts: &SvgOptions) -> String {
    let pts: Vec<(i64, i64)> = p
        .vertices()
        .iter()
        .map(|v| {
            (
                v.x.to_i64().expect("vertex coordinate fits in i64"),
                v.y.to_i64().expect("vertex coordinate fits in i64"),
            )
        })
        .collect();
    let xmin = pts.iter().map(|v| v.0).min().unwrap_or(0).min(0);
    let xmax = pts.iter().map(|v| v.0).max().unwrap_or(0).max(0);
    let ymin = pts.iter().map(|v| v.1).min().unwrap_or(0).min(0);
    let ymax = pts.iter().map(|v| v.1).max().unwrap_or(0).max(0);
    let span = ((xmax - xmin).max(ymax - ymin)).max(1) as f64;
    let pad = (opts.padding * span).max(0.5);
    let (x0, x1) = (xmin as f64 - pad, xmax as f64 + pad);
    let (y0, y1) = (ymin as f64 - pad, ymax as f64 + pad);
    let u = opts.unit;
    let px = |x: f64| (x - x0) * u;
    let py = |y: f64| (y1 - y) * u;
    let (width, height) = ((x1 - x0) * u, (y1 - y0) * u);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    if let Some(t) = &opts.title {
        let _ = writeln!(s, "  <title>{}</title>", escape(t));
    }
    let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"  <g stroke="#999999" stroke-width="1"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"##,
        px(x0),
        py(0.0),
        px(x1),
        py(0.0),
        px(0.0),
        py(y0),
        px(0.0),
        py(y1)
    );
    let (gx0, gx1) = (x0.ceil() as i64, x1.floor() as i64);
    let (gy0, gy1) = (y0.ceil() as i64, y1.floor() as i64);
    if (gx1 - gx0 + 1) * (gy1 - gy0 + 1) <= MAX_DOTS {
        let _ = writeln!(s, r##"  <g fill="#bbbbbb">"##);
        for y in (gy0..=gy1).rev() {
            for x in gx0..=gx1 {
                let _ = writeln!(
                    s,
                    r#"    <circle cx="{:.2}" cy="{:.2}" r="{:.2}"/>"#,
                    px(x as f64),
                    py(y as f64),
                    opts.dot_radius
                );
            }
        }
        let _ = writeln!(s, "  </g>");
    }
    if !pts.is_empty() {
        let mut d = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            let _ = write!(
                d,
                "{}{:.2} {:.2} ",
                if i == 0 { "M" } else { "L" },
                px(*x as f64),
                py(*y as f64)
            );
        }
        d.push('Z');
        let _ = writeln!(
            s,
            r##"  <path d="{d}" fill="#4a7ab5" fill-opacity="0.25" stroke="#1f4e8c" stroke-width="2"/>"##
        );
        let _ = writeln!(
            s,
            r##"  <g font-family="monospace" font-size="12" fill="#000000">"##
        );
        for (x, y) in &pts {
            // push the label away from the origin
            let len = ((x * x + y * y) as f64).sqrt().max(1.0);
            let (dx, dy) = (*x as f64 / len * 10.0, -(*y as f64) / len * 10.0);
            let anchor = match x.signum() {
                1 => "start",
                -1 => "end",
                _ => "middle",
            };
            let _ = writeln!(
                s,
                r##"    <circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="#1f4e8c"/><text x="{:.2}" y="{:.2}" text-anchor="{anchor}">({x},{y})</text>"##,
                px(*x as f64),
                py(*y as f64),
                opts.dot_radius + 1.0,
                px(*x as f64) + dx,
                py(*y as f64) + dy + 4.0,
            );
        }
        let _ = writeln!(s, "  </g>");
    }
    s.push_str("</svg>\n");
    s
}
