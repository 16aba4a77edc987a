//! Static SVG figure: the curve, the codebook and the points where the nearest
//! codepoint changes.

use std::fmt::Write;

use curvequant_core::solver::voronoi_assign;
use curvequant_core::{Codebook, CurveDistribution, Point};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

struct Frame {
    min: Point,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[Point]) -> Frame {
        let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        Frame {
            min: lo,
            scale,
            height: (hi.y - lo.y) * scale + 2.0 * MARGIN,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            MARGIN + (p.x - self.min.x) * self.scale,
            self.height - MARGIN - (p.y - self.min.y) * self.scale,
        )
    }
}

pub fn render(dist: &CurveDistribution, cb: &Codebook) -> String {
    let curve = dist.curve();
    let line = curve.sample_polyline(256.0 / curve.length().max(1e-9));
    let mut ticks = Vec::new();
    if let Ok(asg) = voronoi_assign(dist, cb) {
        let ivs = asg.intervals();
        for (i, iv) in ivs.iter().enumerate() {
            let next = if i + 1 < ivs.len() {
                Some(ivs[i + 1])
            } else if curve.is_closed() {
                ivs.first().copied()
            } else {
                None
            };
            if next.is_some_and(|nx| nx.cell != iv.cell) {
                ticks.push(curve.pieces()[iv.piece].point_at_local(iv.to));
            }
        }
    }
    let mut all = line.clone();
    all.extend(cb.iter().copied());
    let frame = Frame::fit(&all);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0}" height="{:.0}" viewBox="0 0 {SIZE:.0} {:.0}">"#,
        frame.height, frame.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let pts: Vec<String> = line
        .iter()
        .map(|p| {
            let (x, y) = frame.map(*p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let tag = if curve.is_closed() { "polygon" } else { "polyline" };
    let _ = writeln!(out, r#"<{tag} points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, pts.join(" "));
    for t in &ticks {
        let (x, y) = frame.map(*t);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="steelblue" stroke-width="1.5"/>"#,
            x - 5.0,
            y - 5.0,
            x + 5.0,
            y + 5.0
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="steelblue" stroke-width="1.5"/>"#,
            x - 5.0,
            y + 5.0,
            x + 5.0,
            y - 5.0
        );
    }
    for p in cb.iter() {
        let (x, y) = frame.map(*p);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="crimson"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
