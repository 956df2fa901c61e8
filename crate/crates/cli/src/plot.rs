//! Minimal static SVG: scatter plots of embedding columns and graph drawings
//! colored by a per-vertex value.

use std::fmt::Write;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

struct Frame {
    min: [f64; 2],
    scale: f64,
}

impl Frame {
    fn fit(points: &[[f64; 2]]) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for a in 0..2 {
                min[a] = min[a].min(p[a]);
                max[a] = max[a].max(p[a]);
            }
        }
        let span = (max[0] - min[0]).max(max[1] - min[1]);
        let scale = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
        Self { min, scale }
    }

    // SVG y grows downward.
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (MARGIN + (p[0] - self.min[0]) * self.scale, SIZE - MARGIN - (p[1] - self.min[1]) * self.scale)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<title>{}</title>"#, escape(title));
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Blue through white to red, symmetric about zero.
fn diverging(v: f64, max_abs: f64) -> String {
    let t = if max_abs > 0.0 { (v / max_abs).clamp(-1.0, 1.0) } else { 0.0 };
    let (r, g, b) = if t < 0.0 {
        let s = 1.0 + t;
        (s, s, 1.0)
    } else {
        (1.0, 1.0 - t, 1.0 - t)
    };
    format!("#{:02x}{:02x}{:02x}", (r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8)
}

/// Points colored by categorical label (first-seen order picks the color).
pub fn scatter(points: &[[f64; 2]], labels: Option<&[String]>, title: &str) -> String {
    let frame = Frame::fit(points);
    let mut seen: Vec<&str> = Vec::new();
    let mut out = String::new();
    header(&mut out, title);
    for (i, &p) in points.iter().enumerate() {
        let color = match labels {
            Some(l) => {
                let idx = seen.iter().position(|s| *s == l[i]).unwrap_or_else(|| {
                    seen.push(&l[i]);
                    seen.len() - 1
                });
                PALETTE[idx % PALETTE.len()]
            }
            None => PALETTE[0],
        };
        let (x, y) = frame.map(p);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{color}" fill-opacity="0.8"/>"#);
    }
    out.push_str("</svg>\n");
    out
}

/// Graph at fixed coordinates with vertices shaded by `values`.
pub fn graph_drawing(coords: &[[f64; 2]], edges: &[(usize, usize)], values: &[f64], title: &str) -> String {
    let frame = Frame::fit(coords);
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = String::new();
    header(&mut out, title);
    out.push_str(r##"<g stroke="#bbbbbb" stroke-width="0.5">"##);
    out.push('\n');
    for &(u, v) in edges {
        let (x1, y1) = frame.map(coords[u]);
        let (x2, y2) = frame.map(coords[v]);
        let _ = writeln!(out, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
    }
    out.push_str("</g>\n");
    for (i, &p) in coords.iter().enumerate() {
        let (x, y) = frame.map(p);
        let color = diverging(values[i], max_abs);
        let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}" stroke="#333333" stroke-width="0.3"/>"##);
    }
    out.push_str("</svg>\n");
    out
}
