//! Deterministic SVG output.

use std::fmt::Write;

use tilesys::TilingSystem;
use tilesys::Patch;

const PALETTE: [&str; 8] = ["#f4d35e", "#0d3b66", "#ee964b", "#5fad56", "#f95738", "#83c5be", "#9d4edd", "#bc6c25"];

/// Decimal with at most nine fractional digits, no trailing zeros, and no negative zero.
pub fn num(x: f64) -> String {
    let r = (x * 1e9).round() / 1e9;
    let mut s = format!("{:.9}", if r == 0.0 { 0.0 } else { r });
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    s
}

pub struct RenderOptions {
    /// Stroke width in tile units.
    pub stroke: f64,
    pub fill: bool,
    pub marks: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { stroke: 0.02, fill: true, marks: true }
    }
}

pub fn render_svg(sys: &TilingSystem, patch: &Patch, opts: &RenderOptions) -> String {
    // y is flipped so the picture has the usual orientation.
    let tiles: Vec<Vec<[f64; 2]>> =
        patch.tiles.iter().map(|t| sys.tile_vertices_f64(t).into_iter().map(|[x, y]| [x, -y]).collect()).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in tiles.iter().flatten() {
        x0 = x0.min(p[0]);
        y0 = y0.min(p[1]);
        x1 = x1.max(p[0]);
        y1 = y1.max(p[1]);
    }
    if tiles.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let pad = opts.stroke * 2.0 + 0.05 * (x1 - x0).max(y1 - y0).max(1e-3);
    let (vx, vy, vw, vh) = (x0 - pad, y0 - pad, x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(vx),
        num(vy),
        num(vw),
        num(vh),
        num(800.0),
        num(800.0 * vh / vw)
    );
    let _ = writeln!(out, r##"<g stroke="#222" stroke-width="{}" stroke-linejoin="round">"##, num(opts.stroke));
    for (t, pts) in patch.tiles.iter().zip(&tiles) {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, num(p[0]), num(p[1]));
        }
        d.push('Z');
        let fill = if opts.fill && pts.len() > 2 { PALETTE[t.proto % PALETTE.len()] } else { "none" };
        let _ = writeln!(out, r#"<path class="tile p{}" d="{}" fill="{}"/>"#, t.proto, d, fill);
    }
    if opts.marks {
        for t in &patch.tiles {
            if let (Some((a, b)), Some(m)) = (sys.tile_mark(t), sys.prototiles[t.proto].mark.as_ref()) {
                let (a, b) = (a.to_f64(), b.to_f64());
                let _ = writeln!(
                    out,
                    r#"<line class="mark c{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}"/>"#,
                    m.color,
                    num(a[0]),
                    num(-a[1]),
                    num(b[0]),
                    num(-b[1]),
                    PALETTE[(m.color as usize + 4) % PALETTE.len()]
                );
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}
