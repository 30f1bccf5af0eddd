//! Deterministic SVG 1.1 output. Exact coordinates are mapped affinely to
//! the canvas and printed with two decimals, so the same input always
//! yields the same bytes.
//!
//! Legs are drawn as arrows that stop at the frame. A leg pointing straight
//! down the last axis of a modification goes to `-inf`; its arrow carries a
//! `−∞` label, and in a projection that flattens it the leg becomes a ringed
//! dot with the same label.

use std::fmt::Write;

use num_traits::ToPrimitive;
use tropmod::modify::{ChipConfiguration, ModifiedSpace, WallBase};
use tropmod::subdivision::NewtonSubdivision;
use tropmod::{EmbeddedCurve, Rational};

const PANEL: f64 = 360.0;
const MARGIN: f64 = 28.0;

fn f(x: Rational) -> f64 {
    x.to_f64().unwrap_or(0.0)
}

/// World window of a panel and its map to canvas coordinates.
#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
}

impl Frame {
    fn around(points: &[(f64, f64)], left: f64) -> Frame {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if points.is_empty() {
            (x0, x1, y0, y1) = (0.0, 0.0, 0.0, 0.0);
        }
        // Square window so lattice directions keep their slopes.
        let span = (x1 - x0).max(y1 - y0);
        let pad = (span * 0.35).max(1.5);
        let half = span / 2.0 + pad;
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        Frame { x0: cx - half, x1: cx + half, y0: cy - half, y1: cy + half, left }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let inner = PANEL - 2.0 * MARGIN;
        let sx = self.left + MARGIN + (x - self.x0) / (self.x1 - self.x0) * inner;
        let sy = MARGIN + (self.y1 - y) / (self.y1 - self.y0) * inner;
        (sx, sy)
    }

    /// Point where the ray `p + t d`, `t > 0`, leaves the window.
    fn exit(&self, p: (f64, f64), d: (f64, f64)) -> (f64, f64) {
        let mut t = f64::MAX;
        if d.0 > 0.0 {
            t = t.min((self.x1 - p.0) / d.0);
        } else if d.0 < 0.0 {
            t = t.min((self.x0 - p.0) / d.0);
        }
        if d.1 > 0.0 {
            t = t.min((self.y1 - p.1) / d.1);
        } else if d.1 < 0.0 {
            t = t.min((self.y0 - p.1) / d.1);
        }
        (p.0 + t * d.0, p.1 + t * d.1)
    }
}

struct Svg {
    body: String,
    width: f64,
    height: f64,
}

impl Svg {
    fn new(panels: usize) -> Svg {
        Svg { body: String::new(), width: PANEL * panels as f64, height: PANEL }
    }

    fn panel(&mut self, fr: &Frame, title: &str) {
        let _ = writeln!(
            self.body,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#bbb"/>"##,
            fr.left + MARGIN,
            MARGIN,
            PANEL - 2.0 * MARGIN,
            PANEL - 2.0 * MARGIN
        );
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="18.00" font-size="13" font-family="sans-serif">{}</text>"#,
            fr.left + MARGIN,
            escape(title)
        );
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), weight: u64, class: &str) {
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke-width="{}"/>"#,
            a.0,
            a.1,
            b.0,
            b.1,
            1 + weight
        );
    }

    fn arrow(&mut self, a: (f64, f64), b: (f64, f64), weight: u64) {
        let _ = writeln!(
            self.body,
            r#"<line class="leg" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke-width="{}" marker-end="url(#head)"/>"#,
            a.0,
            a.1,
            b.0,
            b.1,
            1 + weight
        );
    }

    fn dot(&mut self, p: (f64, f64), class: &str) {
        let _ = writeln!(self.body, r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="3.00"/>"#, p.0, p.1);
    }

    fn label(&mut self, p: (f64, f64), text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif">{}</text>"#,
            p.0 + 4.0,
            p.1 - 4.0,
            escape(text)
        );
    }

    fn finish(self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
            self.width, self.height, self.width, self.height
        );
        out.push_str(concat!(
            "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"9\" markerHeight=\"9\" markerUnits=\"userSpaceOnUse\" orient=\"auto\">",
            "<path d=\"M0,0 L10,5 L0,10 z\" fill=\"#222\"/></marker></defs>\n",
            "<style>line{stroke:#222;stroke-linecap:round} line.wall{stroke:#2a6fb0} line.cell{stroke:#999} ",
            "circle.vertex{fill:#222} circle.inf{fill:none;stroke:#c0392b;stroke-width:1.5} circle.chip{fill:#c0392b} ",
            "circle.point{fill:#2a6fb0}</style>\n",
        ));
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn weight_label(w: u64) -> Option<String> {
    (w > 1).then(|| w.to_string())
}

/// Draws the projection of a curve onto coordinates `(i, j)`. With `depth`
/// set, that coordinate is the one sent to `-inf` by vertical legs.
fn draw_projection(svg: &mut Svg, c: &EmbeddedCurve, (i, j): (usize, usize), depth: Option<usize>, fr: &Frame) {
    let proj = |p: &[Rational]| (f(p[i]), f(p[j]));
    let verts: Vec<(f64, f64)> = c.vertices().iter().map(|p| proj(p)).collect();
    for e in c.edges() {
        let (a, b) = (fr.map(verts[e.tail]), fr.map(verts[e.head]));
        if a != b {
            svg.line(a, b, e.weight, "edge");
            if let Some(w) = weight_label(e.weight) {
                svg.label(((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0), &w);
            }
        }
    }
    for l in c.legs() {
        let d = l.direction.coords();
        let base = verts[l.vertex];
        let to_neg_inf = depth.is_some_and(|k| d.iter().enumerate().all(|(t, &x)| if t == k { x < 0 } else { x == 0 }));
        let pd = (d[i] as f64, d[j] as f64);
        if pd == (0.0, 0.0) {
            if to_neg_inf {
                svg.dot(fr.map(base), "inf");
                svg.label(fr.map(base), "−∞");
            }
            continue;
        }
        let end = fr.map(fr.exit(base, pd));
        svg.arrow(fr.map(base), end, l.weight);
        if to_neg_inf {
            svg.label(end, "−∞");
        } else if let Some(w) = weight_label(l.weight) {
            svg.label(end, &w);
        }
    }
    for &v in &verts {
        svg.dot(fr.map(v), "vertex");
    }
}

const AXES: [&str; 3] = ["X", "Y", "Z"];

/// A plane curve, or the XY, XZ and YZ projections of a space curve side by
/// side. Other dimensions show the projections onto consecutive coordinate
/// pairs.
pub fn curve_svg(c: &EmbeddedCurve) -> String {
    let pairs: Vec<(usize, usize)> = match c.dim() {
        0 | 1 => vec![],
        2 => vec![(0, 1)],
        3 => vec![(0, 1), (0, 2), (1, 2)],
        n => (0..n - 1).map(|k| (k, k + 1)).collect(),
    };
    let depth = (c.dim() == 3).then_some(2);
    let mut svg = Svg::new(pairs.len().max(1));
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let pts: Vec<(f64, f64)> = c.vertices().iter().map(|p| (f(p[i]), f(p[j]))).collect();
        let fr = Frame::around(&pts, k as f64 * PANEL);
        let name = |t: usize| AXES.get(t).map_or_else(|| format!("x{}", t + 1), |s| s.to_string());
        svg.panel(&fr, &format!("{}{}", name(i), name(j)));
        draw_projection(&mut svg, c, (i, j), depth, &fr);
    }
    svg.finish()
}

/// The subdivided Newton polygon with lattice points marked.
pub fn subdivision_svg(sub: &NewtonSubdivision) -> String {
    let pts: Vec<(f64, f64)> = sub.polygon.vertices().iter().map(|p| (p[0] as f64, p[1] as f64)).collect();
    let fr = Frame::around(&pts, 0.0);
    let mut svg = Svg::new(1);
    svg.panel(&fr, "Newton polygon");
    for e in &sub.dual_edges {
        let a = fr.map((e.a[0] as f64, e.a[1] as f64));
        let b = fr.map((e.b[0] as f64, e.b[1] as f64));
        svg.line(a, b, 1, if e.is_interior() { "cell" } else { "edge" });
    }
    let mut marked: Vec<[i64; 2]> = sub.cells.iter().flat_map(|c| c.points.iter().copied()).collect();
    marked.sort();
    marked.dedup();
    for p in marked {
        svg.dot(fr.map((p[0] as f64, p[1] as f64)), "point");
    }
    svg.finish()
}

/// A modification of the line: the graph of `f` with walls hanging to
/// `-inf`; of the plane: the wall bases, which trace the curve of `f`.
pub fn modified_space_svg(m: &ModifiedSpace) -> String {
    let mut svg = Svg::new(1);
    match m.dim {
        1 => {
            let xs: Vec<Rational> = m
                .walls
                .iter()
                .filter_map(|w| match &w.base {
                    WallBase::Point(x) => Some(*x),
                    WallBase::Piece(_) => None,
                })
                .collect();
            let value = |x: Rational| {
                m.graph_cells.iter().map(|c| c.coefficient + Rational::from_integer(c.exponent[0] as i128) * x).max()
            };
            let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (f(x), value(x).map_or(0.0, f))).collect();
            let fr = Frame::around(&pts, 0.0);
            svg.panel(&fr, "graph and walls");
            // Sample the graph at the window ends and at every wall.
            let mut knots: Vec<f64> = vec![fr.x0];
            knots.extend(pts.iter().map(|p| p.0));
            knots.push(fr.x1);
            let eval = |x: f64| {
                m.graph_cells.iter().map(|c| f(c.coefficient) + c.exponent[0] as f64 * x).fold(f64::MIN, f64::max)
            };
            for w in knots.windows(2) {
                svg.line(fr.map((w[0], eval(w[0]))), fr.map((w[1], eval(w[1]))), 1, "edge");
            }
            for (wall, &p) in m.walls.iter().zip(&pts) {
                let end = fr.map(fr.exit(p, (0.0, -1.0)));
                svg.arrow(fr.map(p), end, wall.weight);
                svg.label(end, "−∞");
            }
        }
        _ => {
            let mut pts = Vec::new();
            for w in &m.walls {
                if let WallBase::Piece(p) = &w.base {
                    pts.push((f(p.start[0]), f(p.start[1])));
                    if let Some(e) = p.end() {
                        pts.push((f(e[0]), f(e[1])));
                    }
                }
            }
            let fr = Frame::around(&pts, 0.0);
            svg.panel(&fr, "wall bases (XY)");
            for w in &m.walls {
                if let WallBase::Piece(p) = &w.base {
                    let a = (f(p.start[0]), f(p.start[1]));
                    let d = p.direction.coords();
                    match p.end() {
                        Some(e) => svg.line(fr.map(a), fr.map((f(e[0]), f(e[1]))), w.weight, "wall"),
                        None => svg.arrow(fr.map(a), fr.map(fr.exit(a, (d[0] as f64, d[1] as f64))), w.weight),
                    }
                }
            }
        }
    }
    svg.finish()
}

/// Chip configurations on the line, one row per step.
pub fn chips_svg(steps: &[ChipConfiguration]) -> String {
    let xs: Vec<(f64, f64)> = steps.iter().flat_map(|c| c.chips.iter().map(|(x, _)| (f(*x), 0.0))).collect();
    let fr = Frame::around(&xs, 0.0);
    let mut svg = Svg::new(1);
    svg.panel(&fr, "chips");
    let rows = steps.len().max(1) as f64;
    let inner = PANEL - 2.0 * MARGIN;
    for (k, cfg) in steps.iter().enumerate() {
        let y = MARGIN + inner * (k as f64 + 1.0) / (rows + 1.0);
        let (l, r) = (fr.map((fr.x0, 0.0)).0, fr.map((fr.x1, 0.0)).0);
        svg.line((l, y), (r, y), 0, "cell");
        for (x, m) in &cfg.chips {
            let p = (fr.map((f(*x), 0.0)).0, y);
            svg.dot(p, "chip");
            svg.label(p, &format!("{x}:{m}"));
        }
        if cfg.at_neg_infinity > 0 {
            svg.label((l, y), &format!("−∞:{}", cfg.at_neg_infinity));
        }
        if cfg.at_pos_infinity > 0 {
            svg.label((r - 40.0, y), &format!("+∞:{}", cfg.at_pos_infinity));
        }
    }
    svg.finish()
}
