//! Command definitions and their reports.
//!
//! Every command produces a text report and a JSON report with the same
//! content; `--json` selects the latter. A report whose check fails is still
//! printed, and the process exits with status 3.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;
use tropmod::audit::{horizontal_chain, horizontal_edge_stable_check, singularity_area_audit};
use tropmod::curve::PieceOf;
use tropmod::intersect::{stable_by_component, stable_intersection_detailed, transversal_intersection, Divisor};
use tropmod::modify::{
    chip_decrease, modify_curve_stable, modify_curve_with, modify_space, pullback_with_frozen, subordination_witness,
    ChipConfiguration, ModifiedSpace, WallBase,
};
use tropmod::momentum::{momentum_2d, momentum_3d, momentum_general};
use tropmod::scalar::fmt_point;
use tropmod::weil::{is_admissible, make_admissible, pushforward_image, weil_sums, Carrier};
use tropmod::{
    curve_from_polynomial, parse_rational, plane_curve_with_dual, EmbeddedCurve, GraphPoint, MetricGraph, PlFunction,
    Point, Rational, TropError, TropicalPolynomial, TropicalScalar,
};

use crate::model::{self, read_document, split_ref, Document, FuncData, Item, ParseError};
use crate::render;

#[derive(Debug, Parser)]
#[command(name = "tropmod", version, about = "Exact tropical curves, intersections and modifications")]
pub struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// A polynomial or curve, given as `--poly`, `--curve` or positionally.
/// Each accepts `FILE` or `FILE#NAME`.
#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Document holding a polynomial.
    #[arg(long, value_name = "FILE[#NAME]")]
    pub poly: Option<String>,
    /// Document holding a curve (a polynomial is turned into its curve).
    #[arg(long, value_name = "FILE[#NAME]")]
    pub curve: Option<String>,
    #[arg(value_name = "FILE[#NAME]")]
    pub input: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the vertices, edges and legs of a curve and check balancing.
    Curve {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "SVG")]
        render: Option<PathBuf>,
    },
    /// Regular subdivision of the Newton polygon of a plane polynomial.
    Subdivision {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "SVG")]
        render: Option<PathBuf>,
    },
    /// Intersection of two plane curves, transversal unless `--stable`.
    Intersect {
        a: String,
        b: String,
        #[arg(long)]
        stable: bool,
    },
    /// Modify space along a polynomial, or lift a curve along it.
    Modify {
        /// The polynomial to modify along.
        #[arg(long, value_name = "FILE[#NAME]")]
        along: String,
        #[command(flatten)]
        input: Input,
        /// Lift by this function on the curve instead of the stable lift.
        #[arg(long, value_name = "FILE[#NAME]")]
        lift: Option<String>,
        #[arg(long, value_name = "SVG")]
        render: Option<PathBuf>,
    },
    /// Leg momenta about a point; fails unless the total vanishes.
    Momentum {
        #[command(flatten)]
        input: Input,
        /// Reference point as `x,y,...` or `FILE#NAME`; the origin by default.
        #[arg(long)]
        point: Option<String>,
    },
    /// Both reciprocity sums for two functions on an abstract graph.
    Weil {
        file: String,
        #[arg(long, default_value = "f")]
        f: String,
        #[arg(long, default_value = "g")]
        g: String,
    },
    /// Check admissibility, extend to an admissible triple and push forward.
    Admissible {
        file: String,
        #[arg(long, default_value = "f")]
        f: String,
        #[arg(long, default_value = "g")]
        g: String,
    },
    /// Check that a lift lies below the restriction and agrees on its frozen locus.
    Subordinate {
        #[arg(long, value_name = "FILE[#NAME]")]
        curve: String,
        #[arg(long, value_name = "FILE[#NAME]")]
        along: String,
        #[arg(long, value_name = "FILE[#NAME]")]
        lift: String,
    },
    /// Chips of a univariate polynomial, with optional coefficient decreases.
    Chips {
        #[command(flatten)]
        input: Input,
        /// Lower a coefficient, as `EXP=COEFF`; may be repeated.
        #[arg(long, value_name = "EXP=COEFF")]
        decrease: Vec<String>,
        #[arg(long, value_name = "SVG")]
        render: Option<PathBuf>,
    },
    /// Area and chain conditions for a singular point on a horizontal edge.
    Audit {
        #[command(flatten)]
        input: Input,
        /// A vertex of the horizontal chain, as `x,y`.
        #[arg(long)]
        vertex: String,
        /// Marked edge of the chain, counted from 1 at the left.
        #[arg(long)]
        edge: usize,
        /// Multiplicity of the singular point.
        #[arg(long)]
        m: u64,
    },
    /// Write an SVG of a curve or, with `--subdivision`, of a Newton subdivision.
    Render {
        #[command(flatten)]
        input: Input,
        #[arg(short, long, value_name = "SVG")]
        output: PathBuf,
        #[arg(long)]
        subdivision: bool,
    },
    /// Run quick randomized checks of the library's identities.
    Selftest {
        #[arg(long, default_value_t = 24)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Domain(#[from] TropError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Domain(TropError::NotSubordinate(_)) => 3,
            CliError::Domain(_) | CliError::Output { .. } => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// A finished report. `ok` is false when a verification failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Report {
        Report { text, json, ok: true }
    }

    fn check(mut self, ok: bool) -> Report {
        self.ok &= ok;
        self
    }

    pub fn exit_code(&self) -> u8 {
        if self.ok {
            0
        } else {
            3
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Curve { input, render } => curve(input, render.as_deref()),
        Command::Subdivision { input, render } => subdivision(input, render.as_deref()),
        Command::Intersect { a, b, stable } => intersect(a, b, *stable),
        Command::Modify { along, input, lift, render } => modify(along, input, lift.as_deref(), render.as_deref()),
        Command::Momentum { input, point } => momentum(input, point.as_deref()),
        Command::Weil { file, f, g } => weil(file, f, g),
        Command::Admissible { file, f, g } => admissible(file, f, g),
        Command::Subordinate { curve, along, lift } => subordinate(curve, along, lift),
        Command::Chips { input, decrease, render } => chips(input, decrease, render.as_deref()),
        Command::Audit { input, vertex, edge, m } => audit(input, vertex, *edge, *m),
        Command::Render { input, output, subdivision } => render_cmd(input, output, *subdivision),
        Command::Selftest { cases, seed } => Ok(crate::selftest::run(*cases, *seed)),
    }
}

fn load(arg: &str) -> Result<(Document, Option<String>)> {
    let (file, name) = split_ref(arg);
    Ok((read_document(file)?, name.map(str::to_string)))
}

fn load_poly(arg: &str) -> Result<TropicalPolynomial> {
    let (doc, name) = load(arg)?;
    Ok(doc.poly(name.as_deref())?.clone())
}

/// A curve item, or the curve of a polynomial item.
fn load_curve(arg: &str) -> Result<EmbeddedCurve> {
    let (doc, name) = load(arg)?;
    let item = match name.as_deref() {
        Some(n) => doc.items.get(n).ok_or_else(|| ParseError::Lookup(format!("no item named {n:?} in {arg}")))?,
        None if doc.has("curve") => return Ok(doc.curve(None)?.clone()),
        None => return Ok(curve_from_polynomial(doc.poly(None)?)?),
    };
    match item {
        Item::Curve(c) => Ok(c.clone()),
        Item::Poly(f) => Ok(curve_from_polynomial(f)?),
        other => Err(ParseError::Lookup(format!("{arg} is a {}, not a curve or polynomial", other.kind())).into()),
    }
}

fn load_func(arg: &str) -> Result<FuncData> {
    let (doc, name) = load(arg)?;
    Ok(doc.func(name.as_deref())?.clone())
}

impl Input {
    fn source(&self) -> Option<&str> {
        self.poly.as_deref().or(self.curve.as_deref()).or(self.input.as_deref())
    }

    fn required(&self) -> Result<&str> {
        let given = [&self.poly, &self.curve, &self.input].iter().filter(|x| x.is_some()).count();
        match (given, self.source()) {
            (1, Some(s)) => Ok(s),
            (0, _) => Err(CliError::Usage("an input is required (--poly, --curve or a file)".into())),
            _ => Err(CliError::Usage("give exactly one of --poly, --curve or a file".into())),
        }
    }

    fn poly(&self) -> Result<TropicalPolynomial> {
        if self.curve.is_some() {
            return Err(CliError::Usage("this command needs a polynomial, not --curve".into()));
        }
        load_poly(self.required()?)
    }

    fn curve(&self) -> Result<EmbeddedCurve> {
        let src = self.required()?;
        if self.poly.is_some() {
            return Ok(curve_from_polynomial(&load_poly(src)?)?);
        }
        load_curve(src)
    }
}

fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).map_err(|e| CliError::Output { path: path.display().to_string(), message: e.to_string() })
}

fn qj(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn pj(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(qj).collect())
}

fn graph_point_json(p: &GraphPoint) -> Value {
    match p {
        GraphPoint::Vertex(v) => json!({"vertex": v}),
        GraphPoint::Edge { edge, offset } => json!({"edge": edge, "offset": qj(offset)}),
        GraphPoint::Leg { leg, offset } => json!({"leg": leg, "offset": qj(offset)}),
        GraphPoint::LegEnd(l) => json!({"leg_end": l}),
    }
}

fn divisor_json(d: &Divisor) -> Value {
    Value::Array(d.iter().map(|(p, m)| json!({"point": pj(p), "multiplicity": m})).collect())
}

fn curve_text(out: &mut String, c: &EmbeddedCurve) -> bool {
    let _ = writeln!(
        out,
        "curve in dimension {}: vertices {}, edges {}, legs {}",
        c.dim(),
        c.vertices().len(),
        c.edges().len(),
        c.legs().len()
    );
    for (i, v) in c.vertices().iter().enumerate() {
        let _ = writeln!(out, "  v{i} {}", fmt_point(v));
    }
    for (i, e) in c.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "  e{i} v{} -> v{} direction {} length {} weight {}",
            e.tail, e.head, e.direction, e.length, e.weight
        );
    }
    for (i, l) in c.legs().iter().enumerate() {
        let _ = writeln!(out, "  l{i} at v{} direction {} weight {}", l.vertex, l.direction, l.weight);
    }
    let report = c.check_balancing();
    if report.is_ok() {
        let _ = writeln!(out, "balanced");
    }
    for (v, defect) in &report.violations {
        let _ = writeln!(out, "unbalanced at v{v}: defect {defect:?}");
    }
    report.is_ok()
}

fn curve_json(c: &EmbeddedCurve) -> Value {
    let mut v = model::item_json(&Item::Curve(c.clone()));
    let report = c.check_balancing();
    v["balanced"] = json!(report.is_ok());
    v["defects"] = Value::Array(report.violations.iter().map(|(v, d)| json!({"vertex": v, "defect": d})).collect());
    v
}

fn curve(input: &Input, svg: Option<&Path>) -> Result<Report> {
    let c = input.curve()?;
    let mut text = String::new();
    let ok = curve_text(&mut text, &c);
    if let Some(path) = svg {
        write_svg(path, &render::curve_svg(&c))?;
    }
    Ok(Report::new(text, json!({"curve": curve_json(&c)})).check(ok))
}

fn subdivision(input: &Input, svg: Option<&Path>) -> Result<Report> {
    let f = input.poly()?;
    let (_, sub) = plane_curve_with_dual(&f)?;
    let lp = |p: &[i64; 2]| format!("({}, {})", p[0], p[1]);
    let mut text = String::new();
    let hull: Vec<String> = sub.polygon.vertices().iter().map(lp).collect();
    let _ = writeln!(text, "Newton polygon {} area {}", hull.join(" "), sub.polygon.area());
    let mut cells = Vec::new();
    for (i, c) in sub.cells.iter().enumerate() {
        let pts: Vec<String> = c.points.iter().map(lp).collect();
        let vertex = c.vertex.as_ref().map_or("none".to_string(), |v| fmt_point(v));
        let _ = writeln!(text, "  cell {i}: area {} points {} dual vertex {vertex}", c.polygon.area(), pts.join(" "));
        cells.push(json!({
            "area": qj(&c.polygon.area()),
            "points": c.points,
            "vertex": c.vertex.as_ref().map(|v| pj(v)),
        }));
    }
    let mut edges = Vec::new();
    for e in &sub.dual_edges {
        let duals: Vec<String> = e
            .dual
            .iter()
            .map(|d| match d {
                tropmod::subdivision::CurvePart::Edge(k) => format!("e{k}"),
                tropmod::subdivision::CurvePart::Leg(k) => format!("l{k}"),
            })
            .collect();
        let _ = writeln!(
            text,
            "  {} - {} lattice length {} cells {:?} dual {}",
            lp(&e.a),
            lp(&e.b),
            e.lattice_length,
            e.cells,
            duals.join(" ")
        );
        edges.push(json!({"a": e.a, "b": e.b, "lattice_length": e.lattice_length, "cells": e.cells, "dual": duals}));
    }
    let _ = writeln!(text, "cell area sum {}", sub.cell_area_sum());
    if let Some(path) = svg {
        write_svg(path, &render::subdivision_svg(&sub))?;
    }
    Ok(Report::new(
        text,
        json!({"polygon": sub.polygon.vertices(), "area": qj(&sub.polygon.area()), "cells": cells, "edges": edges}),
    ))
}

fn intersect(a: &str, b: &str, stable: bool) -> Result<Report> {
    let (c1, c2) = (load_curve(a)?, load_curve(b)?);
    if !stable {
        let d = transversal_intersection(&c1, &c2)?;
        let text = format!("transversal intersection {d}\ndegree {}\n", d.degree());
        return Ok(Report::new(text, json!({"divisor": divisor_json(&d), "degree": d.degree()})));
    }
    let s = stable_intersection_detailed(&c1, &c2)?;
    let mut text = format!(
        "stable intersection {}\ndegree {}\nperturbation direction ({}, {})\nescaping {}\n",
        s.divisor,
        s.divisor.degree(),
        s.direction[0],
        s.direction[1],
        s.escaping
    );
    let comps = stable_by_component(&c1, &c2)?;
    let mut cj = Vec::new();
    for (comp, m) in &comps {
        let _ = writeln!(text, "  component {comp}: multiplicity {m}");
        cj.push(json!({"component": comp.to_string(), "compact": comp.is_compact(), "multiplicity": m}));
    }
    Ok(Report::new(
        text,
        json!({
            "divisor": divisor_json(&s.divisor),
            "degree": s.divisor.degree(),
            "direction": s.direction,
            "escaping": s.escaping,
            "components": cj,
        }),
    ))
}

fn space_report(f: &TropicalPolynomial, m: &ModifiedSpace) -> (String, Value) {
    let mut text = format!("modification of R^{} along {f}\n", m.dim);
    let _ = writeln!(text, "graph cells:");
    for c in &m.graph_cells {
        let _ = writeln!(text, "  Y = {} + {:?}.X", c.coefficient, c.exponent);
    }
    let _ = writeln!(text, "walls:");
    let mut walls = Vec::new();
    for (w, defect) in m.walls.iter().zip(&m.defects) {
        let base = match &w.base {
            WallBase::Point(x) => format!("X = {x}"),
            WallBase::Piece(p) => {
                let part = match p.part {
                    PieceOf::Edge(e) => format!("edge {e}"),
                    PieceOf::Leg(l) => format!("leg {l}"),
                };
                match p.end() {
                    Some(e) => format!("{part} [{}, {}]", fmt_point(&p.start), fmt_point(&e)),
                    None => format!("{part} {} + R>=0 {}", fmt_point(&p.start), p.direction),
                }
            }
        };
        let _ = writeln!(
            text,
            "  {base} weight {} between {:?} and {:?} defect {defect:?}",
            w.weight, w.sides.0, w.sides.1
        );
        walls.push(json!({"base": base, "weight": w.weight, "sides": [w.sides.0, w.sides.1], "defect": defect}));
    }
    let _ = writeln!(text, "{}", if m.is_balanced() { "balanced" } else { "unbalanced" });
    let cells: Vec<Value> =
        m.graph_cells.iter().map(|c| json!({"exponent": c.exponent, "coefficient": qj(&c.coefficient)})).collect();
    let value = json!({
        "dim": m.dim,
        "defining_polynomial": ModifiedSpace::defining_polynomial(f).to_string(),
        "graph_cells": cells,
        "walls": walls,
        "balanced": m.is_balanced(),
    });
    (text, value)
}

fn modify(along: &str, input: &Input, lift: Option<&str>, svg: Option<&Path>) -> Result<Report> {
    let f = load_poly(along)?;
    if input.source().is_none() {
        if lift.is_some() {
            return Err(CliError::Usage("--lift needs a curve".into()));
        }
        let m = modify_space(&f)?;
        let (text, value) = space_report(&f, &m);
        if let Some(path) = svg {
            write_svg(path, &render::modified_space_svg(&m))?;
        }
        return Ok(Report::new(text, value).check(m.is_balanced()));
    }
    let c = input.curve()?;
    let lifted = match lift {
        None => modify_curve_stable(&c, &f)?,
        Some(h) => modify_curve_with(&c, &f, &load_func(h)?.on(&c.metric_graph())?)?,
    };
    let mut text = format!("{} lift along {f}\n", if lift.is_some() { "given" } else { "stable" });
    let ok = curve_text(&mut text, &lifted);
    if let Some(path) = svg {
        write_svg(path, &render::curve_svg(&lifted))?;
    }
    Ok(Report::new(text, json!({"lift": curve_json(&lifted)})).check(ok))
}

fn parse_point(arg: &str) -> Result<Point> {
    if arg.contains(".json") {
        let (doc, name) = load(arg)?;
        return Ok(doc.point(name.as_deref())?.clone());
    }
    arg.split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| CliError::Usage(format!("bad coordinate {s:?}: {e}"))))
        .collect()
}

fn momentum(input: &Input, point: Option<&str>) -> Result<Report> {
    let c = input.curve()?;
    let a = match point {
        Some(p) => parse_point(p)?,
        None => vec![Rational::from_integer(0); c.dim()],
    };
    let (report, convention) = match c.dim() {
        2 => (momentum_2d(&c, &a)?, "m det(v, B - A)"),
        3 => (momentum_3d(&c, &a)?, "m v x (B - A)"),
        _ => (momentum_general(&c, &a)?, "minors of [B - A; v]"),
    };
    let mut text = format!("momentum about {} ({convention})\n", fmt_point(&a));
    for (leg, x) in &report.per_leg {
        let _ = writeln!(text, "  l{leg} {}", fmt_point(x));
    }
    let _ = writeln!(text, "total {}", fmt_point(&report.total));
    if !report.balanced {
        let _ = writeln!(text, "curve is unbalanced");
    }
    let per_leg: Vec<Value> = report.per_leg.iter().map(|(l, x)| json!({"leg": l, "momentum": pj(x)})).collect();
    Ok(Report::new(
        text,
        json!({"reference": pj(&a), "legs": per_leg, "total": pj(&report.total), "balanced": report.balanced}),
    )
    .check(report.balanced && report.is_zero()))
}

fn triple(file: &str, f: &str, g: &str) -> Result<(MetricGraph, PlFunction, PlFunction)> {
    let doc = read_document(file)?;
    let graph = doc.graph(None)?.clone();
    let ff = doc.func(Some(f))?.on(&graph)?;
    let gg = doc.func(Some(g))?.on(&graph)?;
    Ok((graph, ff, gg))
}

fn divisor_text(d: &[(GraphPoint, i64)]) -> String {
    let parts: Vec<String> = d.iter().map(|(p, m)| format!("{p}:{m}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn divisor_pairs_json(d: &[(GraphPoint, i64)]) -> Value {
    Value::Array(d.iter().map(|(p, m)| json!({"at": graph_point_json(p), "order": m})).collect())
}

fn weil(file: &str, f: &str, g: &str) -> Result<Report> {
    let (graph, ff, gg) = triple(file, f, g)?;
    let sums = weil_sums(&graph, &ff, &gg)?;
    let (df, dg) = (ff.divisor(&graph), gg.divisor(&graph));
    let diff = sums.difference();
    let text = format!(
        "div {f} {}\ndiv {g} {}\nsum {f}(x) ord_{g}(x) = {}\nsum {g}(x) ord_{f}(x) = {}\ndifference {diff}\n",
        divisor_text(&df),
        divisor_text(&dg),
        sums.f_ord_g,
        sums.g_ord_f
    );
    Ok(Report::new(
        text,
        json!({
            "div_f": divisor_pairs_json(&df),
            "div_g": divisor_pairs_json(&dg),
            "f_ord_g": qj(&sums.f_ord_g),
            "g_ord_f": qj(&sums.g_ord_f),
            "difference": qj(&diff),
        }),
    )
    .check(diff == Rational::from_integer(0)))
}

fn admissible(file: &str, f: &str, g: &str) -> Result<Report> {
    let (graph, ff, gg) = triple(file, f, g)?;
    let already = is_admissible(&graph, &ff, &gg);
    let adm = make_admissible(&graph, &ff, &gg)?;
    let t = &adm.triple;
    let mut text = format!("admissible: {}\n", if already { "yes" } else { "no" });
    let mut attached = Vec::new();
    for a in &adm.attached {
        let who = match a.carries {
            Carrier::F => f,
            Carrier::G => g,
        };
        let _ = writeln!(text, "  attached leg {} at {} carrying div {who}", a.leg, a.at);
        attached.push(json!({"leg": a.leg, "at": graph_point_json(&a.at), "carries": who}));
    }
    let mut doc = Document::default();
    doc.items.insert("graph".into(), Item::Abstract(t.graph.clone()));
    doc.items.insert(f.into(), Item::Func(FuncData::of(&t.f, &t.graph)));
    doc.items.insert(g.into(), Item::Func(FuncData::of(&t.g, &t.graph)));
    let extended = model::document_json(&doc);
    let _ = writeln!(text, "extended triple {extended}");
    let image = pushforward_image(&t.graph, &t.f, &t.g)?;
    let _ = write!(text, "image under ({f}, {g}): ");
    let balanced = curve_text(&mut text, &image);
    Ok(Report::new(
        text,
        json!({"admissible": already, "attached": attached, "extended": extended, "image": curve_json(&image)}),
    )
    .check(balanced))
}

fn subordinate(curve: &str, along: &str, lift: &str) -> Result<Report> {
    let c = load_curve(curve)?;
    let f = load_poly(along)?;
    let h = load_func(lift)?.on(&c.metric_graph())?;
    let frozen = pullback_with_frozen(&c, &f)?;
    let mut text = String::from("frozen locus:");
    if frozen.frozen.is_empty() {
        text.push_str(" empty");
    }
    for iv in &frozen.frozen {
        let _ = write!(text, " {iv}");
    }
    text.push('\n');
    let frozen_json: Vec<Value> = frozen.frozen.iter().map(|iv| Value::String(iv.to_string())).collect();
    match subordination_witness(&h, &frozen)? {
        None => {
            text.push_str("subordinate\n");
            Ok(Report::new(text, json!({"frozen": frozen_json, "subordinate": true})))
        }
        Some(w) => {
            let _ = writeln!(text, "not subordinate: {w}");
            let witness = json!({
                "point": graph_point_json(&w.point),
                "coords": pj(&w.coords),
                "lift": qj(&w.lift_value),
                "restriction": qj(&w.stable_value),
            });
            Ok(Report::new(text, json!({"frozen": frozen_json, "subordinate": false, "witness": witness})).check(false))
        }
    }
}

fn parse_decrease(arg: &str) -> Result<(i64, TropicalScalar)> {
    let bad = || CliError::Usage(format!("expected EXP=COEFF, got {arg:?}"));
    let (e, c) = arg.split_once('=').ok_or_else(bad)?;
    let e: i64 = e.trim().parse().map_err(|_| bad())?;
    let c = match c.trim() {
        "-inf" => TropicalScalar::NegInfinity,
        s => TropicalScalar::Finite(parse_rational(s).map_err(|_| bad())?),
    };
    Ok((e, c))
}

fn chips(input: &Input, decreases: &[String], svg: Option<&Path>) -> Result<Report> {
    let f = input.poly()?;
    let mut cfg = ChipConfiguration::new(f)?;
    let mut steps = vec![cfg.clone()];
    let mut text = format!("{}: {cfg} total {}\n", cfg.ambient, cfg.total());
    for d in decreases {
        let (e, c) = parse_decrease(d)?;
        cfg = chip_decrease(&cfg, e, c)?;
        let _ = writeln!(text, "lower x^{e} to {c}: {}: {cfg} total {}", cfg.ambient, cfg.total());
        steps.push(cfg.clone());
    }
    let json_steps: Vec<Value> = steps
        .iter()
        .map(|s| {
            json!({
                "polynomial": s.ambient.to_string(),
                "chips": s.chips.iter().map(|(x, m)| json!({"at": qj(x), "count": m})).collect::<Vec<_>>(),
                "at_neg_infinity": s.at_neg_infinity,
                "at_pos_infinity": s.at_pos_infinity,
                "total": s.total(),
            })
        })
        .collect();
    if let Some(path) = svg {
        write_svg(path, &render::chips_svg(&steps))?;
    }
    let conserved = steps.iter().all(|s| s.total() == steps[0].total());
    Ok(Report::new(text, json!({"steps": json_steps})).check(conserved))
}

fn audit(input: &Input, vertex: &str, edge: usize, m: u64) -> Result<Report> {
    let f = input.poly()?;
    let (c, sub) = plane_curve_with_dual(&f)?;
    let p = parse_point(vertex)?;
    let v = c
        .vertices()
        .iter()
        .position(|x| x == &p)
        .ok_or_else(|| TropError::Precondition(format!("{} is not a vertex of the curve", fmt_point(&p))))?;
    let chain = horizontal_chain(&c, v);
    let a = singularity_area_audit(&sub, &chain, edge, m)?;
    let coords: Vec<String> = chain.iter().map(|&k| fmt_point(&c.vertices()[k])).collect();
    let mark = |ok: bool| if ok { "ok" } else { "fails" };
    let mut text = format!("chain {}\nmarked edge {edge}, multiplicity {m}\n", coords.join(" "));
    let _ = writeln!(text, "A {:?} B {:?} C {:?} D {:?}", a.a, a.b, a.c, a.d);
    let _ = writeln!(text, "partial A {:?} partial B {:?}", a.partial_a, a.partial_b);
    let areas: Vec<String> = a.areas.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(text, "face areas {}", areas.join(" "));
    let _ = writeln!(text, "edge length {} >= {m}: {}", a.edge_length, mark(a.edge_ok()));
    let _ = writeln!(text, "chain area {} >= {}: {}", a.area_sum, a.chain_bound(), mark(a.chain_area_ok()));
    if a.is_two_face() {
        let _ = writeln!(text, "two faces {} >= {}: {}", a.two_face_area, a.two_face_bound(), mark(a.two_face_ok()));
    } else {
        let _ = writeln!(
            text,
            "two faces {} (bound {} applies to two-face chains only)",
            a.two_face_area,
            a.two_face_bound()
        );
    }
    let _ = writeln!(text, "min sum {} >= {m}: {}", a.min_sum, mark(a.min_sum_ok()));
    let _ = writeln!(text, "{}", if a.obstructed() { "obstructed" } else { "not obstructed" });
    // Width check on the marked curve edge, when its faces allow it.
    let (l, r) = (chain[edge - 1], chain[edge]);
    let curve_edge = c.edges().iter().position(|e| (e.tail, e.head) == (l, r) || (e.tail, e.head) == (r, l));
    let mut ok = true;
    let mut width = Value::Null;
    if let Some(k) = curve_edge {
        match horizontal_edge_stable_check(&c, &sub, k) {
            Ok(w) => {
                let _ = writeln!(text, "width sum {} vs local stable intersection {}", w.width_sum, w.stable);
                ok = w.agrees();
                width = json!({"width_sum": w.width_sum, "stable": w.stable, "agrees": ok});
            }
            Err(TropError::PreconditionExtension(why)) => {
                let _ = writeln!(text, "width check skipped: {why}");
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Report::new(
        text,
        json!({
            "chain": chain.iter().map(|&k| pj(&c.vertices()[k])).collect::<Vec<_>>(),
            "edge": edge,
            "m": m,
            "a": a.a, "b": a.b, "c": a.c, "d": a.d,
            "areas": a.areas.iter().map(qj).collect::<Vec<_>>(),
            "area_sum": qj(&a.area_sum),
            "chain_bound": qj(&a.chain_bound()),
            "two_face_area": qj(&a.two_face_area),
            "two_face_bound": qj(&a.two_face_bound()),
            "edge_length": a.edge_length,
            "min_sum": a.min_sum,
            "obstructed": a.obstructed(),
            "width_check": width,
        }),
    )
    .check(ok))
}

fn render_cmd(input: &Input, output: &Path, subdivision: bool) -> Result<Report> {
    let svg = if subdivision {
        let (_, sub) = plane_curve_with_dual(&input.poly()?)?;
        render::subdivision_svg(&sub)
    } else {
        render::curve_svg(&input.curve()?)
    };
    write_svg(output, &svg)?;
    let text = format!("wrote {}\n", output.display());
    Ok(Report::new(text, json!({"written": output.display().to_string()})))
}
