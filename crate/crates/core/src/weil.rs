//! Divisors of piecewise-linear functions on metric graphs, the extension
//! that moves all zeros and poles to ends of legs, the image of a curve
//! under a pair of functions, and the reciprocity sums.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::curve::EmbeddedCurve;
use crate::error::{Result, TropError};
use crate::pl::{ExtValue, GraphPoint, LegFunction, MetricEdge, MetricGraph, PlFunction};
use crate::scalar::{int, Point, Rational};

/// Order of `f` at `p`: the sum of the outgoing slopes.
pub fn ord(graph: &MetricGraph, f: &PlFunction, p: GraphPoint) -> Result<i64> {
    f.ord(graph, p)
}

/// All points with nonzero order, including ends of legs.
pub fn divisor_of(graph: &MetricGraph, f: &PlFunction) -> Vec<(GraphPoint, i64)> {
    f.divisor(graph)
}

/// A graph with two functions on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub graph: MetricGraph,
    pub f: PlFunction,
    pub g: PlFunction,
}

/// Result of [`make_admissible`]: the extended triple and, for every leg
/// that was attached, the original point it hangs from and which function
/// has its divisor moved onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleTriple {
    pub triple: Triple,
    pub attached: Vec<Attachment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attachment {
    pub at: GraphPoint,
    pub leg: usize,
    pub carries: Carrier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Carrier {
    F,
    G,
}

/// Whether all zeros and poles of `f` and `g` sit at ends of legs, with no
/// end shared by both divisors.
pub fn is_admissible(graph: &MetricGraph, f: &PlFunction, g: &PlFunction) -> bool {
    admissibility_defect(graph, f, g).is_none()
}

fn finite_divisor_point(graph: &MetricGraph, f: &PlFunction, g: &PlFunction) -> Option<String> {
    f.divisor(graph)
        .iter()
        .chain(&g.divisor(graph))
        .find(|(p, _)| !matches!(p, GraphPoint::LegEnd(_)))
        .map(|(p, _)| format!("divisor point {p} is not the end of a leg"))
}

fn admissibility_defect(graph: &MetricGraph, f: &PlFunction, g: &PlFunction) -> Option<String> {
    if let Some(why) = finite_divisor_point(graph, f, g) {
        return Some(why);
    }
    let df = f.divisor(graph);
    let dg = g.divisor(graph);
    df.iter().find(|(p, _)| dg.iter().any(|(q, _)| q == p)).map(|(p, _)| format!("both divisors contain {p}"))
}

/// Splits edges and legs so that every given finite point becomes a vertex.
/// Returns the new triple and the vertex of each point.
fn subdivide(t: &Triple, points: &[GraphPoint]) -> Result<(Triple, BTreeMap<GraphPoint, usize>)> {
    let graph = &t.graph;
    let mut at: BTreeMap<GraphPoint, usize> = BTreeMap::new();
    let mut vertex_count = graph.vertex_count();
    let mut edge_cuts: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    let mut leg_cuts: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    for &p in points {
        match graph.normalize(p)? {
            GraphPoint::Vertex(v) => {
                at.insert(p, v);
            }
            GraphPoint::Edge { edge, offset } => edge_cuts.entry(edge).or_default().push(offset),
            GraphPoint::Leg { leg, offset } => leg_cuts.entry(leg).or_default().push(offset),
            GraphPoint::LegEnd(_) => {}
        }
    }
    let slice =
        |h: &PlFunction, p: &dyn Fn(Rational) -> GraphPoint, own: &[(Rational, Rational)], a: Rational, b: Rational| {
            let mut pts = vec![(Rational::zero(), h.finite_value(p(a)))];
            pts.extend(own.iter().filter(|q| q.0 > a && q.0 < b).map(|q| (q.0 - a, q.1)));
            pts.push((b - a, h.finite_value(p(b))));
            pts
        };
    let mut edges = Vec::new();
    let (mut fe, mut ge) = (Vec::new(), Vec::new());
    for (i, e) in graph.edges().iter().enumerate() {
        let mut cuts = edge_cuts.remove(&i).unwrap_or_default();
        cuts.sort();
        cuts.dedup();
        let mut stops = vec![(Rational::zero(), e.tail)];
        for o in cuts {
            at.insert(GraphPoint::Edge { edge: i, offset: o }, vertex_count);
            stops.push((o, vertex_count));
            vertex_count += 1;
        }
        stops.push((e.length, e.head));
        let pt = |o: Rational| GraphPoint::Edge { edge: i, offset: o };
        for w in stops.windows(2) {
            let ((a, va), (b, vb)) = (w[0], w[1]);
            edges.push(MetricEdge { tail: va, head: vb, length: b - a });
            fe.push(slice(&t.f, &pt, t.f.edge_points(i), a, b));
            ge.push(slice(&t.g, &pt, t.g.edge_points(i), a, b));
        }
    }
    let mut legs = Vec::new();
    let (mut fl, mut gl) = (Vec::new(), Vec::new());
    for (i, &v) in graph.legs().iter().enumerate() {
        let mut cuts = leg_cuts.remove(&i).unwrap_or_default();
        cuts.sort();
        cuts.dedup();
        let pt = |o: Rational| GraphPoint::Leg { leg: i, offset: o };
        let mut prev = (Rational::zero(), v);
        for o in cuts {
            at.insert(GraphPoint::Leg { leg: i, offset: o }, vertex_count);
            edges.push(MetricEdge { tail: prev.1, head: vertex_count, length: o - prev.0 });
            fe.push(slice(&t.f, &pt, &t.f.leg_function(i).points, prev.0, o));
            ge.push(slice(&t.g, &pt, &t.g.leg_function(i).points, prev.0, o));
            prev = (o, vertex_count);
            vertex_count += 1;
        }
        legs.push(prev.1);
        let tail = |h: &PlFunction| {
            let lf = h.leg_function(i);
            let mut pts = vec![(Rational::zero(), h.finite_value(pt(prev.0)))];
            pts.extend(lf.points.iter().filter(|q| q.0 > prev.0).map(|q| (q.0 - prev.0, q.1)));
            LegFunction { points: pts, tail_slope: lf.tail_slope }
        };
        fl.push(tail(&t.f));
        gl.push(tail(&t.g));
    }
    let isolated = |h: &PlFunction| -> Vec<(usize, Rational)> {
        (0..graph.vertex_count()).map(|v| (v, h.vertex_value(v))).collect()
    };
    let new_graph = MetricGraph::new(vertex_count, edges, legs)?;
    let f = PlFunction::with_isolated_values(&new_graph, fe, fl, &isolated(&t.f))?;
    let g = PlFunction::with_isolated_values(&new_graph, ge, gl, &isolated(&t.g))?;
    Ok((Triple { graph: new_graph, f, g }, at))
}

/// Attaches a leg at every finite zero or pole of `f` and of `g`. On a leg
/// attached for `f` at `p`, `f` has slope `-ord_f(p)` and `g` is constant;
/// symmetrically for `g`. Ends of legs already present are left alone, so a
/// leg end in both divisors stays shared.
pub fn make_admissible(graph: &MetricGraph, f: &PlFunction, g: &PlFunction) -> Result<AdmissibleTriple> {
    let df = f.divisor(graph);
    let dg = g.divisor(graph);
    let mut support: Vec<GraphPoint> =
        df.iter().chain(&dg).map(|(p, _)| *p).filter(|p| !matches!(p, GraphPoint::LegEnd(_))).collect();
    support.sort();
    support.dedup();
    let base = Triple { graph: graph.clone(), f: f.clone(), g: g.clone() };
    let (t, at) = subdivide(&base, &support)?;
    let mut legs = t.graph.legs().to_vec();
    let mut f_legs: Vec<LegFunction> = (0..legs.len()).map(|l| t.f.leg_function(l).clone()).collect();
    let mut g_legs: Vec<LegFunction> = (0..legs.len()).map(|l| t.g.leg_function(l).clone()).collect();
    let mut attached = Vec::new();
    for p in support {
        let v = at[&p];
        let vp = GraphPoint::Vertex(v);
        let (fv, gv) = (t.f.finite_value(vp), t.g.finite_value(vp));
        let of = t.f.ord(&t.graph, vp)?;
        let og = t.g.ord(&t.graph, vp)?;
        for (order, carries) in [(of, Carrier::F), (og, Carrier::G)] {
            if order == 0 {
                continue;
            }
            attached.push(Attachment { at: p, leg: legs.len(), carries });
            legs.push(v);
            let moving = LegFunction::linear(if carries == Carrier::F { fv } else { gv }, -order);
            let still = LegFunction::linear(if carries == Carrier::F { gv } else { fv }, 0);
            match carries {
                Carrier::F => {
                    f_legs.push(moving);
                    g_legs.push(still);
                }
                Carrier::G => {
                    g_legs.push(moving);
                    f_legs.push(still);
                }
            }
        }
    }
    let graph2 = MetricGraph::new(t.graph.vertex_count(), t.graph.edges().to_vec(), legs)?;
    let edge_data = |h: &PlFunction| (0..graph2.edges().len()).map(|e| h.edge_points(e).to_vec()).collect();
    let isolated = |h: &PlFunction| -> Vec<(usize, Rational)> {
        (0..graph2.vertex_count()).map(|v| (v, h.vertex_value(v))).collect()
    };
    let f2 = PlFunction::with_isolated_values(&graph2, edge_data(&t.f), f_legs, &isolated(&t.f))?;
    let g2 = PlFunction::with_isolated_values(&graph2, edge_data(&t.g), g_legs, &isolated(&t.g))?;
    Ok(AdmissibleTriple { triple: Triple { graph: graph2, f: f2, g: g2 }, attached })
}

/// The two sides `sum f(x) ord_g(x)` and `sum g(x) ord_f(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeilSums {
    pub f_ord_g: Rational,
    pub g_ord_f: Rational,
}

impl WeilSums {
    pub fn difference(&self) -> Rational {
        self.f_ord_g - self.g_ord_f
    }
}

fn pairing(graph: &MetricGraph, value_of: &PlFunction, order_of: &PlFunction) -> Result<Rational> {
    let mut total = Rational::zero();
    for (p, o) in order_of.divisor(graph) {
        match value_of.value(p) {
            ExtValue::Finite(v) => total += v * int(o),
            other => return Err(TropError::IndeterminateTerm { point: p, value: other.to_string(), order: o }),
        }
    }
    Ok(total)
}

/// Both reciprocity sums. Fails if an infinite value meets a nonzero order.
pub fn weil_sums(graph: &MetricGraph, f: &PlFunction, g: &PlFunction) -> Result<WeilSums> {
    Ok(WeilSums { f_ord_g: pairing(graph, f, g)?, g_ord_f: pairing(graph, g, f)? })
}

/// `sum f(x) ord_g(x) - sum g(x) ord_f(x)`.
pub fn weil_difference(graph: &MetricGraph, f: &PlFunction, g: &PlFunction) -> Result<Rational> {
    Ok(weil_sums(graph, f, g)?.difference())
}

/// Image of the graph under `x -> (f(x), g(x))` as a plane curve. Pieces
/// where both functions are constant are contracted; a piece with slopes
/// `(a, b)` maps to direction `(a, b) / gcd` with weight `gcd`. Zeros and
/// poles must sit at ends of legs; an end shared by both divisors becomes a
/// leg of direction `-(ord_f, ord_g) / gcd`.
pub fn pushforward_image(graph: &MetricGraph, f: &PlFunction, g: &PlFunction) -> Result<EmbeddedCurve> {
    if let Some(why) = finite_divisor_point(graph, f, g) {
        return Err(TropError::NotAdmissible(why));
    }
    let mut vertices: Vec<Point> = Vec::new();
    let mut index: BTreeMap<Point, usize> = BTreeMap::new();
    let mut vertex = |p: Point| -> usize {
        *index.entry(p.clone()).or_insert_with(|| {
            vertices.push(p);
            vertices.len() - 1
        })
    };
    let image = |p: GraphPoint| vec![f.finite_value(p), g.finite_value(p)];
    let mut edges = Vec::new();
    let mut legs = Vec::new();
    let offsets = |a: &[(Rational, Rational)], b: &[(Rational, Rational)]| {
        let mut o: Vec<Rational> = a.iter().chain(b).map(|p| p.0).collect();
        o.sort();
        o.dedup();
        o
    };
    for e in 0..graph.edges().len() {
        let offs = offsets(f.edge_points(e), g.edge_points(e));
        for w in offs.windows(2) {
            let a = image(GraphPoint::Edge { edge: e, offset: w[0] });
            let b = image(GraphPoint::Edge { edge: e, offset: w[1] });
            if a == b {
                continue;
            }
            let slopes = [(b[0] - a[0]) / (w[1] - w[0]), (b[1] - a[1]) / (w[1] - w[0])];
            let gcd = slopes[0].to_integer().gcd(&slopes[1].to_integer()) as u64;
            edges.push((vertex(a), vertex(b), gcd));
        }
    }
    for l in 0..graph.legs().len() {
        let offs = offsets(&f.leg_function(l).points, &g.leg_function(l).points);
        for w in offs.windows(2) {
            let a = image(GraphPoint::Leg { leg: l, offset: w[0] });
            let b = image(GraphPoint::Leg { leg: l, offset: w[1] });
            if a == b {
                continue;
            }
            let slopes = [(b[0] - a[0]) / (w[1] - w[0]), (b[1] - a[1]) / (w[1] - w[0])];
            let gcd = slopes[0].to_integer().gcd(&slopes[1].to_integer()) as u64;
            edges.push((vertex(a), vertex(b), gcd));
        }
        let tail = [f.leg_function(l).tail_slope, g.leg_function(l).tail_slope];
        if tail != [0, 0] {
            let last = *offs.last().expect("legs have a base point");
            let base = vertex(image(GraphPoint::Leg { leg: l, offset: last }));
            let gcd = tail[0].gcd(&tail[1]);
            legs.push((base, vec![tail[0] / gcd, tail[1] / gcd], gcd as u64));
        }
    }
    if vertices.is_empty() {
        return Err(TropError::EmptyCurve);
    }
    EmbeddedCurve::new(2, vertices, edges, legs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::point_of;

    #[test]
    fn order_of_double_zero() {
        let g = fixtures::projective_line();
        let f = fixtures::function_on_projective_line(&[(int(0), int(0))], 0, &[(int(0), int(0))], 2);
        assert_eq!(ord(&g, &f, GraphPoint::Vertex(0)).unwrap(), 2);
        assert_eq!(ord(&g, &f, GraphPoint::LegEnd(1)).unwrap(), -2);
        assert_eq!(ord(&g, &f, GraphPoint::Leg { leg: 1, offset: int(3) }).unwrap(), 0);
        assert_eq!(divisor_of(&g, &f), vec![(GraphPoint::Vertex(0), 2), (GraphPoint::LegEnd(1), -2)]);
    }

    #[test]
    fn chips_polynomial_divisor() {
        // max(0, X-1, 2X-3) on TP1.
        let f = fixtures::function_on_projective_line(
            &[(int(0), int(0))],
            0,
            &[(int(0), int(0)), (int(1), int(0)), (int(2), int(1))],
            2,
        );
        let g = fixtures::projective_line();
        assert_eq!(
            divisor_of(&g, &f),
            vec![
                (GraphPoint::Leg { leg: 1, offset: int(1) }, 1),
                (GraphPoint::Leg { leg: 1, offset: int(2) }, 1),
                (GraphPoint::LegEnd(1), -2)
            ]
        );
    }

    #[test]
    fn hand_example_sums() {
        let (graph, f, g) = fixtures::weil_pair();
        let sums = weil_sums(&graph, &f, &g).unwrap();
        assert_eq!((sums.f_ord_g, sums.g_ord_f), (int(2), int(2)));
        let adm = make_admissible(&graph, &f, &g).unwrap();
        let t = &adm.triple;
        assert!(is_admissible(&t.graph, &t.f, &t.g));
        assert_eq!(adm.attached.len(), 2);
        let after = weil_sums(&t.graph, &t.f, &t.g).unwrap();
        assert_eq!(after, sums);
        let image = pushforward_image(&t.graph, &t.f, &t.g).unwrap();
        assert!(image.check_balancing().is_ok());
        let mut horizontal: Vec<Rational> =
            image.legs_of().iter().filter(|l| l.direction.coords()[1] == 0).map(|l| l.base[1]).collect();
        horizontal.sort();
        assert_eq!(horizontal, vec![int(0), int(2)]);
        let mut vertical: Vec<Rational> =
            image.legs_of().iter().filter(|l| l.direction.coords()[0] == 0).map(|l| l.base[0]).collect();
        vertical.sort();
        assert_eq!(vertical, vec![int(0), int(2)]);
    }

    #[test]
    fn finite_zero_blocks_the_image() {
        let (graph, f, g) = fixtures::weil_pair();
        assert!(matches!(pushforward_image(&graph, &f, &g), Err(TropError::NotAdmissible(_))));
    }

    #[test]
    fn linear_functions_give_a_line() {
        let graph = fixtures::projective_line();
        let f = fixtures::function_on_projective_line(&[(int(0), int(0))], -1, &[(int(0), int(0))], 1);
        let g = PlFunction::constant(&graph, int(0));
        let image = pushforward_image(&graph, &f, &g).unwrap();
        assert_eq!(image.legs().len(), 2);
        assert_eq!(image.vertices(), &[point_of(&[0, 0])]);
    }

    #[test]
    fn gcd_moves_into_weight() {
        let graph = fixtures::projective_line();
        let f = fixtures::function_on_projective_line(&[(int(0), int(0))], -2, &[(int(0), int(0))], 2);
        let g = fixtures::function_on_projective_line(&[(int(0), int(0))], -4, &[(int(0), int(0))], 4);
        let image = pushforward_image(&graph, &f, &g).unwrap();
        assert!(image.legs().iter().all(|l| l.weight == 2 && l.direction.coords().iter().map(|c| c.abs()).eq([1, 2])));
    }

    #[test]
    fn constant_function_sums_vanish() {
        let (graph, f, _) = fixtures::weil_pair();
        let c = PlFunction::constant(&graph, int(7));
        let sums = weil_sums(&graph, &c, &f).unwrap();
        assert_eq!((sums.f_ord_g, sums.g_ord_f), (int(0), int(0)));
    }

    #[test]
    fn shared_infinite_end_is_indeterminate() {
        let graph = fixtures::projective_line();
        let f = fixtures::function_on_projective_line(&[(int(0), int(0))], 0, &[(int(0), int(0))], 1);
        let adm = make_admissible(&graph, &f, &f).unwrap();
        let t = &adm.triple;
        assert!(matches!(weil_sums(&t.graph, &t.f, &t.g), Err(TropError::IndeterminateTerm { .. })));
    }

    #[test]
    fn zero_at_trivalent_vertex_gains_one_leg() {
        // Tripod: f has slopes 1, 1, 0 out of the centre.
        let graph = MetricGraph::new(1, vec![], vec![0, 0, 0]).unwrap();
        let f = PlFunction::new(
            &graph,
            vec![],
            vec![LegFunction::linear(int(0), 1), LegFunction::linear(int(0), 1), LegFunction::linear(int(0), -2)],
        )
        .unwrap();
        let g = PlFunction::constant(&graph, int(0));
        assert_eq!(f.ord(&graph, GraphPoint::Vertex(0)).unwrap(), 0);
        let f2 = PlFunction::new(
            &graph,
            vec![],
            vec![LegFunction::linear(int(0), 1), LegFunction::linear(int(0), 1), LegFunction::linear(int(0), 0)],
        )
        .unwrap();
        let adm = make_admissible(&graph, &f2, &g).unwrap();
        assert_eq!(adm.attached.len(), 1);
        assert_eq!(adm.triple.graph.legs().len(), 4);
        assert_eq!(adm.triple.f.ord(&adm.triple.graph, GraphPoint::Vertex(0)).unwrap(), 0);
        assert_eq!(adm.triple.f.leg_start_slope(0), 1);
    }
}
