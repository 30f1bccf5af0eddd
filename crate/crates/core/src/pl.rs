//! Metric graphs with legs and continuous piecewise-linear functions with
//! integer slopes on them.
//!
//! Points are addressed by `(edge, offset)` or `(leg, offset)`, never by
//! coordinates. On an embedded curve the offset of an edge point is measured
//! in lattice units of the edge direction, so slopes are integral exactly
//! when they are integral along the primitive direction.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::error::{Result, TropError};
use crate::scalar::{int, Rational};

/// A point of a metric graph. `LegEnd` is the point at infinity of a leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphPoint {
    Vertex(usize),
    Edge { edge: usize, offset: Rational },
    Leg { leg: usize, offset: Rational },
    LegEnd(usize),
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphPoint::Vertex(v) => write!(f, "vertex {v}"),
            GraphPoint::Edge { edge, offset } => write!(f, "edge {edge} at {offset}"),
            GraphPoint::Leg { leg, offset } => write!(f, "leg {leg} at {offset}"),
            GraphPoint::LegEnd(l) => write!(f, "end of leg {l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricEdge {
    pub tail: usize,
    pub head: usize,
    pub length: Rational,
}

/// Finite graph with positive edge lengths and legs (half-infinite edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    vertex_count: usize,
    edges: Vec<MetricEdge>,
    legs: Vec<usize>,
}

impl MetricGraph {
    pub fn new(vertex_count: usize, edges: Vec<MetricEdge>, legs: Vec<usize>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= vertex_count || e.head >= vertex_count {
                return Err(TropError::InvalidCurve(format!("edge {i} has an unknown endpoint")));
            }
            if e.length <= Rational::zero() {
                return Err(TropError::InvalidCurve(format!("edge {i} has non-positive length")));
            }
        }
        if let Some(l) = legs.iter().position(|&v| v >= vertex_count) {
            return Err(TropError::InvalidCurve(format!("leg {l} has an unknown vertex")));
        }
        Ok(MetricGraph { vertex_count, edges, legs })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[MetricEdge] {
        &self.edges
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn valence(&self, v: usize) -> usize {
        let e = self.edges.iter().map(|e| usize::from(e.tail == v) + usize::from(e.head == v)).sum::<usize>();
        e + self.legs.iter().filter(|&&w| w == v).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.edges {
            uf.union(e.tail, e.head);
        }
        let root = uf.find(0);
        (0..self.vertex_count).all(|v| uf.find(v) == root)
    }

    /// Validates a point and rewrites edge ends and leg starts as vertices.
    pub fn normalize(&self, p: GraphPoint) -> Result<GraphPoint> {
        match p {
            GraphPoint::Vertex(v) if v < self.vertex_count => Ok(p),
            GraphPoint::Edge { edge, offset } if edge < self.edges.len() => {
                let e = &self.edges[edge];
                if offset.is_zero() {
                    Ok(GraphPoint::Vertex(e.tail))
                } else if offset == e.length {
                    Ok(GraphPoint::Vertex(e.head))
                } else if offset > Rational::zero() && offset < e.length {
                    Ok(p)
                } else {
                    Err(TropError::Precondition(format!("offset {offset} outside edge {edge}")))
                }
            }
            GraphPoint::Leg { leg, offset } if leg < self.legs.len() => {
                if offset.is_zero() {
                    Ok(GraphPoint::Vertex(self.legs[leg]))
                } else if offset > Rational::zero() {
                    Ok(p)
                } else {
                    Err(TropError::Precondition(format!("negative offset on leg {leg}")))
                }
            }
            GraphPoint::LegEnd(l) if l < self.legs.len() => Ok(p),
            _ => Err(TropError::Precondition(format!("{p} is not a point of the graph"))),
        }
    }
}

/// Value of a function at a point, allowing the infinite values at the ends
/// of legs with nonzero eventual slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtValue {
    NegInfinity,
    Finite(Rational),
    PosInfinity,
}

impl ExtValue {
    pub fn finite(self) -> Option<Rational> {
        match self {
            ExtValue::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::NegInfinity => write!(f, "-inf"),
            ExtValue::Finite(v) => write!(f, "{v}"),
            ExtValue::PosInfinity => write!(f, "+inf"),
        }
    }
}

/// Function on a leg: breakpoints from offset 0, then a ray with constant
/// slope `tail_slope` after the last breakpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LegFunction {
    pub points: Vec<(Rational, Rational)>,
    pub tail_slope: i64,
}

impl LegFunction {
    /// Linear function `value + slope * s` on the whole leg.
    pub fn linear(value: Rational, slope: i64) -> Self {
        LegFunction { points: vec![(Rational::zero(), value)], tail_slope: slope }
    }
}

/// Continuous piecewise-linear function with integer slopes on a metric
/// graph, stored in normalized form (no redundant breakpoints).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlFunction {
    vertex_values: Vec<Rational>,
    edges: Vec<Vec<(Rational, Rational)>>,
    legs: Vec<LegFunction>,
}

fn slope_of(a: (Rational, Rational), b: (Rational, Rational)) -> Result<i64> {
    let s = (b.1 - a.1) / (b.0 - a.0);
    if !s.is_integer() {
        return Err(TropError::InvalidFunction(format!(
            "slope {s} between offsets {} and {} is not an integer",
            a.0, b.0
        )));
    }
    i64::try_from(s.to_integer()).map_err(|_| TropError::InvalidFunction("slope out of range".into()))
}

fn check_increasing(points: &[(Rational, Rational)], what: &str) -> Result<()> {
    if points.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(TropError::InvalidFunction(format!("{what}: offsets must increase strictly")));
    }
    Ok(())
}

/// Drops interior breakpoints where the slope does not change.
fn simplify(points: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
    for &p in points {
        if out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            if (b.1 - a.1) * (p.0 - b.0) == (p.1 - b.1) * (b.0 - a.0) {
                out.pop();
            }
        }
        out.push(p);
    }
    out
}

fn interpolate(points: &[(Rational, Rational)], offset: Rational) -> Rational {
    let idx = points.partition_point(|p| p.0 <= offset);
    if idx == 0 {
        return points[0].1;
    }
    let a = points[idx - 1];
    if a.0 == offset || idx == points.len() {
        return a.1;
    }
    let b = points[idx];
    a.1 + (b.1 - a.1) * (offset - a.0) / (b.0 - a.0)
}

/// Slope of the piece containing `(offset, offset + tiny)`, or `None` past
/// the last breakpoint.
fn slope_after(points: &[(Rational, Rational)], offset: Rational) -> Option<i64> {
    let idx = points.partition_point(|p| p.0 <= offset);
    if idx == 0 || idx >= points.len() {
        return None;
    }
    let a = points[idx - 1];
    let b = points[idx];
    Some(((b.1 - a.1) / (b.0 - a.0)).to_integer() as i64)
}

/// Slope of the piece containing `(offset - tiny, offset)`.
fn slope_before(points: &[(Rational, Rational)], offset: Rational) -> Option<i64> {
    let idx = points.partition_point(|p| p.0 < offset);
    if idx == 0 || idx > points.len() {
        return None;
    }
    if idx == points.len() {
        return None;
    }
    let a = points[idx - 1];
    let b = points[idx];
    Some(((b.1 - a.1) / (b.0 - a.0)).to_integer() as i64)
}

impl PlFunction {
    /// Builds a function from per-edge and per-leg breakpoint lists. Vertex
    /// values are read off incident data and must agree; an isolated vertex
    /// takes the value 0.
    pub fn new(graph: &MetricGraph, edges: Vec<Vec<(Rational, Rational)>>, legs: Vec<LegFunction>) -> Result<Self> {
        Self::with_isolated_values(graph, edges, legs, &[])
    }

    /// Like [`PlFunction::new`], with explicit values for vertices that have
    /// no incident edge or leg.
    pub fn with_isolated_values(
        graph: &MetricGraph,
        edges: Vec<Vec<(Rational, Rational)>>,
        legs: Vec<LegFunction>,
        isolated: &[(usize, Rational)],
    ) -> Result<Self> {
        if edges.len() != graph.edges.len() {
            return Err(TropError::InvalidFunction(format!(
                "expected data for {} edges, found {}",
                graph.edges.len(),
                edges.len()
            )));
        }
        if legs.len() != graph.legs.len() {
            return Err(TropError::InvalidFunction(format!(
                "expected data for {} legs, found {}",
                graph.legs.len(),
                legs.len()
            )));
        }
        let mut values: Vec<Option<Rational>> = vec![None; graph.vertex_count];
        let mut assign = |v: usize, x: Rational, what: &str| -> Result<()> {
            match values[v] {
                Some(old) if old != x => {
                    Err(TropError::InvalidFunction(format!("discontinuity at vertex {v}: {old} vs {x} from {what}")))
                }
                _ => {
                    values[v] = Some(x);
                    Ok(())
                }
            }
        };
        let mut norm_edges = Vec::with_capacity(edges.len());
        for (i, (pts, e)) in edges.into_iter().zip(&graph.edges).enumerate() {
            let what = format!("edge {i}");
            if pts.len() < 2 || !pts[0].0.is_zero() || pts[pts.len() - 1].0 != e.length {
                return Err(TropError::InvalidFunction(format!(
                    "{what}: breakpoints must start at offset 0 and end at the edge length {}",
                    e.length
                )));
            }
            check_increasing(&pts, &what)?;
            for w in pts.windows(2) {
                slope_of(w[0], w[1])?;
            }
            assign(e.tail, pts[0].1, &what)?;
            assign(e.head, pts[pts.len() - 1].1, &what)?;
            norm_edges.push(simplify(&pts));
        }
        let mut norm_legs = Vec::with_capacity(legs.len());
        for (i, (lf, &v)) in legs.into_iter().zip(&graph.legs).enumerate() {
            let what = format!("leg {i}");
            if lf.points.is_empty() || !lf.points[0].0.is_zero() {
                return Err(TropError::InvalidFunction(format!("{what}: breakpoints must start at offset 0")));
            }
            check_increasing(&lf.points, &what)?;
            for w in lf.points.windows(2) {
                slope_of(w[0], w[1])?;
            }
            assign(v, lf.points[0].1, &what)?;
            let mut pts = simplify(&lf.points);
            if pts.len() >= 2 {
                let n = pts.len();
                let last = slope_of(pts[n - 2], pts[n - 1])?;
                if last == lf.tail_slope {
                    pts.pop();
                }
            }
            norm_legs.push(LegFunction { points: pts, tail_slope: lf.tail_slope });
        }
        for &(v, x) in isolated {
            if v < values.len() && values[v].is_none() {
                values[v] = Some(x);
            }
        }
        Ok(PlFunction {
            vertex_values: values.into_iter().map(|v| v.unwrap_or_else(Rational::zero)).collect(),
            edges: norm_edges,
            legs: norm_legs,
        })
    }

    /// Constant function.
    pub fn constant(graph: &MetricGraph, c: Rational) -> Self {
        PlFunction {
            vertex_values: vec![c; graph.vertex_count],
            edges: graph.edges.iter().map(|e| vec![(Rational::zero(), c), (e.length, c)]).collect(),
            legs: graph.legs.iter().map(|_| LegFunction::linear(c, 0)).collect(),
        }
    }

    pub fn vertex_value(&self, v: usize) -> Rational {
        self.vertex_values[v]
    }

    pub fn edge_points(&self, e: usize) -> &[(Rational, Rational)] {
        &self.edges[e]
    }

    pub fn leg_function(&self, l: usize) -> &LegFunction {
        &self.legs[l]
    }

    pub fn value(&self, p: GraphPoint) -> ExtValue {
        match p {
            GraphPoint::Vertex(v) => ExtValue::Finite(self.vertex_values[v]),
            GraphPoint::Edge { edge, offset } => ExtValue::Finite(interpolate(&self.edges[edge], offset)),
            GraphPoint::Leg { leg, offset } => ExtValue::Finite(self.leg_value(leg, offset)),
            GraphPoint::LegEnd(l) => {
                let lf = &self.legs[l];
                match lf.tail_slope.cmp(&0) {
                    Ordering::Less => ExtValue::NegInfinity,
                    Ordering::Greater => ExtValue::PosInfinity,
                    Ordering::Equal => ExtValue::Finite(lf.points[lf.points.len() - 1].1),
                }
            }
        }
    }

    /// Finite value at a finite point.
    pub fn finite_value(&self, p: GraphPoint) -> Rational {
        self.value(p).finite().expect("finite point")
    }

    fn leg_value(&self, l: usize, offset: Rational) -> Rational {
        let lf = &self.legs[l];
        let last = lf.points[lf.points.len() - 1];
        if offset >= last.0 {
            last.1 + int(lf.tail_slope) * (offset - last.0)
        } else {
            interpolate(&lf.points, offset)
        }
    }

    /// Initial slope of the function along edge `e` leaving its tail.
    pub fn edge_start_slope(&self, e: usize) -> i64 {
        let p = &self.edges[e];
        ((p[1].1 - p[0].1) / (p[1].0 - p[0].0)).to_integer() as i64
    }

    /// Slope of the function along edge `e` arriving at its head.
    pub fn edge_end_slope(&self, e: usize) -> i64 {
        let p = &self.edges[e];
        let n = p.len();
        ((p[n - 1].1 - p[n - 2].1) / (p[n - 1].0 - p[n - 2].0)).to_integer() as i64
    }

    /// Initial slope leaving the vertex along leg `l`.
    pub fn leg_start_slope(&self, l: usize) -> i64 {
        let lf = &self.legs[l];
        if lf.points.len() >= 2 {
            ((lf.points[1].1 - lf.points[0].1) / (lf.points[1].0 - lf.points[0].0)).to_integer() as i64
        } else {
            lf.tail_slope
        }
    }

    /// Pieces `(start, end, slope)` of edge `e`.
    pub fn edge_pieces(&self, e: usize) -> Vec<(Rational, Rational, i64)> {
        self.edges[e]
            .windows(2)
            .map(|w| (w[0].0, w[1].0, ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).to_integer() as i64))
            .collect()
    }

    /// Bounded pieces of leg `l`; the tail slope applies after the last one.
    pub fn leg_pieces(&self, l: usize) -> Vec<(Rational, Rational, i64)> {
        self.legs[l]
            .points
            .windows(2)
            .map(|w| (w[0].0, w[1].0, ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).to_integer() as i64))
            .collect()
    }

    /// Sum of the outgoing slopes at a point. Positive values are zeros,
    /// negative values poles.
    pub fn ord(&self, graph: &MetricGraph, p: GraphPoint) -> Result<i64> {
        Ok(match graph.normalize(p)? {
            GraphPoint::Vertex(v) => {
                let mut s = 0;
                for (i, e) in graph.edges.iter().enumerate() {
                    if e.tail == v {
                        s += self.edge_start_slope(i);
                    }
                    if e.head == v {
                        s -= self.edge_end_slope(i);
                    }
                }
                for (l, &w) in graph.legs.iter().enumerate() {
                    if w == v {
                        s += self.leg_start_slope(l);
                    }
                }
                s
            }
            GraphPoint::Edge { edge, offset } => {
                let pts = &self.edges[edge];
                match (slope_after(pts, offset), slope_before(pts, offset)) {
                    (Some(a), Some(b)) => a - b,
                    _ => 0,
                }
            }
            GraphPoint::Leg { leg, offset } => {
                let lf = &self.legs[leg];
                let after = slope_after(&lf.points, offset).unwrap_or(lf.tail_slope);
                let last = lf.points[lf.points.len() - 1].0;
                let before = if offset > last {
                    lf.tail_slope
                } else {
                    slope_before(&lf.points, offset).unwrap_or(lf.tail_slope)
                };
                after - before
            }
            GraphPoint::LegEnd(l) => -self.legs[l].tail_slope,
        })
    }

    /// All points with nonzero order, sorted.
    pub fn divisor(&self, graph: &MetricGraph) -> Vec<(GraphPoint, i64)> {
        let mut candidates: Vec<GraphPoint> = (0..graph.vertex_count).map(GraphPoint::Vertex).collect();
        for (edge, pts) in self.edges.iter().enumerate() {
            for p in &pts[1..pts.len() - 1] {
                candidates.push(GraphPoint::Edge { edge, offset: p.0 });
            }
        }
        for (leg, lf) in self.legs.iter().enumerate() {
            for p in &lf.points[1..] {
                candidates.push(GraphPoint::Leg { leg, offset: p.0 });
            }
            candidates.push(GraphPoint::LegEnd(leg));
        }
        let mut out: Vec<(GraphPoint, i64)> = candidates
            .into_iter()
            .filter_map(|p| {
                let o = self.ord(graph, p).expect("candidate points are valid");
                (o != 0).then_some((p, o))
            })
            .collect();
        out.sort();
        out
    }

    /// Pointwise comparison data: every point where either function has a
    /// breakpoint, plus vertices, in graph order.
    pub(crate) fn breakpoints_with(&self, other: &PlFunction, graph: &MetricGraph) -> Vec<GraphPoint> {
        let mut pts: Vec<GraphPoint> = (0..graph.vertex_count).map(GraphPoint::Vertex).collect();
        for e in 0..graph.edges.len() {
            let mut offs: Vec<Rational> = self.edges[e]
                .iter()
                .chain(&other.edges[e])
                .map(|p| p.0)
                .filter(|o| !o.is_zero() && *o != graph.edges[e].length)
                .collect();
            offs.sort();
            offs.dedup();
            pts.extend(offs.into_iter().map(|offset| GraphPoint::Edge { edge: e, offset }));
        }
        for l in 0..graph.legs.len() {
            let mut offs: Vec<Rational> =
                self.legs[l].points.iter().chain(&other.legs[l].points).map(|p| p.0).filter(|o| !o.is_zero()).collect();
            offs.sort();
            offs.dedup();
            pts.extend(offs.into_iter().map(|offset| GraphPoint::Leg { leg: l, offset }));
        }
        pts
    }

    /// Largest offset on a leg where either function has a breakpoint.
    pub(crate) fn last_leg_breakpoint(&self, other: &PlFunction, l: usize) -> Rational {
        let a = self.legs[l].points.last().map_or(Rational::zero(), |p| p.0);
        let b = other.legs[l].points.last().map_or(Rational::zero(), |p| p.0);
        a.max(b)
    }

    /// Pointwise sum with another function on the same graph.
    pub fn add(&self, other: &PlFunction, graph: &MetricGraph) -> PlFunction {
        let merged = |x: &[(Rational, Rational)], y: &[(Rational, Rational)]| {
            let mut offs: Vec<Rational> = x.iter().chain(y).map(|p| p.0).collect();
            offs.sort();
            offs.dedup();
            offs
        };
        let edges = (0..graph.edges.len())
            .map(|e| {
                let pts: Vec<_> = merged(&self.edges[e], &other.edges[e])
                    .into_iter()
                    .map(|o| (o, interpolate(&self.edges[e], o) + interpolate(&other.edges[e], o)))
                    .collect();
                simplify(&pts)
            })
            .collect();
        let legs = (0..graph.legs.len())
            .map(|l| {
                let pts: Vec<_> = merged(&self.legs[l].points, &other.legs[l].points)
                    .into_iter()
                    .map(|o| (o, self.leg_value(l, o) + other.leg_value(l, o)))
                    .collect();
                let tail_slope = self.legs[l].tail_slope + other.legs[l].tail_slope;
                let mut points = simplify(&pts);
                let n = points.len();
                if n >= 2 && slope_of(points[n - 2], points[n - 1]).ok() == Some(tail_slope) {
                    points.pop();
                }
                LegFunction { points, tail_slope }
            })
            .collect();
        PlFunction {
            vertex_values: (0..graph.vertex_count).map(|v| self.vertex_values[v] + other.vertex_values[v]).collect(),
            edges,
            legs,
        }
    }

    pub fn negate(&self) -> PlFunction {
        PlFunction {
            vertex_values: self.vertex_values.iter().map(|v| -v).collect(),
            edges: self.edges.iter().map(|e| e.iter().map(|&(o, v)| (o, -v)).collect()).collect(),
            legs: self
                .legs
                .iter()
                .map(|l| LegFunction {
                    points: l.points.iter().map(|&(o, v)| (o, -v)).collect(),
                    tail_slope: -l.tail_slope,
                })
                .collect(),
        }
    }
}

/// Union-find over `0..n` with path halving.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
