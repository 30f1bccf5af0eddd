//! Embedded tropical curves: weighted rational graphs in `Q^n` with bounded
//! edges and legs, built from plane polynomials by duality.

use std::collections::BTreeMap;

use crate::error::{Result, TropError};
use crate::pl::{GraphPoint, MetricEdge, MetricGraph, UnionFind};
use crate::poly::TropicalPolynomial;
use crate::scalar::{add, along, dot, int, primitive_of, primitive_of_rational, sub, LatticeVector, Point, Rational};
use crate::subdivision::{plane_dual, NewtonSubdivision};

/// Points of a curve are addressed like points of its metric graph: edge
/// offsets are measured in lattice steps of the primitive edge direction.
pub type CurvePoint = GraphPoint;

/// Bounded edge from `tail` to `head = tail + length * direction`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: u64,
    pub direction: LatticeVector,
    pub length: Rational,
}

/// Unbounded edge `base + s * direction`, `s >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Leg {
    pub vertex: usize,
    pub direction: LatticeVector,
    pub weight: u64,
}

/// A leg with its canonical parametrization `base + s * direction`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametrizedLeg {
    pub id: usize,
    pub base: Point,
    pub direction: LatticeVector,
    pub weight: u64,
}

/// Weighted balanced graph embedded in `Q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedCurve {
    dim: usize,
    vertices: Vec<Point>,
    edges: Vec<Edge>,
    legs: Vec<Leg>,
}

/// Outgoing germ at a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Germ {
    pub direction: LatticeVector,
    pub weight: u64,
    pub part: GermOf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GermOf {
    EdgeTail(usize),
    EdgeHead(usize),
    Leg(usize),
}

/// Balancing defects; empty when the curve is balanced.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BalancingReport {
    pub violations: Vec<(usize, Vec<i64>)>,
}

impl BalancingReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Segment or ray of a curve with its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub part: PieceOf,
    pub start: Point,
    pub direction: LatticeVector,
    /// Length in lattice steps; `None` for a leg.
    pub length: Option<Rational>,
    pub weight: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PieceOf {
    Edge(usize),
    Leg(usize),
}

impl Piece {
    pub fn point_at(&self, s: Rational) -> Point {
        along(&self.start, self.direction.coords(), s)
    }

    pub fn end(&self) -> Option<Point> {
        self.length.map(|l| self.point_at(l))
    }
}

impl EmbeddedCurve {
    /// Builds a curve from vertices, edges `(tail, head, weight)` and legs
    /// `(vertex, direction, weight)`. Edge directions are derived from the
    /// endpoints; leg directions must be primitive.
    pub fn new(
        dim: usize,
        vertices: Vec<Point>,
        edges: Vec<(usize, usize, u64)>,
        legs: Vec<(usize, Vec<i64>, u64)>,
    ) -> Result<Self> {
        let check_vertex = |v: usize| -> Result<()> {
            if v >= vertices.len() {
                return Err(TropError::InvalidCurve(format!("unknown vertex {v}")));
            }
            Ok(())
        };
        if let Some(p) = vertices.iter().find(|p| p.len() != dim) {
            return Err(TropError::DimensionMismatch { expected: dim, found: p.len() });
        }
        let mut out_edges = Vec::with_capacity(edges.len());
        for (i, (tail, head, weight)) in edges.into_iter().enumerate() {
            check_vertex(tail)?;
            check_vertex(head)?;
            if weight == 0 {
                return Err(TropError::InvalidCurve(format!("edge {i} has weight 0")));
            }
            let delta = sub(&vertices[head], &vertices[tail]);
            let (direction, length) = primitive_of_rational(&delta)
                .map_err(|_| TropError::InvalidCurve(format!("edge {i} has coincident endpoints")))?;
            out_edges.push(Edge { tail, head, weight, direction, length });
        }
        let mut out_legs = Vec::with_capacity(legs.len());
        for (i, (vertex, dir, weight)) in legs.into_iter().enumerate() {
            check_vertex(vertex)?;
            if dir.len() != dim {
                return Err(TropError::DimensionMismatch { expected: dim, found: dir.len() });
            }
            let direction = LatticeVector::new(dir);
            if !direction.is_primitive() {
                return Err(TropError::InvalidCurve(format!("leg {i} direction {direction} is not primitive")));
            }
            if weight == 0 {
                return Err(TropError::InvalidCurve(format!("leg {i} has weight 0")));
            }
            out_legs.push(Leg { vertex, direction, weight });
        }
        Ok(EmbeddedCurve { dim, vertices, edges: out_edges, legs: out_legs })
    }

    /// Builds a curve from fully specified parts, validating the redundant
    /// edge data.
    pub fn from_parts(dim: usize, vertices: Vec<Point>, edges: Vec<Edge>, legs: Vec<Leg>) -> Result<Self> {
        let simple_edges = edges.iter().map(|e| (e.tail, e.head, e.weight)).collect();
        let simple_legs = legs.iter().map(|l| (l.vertex, l.direction.coords().to_vec(), l.weight)).collect();
        let curve = EmbeddedCurve::new(dim, vertices, simple_edges, simple_legs)?;
        for (i, (given, derived)) in edges.iter().zip(&curve.edges).enumerate() {
            if given != derived {
                return Err(TropError::InvalidCurve(format!(
                    "edge {i}: direction {} and length {} do not match its endpoints",
                    given.direction, given.length
                )));
            }
        }
        Ok(curve)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    /// Outgoing germs at a vertex.
    pub fn germs_at(&self, v: usize) -> Vec<Germ> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail == v {
                out.push(Germ { direction: e.direction.clone(), weight: e.weight, part: GermOf::EdgeTail(i) });
            }
            if e.head == v {
                out.push(Germ { direction: e.direction.neg(), weight: e.weight, part: GermOf::EdgeHead(i) });
            }
        }
        for (i, l) in self.legs.iter().enumerate() {
            if l.vertex == v {
                out.push(Germ { direction: l.direction.clone(), weight: l.weight, part: GermOf::Leg(i) });
            }
        }
        out
    }

    /// `sum weight * direction` over the outgoing germs at `v`.
    pub fn balancing_defect(&self, v: usize) -> Vec<i64> {
        let mut d = vec![0i64; self.dim];
        for g in self.germs_at(v) {
            for (acc, c) in d.iter_mut().zip(g.direction.coords()) {
                *acc += g.weight as i64 * c;
            }
        }
        d
    }

    /// Checks the balancing condition at every vertex.
    pub fn check_balancing(&self) -> BalancingReport {
        let violations = (0..self.vertices.len())
            .filter_map(|v| {
                let d = self.balancing_defect(v);
                d.iter().any(|&c| c != 0).then_some((v, d))
            })
            .collect();
        BalancingReport { violations }
    }

    /// Legs with their canonical parametrizations.
    pub fn legs_of(&self) -> Vec<ParametrizedLeg> {
        self.legs
            .iter()
            .enumerate()
            .map(|(id, l)| ParametrizedLeg {
                id,
                base: self.vertices[l.vertex].clone(),
                direction: l.direction.clone(),
                weight: l.weight,
            })
            .collect()
    }

    /// Edges and legs as geometric pieces.
    pub fn pieces(&self) -> Vec<Piece> {
        let edges = self.edges.iter().enumerate().map(|(i, e)| Piece {
            part: PieceOf::Edge(i),
            start: self.vertices[e.tail].clone(),
            direction: e.direction.clone(),
            length: Some(e.length),
            weight: e.weight,
        });
        let legs = self.legs.iter().enumerate().map(|(i, l)| Piece {
            part: PieceOf::Leg(i),
            start: self.vertices[l.vertex].clone(),
            direction: l.direction.clone(),
            length: None,
            weight: l.weight,
        });
        edges.chain(legs).collect()
    }

    /// The underlying metric graph, edge lengths in lattice steps.
    pub fn metric_graph(&self) -> MetricGraph {
        MetricGraph::new(
            self.vertices.len(),
            self.edges.iter().map(|e| MetricEdge { tail: e.tail, head: e.head, length: e.length }).collect(),
            self.legs.iter().map(|l| l.vertex).collect(),
        )
        .expect("curve data is valid")
    }

    /// Coordinates of a finite curve point.
    pub fn coordinates(&self, p: CurvePoint) -> Result<Point> {
        match self.metric_graph().normalize(p)? {
            GraphPoint::Vertex(v) => Ok(self.vertices[v].clone()),
            GraphPoint::Edge { edge, offset } => {
                let e = &self.edges[edge];
                Ok(along(&self.vertices[e.tail], e.direction.coords(), offset))
            }
            GraphPoint::Leg { leg, offset } => {
                let l = &self.legs[leg];
                Ok(along(&self.vertices[l.vertex], l.direction.coords(), offset))
            }
            GraphPoint::LegEnd(_) => Err(TropError::Precondition("point at infinity has no coordinates".into())),
        }
    }

    /// Translation by a vector.
    pub fn translated(&self, t: &[Rational]) -> EmbeddedCurve {
        EmbeddedCurve {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| add(v, t)).collect(),
            edges: self.edges.clone(),
            legs: self.legs.clone(),
        }
    }

    /// Image under `x -> offset + M x` with an integer `m x n` matrix.
    /// Contracted edges merge their endpoints, contracted legs disappear, and
    /// non-primitive image directions move their gcd into the weight.
    pub fn linear_image(&self, matrix: &[Vec<i64>], offset: &[Rational]) -> Result<EmbeddedCurve> {
        let m = matrix.len();
        if offset.len() != m {
            return Err(TropError::DimensionMismatch { expected: m, found: offset.len() });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != self.dim) {
            return Err(TropError::DimensionMismatch { expected: self.dim, found: row.len() });
        }
        let apply_int =
            |v: &[i64]| -> Vec<i64> { matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect() };
        let image = |p: &[Rational]| -> Point {
            matrix
                .iter()
                .zip(offset)
                .map(|(row, o)| o + row.iter().zip(p).map(|(&a, b)| int(a) * b).sum::<Rational>())
                .collect()
        };
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            if apply_int(e.direction.coords()).iter().all(|&c| c == 0) {
                uf.union(e.tail, e.head);
            }
        }
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertices = Vec::new();
        for v in 0..self.vertices.len() {
            let r = uf.find(v);
            if let std::collections::btree_map::Entry::Vacant(e) = index.entry(r) {
                e.insert(vertices.len());
                vertices.push(image(&self.vertices[r]));
            }
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            let d = apply_int(e.direction.coords());
            if d.iter().all(|&c| c == 0) {
                continue;
            }
            let (_, g) = primitive_of(&d)?;
            edges.push((index[&uf.find(e.tail)], index[&uf.find(e.head)], e.weight * g));
        }
        let mut legs = Vec::new();
        for l in &self.legs {
            let d = apply_int(l.direction.coords());
            if d.iter().all(|&c| c == 0) {
                continue;
            }
            let (p, g) = primitive_of(&d)?;
            legs.push((index[&uf.find(l.vertex)], p.coords().to_vec(), l.weight * g));
        }
        EmbeddedCurve::new(m, vertices, edges, legs)
    }

    /// Weighted support as a canonical 1-cycle, for comparing curves up to
    /// subdivision and merging of collinear pieces.
    pub fn support(&self) -> SupportCycle {
        SupportCycle::from_pieces(self.pieces().iter().map(|p| (p.clone(), 1u64)))
    }

    /// Support of the projection forgetting the last coordinate (pushforward
    /// of the 1-cycle; vertical pieces are contracted).
    pub fn projected_support(&self) -> SupportCycle {
        let n = self.dim - 1;
        let pieces = self.pieces().into_iter().filter_map(|p| {
            let d = &p.direction.coords()[..n];
            if d.iter().all(|&c| c == 0) {
                return None;
            }
            let (dir, g) = primitive_of(d).ok()?;
            Some((
                Piece {
                    part: p.part,
                    start: p.start[..n].to_vec(),
                    direction: dir,
                    length: p.length.map(|l| l * int(g as i64)),
                    weight: p.weight,
                },
                g,
            ))
        });
        SupportCycle::from_pieces(pieces)
    }
}

/// Intervals `(start, end, weight)` along one line; `None` ends are infinite.
pub type LineIntervals = Vec<(Option<Rational>, Option<Rational>, u64)>;

/// Canonical weighted 1-cycle: for each affine line, the maximal intervals
/// of constant positive weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportCycle {
    /// Line key `(direction, point closest to the origin)` to intervals
    /// `(start, end, weight)` of the parameter `t = x.d / d.d`; `None` ends
    /// are infinite.
    pub lines: BTreeMap<(Vec<i64>, Point), LineIntervals>,
}

impl SupportCycle {
    /// Each item is a piece with a weight multiplier.
    fn from_pieces(pieces: impl Iterator<Item = (Piece, u64)>) -> SupportCycle {
        type Events = BTreeMap<Option<Rational>, i64>;
        let mut per_line: BTreeMap<(Vec<i64>, Point), (Events, i64)> = BTreeMap::new();
        for (p, mult) in pieces {
            let w = (p.weight * mult) as i64;
            let mut d = p.direction.coords().to_vec();
            let flip = d.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0);
            if flip {
                d.iter_mut().for_each(|c| *c = -*c);
            }
            let dr: Point = d.iter().map(|&c| int(c)).collect();
            let dd = dot(&dr, &dr);
            let t0 = dot(&p.start, &dr) / dd;
            let foot = sub(&p.start, &dr.iter().map(|c| c * t0).collect::<Vec<_>>());
            let entry = per_line.entry((d, foot)).or_insert_with(|| (BTreeMap::new(), 0));
            // Events at finite parameters; the weight at -inf is tracked
            // separately.
            let (lo, hi) = match (p.length, flip) {
                (Some(l), false) => (Some(t0), Some(t0 + l)),
                (Some(l), true) => (Some(t0 - l), Some(t0)),
                (None, false) => (Some(t0), None),
                (None, true) => (None, Some(t0)),
            };
            match lo {
                Some(t) => *entry.0.entry(Some(t)).or_insert(0) += w,
                None => entry.1 += w,
            }
            if let Some(t) = hi {
                *entry.0.entry(Some(t)).or_insert(0) -= w;
            }
        }
        let mut lines = BTreeMap::new();
        for (key, (events, start_weight)) in per_line {
            let mut intervals: LineIntervals = Vec::new();
            let mut current = start_weight;
            let mut since: Option<Rational> = None;
            for (t, delta) in events {
                if delta == 0 {
                    continue;
                }
                let next = current + delta;
                if current > 0 {
                    intervals.push((since, t, current as u64));
                }
                current = next;
                since = t;
            }
            if current > 0 {
                intervals.push((since, None, current as u64));
            }
            // Merge adjacent intervals of equal weight.
            let mut merged: LineIntervals = Vec::new();
            for iv in intervals {
                match merged.last_mut() {
                    Some(last) if last.1 == iv.0 && last.2 == iv.2 => last.1 = iv.1,
                    _ => merged.push(iv),
                }
            }
            if !merged.is_empty() {
                lines.insert(key, merged);
            }
        }
        SupportCycle { lines }
    }
}

/// Plane curve of a bivariate polynomial (its corner locus with weights).
pub fn curve_from_polynomial(f: &TropicalPolynomial) -> Result<EmbeddedCurve> {
    Ok(plane_curve_with_dual(f)?.0)
}

/// Plane curve together with its dual subdivision. Curve vertex `i` is dual
/// to cell `i`; `DualEdge::dual` names the edge or legs dual to each edge.
pub fn plane_curve_with_dual(f: &TropicalPolynomial) -> Result<(EmbeddedCurve, NewtonSubdivision)> {
    let dual = plane_dual(f)?;
    let curve = EmbeddedCurve::new(2, dual.vertices, dual.edges, dual.legs)?;
    Ok((curve, dual.subdivision))
}
