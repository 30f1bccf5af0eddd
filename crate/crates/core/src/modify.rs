//! Tropical modifications: of `R^n` along a hypersurface, of a curve along
//! a polynomial (the stable lift and lifts by a given function), frozen
//! pullbacks, subordination, and chip moves on the line.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::curve::{curve_from_polynomial, EmbeddedCurve, Piece, PieceOf};
use crate::error::{Result, TropError};
use crate::pl::{GraphPoint, LegFunction, MetricGraph, PlFunction};
use crate::poly::TropicalPolynomial;
use crate::scalar::{fmt_point, int, Point, Rational, TropicalScalar};

/// Region where one monomial of `f` is maximal, lifted to the graph
/// `Y = coefficient + exponent . X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphCell {
    pub exponent: Vec<i64>,
    pub coefficient: Rational,
}

/// Where a wall is attached: a root of a univariate polynomial, or a piece
/// of a plane curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallBase {
    Point(Rational),
    Piece(Piece),
}

/// Vertical wall `base x {(0,..,0,-t) : t >= 0}` below the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub base: WallBase,
    pub weight: u64,
    /// Monomials maximal on either side of the base, ordered so that the
    /// first wins on the side of the chosen transversal.
    pub sides: (Vec<i64>, Vec<i64>),
}

/// The zero set of `max(f(X), Y)` in `R^n x R`, cell by cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifiedSpace {
    pub dim: usize,
    pub graph_cells: Vec<GraphCell>,
    pub walls: Vec<Wall>,
    /// Per wall, the weighted sum of the primitive normals of the three cells
    /// meeting along its attachment locus (zero when balanced).
    pub defects: Vec<Vec<i64>>,
}

impl ModifiedSpace {
    pub fn is_balanced(&self) -> bool {
        self.defects.iter().all(|d| d.iter().all(|&c| c == 0))
    }

    /// The polynomial `max(f(X), Y)` whose zero set this is.
    pub fn defining_polynomial(f: &TropicalPolynomial) -> TropicalPolynomial {
        let n = f.dim();
        let mut terms: Vec<(Vec<i64>, TropicalScalar)> = f
            .terms()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.push(0);
                (e, TropicalScalar::Finite(*c))
            })
            .collect();
        let mut y = vec![0; n];
        y.push(1);
        terms.push((y, TropicalScalar::Finite(Rational::zero())));
        TropicalPolynomial::new(n + 1, terms).expect("distinct exponents")
    }
}

/// A lattice vector `r` with `det(u, r) = 1` for primitive `u` in the plane.
fn complement(u: &[i64]) -> [i64; 2] {
    let g = u[0].extended_gcd(&u[1]);
    // u0 x + u1 y = 1  =>  det(u, (-y, x)) = 1
    let s = g.gcd.signum();
    [-g.y * s, g.x * s]
}

/// Modification of `R^n` along the hypersurface of `f`, for `n = 1, 2`.
pub fn modify_space(f: &TropicalPolynomial) -> Result<ModifiedSpace> {
    match f.dim() {
        1 => modify_line(f),
        2 => modify_plane(f),
        n => Err(TropError::Unsupported(format!("modification of R^{n}; only n = 1, 2 are implemented"))),
    }
}

fn modify_line(f: &TropicalPolynomial) -> Result<ModifiedSpace> {
    let hull = f.upper_envelope()?;
    let graph_cells = hull.iter().map(|&(e, c)| GraphCell { exponent: vec![e], coefficient: c }).collect();
    let mut walls = Vec::new();
    let mut defects = Vec::new();
    for w in hull.windows(2) {
        let ((j, aj), (i, ai)) = (w[0], w[1]);
        let x = (aj - ai) / int(i - j);
        let m = (i - j) as u64;
        // Right cell (1, i), left cell (-1, -j), wall m (0, -1).
        defects.push(vec![0, i - j - m as i64]);
        walls.push(Wall { base: WallBase::Point(x), weight: m, sides: (vec![i], vec![j]) });
    }
    Ok(ModifiedSpace { dim: 1, graph_cells, walls, defects })
}

fn modify_plane(f: &TropicalPolynomial) -> Result<ModifiedSpace> {
    let curve = match curve_from_polynomial(f) {
        Ok(c) => c,
        Err(TropError::EmptyCurve) => {
            let (e, c) = f.terms().next().expect("nonempty");
            return Ok(ModifiedSpace {
                dim: 2,
                graph_cells: vec![GraphCell { exponent: e.clone(), coefficient: *c }],
                walls: vec![],
                defects: vec![],
            });
        }
        Err(e) => return Err(e),
    };
    let mut used: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    let mut walls = Vec::new();
    let mut defects = Vec::new();
    for piece in curve.pieces() {
        let u = piece.direction.coords();
        let sample = interior_point(&piece);
        let r = complement(u);
        let winners = f.argmax_terms(&sample);
        let hi = winners.iter().max_by_key(|e| e[0] * r[0] + e[1] * r[1]).expect("corner point").clone();
        let lo = winners.iter().min_by_key(|e| e[0] * r[0] + e[1] * r[1]).expect("corner point").clone();
        for e in [&hi, &lo] {
            used.insert(e.clone(), f.coefficient(e).finite().expect("term present"));
        }
        // Cells through the lifted piece: graph over `hi` in direction
        // (r, hi.r), graph over `lo` in direction (-r, -lo.r), wall (0,0,-1).
        let hr = hi[0] * r[0] + hi[1] * r[1];
        let lr = lo[0] * r[0] + lo[1] * r[1];
        defects.push(vec![0, 0, hr - lr - piece.weight as i64]);
        walls.push(Wall { weight: piece.weight, base: WallBase::Piece(piece), sides: (hi, lo) });
    }
    // Monomials that win on an open region are exactly the vertices of the
    // cells of the subdivision; all of them border some piece.
    let graph_cells = used.into_iter().map(|(exponent, coefficient)| GraphCell { exponent, coefficient }).collect();
    Ok(ModifiedSpace { dim: 2, graph_cells, walls, defects })
}

/// A point in the relative interior of a piece.
fn interior_point(p: &Piece) -> Point {
    match p.length {
        Some(l) => p.point_at(l / int(2)),
        None => p.point_at(int(1)),
    }
}

/// Restriction of `f` to a curve as a function on its metric graph.
pub fn restrict_to_curve(curve: &EmbeddedCurve, f: &TropicalPolynomial) -> Result<PlFunction> {
    if f.dim() != curve.dim() {
        return Err(TropError::DimensionMismatch { expected: curve.dim(), found: f.dim() });
    }
    let graph = curve.metric_graph();
    let mut edges = Vec::new();
    let mut legs = Vec::new();
    for piece in curve.pieces() {
        let g = f.restrict_to_line(&piece.start, piece.direction.coords())?;
        let roots = g.univariate_roots()?;
        let value = |s: Rational| g.eval(&[s]);
        match piece.length {
            Some(l) => {
                let mut pts = vec![(Rational::zero(), value(Rational::zero()))];
                pts.extend(roots.roots.iter().filter(|r| r.0 > Rational::zero() && r.0 < l).map(|r| (r.0, value(r.0))));
                pts.push((l, value(l)));
                edges.push(pts);
            }
            None => {
                let mut pts = vec![(Rational::zero(), value(Rational::zero()))];
                pts.extend(roots.roots.iter().filter(|r| r.0 > Rational::zero()).map(|r| (r.0, value(r.0))));
                let tail = g.upper_envelope()?.last().expect("nonempty").0;
                legs.push(LegFunction { points: pts, tail_slope: tail });
            }
        }
    }
    PlFunction::new(&graph, edges, legs)
}

/// Closed interval `[from, to]` of offsets on a piece; `to = None` runs to
/// the end of a leg.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrozenInterval {
    pub part: PieceOf,
    pub from: Rational,
    pub to: Option<Rational>,
}

impl fmt::Display for FrozenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = match self.part {
            PieceOf::Edge(e) => format!("edge {e}"),
            PieceOf::Leg(l) => format!("leg {l}"),
        };
        match self.to {
            Some(t) => write!(f, "{part} [{}, {}]", self.from, t),
            None => write!(f, "{part} [{}, inf)", self.from),
        }
    }
}

/// Restriction of a polynomial to a curve together with its frozen locus:
/// the closure of the set of points where a single monomial is maximal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrozenFunction {
    pub curve: EmbeddedCurve,
    pub base: PlFunction,
    pub frozen: Vec<FrozenInterval>,
}

impl FrozenFunction {
    /// Whether a finite point of the curve is frozen.
    pub fn is_frozen(&self, p: GraphPoint) -> bool {
        let graph = self.curve.metric_graph();
        let Ok(p) = graph.normalize(p) else { return false };
        let on = |part: PieceOf, o: Rational| {
            self.frozen.iter().any(|iv| iv.part == part && iv.from <= o && iv.to.map_or(true, |t| o <= t))
        };
        match p {
            GraphPoint::Vertex(v) => {
                let edges = self.curve.edges().iter().enumerate();
                let mut hits = edges.filter_map(|(i, e)| {
                    if e.tail == v {
                        Some(on(PieceOf::Edge(i), Rational::zero()))
                    } else if e.head == v {
                        Some(on(PieceOf::Edge(i), e.length))
                    } else {
                        None
                    }
                });
                let legs = self.curve.legs().iter().enumerate();
                let mut leg_hits =
                    legs.filter(|(_, l)| l.vertex == v).map(|(i, _)| on(PieceOf::Leg(i), Rational::zero()));
                hits.any(|b| b) || leg_hits.any(|b| b)
            }
            GraphPoint::Edge { edge, offset } => on(PieceOf::Edge(edge), offset),
            GraphPoint::Leg { leg, offset } => on(PieceOf::Leg(leg), offset),
            GraphPoint::LegEnd(l) => self.frozen.iter().any(|iv| iv.part == PieceOf::Leg(l) && iv.to.is_none()),
        }
    }
}

/// Pullback of `f` to `curve` with its frozen locus. Fails with
/// `SelfModification` when the whole curve lies in the corner locus of `f`.
pub fn pullback_with_frozen(curve: &EmbeddedCurve, f: &TropicalPolynomial) -> Result<FrozenFunction> {
    let base = restrict_to_curve(curve, f)?;
    let mut frozen = Vec::new();
    for piece in curve.pieces() {
        let g = f.restrict_to_line(&piece.start, piece.direction.coords())?;
        let mut cuts: Vec<Rational> = vec![Rational::zero()];
        cuts.extend(
            g.univariate_roots()?
                .roots
                .iter()
                .map(|r| r.0)
                .filter(|&x| x > Rational::zero() && piece.length.map_or(true, |l| x < l)),
        );
        let mut ends: Vec<Option<Rational>> = cuts[1..].iter().map(|&x| Some(x)).collect();
        ends.push(piece.length);
        for (&from, &to) in cuts.iter().zip(&ends) {
            let mid = match to {
                Some(t) => (from + t) / int(2),
                None => from + int(1),
            };
            if f.argmax_terms(&piece.point_at(mid)).len() != 1 {
                continue;
            }
            match frozen.last_mut() {
                Some(FrozenInterval { part, to: Some(prev), .. }) if *part == piece.part && *prev == from => {
                    *prev = to.unwrap_or(*prev);
                    if to.is_none() {
                        frozen.last_mut().expect("present").to = None;
                    }
                }
                _ => frozen.push(FrozenInterval { part: piece.part, from, to }),
            }
        }
    }
    if frozen.is_empty() {
        return Err(TropError::SelfModification);
    }
    Ok(FrozenFunction { curve: curve.clone(), base, frozen })
}

/// Which clause of subordination fails at a witness point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `h(p) > F(p)`.
    Exceeds,
    /// `p` is frozen and `h(p) < F(p)`.
    FrozenMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub point: GraphPoint,
    pub coords: Point,
    pub lift_value: Rational,
    pub stable_value: Rational,
    pub violation: Violation,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.violation {
            Violation::Exceeds => "exceeds",
            Violation::FrozenMismatch => "differs on the frozen locus from",
        };
        write!(
            f,
            "at {} ({}): lift {} {} restriction {}",
            fmt_point(&self.coords),
            self.point,
            self.lift_value,
            rel,
            self.stable_value
        )
    }
}

/// Checks `h <= F` everywhere and `h = F` on the frozen locus; returns the
/// first violating point in graph order, or `None` if `h` is subordinate.
pub fn subordination_witness(h: &PlFunction, frozen: &FrozenFunction) -> Result<Option<Witness>> {
    let graph = frozen.curve.metric_graph();
    let f = &frozen.base;
    check_shape(h, &graph)?;
    let witness = |p: GraphPoint, violation: Violation| -> Result<Option<Witness>> {
        Ok(Some(Witness {
            point: p,
            coords: frozen.curve.coordinates(p)?,
            lift_value: h.finite_value(p),
            stable_value: f.finite_value(p),
            violation,
        }))
    };
    let mut points = h.breakpoints_with(f, &graph);
    // Points far out on each leg settle the comparison of the tails.
    let mut beyond = Vec::new();
    for l in 0..graph.legs().len() {
        let last = h.last_leg_breakpoint(f, l);
        let hs = h.leg_function(l).tail_slope;
        let fs = f.leg_function(l).tail_slope;
        let gap = f.finite_value(GraphPoint::Leg { leg: l, offset: last })
            - h.finite_value(GraphPoint::Leg { leg: l, offset: last });
        let offset =
            if hs > fs && gap >= Rational::zero() { last + gap / int(hs - fs) + int(1) } else { last + int(1) };
        beyond.push(GraphPoint::Leg { leg: l, offset });
    }
    points.extend(beyond);
    for &p in &points {
        if h.finite_value(p) > f.finite_value(p) {
            return witness(p, Violation::Exceeds);
        }
    }
    for &p in &points {
        if frozen.is_frozen(p) && h.finite_value(p) != f.finite_value(p) {
            return witness(p, Violation::FrozenMismatch);
        }
    }
    // Frozen interval endpoints need not be breakpoints of either function.
    for iv in &frozen.frozen {
        for o in std::iter::once(iv.from).chain(iv.to) {
            let p = match iv.part {
                PieceOf::Edge(edge) => GraphPoint::Edge { edge, offset: o },
                PieceOf::Leg(leg) => GraphPoint::Leg { leg, offset: o },
            };
            let p = graph.normalize(p)?;
            if h.finite_value(p) != f.finite_value(p) {
                return witness(p, Violation::FrozenMismatch);
            }
        }
    }
    Ok(None)
}

fn check_shape(h: &PlFunction, graph: &MetricGraph) -> Result<()> {
    let ok = (0..graph.edges().len()).all(|e| {
        let pts = h.edge_points(e);
        pts.len() >= 2 && pts[pts.len() - 1].0 == graph.edges()[e].length
    });
    if !ok {
        return Err(TropError::InvalidFunction("lift is not defined on the curve's metric graph".into()));
    }
    Ok(())
}

/// Whether `h` is subordinate to the frozen restriction.
pub fn is_subordinate(h: &PlFunction, frozen: &FrozenFunction) -> Result<bool> {
    Ok(subordination_witness(h, frozen)?.is_none())
}

/// Order of `h` at `p` counted with the curve's edge weights.
pub fn weighted_ord(curve: &EmbeddedCurve, h: &PlFunction, p: GraphPoint) -> Result<i64> {
    let graph = curve.metric_graph();
    Ok(match graph.normalize(p)? {
        GraphPoint::Vertex(v) => {
            let mut s = 0i64;
            for (i, e) in curve.edges().iter().enumerate() {
                if e.tail == v {
                    s += e.weight as i64 * h.edge_start_slope(i);
                }
                if e.head == v {
                    s -= e.weight as i64 * h.edge_end_slope(i);
                }
            }
            for (l, leg) in curve.legs().iter().enumerate() {
                if leg.vertex == v {
                    s += leg.weight as i64 * h.leg_start_slope(l);
                }
            }
            s
        }
        q @ GraphPoint::Edge { edge, .. } => curve.edges()[edge].weight as i64 * h.ord(&graph, q)?,
        q @ GraphPoint::Leg { leg, .. } => curve.legs()[leg].weight as i64 * h.ord(&graph, q)?,
        q @ GraphPoint::LegEnd(leg) => curve.legs()[leg].weight as i64 * h.ord(&graph, q)?,
    })
}

/// Finite points with nonzero weighted order, in graph order.
pub fn weighted_divisor(curve: &EmbeddedCurve, h: &PlFunction) -> Result<Vec<(GraphPoint, i64)>> {
    let graph = curve.metric_graph();
    let mut candidates: Vec<GraphPoint> = (0..graph.vertex_count()).map(GraphPoint::Vertex).collect();
    candidates.extend(
        h.divisor(&graph)
            .into_iter()
            .map(|(p, _)| p)
            .filter(|p| !matches!(p, GraphPoint::Vertex(_) | GraphPoint::LegEnd(_))),
    );
    candidates.sort();
    candidates.dedup();
    let mut out = Vec::new();
    for p in candidates {
        let o = weighted_ord(curve, h, p)?;
        if o != 0 {
            out.push((p, o));
        }
    }
    Ok(out)
}

/// Graph of `h` over `curve` in `Q^(n+1)` with a downward leg of weight
/// `ord(p)` at every point of the weighted divisor. Fails on poles.
pub fn lift_by_function(curve: &EmbeddedCurve, h: &PlFunction) -> Result<EmbeddedCurve> {
    let graph = curve.metric_graph();
    check_shape(h, &graph)?;
    let n = curve.dim();
    let lift = |x: &Point, z: Rational| -> Point {
        let mut p = x.clone();
        p.push(z);
        p
    };
    let mut vertices: Vec<Point> =
        curve.vertices().iter().enumerate().map(|(v, x)| lift(x, h.vertex_value(v))).collect();
    let mut index: BTreeMap<GraphPoint, usize> = (0..vertices.len()).map(|v| (GraphPoint::Vertex(v), v)).collect();
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    let mut legs: Vec<(usize, Vec<i64>, u64)> = Vec::new();
    let mut vertex_at = |p: GraphPoint, vertices: &mut Vec<Point>| -> Result<usize> {
        if let Some(&i) = index.get(&p) {
            return Ok(i);
        }
        let x = curve.coordinates(p)?;
        vertices.push(lift(&x, h.finite_value(p)));
        index.insert(p, vertices.len() - 1);
        Ok(vertices.len() - 1)
    };
    for (i, e) in curve.edges().iter().enumerate() {
        let pts = h.edge_points(i);
        let mut prev = e.tail;
        for &(o, _) in &pts[1..pts.len() - 1] {
            let v = vertex_at(GraphPoint::Edge { edge: i, offset: o }, &mut vertices)?;
            edges.push((prev, v, e.weight));
            prev = v;
        }
        edges.push((prev, e.head, e.weight));
    }
    for (i, l) in curve.legs().iter().enumerate() {
        let lf = h.leg_function(i);
        let mut prev = l.vertex;
        for &(o, _) in &lf.points[1..] {
            let v = vertex_at(GraphPoint::Leg { leg: i, offset: o }, &mut vertices)?;
            edges.push((prev, v, l.weight));
            prev = v;
        }
        let mut dir = l.direction.coords().to_vec();
        dir.push(lf.tail_slope);
        legs.push((prev, dir, l.weight));
    }
    let mut down = vec![0i64; n];
    down.push(-1);
    for (p, o) in weighted_divisor(curve, h)? {
        if o < 0 {
            return Err(TropError::Precondition(format!(
                "lift has a pole of order {} at {p}; a modification needs a function without poles",
                -o
            )));
        }
        let v = vertex_at(p, &mut vertices)?;
        legs.push((v, down.clone(), o as u64));
    }
    EmbeddedCurve::new(n + 1, vertices, edges, legs)
}

/// Stable modification of `curve` along `f`: the graph of the restriction
/// with downward legs at the stable intersection points.
pub fn modify_curve_stable(curve: &EmbeddedCurve, f: &TropicalPolynomial) -> Result<EmbeddedCurve> {
    let frozen = pullback_with_frozen(curve, f)?;
    lift_by_function(curve, &frozen.base)
}

/// Modification of `curve` along `f` realizing the lift `h`, which must be
/// subordinate to the frozen restriction of `f`.
pub fn modify_curve_with(curve: &EmbeddedCurve, f: &TropicalPolynomial, h: &PlFunction) -> Result<EmbeddedCurve> {
    let frozen = pullback_with_frozen(curve, f)?;
    if let Some(w) = subordination_witness(h, &frozen)? {
        return Err(TropError::NotSubordinate(w.to_string()));
    }
    lift_by_function(curve, h)
}

/// Roots of a univariate polynomial viewed as chips, with chips parked at
/// the two infinite ends so that the total stays constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChipConfiguration {
    pub ambient: TropicalPolynomial,
    /// `(position, count)` with increasing positions.
    pub chips: Vec<(Rational, u64)>,
    /// Chips at `-inf`: the lowest exponent.
    pub at_neg_infinity: u64,
    /// Chips at `+inf`: the initial degree minus the current top exponent.
    pub at_pos_infinity: u64,
    degree: i64,
}

impl ChipConfiguration {
    /// Chips of a univariate polynomial with nonnegative exponents.
    pub fn new(ambient: TropicalPolynomial) -> Result<Self> {
        let top = ambient.exponents().last().map(|e| e[0]).ok_or(TropError::EmptyPolynomial)?;
        Self::with_degree(ambient, top)
    }

    fn with_degree(ambient: TropicalPolynomial, degree: i64) -> Result<Self> {
        if ambient.dim() != 1 {
            return Err(TropError::DimensionMismatch { expected: 1, found: ambient.dim() });
        }
        let exps = ambient.exponents();
        let (lo, hi) = (exps[0][0], exps[exps.len() - 1][0]);
        if lo < 0 {
            return Err(TropError::Precondition("chip configurations need nonnegative exponents".into()));
        }
        let roots = ambient.univariate_roots()?;
        Ok(ChipConfiguration {
            chips: roots.roots,
            at_neg_infinity: lo as u64,
            at_pos_infinity: (degree - hi) as u64,
            ambient,
            degree,
        })
    }

    /// Total number of chips, finite and infinite.
    pub fn total(&self) -> u64 {
        self.chips.iter().map(|c| c.1).sum::<u64>() + self.at_neg_infinity + self.at_pos_infinity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }
}

impl fmt::Display for ChipConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chips: Vec<String> = self.chips.iter().map(|(x, m)| format!("{x}:{m}")).collect();
        write!(f, "{{{}}}", chips.join(", "))?;
        if self.at_neg_infinity > 0 {
            write!(f, " -inf:{}", self.at_neg_infinity)?;
        }
        if self.at_pos_infinity > 0 {
            write!(f, " +inf:{}", self.at_pos_infinity)?;
        }
        Ok(())
    }
}

/// Lowers the coefficient of `exponent` to `new_coeff` and recomputes the
/// chips. Raising a coefficient is not a chip move and is rejected.
pub fn chip_decrease(cfg: &ChipConfiguration, exponent: i64, new_coeff: TropicalScalar) -> Result<ChipConfiguration> {
    let current = cfg.ambient.coefficient(&[exponent]);
    if new_coeff > current {
        let show = |s: TropicalScalar| s.to_string();
        return Err(TropError::CoefficientIncrease {
            exponent: vec![exponent],
            current: show(current),
            requested: show(new_coeff),
        });
    }
    let ambient = cfg.ambient.with_coefficient(&[exponent], new_coeff)?;
    ChipConfiguration::with_degree(ambient, cfg.degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::intersect::stable_intersection;
    use crate::scalar::{point_of, q};
    use itertools::Itertools;

    #[test]
    fn line_modification_has_three_walls() {
        let m = modify_space(&fixtures::tropical_line()).unwrap();
        assert_eq!(m.graph_cells.len(), 3);
        assert_eq!(m.walls.len(), 3);
        assert!(m.is_balanced());
    }

    #[test]
    fn binomial_modification() {
        let m = modify_space(&fixtures::horizontal_line(int(0))).unwrap();
        assert_eq!(m.graph_cells.len(), 2);
        // The synthetic vertex splits Y = 0 into two legs, each carrying a
        // wall.
        assert_eq!(m.walls.len(), 2);
        assert!(m.walls.iter().all(|w| w.weight == 1));
        assert!(m.is_balanced());
    }

    #[test]
    fn quartic_modification_wall_weights() {
        let m = modify_space(&fixtures::quartic_with_triple_root()).unwrap();
        assert!(m.is_balanced());
        let horizontal: Vec<u64> = m
            .walls
            .iter()
            .filter_map(|w| match &w.base {
                WallBase::Piece(p) if p.direction.coords()[1] == 0 => Some(w.weight),
                _ => None,
            })
            .collect();
        assert!(horizontal.contains(&2));
        assert!(m.walls.iter().any(|w| w.weight == 3));
    }

    #[test]
    fn univariate_modification() {
        let m = modify_space(&fixtures::chips_quadratic()).unwrap();
        assert_eq!(m.walls.len(), 2);
        assert!(m.is_balanced());
        assert_eq!(m.walls[0].base, WallBase::Point(int(1)));
    }

    #[test]
    fn frozen_locus_of_chain_restriction() {
        let line = fixtures::horizontal_line_curve(int(0));
        let fr = pullback_with_frozen(&line, &fixtures::three_vertex_chain()).unwrap();
        // Leg 1 runs along +X; frozen from X = 4 on, closed.
        assert_eq!(fr.frozen, vec![FrozenInterval { part: PieceOf::Leg(1), from: int(4), to: None }]);
        assert!(fr.is_frozen(GraphPoint::Leg { leg: 1, offset: int(4) }));
        assert!(!fr.is_frozen(GraphPoint::Leg { leg: 1, offset: q(39, 10) }));
        assert!(!fr.is_frozen(GraphPoint::Vertex(0)));
    }

    #[test]
    fn restriction_matches_polynomial_restriction() {
        let line = fixtures::horizontal_line_curve(int(0));
        let f = fixtures::four_point_overlap();
        let fr = pullback_with_frozen(&line, &f).unwrap();
        for x in [-3, -1, 0, 1, 2, 3, 5] {
            let p = if x >= 0 {
                GraphPoint::Leg { leg: 1, offset: int(x) }
            } else {
                GraphPoint::Leg { leg: 0, offset: int(-x) }
            };
            assert_eq!(fr.base.finite_value(p), f.eval(&point_of(&[x, 0])));
        }
    }

    #[test]
    fn self_modification_is_rejected() {
        let f = fixtures::tropical_line();
        let c = curve_from_polynomial(&f).unwrap();
        assert_eq!(pullback_with_frozen(&c, &f), Err(TropError::SelfModification));
        assert_eq!(modify_curve_stable(&c, &f), Err(TropError::SelfModification));
    }

    #[test]
    fn moved_chips_are_not_subordinate() {
        let line = fixtures::horizontal_line_curve(int(0));
        let fr = pullback_with_frozen(&line, &fixtures::four_point_overlap()).unwrap();
        let h = fixtures::moved_chips_lift(&line);
        let w = subordination_witness(&h, &fr).unwrap().expect("violation");
        assert_eq!(w.violation, Violation::Exceeds);
        assert_eq!(w.coords, point_of(&[1, 0]));
        assert_eq!((w.lift_value, w.stable_value), (q(13, 10), int(1)));
        assert!(matches!(
            modify_curve_with(&line, &fixtures::four_point_overlap(), &h),
            Err(TropError::NotSubordinate(_))
        ));
    }

    #[test]
    fn restriction_is_subordinate_to_itself() {
        let line = fixtures::horizontal_line_curve(int(0));
        let fr = pullback_with_frozen(&line, &fixtures::four_point_overlap()).unwrap();
        assert!(is_subordinate(&fr.base, &fr).unwrap());
        let stable = modify_curve_stable(&line, &fixtures::four_point_overlap()).unwrap();
        let with = modify_curve_with(&line, &fixtures::four_point_overlap(), &fr.base).unwrap();
        assert_eq!(stable, with);
    }

    #[test]
    fn three_root_lift_is_subordinate_and_balanced() {
        let line = fixtures::horizontal_line_curve(int(0));
        let f = fixtures::three_vertex_chain();
        let h = fixtures::three_root_lift(&line);
        let fr = pullback_with_frozen(&line, &f).unwrap();
        assert!(is_subordinate(&h, &fr).unwrap());
        let lifted = modify_curve_with(&line, &f, &h).unwrap();
        assert!(lifted.check_balancing().is_ok());
        let vertical: Vec<Point> = lifted
            .legs_of()
            .into_iter()
            .filter(|l| l.direction.coords() == [0, 0, -1])
            .map(|l| l.base[..2].to_vec())
            .sorted()
            .collect();
        assert_eq!(vertical, vec![vec![q(-5, 2), int(0)], vec![q(-2, 3), int(0)], vec![q(7, 2), int(0)]]);
        assert_eq!(lifted.projected_support(), line.support());
    }

    #[test]
    fn lowering_the_frozen_tail_is_caught() {
        let line = fixtures::horizontal_line_curve(int(0));
        let fr = pullback_with_frozen(&line, &fixtures::three_vertex_chain()).unwrap();
        let shifted = fr.base.add(&PlFunction::constant(&line.metric_graph(), int(-1)), &line.metric_graph());
        let w = subordination_witness(&shifted, &fr).unwrap().expect("violation");
        assert_eq!(w.violation, Violation::FrozenMismatch);
    }

    #[test]
    fn stable_lift_of_quartic_along_line() {
        let line = fixtures::horizontal_line_curve(int(1));
        let f = fixtures::quartic_with_triple_root();
        let lifted = modify_curve_stable(&line, &f).unwrap();
        assert!(lifted.check_balancing().is_ok());
        let mut vertical: Vec<(Point, u64)> = lifted
            .legs_of()
            .into_iter()
            .filter(|l| l.direction.coords() == [0, 0, -1])
            .map(|l| (l.base[..2].to_vec(), l.weight))
            .collect();
        vertical.sort();
        assert_eq!(vertical, vec![(vec![int(-5), int(1)], 1), (vec![int(2), int(1)], 3)]);
        let stable = stable_intersection(&line, &curve_from_polynomial(&f).unwrap()).unwrap();
        for (p, m) in &vertical {
            assert_eq!(stable.multiplicity(p), *m as i64);
        }
    }

    #[test]
    fn chips_move_together() {
        let cfg = ChipConfiguration::new(fixtures::chips_quadratic()).unwrap();
        assert_eq!(cfg.chips, vec![(int(1), 1), (int(2), 1)]);
        let moved = chip_decrease(&cfg, 1, TropicalScalar::Finite(q(-13, 10))).unwrap();
        assert_eq!(moved.chips, vec![(q(13, 10), 1), (q(17, 10), 1)]);
        let merged = chip_decrease(&cfg, 1, TropicalScalar::Finite(q(-3, 2))).unwrap();
        assert_eq!(merged.chips, vec![(q(3, 2), 2)]);
        let back = chip_decrease(&moved, 1, TropicalScalar::Finite(int(-1)));
        assert!(matches!(back, Err(TropError::CoefficientIncrease { .. })));
    }

    #[test]
    fn constant_term_pushes_one_chip_to_infinity() {
        let cfg = ChipConfiguration::new(fixtures::chips_quadratic()).unwrap();
        let a = chip_decrease(&cfg, 0, TropicalScalar::Finite(int(-5))).unwrap();
        assert_eq!(a.chips, vec![(int(-4), 1), (int(2), 1)]);
        let b = chip_decrease(&a, 0, TropicalScalar::NegInfinity).unwrap();
        assert_eq!(b.chips, vec![(int(2), 1)]);
        assert_eq!(b.at_neg_infinity, 1);
        assert_eq!(b.total(), cfg.total());
        let c = chip_decrease(&b, 2, TropicalScalar::NegInfinity).unwrap();
        assert_eq!((c.at_neg_infinity, c.at_pos_infinity, c.chips.len()), (1, 1, 0));
    }
}
