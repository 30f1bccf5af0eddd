//! Lattice polygons and the regular subdivision of a Newton polygon induced
//! by the upper hull of the lifted exponents `I -> (I, A_I)`.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Result, TropError};
use crate::poly::TropicalPolynomial;
use crate::scalar::{int, primitive_of, Point, Rational};

pub type LatticePoint = [i64; 2];

fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Lattice length of a segment: number of lattice steps between its ends.
pub fn lattice_length(a: LatticePoint, b: LatticePoint) -> i64 {
    (b[0] - a[0]).gcd(&(b[1] - a[1]))
}

/// Convex lattice polygon stored by its vertices in counter-clockwise order.
/// A segment has two vertices and a point one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

impl LatticePolygon {
    /// Convex hull; collinear boundary points are not vertices.
    pub fn hull(points: &[LatticePoint]) -> Self {
        let mut pts: Vec<LatticePoint> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return LatticePolygon { vertices: pts };
        }
        let mut lower: Vec<LatticePoint> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<LatticePoint> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() == 2 && lower[0] == lower[1] {
            lower.pop();
        }
        LatticePolygon { vertices: lower }
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn is_two_dimensional(&self) -> bool {
        self.vertices.len() >= 3
    }

    /// Euclidean area; the unit square has area 1.
    pub fn area(&self) -> Rational {
        if self.vertices.len() < 3 {
            return Rational::zero();
        }
        let twice: i64 = self.vertices.iter().circular_tuple_windows().map(|(a, b)| a[0] * b[1] - a[1] * b[0]).sum();
        Rational::new(twice.abs() as i128, 2)
    }

    /// Boundary edges in counter-clockwise order. A segment has one edge.
    pub fn edges(&self) -> Vec<(LatticePoint, LatticePoint)> {
        match self.vertices.len() {
            0 | 1 => Vec::new(),
            2 => vec![(self.vertices[0], self.vertices[1])],
            _ => self.vertices.iter().copied().circular_tuple_windows().collect(),
        }
    }

    /// Lattice width along a direction: `max - min` of `<dir, p>`.
    pub fn width(&self, dir: &[i64]) -> i64 {
        let values = self.vertices.iter().map(|p| p[0] * dir[0] + p[1] * dir[1]);
        match values.minmax().into_option() {
            Some((lo, hi)) => hi - lo,
            None => 0,
        }
    }

    pub fn minkowski_sum(&self, other: &LatticePolygon) -> LatticePolygon {
        let sums: Vec<LatticePoint> =
            self.vertices.iter().cartesian_product(&other.vertices).map(|(a, b)| [a[0] + b[0], a[1] + b[1]]).collect();
        LatticePolygon::hull(&sums)
    }

    /// Whether `p` lies in the closed polygon.
    pub fn contains(&self, p: LatticePoint) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                cross(a, b, p) == 0 && (p[0] - a[0]) * (p[0] - b[0]) <= 0 && (p[1] - a[1]) * (p[1] - b[1]) <= 0
            }
            _ => self.edges().iter().all(|&(a, b)| cross(a, b, p) >= 0),
        }
    }
}

/// Normalized area `area(P + Q) - area(P) - area(Q)` (the mixed area with the
/// unit square normalized to 1); it counts stable intersection points.
pub fn mixed_area(p: &LatticePolygon, q: &LatticePolygon) -> Rational {
    p.minkowski_sum(q).area() - p.area() - q.area()
}

/// Which part of the plane curve a dual edge corresponds to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePart {
    Edge(usize),
    Leg(usize),
}

/// A face of the subdivision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub polygon: LatticePolygon,
    /// Exponents whose lifted points lie on this upper face.
    pub points: Vec<LatticePoint>,
    /// Dual vertex of the curve for a two-dimensional cell; `None` for the
    /// segment cells of a polynomial with collinear exponents.
    pub vertex: Option<Point>,
}

/// Edge of the subdivision with its adjacent cells and the curve edge or
/// leg(s) dual to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualEdge {
    pub a: LatticePoint,
    pub b: LatticePoint,
    pub lattice_length: i64,
    pub cells: Vec<usize>,
    pub dual: Vec<CurvePart>,
}

impl DualEdge {
    pub fn is_interior(&self) -> bool {
        self.cells.len() == 2
    }

    pub fn direction(&self) -> [i64; 2] {
        [self.b[0] - self.a[0], self.b[1] - self.a[1]]
    }
}

/// Regular subdivision of the Newton polygon (max convention).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonSubdivision {
    pub polygon: LatticePolygon,
    pub cells: Vec<Cell>,
    pub dual_edges: Vec<DualEdge>,
}

impl NewtonSubdivision {
    /// Total area of the two-dimensional cells.
    pub fn cell_area_sum(&self) -> Rational {
        self.cells.iter().map(|c| c.polygon.area()).sum()
    }

    /// Dual edges bounding a cell.
    pub fn edges_of_cell(&self, cell: usize) -> Vec<usize> {
        self.dual_edges.iter().enumerate().filter(|(_, e)| e.cells.contains(&cell)).map(|(i, _)| i).collect()
    }

    /// Index of the dual edge carrying a given curve part.
    pub fn dual_of(&self, part: CurvePart) -> Option<usize> {
        self.dual_edges.iter().position(|e| e.dual.contains(&part))
    }
}

fn lattice_points(f: &TropicalPolynomial) -> Result<Vec<(LatticePoint, Rational)>> {
    if f.dim() != 2 {
        return Err(TropError::DimensionMismatch { expected: 2, found: f.dim() });
    }
    Ok(f.terms().map(|(e, &c)| ([e[0], e[1]], c)).collect())
}

/// Plane `z = alpha + beta x + gamma y` through three lifted points whose
/// projections are not collinear; returns `(alpha, beta, gamma)`.
fn plane_through(p: [(LatticePoint, Rational); 3]) -> (Rational, Rational, Rational) {
    let [(a, za), (b, zb), (c, zc)] = p;
    let (ux, uy, uz) = (int(b[0] - a[0]), int(b[1] - a[1]), zb - za);
    let (vx, vy, vz) = (int(c[0] - a[0]), int(c[1] - a[1]), zc - za);
    let det = ux * vy - uy * vx;
    let beta = (uz * vy - uy * vz) / det;
    let gamma = (ux * vz - uz * vx) / det;
    let alpha = za - beta * int(a[0]) - gamma * int(a[1]);
    (alpha, beta, gamma)
}

/// Upper faces of the lifted point configuration, each with the set of
/// points on it and the dual vertex `(-beta, -gamma)`.
fn upper_faces(points: &[(LatticePoint, Rational)]) -> Vec<(BTreeSet<LatticePoint>, Point)> {
    let mut faces: BTreeMap<BTreeSet<LatticePoint>, Point> = BTreeMap::new();
    for (i, j, k) in (0..points.len()).tuple_combinations() {
        let (a, b, c) = (points[i].0, points[j].0, points[k].0);
        if cross(a, b, c) == 0 {
            continue;
        }
        let (alpha, beta, gamma) = plane_through([points[i], points[j], points[k]]);
        let mut on_face = BTreeSet::new();
        let mut is_upper = true;
        for &(p, z) in points {
            let plane = alpha + beta * int(p[0]) + gamma * int(p[1]);
            if z > plane {
                is_upper = false;
                break;
            }
            if z == plane {
                on_face.insert(p);
            }
        }
        if is_upper {
            faces.entry(on_face).or_insert_with(|| vec![-beta, -gamma]);
        }
    }
    faces.into_iter().collect()
}

/// Output of the duality construction shared by the subdivision and the
/// curve builder.
pub(crate) struct PlaneDual {
    pub subdivision: NewtonSubdivision,
    /// `(cell_a, cell_b, weight)` for each bounded curve edge.
    pub edges: Vec<(usize, usize, u64)>,
    /// `(vertex, direction, weight)` for each leg.
    pub legs: Vec<(usize, Vec<i64>, u64)>,
    pub vertices: Vec<Point>,
}

/// Computes the regular subdivision together with the dual curve data.
pub(crate) fn plane_dual(f: &TropicalPolynomial) -> Result<PlaneDual> {
    let points = lattice_points(f)?;
    let all: Vec<LatticePoint> = points.iter().map(|p| p.0).collect();
    let polygon = LatticePolygon::hull(&all);
    match polygon.vertices().len() {
        0 | 1 => Err(TropError::EmptyCurve),
        2 => Ok(collinear_dual(polygon, &points)),
        _ => Ok(full_dual(polygon, &points)),
    }
}

fn full_dual(polygon: LatticePolygon, points: &[(LatticePoint, Rational)]) -> PlaneDual {
    let faces = upper_faces(points);
    let cells: Vec<Cell> = faces
        .into_iter()
        .map(|(pts, vertex)| {
            let pts: Vec<LatticePoint> = pts.into_iter().collect();
            Cell { polygon: LatticePolygon::hull(&pts), points: pts, vertex: Some(vertex) }
        })
        .collect();
    let mut by_segment: BTreeMap<(LatticePoint, LatticePoint), Vec<usize>> = BTreeMap::new();
    for (ci, cell) in cells.iter().enumerate() {
        for (a, b) in cell.polygon.edges() {
            let key = if a <= b { (a, b) } else { (b, a) };
            by_segment.entry(key).or_default().push(ci);
        }
    }
    let mut dual_edges = Vec::new();
    let mut edges = Vec::new();
    let mut legs = Vec::new();
    for ((a, b), adj) in by_segment {
        let len = lattice_length(a, b);
        let dual = if adj.len() == 2 {
            edges.push((adj[0], adj[1], len as u64));
            CurvePart::Edge(edges.len() - 1)
        } else {
            let cell = &cells[adj[0]];
            // Outward normal of the boundary edge, pointing away from the cell.
            let d = [b[0] - a[0], b[1] - a[1]];
            let (normal, _) = primitive_of(&[d[1], -d[0]]).expect("nonzero edge");
            let n = normal.coords();
            let inside = cell
                .polygon
                .vertices()
                .iter()
                .map(|p| (p[0] - a[0]) * n[0] + (p[1] - a[1]) * n[1])
                .find(|&v| v != 0)
                .expect("two-dimensional cell");
            let dir = if inside < 0 { n.to_vec() } else { vec![-n[0], -n[1]] };
            legs.push((adj[0], dir, len as u64));
            CurvePart::Leg(legs.len() - 1)
        };
        dual_edges.push(DualEdge { a, b, lattice_length: len, cells: adj, dual: vec![dual] });
    }
    let vertices = cells.iter().map(|c| c.vertex.clone().expect("2d cell")).collect();
    PlaneDual { subdivision: NewtonSubdivision { polygon, cells, dual_edges }, edges, legs, vertices }
}

/// Exponents on a line: the corner locus is a family of parallel lines, one
/// per segment of the one-dimensional upper hull. Each line gets a synthetic
/// two-valent vertex at the point of the line closest to the origin.
fn collinear_dual(polygon: LatticePolygon, points: &[(LatticePoint, Rational)]) -> PlaneDual {
    let origin = polygon.vertices()[0];
    let end = polygon.vertices()[1];
    let (d, _) = primitive_of(&[end[0] - origin[0], end[1] - origin[1]]).expect("segment");
    let d = [d.coords()[0], d.coords()[1]];
    let dd = d[0] * d[0] + d[1] * d[1];
    let mut param: Vec<(i64, Rational)> =
        points.iter().map(|&(p, c)| (((p[0] - origin[0]) * d[0] + (p[1] - origin[1]) * d[1]) / dd, c)).collect();
    param.sort();
    let univariate = TropicalPolynomial::univariate(&param).expect("distinct exponents on a line");
    let hull = univariate.upper_envelope().expect("univariate");
    let at = |t: i64| [origin[0] + t * d[0], origin[1] + t * d[1]];
    let mut cells = Vec::new();
    let mut dual_edges = Vec::new();
    let mut vertices = Vec::new();
    let mut legs = Vec::new();
    for (&(t1, a1), &(t2, a2)) in hull.iter().tuple_windows() {
        let weight = t2 - t1;
        // The line is {x : d.x = c} with c = (A_1 - A_2) / (t_2 - t_1).
        let c = (a1 - a2) / int(weight);
        let base = vec![c * int(d[0]) / int(dd), c * int(d[1]) / int(dd)];
        let on_chord: Vec<LatticePoint> = param
            .iter()
            .filter(|&&(t, a)| t >= t1 && t <= t2 && a * int(t2 - t1) == a1 * int(t2 - t) + a2 * int(t - t1))
            .map(|&(t, _)| at(t))
            .collect();
        let ci = cells.len();
        cells.push(Cell { polygon: LatticePolygon::hull(&[at(t1), at(t2)]), points: on_chord, vertex: None });
        vertices.push(base);
        let perp = vec![-d[1], d[0]];
        legs.push((ci, perp.clone(), weight as u64));
        legs.push((ci, vec![d[1], -d[0]], weight as u64));
        dual_edges.push(DualEdge {
            a: at(t1),
            b: at(t2),
            lattice_length: weight,
            cells: vec![ci],
            dual: vec![CurvePart::Leg(legs.len() - 2), CurvePart::Leg(legs.len() - 1)],
        });
    }
    let edges = Vec::new();
    PlaneDual { subdivision: NewtonSubdivision { polygon, cells, dual_edges }, edges, legs, vertices }
}

/// Regular subdivision of the Newton polygon of a bivariate polynomial.
pub fn dual_subdivision(f: &TropicalPolynomial) -> Result<NewtonSubdivision> {
    let points = lattice_points(f)?;
    let all: Vec<LatticePoint> = points.iter().map(|p| p.0).collect();
    let polygon = LatticePolygon::hull(&all);
    if polygon.vertices().len() == 1 {
        let cell = Cell { polygon: polygon.clone(), points: all, vertex: None };
        return Ok(NewtonSubdivision { polygon, cells: vec![cell], dual_edges: Vec::new() });
    }
    Ok(plane_dual(f)?.subdivision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use proptest::prelude::*;

    fn poly(terms: &[([i64; 2], Rational)]) -> TropicalPolynomial {
        TropicalPolynomial::new(2, terms.iter().map(|(e, c)| (e.to_vec(), crate::scalar::TropicalScalar::Finite(*c))))
            .unwrap()
    }

    fn stability_poly() -> TropicalPolynomial {
        poly(&[
            ([1, 3], int(3)),
            ([1, 2], int(3)),
            ([1, 1], int(3)),
            ([1, 0], int(3)),
            ([2, 2], int(2)),
            ([2, 1], int(2)),
            ([2, 0], int(2)),
            ([0, 1], int(1)),
            ([0, 0], int(1)),
            ([3, 0], int(-2)),
        ])
    }

    #[test]
    fn hull_and_area() {
        let t = LatticePolygon::hull(&[[0, 0], [1, 0], [0, 1], [0, 0]]);
        assert_eq!(t.vertices(), &[[0, 0], [1, 0], [0, 1]]);
        assert_eq!(t.area(), q(1, 2));
        let sq = LatticePolygon::hull(&[[0, 0], [2, 0], [1, 0], [2, 2], [0, 2], [1, 1]]);
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.area(), int(4));
        let seg = LatticePolygon::hull(&[[0, 0], [1, 1], [2, 2]]);
        assert_eq!(seg.vertices(), &[[0, 0], [2, 2]]);
        assert_eq!(seg.area(), int(0));
        assert!(seg.contains([1, 1]));
        assert!(!seg.contains([1, 0]));
    }

    #[test]
    fn widths() {
        let t = LatticePolygon::hull(&[[0, 0], [1, 0], [0, 1]]);
        assert_eq!(t.width(&[1, 0]), 1);
        let seg = LatticePolygon::hull(&[[1, 0], [1, 3]]);
        assert_eq!(seg.width(&[1, 0]), 0);
        assert_eq!(seg.width(&[0, 1]), 3);
    }

    #[test]
    fn mixed_area_of_triangles_is_product_of_degrees() {
        let tri = |d: i64| LatticePolygon::hull(&[[0, 0], [d, 0], [0, d]]);
        for a in 1..5 {
            for b in 1..5 {
                assert_eq!(mixed_area(&tri(a), &tri(b)), int(a * b));
            }
        }
    }

    #[test]
    fn line_has_one_cell() {
        let f = poly(&[([0, 0], int(0)), ([1, 0], int(0)), ([0, 1], int(0))]);
        let s = dual_subdivision(&f).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.cells[0].polygon.area(), q(1, 2));
        assert_eq!(s.cells[0].vertex, Some(vec![int(0), int(0)]));
        assert_eq!(s.dual_edges.len(), 3);
        assert!(s.dual_edges.iter().all(|e| !e.is_interior()));
    }

    #[test]
    fn stability_example_dual_edges() {
        let s = dual_subdivision(&stability_poly()).unwrap();
        assert_eq!(s.cells.len(), 3);
        let find = |a: LatticePoint, b: LatticePoint| s.dual_edges.iter().find(|e| (e.a, e.b) == (a, b)).cloned();
        let e12 = find([1, 0], [1, 3]).expect("d(A1A2)");
        assert_eq!(e12.lattice_length, 3);
        assert!(e12.is_interior());
        let e23 = find([2, 0], [2, 2]).expect("d(A2A3)");
        assert_eq!(e23.lattice_length, 2);
        assert!(e23.is_interior());
        assert_eq!(s.cell_area_sum(), s.polygon.area());
        // Interior points of the dual edges lie on the lifted faces.
        for on_face in [[1, 1], [1, 2], [2, 1]] {
            assert!(s.cells.iter().any(|c| c.points.contains(&on_face)));
        }
    }

    #[test]
    fn collinear_exponents_give_segment_cells() {
        let f = poly(&[([0, 0], int(0)), ([1, 0], int(-1)), ([2, 0], int(-3))]);
        let s = dual_subdivision(&f).unwrap();
        let segs: Vec<_> = s.cells.iter().map(|c| c.polygon.vertices().to_vec()).collect();
        assert_eq!(segs, vec![vec![[0, 0], [1, 0]], vec![[1, 0], [2, 0]]]);
        assert!(s.cells.iter().all(|c| c.vertex.is_none()));
    }

    #[test]
    fn single_term_has_point_subdivision() {
        let f = poly(&[([2, 1], int(4))]);
        let s = dual_subdivision(&f).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert!(s.dual_edges.is_empty());
    }

    proptest! {
        #[test]
        fn cells_tile_the_polygon(
            terms in proptest::collection::btree_map((0i64..4, 0i64..4), -6i64..6, 3..12),
        ) {
            let f = TropicalPolynomial::new(
                2,
                terms.into_iter().map(|((a, b), c)| (vec![a, b], crate::scalar::TropicalScalar::Finite(int(c)))),
            ).unwrap();
            let s = dual_subdivision(&f).unwrap();
            prop_assert_eq!(s.cell_area_sum(), s.polygon.area());
            // Interior dual edges are shared by exactly two cells; the others
            // lie on the boundary of the Newton polygon.
            for e in &s.dual_edges {
                if !e.is_interior() && s.polygon.is_two_dimensional() {
                    let on_boundary = s.polygon.edges().iter().any(|&(a, b)| {
                        cross(a, b, e.a) == 0 && cross(a, b, e.b) == 0
                    });
                    prop_assert!(on_boundary);
                }
            }
        }
    }
}
