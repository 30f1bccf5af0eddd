//! Measurements on Newton subdivisions and the necessary conditions for a
//! point of given multiplicity to sit on a horizontal edge of a plane curve.
//!
//! A chain is a run of curve vertices `A_1, ..., A_k` on one horizontal
//! line, consecutive ones joined by horizontal edges; vertex `i` of a curve
//! built by [`plane_curve_with_dual`](crate::curve::plane_curve_with_dual) is
//! dual to cell `i`, so chains are given as cell indices. The point is
//! assumed to lie on the edge `A_s A_{s+1}` (1-based `s`).
//!
//! With that edge fixed, faces to the right are `d(A_{s+1}), d(A_{s+2}),
//! ...` and to the left `d(A_s), d(A_{s-1}), ...`. `a_i`, `b_j` are their
//! horizontal widths, `A_i`, `B_j` the partial sums. `c_i` is the lattice
//! length of the vertical dual edge leaving the `i`-th right face away from
//! the marked edge, `d_j` likewise on the left; past the end of the chain
//! this length is 0.

use num_traits::Zero;

use crate::curve::EmbeddedCurve;
use crate::error::{Result, TropError};
use crate::intersect::{component_containing, local_stable_multiplicity};
use crate::modify::modify_curve_stable;
use crate::momentum::{legs_with_unknown, solve_missing_leg, LegSlot};
use crate::poly::TropicalPolynomial;
use crate::scalar::{int, Point, Rational, TropicalScalar};
use crate::subdivision::{CurvePart, LatticePolygon, NewtonSubdivision};

/// Lattice width of a polygon along a primitive direction.
pub fn face_width(cell: &LatticePolygon, direction: &[i64]) -> i64 {
    cell.width(direction)
}

fn is_vertical(sub: &NewtonSubdivision, edge: usize) -> bool {
    sub.dual_edges[edge].direction()[0] == 0
}

/// Index of the vertical dual edge shared by two cells.
fn vertical_between(sub: &NewtonSubdivision, x: usize, y: usize) -> Option<usize> {
    sub.edges_of_cell(x).into_iter().find(|&e| sub.dual_edges[e].cells.contains(&y) && is_vertical(sub, e))
}

fn cell_vertex(sub: &NewtonSubdivision, cell: usize) -> Result<&Point> {
    sub.cells
        .get(cell)
        .and_then(|c| c.vertex.as_ref())
        .ok_or_else(|| TropError::MalformedChain(format!("cell {cell} has no dual vertex")))
}

/// Horizontal width sum of the faces at both ends of a horizontal edge,
/// against the local stable intersection with the horizontal line through
/// the edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStableCheck {
    pub width_sum: i64,
    pub stable: u64,
}

impl EdgeStableCheck {
    pub fn agrees(&self) -> bool {
        self.width_sum >= 0 && self.width_sum as u64 == self.stable
    }
}

/// `y = c` as a tropical polynomial, `max(c, Y)`.
pub fn horizontal_line_at(c: Rational) -> TropicalPolynomial {
    TropicalPolynomial::new(2, [(vec![0, 0], TropicalScalar::Finite(c)), (vec![0, 1], TropicalScalar::Finite(int(0)))])
        .expect("two distinct exponents")
}

/// Width sum of the two faces adjacent to the dual of `edge`, which must be
/// horizontal with neither face carrying another vertical edge.
pub fn horizontal_edge_stable_check(
    curve: &EmbeddedCurve,
    sub: &NewtonSubdivision,
    edge: usize,
) -> Result<EdgeStableCheck> {
    let e = curve.edges().get(edge).ok_or_else(|| TropError::Precondition(format!("no edge {edge}")))?;
    if e.direction.coords()[1] != 0 {
        return Err(TropError::Precondition(format!("edge {edge} is not horizontal")));
    }
    let dual = sub
        .dual_of(CurvePart::Edge(edge))
        .ok_or_else(|| TropError::Precondition(format!("edge {edge} has no dual edge")))?;
    let mut width_sum = 0;
    for cell in [e.tail, e.head] {
        let extra = sub.edges_of_cell(cell).into_iter().filter(|&d| d != dual && is_vertical(sub, d)).count();
        if extra > 0 {
            return Err(TropError::PreconditionExtension(format!(
                "face dual to vertex {cell} has {extra} further vertical edge(s)"
            )));
        }
        width_sum += face_width(&sub.cells[cell].polygon, &[1, 0]);
    }
    let y = curve.vertices()[e.tail][1];
    let line = crate::curve::curve_from_polynomial(&horizontal_line_at(y))?;
    let component = component_containing(curve, &line, &curve.vertices()[e.tail])?;
    let stable = local_stable_multiplicity(curve, &line, &component)?;
    Ok(EdgeStableCheck { width_sum, stable })
}

/// Chain vertices on the horizontal line through `vertex`, left to right,
/// following horizontal edges.
pub fn horizontal_chain(curve: &EmbeddedCurve, vertex: usize) -> Vec<usize> {
    let horizontal: Vec<(usize, usize)> = curve
        .edges()
        .iter()
        .filter(|e| e.direction.coords()[1] == 0)
        .map(|e| {
            if curve.vertices()[e.tail][0] < curve.vertices()[e.head][0] {
                (e.tail, e.head)
            } else {
                (e.head, e.tail)
            }
        })
        .collect();
    let mut start = vertex;
    while let Some(&(l, _)) = horizontal.iter().find(|&&(_, r)| r == start) {
        start = l;
    }
    let mut chain = vec![start];
    while let Some(&(_, r)) = horizontal.iter().find(|&&(l, _)| l == *chain.last().unwrap()) {
        chain.push(r);
    }
    chain
}

/// Measured chain data and the verdicts of the necessary conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityAudit {
    pub chain: Vec<usize>,
    pub s: usize,
    pub m: u64,
    /// Lattice length of the dual of the marked edge.
    pub edge_length: i64,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
    pub d: Vec<i64>,
    pub partial_a: Vec<i64>,
    pub partial_b: Vec<i64>,
    /// Area of every chain face, in chain order.
    pub areas: Vec<Rational>,
    pub area_sum: Rational,
    /// Area of the two faces flanking the marked edge.
    pub two_face_area: Rational,
    /// `min_i (c_i + A_i) + min_j (d_j + B_j)`.
    pub min_sum: i64,
}

impl SingularityAudit {
    pub fn chain_bound(&self) -> Rational {
        let m = int(self.m as i64);
        m / int(2) + m * m / int(4)
    }

    pub fn two_face_bound(&self) -> Rational {
        let m = int(self.m as i64);
        m * m / int(2)
    }

    pub fn edge_ok(&self) -> bool {
        self.edge_length >= self.m as i64
    }

    pub fn chain_area_ok(&self) -> bool {
        self.area_sum >= self.chain_bound()
    }

    pub fn two_face_ok(&self) -> bool {
        self.two_face_area >= self.two_face_bound()
    }

    pub fn min_sum_ok(&self) -> bool {
        self.min_sum >= self.m as i64
    }

    /// Whether the two flanking faces alone make up the chain.
    pub fn is_two_face(&self) -> bool {
        self.chain.len() == 2
    }

    /// True when some necessary condition fails, so no point of
    /// multiplicity `m` can tropicalize onto the marked edge.
    pub fn obstructed(&self) -> bool {
        !(self.edge_ok() && self.chain_area_ok() && self.min_sum_ok() && (!self.is_two_face() || self.two_face_ok()))
    }
}

pub fn singularity_area_audit(sub: &NewtonSubdivision, chain: &[usize], s: usize, m: u64) -> Result<SingularityAudit> {
    let k = chain.len();
    if k < 2 {
        return Err(TropError::MalformedChain("a chain needs at least two vertices".into()));
    }
    if s == 0 || s >= k {
        return Err(TropError::MalformedChain(format!("marked edge {s} outside 1..{}", k - 1)));
    }
    let y = cell_vertex(sub, chain[0])?[1];
    let mut xs = Vec::with_capacity(k);
    for &c in chain {
        let v = cell_vertex(sub, c)?;
        if v[1] != y {
            return Err(TropError::MalformedChain(format!("vertex {c} is off the horizontal line")));
        }
        xs.push(v[0]);
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(TropError::MalformedChain("chain is not ordered left to right".into()));
    }
    // links[t] joins chain[t] and chain[t + 1]
    let links = chain
        .windows(2)
        .map(|w| {
            vertical_between(sub, w[0], w[1])
                .map(|e| sub.dual_edges[e].lattice_length)
                .ok_or_else(|| TropError::MalformedChain(format!("faces {} and {} share no vertical edge", w[0], w[1])))
        })
        .collect::<Result<Vec<i64>>>()?;
    let width = |t: usize| face_width(&sub.cells[chain[t]].polygon, &[1, 0]);
    let link = |t: Option<usize>| t.and_then(|t| links.get(t).copied()).unwrap_or(0);
    // 0-based: the marked edge joins positions s - 1 and s.
    let right: Vec<usize> = (s..k).collect();
    let left: Vec<usize> = (0..s).rev().collect();
    let a: Vec<i64> = right.iter().map(|&t| width(t)).collect();
    let c: Vec<i64> = right.iter().map(|&t| link(Some(t))).collect();
    let b: Vec<i64> = left.iter().map(|&t| width(t)).collect();
    let d: Vec<i64> = left.iter().map(|&t| link(t.checked_sub(1))).collect();
    let partial = |v: &[i64]| {
        v.iter()
            .scan(0, |acc, x| {
                *acc += x;
                Some(*acc)
            })
            .collect::<Vec<i64>>()
    };
    let partial_a = partial(&a);
    let partial_b = partial(&b);
    let min_a = c.iter().zip(&partial_a).map(|(x, y)| x + y).min().unwrap_or(0);
    let min_b = d.iter().zip(&partial_b).map(|(x, y)| x + y).min().unwrap_or(0);
    let areas: Vec<Rational> = chain.iter().map(|&t| sub.cells[t].polygon.area()).collect();
    let area_sum = areas.iter().copied().fold(Rational::zero(), |x, y| x + y);
    Ok(SingularityAudit {
        chain: chain.to_vec(),
        s,
        m,
        edge_length: links[s - 1],
        two_face_area: areas[s - 1] + areas[s],
        a,
        b,
        c,
        d,
        partial_a,
        partial_b,
        areas,
        area_sum,
        min_sum: min_a + min_b,
    })
}

/// Position of a point of multiplicity `m` whose valuation lies on the
/// component of `curve` meeting `y = height` that contains `near`. The
/// vertical legs of the stable modification over that component are
/// replaced by one unknown leg of weight `m` and recovered by momentum.
pub fn unique_singular_position(curve: &EmbeddedCurve, height: Rational, m: u64, near: &[Rational]) -> Result<Point> {
    let line_poly = horizontal_line_at(height);
    let line = crate::curve::curve_from_polynomial(&line_poly)?;
    let component = component_containing(curve, &line, near)?;
    if !component.is_compact() {
        return Err(TropError::Precondition("intersection component is not compact".into()));
    }
    let stable = local_stable_multiplicity(curve, &line, &component)?;
    if stable != m {
        return Err(TropError::Precondition(format!("local stable intersection is {stable}, not {m}")));
    }
    let lifted = modify_curve_stable(curve, &line_poly)?;
    let under: Vec<usize> = lifted
        .legs_of()
        .into_iter()
        .filter(|l| l.direction.coords() == [0, 0, -1] && component.contains(&l.base[..2]))
        .map(|l| l.id)
        .collect();
    let mut slots: Vec<LegSlot> = legs_with_unknown(&lifted, &[])
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !under.contains(i))
        .map(|(_, s)| s)
        .collect();
    slots.push(LegSlot::Unknown { direction: vec![0, 0, -1], weight: m });
    let origin = vec![Rational::zero(); 3];
    let sol = solve_missing_leg(&slots, &origin)?;
    Ok(sol.particular[..2].to_vec())
}
