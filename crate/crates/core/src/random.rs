//! Seeded generators of random inputs for property tests and self checks.
//!
//! Every generator takes any `rand::Rng`, so a fixed-seed generator gives
//! reproducible cases.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::curve::{curve_from_polynomial, EmbeddedCurve};
use crate::error::Result;
use crate::pl::{LegFunction, MetricEdge, MetricGraph, PlFunction};
use crate::poly::TropicalPolynomial;
use crate::scalar::{int, q, Point, Rational, TropicalScalar};
use crate::weil::Triple;

/// Small rational in `[-range, range]` with denominator 1, 2 or 3.
pub fn small_rational<R: Rng>(rng: &mut R, range: i64) -> Rational {
    let den = *[1i128, 1, 2, 3].choose(rng).unwrap();
    let bound = range as i128 * den;
    q(rng.gen_range(-bound..=bound), den)
}

fn coefficient<R: Rng>(rng: &mut R, range: i64, integral: bool) -> Rational {
    if integral {
        int(rng.gen_range(-range..=range))
    } else {
        small_rational(rng, range)
    }
}

/// Univariate polynomial with `terms` distinct exponents in `lo..=hi`.
/// The extreme exponents are always present, so they dominate the envelope
/// at the two ends.
pub fn random_univariate<R: Rng>(rng: &mut R, lo: i64, hi: i64, terms: usize) -> TropicalPolynomial {
    assert!(lo < hi);
    let mut exps: Vec<i64> = (lo + 1..hi).collect();
    exps.shuffle(rng);
    exps.truncate(terms.saturating_sub(2));
    exps.push(lo);
    exps.push(hi);
    let terms: Vec<(Vec<i64>, TropicalScalar)> =
        exps.into_iter().map(|e| (vec![e], TropicalScalar::Finite(coefficient(rng, 8, false)))).collect();
    TropicalPolynomial::new(1, terms).expect("distinct exponents")
}

/// Plane polynomial whose Newton polygon is the full triangle of degree `d`.
/// Interior exponents appear with probability `density`.
pub fn random_triangle_polynomial<R: Rng>(rng: &mut R, d: i64, density: f64, integral: bool) -> TropicalPolynomial {
    let mut terms = Vec::new();
    for i in 0..=d {
        for j in 0..=d - i {
            let corner = (i == 0 && j == 0) || i == d || j == d;
            if corner || rng.gen_bool(density) {
                terms.push((vec![i, j], TropicalScalar::Finite(coefficient(rng, 3 * d.max(1), integral))));
            }
        }
    }
    TropicalPolynomial::new(2, terms).expect("distinct exponents")
}

/// Plane polynomial with random exponents in the box `[0, d]^2`, at least
/// three of them affinely independent.
pub fn random_plane_polynomial<R: Rng>(rng: &mut R, d: i64, terms: usize) -> TropicalPolynomial {
    loop {
        let mut exps: Vec<Vec<i64>> = Vec::new();
        while exps.len() < terms.max(3) {
            let e = vec![rng.gen_range(0..=d), rng.gen_range(0..=d)];
            if !exps.contains(&e) {
                exps.push(e);
            }
        }
        let independent = exps.iter().skip(2).any(|e| {
            let (a, b) = (&exps[0], &exps[1]);
            (b[0] - a[0]) * (e[1] - a[1]) != (b[1] - a[1]) * (e[0] - a[0])
        });
        if independent {
            let t =
                exps.into_iter().map(|e| (e, TropicalScalar::Finite(coefficient(rng, 4, false)))).collect::<Vec<_>>();
            return TropicalPolynomial::new(2, t).expect("distinct exponents");
        }
    }
}

/// Curve of a random triangle polynomial of degree `1..=max_degree`.
pub fn random_plane_curve<R: Rng>(rng: &mut R, max_degree: i64) -> EmbeddedCurve {
    let d = rng.gen_range(1..=max_degree);
    curve_from_polynomial(&random_triangle_polynomial(rng, d, 0.6, false)).expect("full-dimensional Newton polygon")
}

/// `max(0, X - p_x, Y - p_y)`: the tropical line with vertex `p`.
pub fn line_with_vertex(p: &[Rational]) -> TropicalPolynomial {
    TropicalPolynomial::from_terms(2, &[(&[0, 0], int(0)), (&[1, 0], -p[0]), (&[0, 1], -p[1])]).expect("line")
}

/// How the second curve of a [`DegeneratePair`] was placed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegenerateKind {
    /// Tropical line with its vertex at a vertex of the first curve.
    LineThroughVertex,
    /// `Y = c` through a vertex.
    Horizontal(Rational),
    /// `X = c` through a vertex.
    Vertical(Rational),
    /// The first curve translated along one of its edge or leg directions.
    Translate,
}

/// Plane curves meeting non-transversally, with the polynomial of the first.
#[derive(Debug, Clone)]
pub struct DegeneratePair {
    pub polynomial: TropicalPolynomial,
    pub first: EmbeddedCurve,
    pub second: EmbeddedCurve,
    pub kind: DegenerateKind,
}

pub fn random_degenerate_pair<R: Rng>(rng: &mut R, max_degree: i64) -> DegeneratePair {
    let d = rng.gen_range(1..=max_degree);
    let polynomial = random_triangle_polynomial(rng, d, 0.6, false);
    let c1 = curve_from_polynomial(&polynomial).expect("full-dimensional Newton polygon");
    let v = c1.vertices().choose(rng).expect("curves have vertices").clone();
    let axis_line = |i: usize, c: Rational| {
        let e: &[i64] = if i == 0 { &[1, 0] } else { &[0, 1] };
        curve_from_polynomial(&TropicalPolynomial::from_terms(2, &[(&[0, 0], c), (e, int(0))]).expect("line"))
            .expect("line")
    };
    let (second, kind) = match rng.gen_range(0..4) {
        0 => (curve_from_polynomial(&line_with_vertex(&v)).expect("line"), DegenerateKind::LineThroughVertex),
        1 => (axis_line(1, v[1]), DegenerateKind::Horizontal(v[1])),
        2 => (axis_line(0, v[0]), DegenerateKind::Vertical(v[0])),
        _ => {
            let dirs: Vec<Vec<i64>> = c1
                .edges()
                .iter()
                .map(|e| e.direction.coords().to_vec())
                .chain(c1.legs().iter().map(|l| l.direction.coords().to_vec()))
                .collect();
            let dir = dirs.choose(rng).expect("curves have legs");
            let k = small_rational(rng, 2);
            (c1.translated(&[k * int(dir[0]), k * int(dir[1])]), DegenerateKind::Translate)
        }
    };
    DegeneratePair { polynomial, first: c1, second, kind }
}

/// Image of a random plane curve under an injective integer map to `Q^4`
/// plus a rational offset.
pub fn random_t4_image<R: Rng>(rng: &mut R, max_degree: i64) -> Result<EmbeddedCurve> {
    let c = random_plane_curve(rng, max_degree);
    let matrix = loop {
        let m: Vec<Vec<i64>> = (0..4).map(|_| vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)]).collect();
        let rank_two = (0..4).any(|i| (i + 1..4).any(|j| m[i][0] * m[j][1] - m[i][1] * m[j][0] != 0));
        if rank_two {
            break m;
        }
    };
    let offset: Vec<Rational> = (0..4).map(|_| small_rational(rng, 3)).collect();
    c.linear_image(&matrix, &offset)
}

/// Connected metric graph: a random spanning tree on `vertices` vertices,
/// `extra` further edges (possibly parallel, never loops) and `legs` legs.
pub fn random_metric_graph<R: Rng>(rng: &mut R, vertices: usize, extra: usize, legs: usize) -> MetricGraph {
    let length = |rng: &mut R| q(rng.gen_range(1..=6), *[1i128, 2, 3].choose(rng).unwrap());
    let mut edges = Vec::new();
    for v in 1..vertices {
        let u = rng.gen_range(0..v);
        edges.push(MetricEdge { tail: u, head: v, length: length(rng) });
    }
    if vertices > 1 {
        for _ in 0..extra {
            let a = rng.gen_range(0..vertices);
            let mut b = rng.gen_range(0..vertices - 1);
            if b >= a {
                b += 1;
            }
            edges.push(MetricEdge { tail: a, head: b, length: length(rng) });
        }
    }
    let legs = (0..legs).map(|_| rng.gen_range(0..vertices)).collect();
    MetricGraph::new(vertices, edges, legs).expect("valid graph")
}

/// Values `u` at 0 and `v` at `len` joined with integer slopes, through at
/// most one interior breakpoint.
fn two_slope_edge<R: Rng>(rng: &mut R, u: Rational, v: Rational, len: Rational) -> Vec<(Rational, Rational)> {
    let mean = (v - u) / len;
    let lo = mean.floor().to_integer() - rng.gen_range(0..=1);
    let hi = mean.ceil().to_integer() + rng.gen_range(0..=1);
    if lo == hi {
        return vec![(Rational::from_integer(0), u), (len, v)];
    }
    let (s1, s2) = if rng.gen_bool(0.5) { (hi, lo) } else { (lo, hi) };
    let (s1, s2) = (Rational::from_integer(s1), Rational::from_integer(s2));
    // u + s1 t + s2 (len - t) = v
    let t = (v - u - s2 * len) / (s1 - s2);
    let mut pts = vec![(Rational::from_integer(0), u)];
    if t > Rational::from_integer(0) && t < len {
        pts.push((t, u + s1 * t));
    }
    pts.push((len, v));
    pts
}

/// Which function carries the nonzero tail slope on a leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailCarrier {
    F,
    G,
    Neither,
}

fn random_leg<R: Rng>(rng: &mut R, start: Rational, tail: i64) -> LegFunction {
    let mut points = vec![(Rational::from_integer(0), start)];
    let mut at = Rational::from_integer(0);
    let mut value = start;
    for _ in 0..rng.gen_range(0..=2) {
        let step = q(rng.gen_range(1..=4), *[1i128, 2].choose(rng).unwrap());
        value += step * int(rng.gen_range(-2..=2));
        at += step;
        points.push((at, value));
    }
    LegFunction { points, tail_slope: tail }
}

/// Pair of random functions with integer slopes on `graph`. On each leg at
/// most one of them has a nonzero eventual slope, so every value at a leg
/// end that meets a nonzero order of the other function is finite.
pub fn random_function_pair<R: Rng>(rng: &mut R, graph: &MetricGraph) -> (PlFunction, PlFunction) {
    let carriers: Vec<TailCarrier> = graph
        .legs()
        .iter()
        .map(|_| *[TailCarrier::F, TailCarrier::G, TailCarrier::Neither].choose(rng).unwrap())
        .collect();
    let f = random_function(rng, graph, &carriers, TailCarrier::F);
    let g = random_function(rng, graph, &carriers, TailCarrier::G);
    (f, g)
}

/// Random function whose tail slope is nonzero only on legs marked `me`.
pub fn random_function<R: Rng>(
    rng: &mut R,
    graph: &MetricGraph,
    carriers: &[TailCarrier],
    me: TailCarrier,
) -> PlFunction {
    let values: Vec<Rational> = (0..graph.vertex_count()).map(|_| small_rational(rng, 4)).collect();
    let edges = graph.edges().iter().map(|e| two_slope_edge(rng, values[e.tail], values[e.head], e.length)).collect();
    let legs = graph
        .legs()
        .iter()
        .zip(carriers)
        .map(|(&v, &c)| {
            let tail = if c == me { *[-2, -1, 1, 2].choose(rng).unwrap() } else { 0 };
            random_leg(rng, values[v], tail)
        })
        .collect();
    PlFunction::with_isolated_values(graph, edges, legs, &values.iter().copied().enumerate().collect::<Vec<_>>())
        .expect("consistent vertex values")
}

/// Random triple with a connected graph of up to four vertices.
pub fn random_triple<R: Rng>(rng: &mut R) -> Triple {
    let n = rng.gen_range(1..=4);
    let extra = if n > 1 { rng.gen_range(0..=2) } else { 0 };
    let legs = rng.gen_range(1..=3);
    let graph = random_metric_graph(rng, n, extra, legs);
    let (f, g) = random_function_pair(rng, &graph);
    Triple { graph, f, g }
}

/// Random point with small rational coordinates.
pub fn random_point<R: Rng>(rng: &mut R, dim: usize) -> Point {
    (0..dim).map(|_| small_rational(rng, 5)).collect()
}
