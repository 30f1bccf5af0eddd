//! Independent oracles shared by the property suites and the acceptance
//! runner. None of them calls the library routine it is used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use tropmod::curve::Piece;
use tropmod::scalar::{int, q};
use tropmod::{EmbeddedCurve, Point, Rational, TropicalPolynomial};

/// Roots of a univariate polynomial from slope jumps: at a candidate `x`
/// the envelope's right slope is the largest maximizing exponent and the
/// left slope the smallest.
pub fn roots_by_slope_jump(f: &TropicalPolynomial) -> Vec<(Rational, u64)> {
    let terms: Vec<(i64, Rational)> = f.terms().map(|(e, &c)| (e[0], c)).collect();
    let mut candidates: Vec<Rational> = Vec::new();
    for (i, &(e1, c1)) in terms.iter().enumerate() {
        for &(e2, c2) in &terms[i + 1..] {
            candidates.push((c1 - c2) / int(e2 - e1));
        }
    }
    candidates.sort();
    candidates.dedup();
    let mut out = Vec::new();
    for x in candidates {
        let values: Vec<(i64, Rational)> = terms.iter().map(|&(e, c)| (e, c + int(e) * x)).collect();
        let top = values.iter().map(|v| v.1).max().unwrap();
        let arg: Vec<i64> = values.iter().filter(|v| v.1 == top).map(|v| v.0).collect();
        let jump = arg.iter().max().unwrap() - arg.iter().min().unwrap();
        if jump > 0 {
            out.push((x, jump as u64));
        }
    }
    out
}

/// Divisor as a sorted map, accumulating repeated points.
pub type PointDivisor = BTreeMap<Point, i64>;

fn cross(u: &[Rational], v: &[Rational]) -> Rational {
    u[0] * v[1] - u[1] * v[0]
}

fn dir_of(p: &Piece) -> Point {
    p.direction.coords().iter().map(|&c| int(c)).collect()
}

fn inside(s: Rational, len: Option<Rational>) -> Option<bool> {
    // Some(true): strictly inside; Some(false): outside; None: at an end.
    if s.is_zero() || len == Some(s) {
        return None;
    }
    Some(s > Rational::zero() && len.map_or(true, |l| s < l))
}

/// Crossings of two plane curves piece by piece, assuming general
/// position. Returns `None` if some crossing hits an end of a piece or two
/// pieces overlap.
pub type Crossing = ((usize, usize), Point, i64);

pub fn crossings(c1: &EmbeddedCurve, c2: &EmbeddedCurve) -> Option<Vec<Crossing>> {
    let p1 = c1.pieces();
    let p2 = c2.pieces();
    let mut out = Vec::new();
    for (i, a) in p1.iter().enumerate() {
        for (j, b) in p2.iter().enumerate() {
            let (u, w) = (dir_of(a), dir_of(b));
            let d: Point = vec![b.start[0] - a.start[0], b.start[1] - a.start[1]];
            let den = cross(&u, &w);
            if den.is_zero() {
                if cross(&d, &u).is_zero() {
                    // Collinear: overlap unless the parameter ranges are disjoint.
                    let t = |p: &Point| (p[0] * u[0] + p[1] * u[1]) / (u[0] * u[0] + u[1] * u[1]);
                    let range = |pc: &Piece| {
                        let s0 = t(&pc.start);
                        let s1 = pc.end().map(|e| t(&e));
                        match s1 {
                            Some(s1) => (Some(s0.min(s1)), Some(s0.max(s1))),
                            None => {
                                let forward = t(&dir_of(pc)) > Rational::zero();
                                if forward {
                                    (Some(s0), None)
                                } else {
                                    (None, Some(s0))
                                }
                            }
                        }
                    };
                    let (alo, ahi) = range(a);
                    let (blo, bhi) = range(b);
                    let lo = match (alo, blo) {
                        (Some(x), Some(y)) => Some(x.max(y)),
                        (x, None) => x,
                        (None, y) => y,
                    };
                    let hi = match (ahi, bhi) {
                        (Some(x), Some(y)) => Some(x.min(y)),
                        (x, None) => x,
                        (None, y) => y,
                    };
                    if lo.zip(hi).map_or(true, |(l, h)| l <= h) {
                        return None;
                    }
                }
                continue;
            }
            let s = cross(&d, &w) / den;
            let t = cross(&d, &u) / den;
            match (inside(s, a.length), inside(t, b.length)) {
                (Some(true), Some(true)) => {
                    let m = (a.weight * b.weight) as i64 * den.abs().to_integer() as i64;
                    out.push(((i, j), a.point_at(s), m));
                }
                (Some(false), _) | (_, Some(false)) => {}
                _ => return None,
            }
        }
    }
    Some(out)
}

pub fn as_divisor(points: &[Crossing]) -> PointDivisor {
    let mut d = PointDivisor::new();
    for (_, p, m) in points {
        *d.entry(p.clone()).or_insert(0) += m;
    }
    d
}

/// Limit of the crossings of `c1 + t v` and `c2` as `t -> 0+`, from two
/// small perturbations. Each crossing moves affinely in `t` while its piece
/// pair is fixed, so matched crossings extrapolate exactly to `t = 0`.
pub fn perturbation_limit(c1: &EmbeddedCurve, c2: &EmbeddedCurve, v: [i64; 2]) -> Option<PointDivisor> {
    for n in [1000i128, 1009, 1013, 2003, 4001, 8009] {
        let t1 = q(1, n);
        let t2 = q(1, 2 * n);
        let shift = |t: Rational| vec![t * int(v[0]), t * int(v[1])];
        let (Some(x1), Some(x2)) =
            (crossings(&c1.translated(&shift(t1)), c2), crossings(&c1.translated(&shift(t2)), c2))
        else {
            continue;
        };
        let k1: BTreeMap<(usize, usize), (Point, i64)> = x1.into_iter().map(|(k, p, m)| (k, (p, m))).collect();
        let k2: BTreeMap<(usize, usize), (Point, i64)> = x2.into_iter().map(|(k, p, m)| (k, (p, m))).collect();
        if k1.keys().ne(k2.keys()) {
            continue;
        }
        let mut d = PointDivisor::new();
        for (k, (a, m)) in &k1 {
            let b = &k2[k].0;
            // a = c + t1 w, b = c + t2 w with t1 = 2 t2.
            let c: Point = a.iter().zip(b).map(|(x, y)| int(2) * *y - *x).collect();
            *d.entry(c).or_insert(0) += m;
        }
        return Some(d);
    }
    None
}

/// Stable intersection with the horizontal line `Y = c` read from the
/// restriction of `f` to that line.
pub fn horizontal_restriction_divisor(f: &TropicalPolynomial, c: Rational) -> PointDivisor {
    let mut by_exp: BTreeMap<i64, Rational> = BTreeMap::new();
    for (e, &a) in f.terms() {
        let v = a + int(e[1]) * c;
        by_exp.entry(e[0]).and_modify(|x| *x = (*x).max(v)).or_insert(v);
    }
    let g = TropicalPolynomial::univariate(&by_exp.into_iter().collect::<Vec<_>>()).unwrap();
    roots_by_slope_jump(&g).into_iter().map(|(x, m)| (vec![x, c], m as i64)).collect()
}

/// Same for the vertical line `X = c`.
pub fn vertical_restriction_divisor(f: &TropicalPolynomial, c: Rational) -> PointDivisor {
    let mut by_exp: BTreeMap<i64, Rational> = BTreeMap::new();
    for (e, &a) in f.terms() {
        let v = a + int(e[0]) * c;
        by_exp.entry(e[1]).and_modify(|x| *x = (*x).max(v)).or_insert(v);
    }
    let g = TropicalPolynomial::univariate(&by_exp.into_iter().collect::<Vec<_>>()).unwrap();
    roots_by_slope_jump(&g).into_iter().map(|(y, m)| (vec![c, y], m as i64)).collect()
}

/// Whether a function takes one value everywhere, read from its stored
/// breakpoints and tail slopes.
pub fn is_constant(graph: &tropmod::MetricGraph, f: &tropmod::PlFunction) -> bool {
    let c = f.vertex_value(0);
    (0..graph.vertex_count()).all(|v| f.vertex_value(v) == c)
        && (0..graph.edges().len()).all(|e| f.edge_points(e).iter().all(|p| p.1 == c))
        && (0..graph.legs().len()).all(|l| {
            let lf = f.leg_function(l);
            lf.tail_slope == 0 && lf.points.iter().all(|p| p.1 == c)
        })
}

/// Whether sample points along every piece of `c` lie in the corner locus
/// of `f`, evaluating the monomials directly.
pub fn lies_in_corner_locus(c: &EmbeddedCurve, f: &TropicalPolynomial) -> bool {
    let tied = |x: &Point| {
        let values: Vec<Rational> =
            f.terms().map(|(e, &a)| e.iter().zip(x).fold(a, |acc, (&k, &xi)| acc + int(k) * xi)).collect();
        let top = *values.iter().max().unwrap();
        values.iter().filter(|&&v| v == top).count() >= 2
    };
    c.pieces().iter().all(|p| {
        let samples = [q(0, 1), q(1, 3), q(1, 2), q(1, 1), q(2, 1), q(7, 1)];
        samples.iter().all(|&s| {
            let s = p.length.map_or(s, |l| s.min(l));
            tied(&p.point_at(s))
        })
    })
}

pub fn divisor_map(d: &tropmod::intersect::Divisor) -> PointDivisor {
    d.iter().map(|(p, m)| (p.clone(), m)).collect()
}

/// Sum over legs of `m * (B - A) x v`, spelled out coordinatewise.
pub fn leg_cross_total(c: &EmbeddedCurve, a: &[Rational]) -> Vec<Rational> {
    let n = c.dim();
    let mut total = vec![Rational::zero(); n * (n - 1) / 2];
    for l in c.legs_of() {
        let w: Point = l.base.iter().zip(a).map(|(x, y)| *x - *y).collect();
        let v: Point = l.direction.coords().iter().map(|&x| int(x)).collect();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                total[k] += int(l.weight as i64) * (w[i] * v[j] - w[j] * v[i]);
                k += 1;
            }
        }
    }
    total
}
