//! Transversal and stable intersection of plane curves, and the connected
//! components of their set-theoretic intersection.
//!
//! The stable intersection translates the first curve by `eps * v` for a
//! symbolic positive infinitesimal `eps`. Crossing parameters are affine in
//! `eps`, so they are computed exactly as pairs `re + inf * eps` and every
//! crossing has a finite limit as `eps -> 0`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::curve::{EmbeddedCurve, Piece};
use crate::error::{Result, TropError};
use crate::pl::UnionFind;
use crate::scalar::{along, det2, dot, fmt_point, point_of, sub, LatticeVector, Point, Rational};
use crate::subdivision::{mixed_area, LatticePolygon};

/// Finite formal sum of points with nonzero integer multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    entries: BTreeMap<Point, i64>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `m` at `p`, dropping the entry if it cancels.
    pub fn add(&mut self, p: Point, m: i64) {
        let e = self.entries.entry(p.clone()).or_insert(0);
        *e += m;
        if *e == 0 {
            self.entries.remove(&p);
        }
    }

    pub fn degree(&self) -> i64 {
        self.entries.values().sum()
    }

    pub fn multiplicity(&self, p: &[Rational]) -> i64 {
        self.entries.get(p).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, i64)> {
        self.entries.iter().map(|(p, &m)| (p, m))
    }
}

impl FromIterator<(Point, i64)> for Divisor {
    fn from_iter<I: IntoIterator<Item = (Point, i64)>>(iter: I) -> Self {
        let mut d = Divisor::new();
        for (p, m) in iter {
            d.add(p, m);
        }
        d
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", fmt_point(p), m)?;
        }
        write!(f, "}}")
    }
}

fn check_plane(c: &EmbeddedCurve) -> Result<()> {
    if c.dim() != 2 {
        return Err(TropError::DimensionMismatch { expected: 2, found: c.dim() });
    }
    Ok(())
}

fn dir_point(p: &Piece) -> Point {
    p.direction.as_point()
}

fn in_range(s: Rational, len: Option<Rational>) -> bool {
    s >= Rational::zero() && len.map_or(true, |l| s <= l)
}

fn in_open_range(s: Rational, len: Option<Rational>) -> bool {
    s > Rational::zero() && len.map_or(true, |l| s < l)
}

/// Transversal intersection divisor. Fails if two pieces overlap or if an
/// intersection point is a vertex of either curve.
pub fn transversal_intersection(c1: &EmbeddedCurve, c2: &EmbeddedCurve) -> Result<Divisor> {
    check_plane(c1)?;
    check_plane(c2)?;
    let mut out = Divisor::new();
    for a in c1.pieces() {
        for b in c2.pieces() {
            let u = dir_point(&a);
            let w = dir_point(&b);
            let d = sub(&b.start, &a.start);
            let den = det2(&u, &w);
            if den.is_zero() {
                if det2(&d, &u).is_zero() && shape_meet(&piece_shape(&a), &piece_shape(&b)) {
                    return Err(TropError::NotTransversal(format!("pieces {:?} and {:?} overlap", a.part, b.part)));
                }
                continue;
            }
            let s = det2(&d, &w) / den;
            let t = -det2(&u, &d) / den;
            if !in_range(s, a.length) || !in_range(t, b.length) {
                continue;
            }
            let p = a.point_at(s);
            if !in_open_range(s, a.length) || !in_open_range(t, b.length) {
                return Err(TropError::NotTransversal(format!("intersection at vertex {}", fmt_point(&p))));
            }
            out.add(p, (a.weight * b.weight) as i64 * den.abs().to_integer() as i64);
        }
    }
    Ok(out)
}

/// Element `re + inf * eps` of `Q + Q eps`, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Eps {
    re: Rational,
    inf: Rational,
}

impl Eps {
    fn real(re: Rational) -> Self {
        Eps { re, inf: Rational::zero() }
    }

    fn sign(self) -> Ordering {
        self.cmp(&Eps::real(Rational::zero()))
    }
}

/// Stable intersection with the bookkeeping of how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableIntersection {
    pub divisor: Divisor,
    /// Translation direction `v = (1, w)` applied to the first curve.
    pub direction: [i64; 2],
    /// Mixed area of the Newton polygons read off the legs, minus the
    /// degree of `divisor`: intersection number not realized by finite
    /// points. Zero for balanced curves in the plane, where every crossing
    /// of the translated curves has a finite limit.
    pub escaping: i64,
}

fn primes() -> impl Iterator<Item = i64> {
    (2i64..).filter(|n| (2..).take_while(|k| k * k <= *n).all(|k| n % k != 0))
}

/// Stable intersection divisor of two plane curves.
pub fn stable_intersection(c1: &EmbeddedCurve, c2: &EmbeddedCurve) -> Result<Divisor> {
    Ok(stable_intersection_detailed(c1, c2)?.divisor)
}

/// Stable intersection with the chosen direction and the escaping tally.
pub fn stable_intersection_detailed(c1: &EmbeddedCurve, c2: &EmbeddedCurve) -> Result<StableIntersection> {
    check_plane(c1)?;
    check_plane(c2)?;
    let p1 = c1.pieces();
    let p2 = c2.pieces();
    for w in primes() {
        let v = [1, w];
        if let Some(divisor) = perturbed_divisor(&p1, &p2, v) {
            let expected = mixed_area(&leg_polygon(c1), &leg_polygon(c2));
            let escaping = if c1.check_balancing().is_ok() && c2.check_balancing().is_ok() {
                expected.to_integer() as i64 - divisor.degree()
            } else {
                0
            };
            return Ok(StableIntersection { divisor, direction: v, escaping });
        }
    }
    unreachable!("some prime direction is generic")
}

/// Transversal intersection of `c1 + eps v` and `c2` mapped to `eps -> 0`;
/// `None` if the translation is not generic.
fn perturbed_divisor(p1: &[Piece], p2: &[Piece], v: [i64; 2]) -> Option<Divisor> {
    let vr = point_of(&v);
    if p1.iter().chain(p2).any(|p| det2(&dir_point(p), &vr).is_zero()) {
        return None;
    }
    let mut out = Divisor::new();
    for a in p1 {
        for b in p2 {
            let u = dir_point(a);
            let w = dir_point(b);
            let den = det2(&u, &w);
            // d = b.start - a.start - eps v
            let d0 = sub(&b.start, &a.start);
            if den.is_zero() {
                // Translated parallel pieces lie on distinct lines.
                continue;
            }
            let s = Eps { re: det2(&d0, &w) / den, inf: -det2(&vr, &w) / den };
            let t = Eps { re: -det2(&u, &d0) / den, inf: det2(&u, &vr) / den };
            let inside = |x: Eps, len: Option<Rational>| -> Option<bool> {
                match x.sign() {
                    Ordering::Less => return Some(false),
                    Ordering::Equal => return None,
                    Ordering::Greater => {}
                }
                match len.map(|l| x.cmp(&Eps::real(l))) {
                    Some(Ordering::Greater) => Some(false),
                    Some(Ordering::Equal) => None,
                    _ => Some(true),
                }
            };
            match (inside(s, a.length)?, inside(t, b.length)?) {
                (true, true) => {
                    let m = (a.weight * b.weight) as i64 * den.abs().to_integer() as i64;
                    out.add(a.point_at(s.re), m);
                }
                _ => continue,
            }
        }
    }
    Some(out)
}

/// Newton polygon (up to translation) whose outward edge normals are the
/// leg directions, each edge of lattice length equal to the leg weight.
pub fn leg_polygon(c: &EmbeddedCurve) -> LatticePolygon {
    let mut edges: Vec<[i64; 2]> = c
        .legs()
        .iter()
        .map(|l| {
            let u = l.direction.coords();
            let m = l.weight as i64;
            [-u[1] * m, u[0] * m]
        })
        .collect();
    edges.sort_by(|a, b| angle_cmp(*a, *b));
    let mut pts = vec![[0i64, 0]];
    let mut cur = [0i64, 0];
    for e in edges {
        cur = [cur[0] + e[0], cur[1] + e[1]];
        pts.push(cur);
    }
    LatticePolygon::hull(&pts)
}

fn angle_cmp(a: [i64; 2], b: [i64; 2]) -> Ordering {
    let half = |p: [i64; 2]| if p[1] > 0 || (p[1] == 0 && p[0] > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&(a[0] * b[1] - a[1] * b[0])))
}

/// Connected piece of an intersection of two pieces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    Point(Point),
    Segment(Point, Point),
    Ray(Point, LatticeVector),
}

impl Shape {
    /// `(start, direction, length)`; a point has no direction.
    fn parts(&self) -> (Point, Option<Point>, Option<Rational>) {
        match self {
            Shape::Point(p) => (p.clone(), None, Some(Rational::zero())),
            Shape::Segment(a, b) => {
                let d = sub(b, a);
                let (dir, len) = crate::scalar::primitive_of_rational(&d).expect("nondegenerate segment");
                (a.clone(), Some(dir.as_point()), Some(len))
            }
            Shape::Ray(a, d) => (a.clone(), Some(d.as_point()), None),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Shape::Ray(..))
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        let (start, dir, len) = self.parts();
        match dir {
            None => start == p,
            Some(d) => param_on(&start, &d, p).is_some_and(|s| in_range(s, len)),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Point(p) => write!(f, "{}", fmt_point(p)),
            Shape::Segment(a, b) => write!(f, "[{}, {}]", fmt_point(a), fmt_point(b)),
            Shape::Ray(a, d) => write!(f, "{} + R>=0 {}", fmt_point(a), d),
        }
    }
}

/// Parameter `s` with `p = start + s d`, if `p` is on the line.
fn param_on(start: &[Rational], d: &[Rational], p: &[Rational]) -> Option<Rational> {
    let delta = sub(p, start);
    if !det2(&delta, d).is_zero() {
        return None;
    }
    Some(dot(&delta, d) / dot(d, d))
}

fn piece_shape(p: &Piece) -> Shape {
    match p.end() {
        Some(end) => Shape::Segment(p.start.clone(), end),
        None => Shape::Ray(p.start.clone(), p.direction.clone()),
    }
}

/// Intersection of two one-dimensional convex shapes, or of a shape with a
/// point.
fn shape_intersection(a: &Shape, b: &Shape) -> Option<Shape> {
    let (pa, da, la) = a.parts();
    let (pb, db, lb) = b.parts();
    let (da, db) = match (da, db) {
        (None, _) => return b.contains(&pa).then_some(Shape::Point(pa)),
        (_, None) => return a.contains(&pb).then_some(Shape::Point(pb)),
        (Some(x), Some(y)) => (x, y),
    };
    let den = det2(&da, &db);
    if !den.is_zero() {
        let d = sub(&pb, &pa);
        let s = det2(&d, &db) / den;
        let t = -det2(&da, &d) / den;
        return (in_range(s, la) && in_range(t, lb)).then(|| Shape::Point(along_r(&pa, &da, s)));
    }
    // Parallel primitive directions are equal up to sign, so lengths share
    // the parameter of `a`.
    let sb = param_on(&pa, &da, &pb)?;
    let same = dot(&da, &db) > Rational::zero();
    let (lo_a, hi_a) = (Some(Rational::zero()), la);
    let (lo_b, hi_b) = match (lb, same) {
        (Some(l), true) => (Some(sb), Some(sb + l)),
        (Some(l), false) => (Some(sb - l), Some(sb)),
        (None, true) => (Some(sb), None),
        (None, false) => (None, Some(sb)),
    };
    let lo = match (lo_a, lo_b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) | (None, x) => x,
    };
    let hi = match (hi_a, hi_b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    };
    let lo = lo.expect("piece parameters start at 0");
    match hi {
        Some(h) if h < lo => None,
        Some(h) if h == lo => Some(Shape::Point(along_r(&pa, &da, lo))),
        Some(h) => Some(Shape::Segment(along_r(&pa, &da, lo), along_r(&pa, &da, h))),
        None => {
            let (dir, _) = crate::scalar::primitive_of_rational(&da).expect("nonzero");
            Some(Shape::Ray(along_r(&pa, &da, lo), dir))
        }
    }
}

fn along_r(base: &[Rational], d: &[Rational], s: Rational) -> Point {
    base.iter().zip(d).map(|(b, x)| b + x * s).collect()
}

fn shape_meet(a: &Shape, b: &Shape) -> bool {
    shape_intersection(a, b).is_some()
}

/// Connected component of the set-theoretic intersection of two curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionComponent {
    /// Sorted, duplicate-free pieces whose union is the component.
    pub shapes: Vec<Shape>,
}

impl IntersectionComponent {
    pub fn is_compact(&self) -> bool {
        self.shapes.iter().all(Shape::is_bounded)
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.shapes.iter().any(|s| s.contains(p))
    }
}

impl fmt::Display for IntersectionComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.shapes.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" u "))
    }
}

/// Connected components of `c1 ∩ c2`, sorted by their first shape.
pub fn intersection_components(c1: &EmbeddedCurve, c2: &EmbeddedCurve) -> Result<Vec<IntersectionComponent>> {
    check_plane(c1)?;
    check_plane(c2)?;
    let mut shapes: Vec<Shape> = Vec::new();
    for a in c1.pieces() {
        for b in c2.pieces() {
            if let Some(s) = shape_intersection(&piece_shape(&a), &piece_shape(&b)) {
                shapes.push(s);
            }
        }
    }
    shapes.sort();
    shapes.dedup();
    let mut uf = UnionFind::new(shapes.len());
    for i in 0..shapes.len() {
        for j in i + 1..shapes.len() {
            if shape_meet(&shapes[i], &shapes[j]) {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Shape>> = BTreeMap::new();
    for (i, s) in shapes.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(s.clone());
    }
    let mut out: Vec<IntersectionComponent> =
        groups.into_values().map(|shapes| IntersectionComponent { shapes }).collect();
    out.sort_by(|a, b| a.shapes.cmp(&b.shapes));
    Ok(out)
}

/// The component of `c1 ∩ c2` containing `p`.
pub fn component_containing(c1: &EmbeddedCurve, c2: &EmbeddedCurve, p: &[Rational]) -> Result<IntersectionComponent> {
    intersection_components(c1, c2)?.into_iter().find(|x| x.contains(p)).ok_or(TropError::NotAComponent)
}

/// Sum of the stable multiplicities at points of the component `x`.
pub fn local_stable_multiplicity(c1: &EmbeddedCurve, c2: &EmbeddedCurve, x: &IntersectionComponent) -> Result<u64> {
    if !intersection_components(c1, c2)?.contains(x) {
        return Err(TropError::NotAComponent);
    }
    let d = stable_intersection(c1, c2)?;
    Ok(d.iter().filter(|(p, _)| x.contains(p)).map(|(_, m)| m as u64).sum())
}

/// Stable divisor grouped by component: `(component, multiplicity)`.
pub fn stable_by_component(c1: &EmbeddedCurve, c2: &EmbeddedCurve) -> Result<Vec<(IntersectionComponent, u64)>> {
    let d = stable_intersection(c1, c2)?;
    Ok(intersection_components(c1, c2)?
        .into_iter()
        .map(|x| {
            let m = d.iter().filter(|(p, _)| x.contains(p)).map(|(_, m)| m as u64).sum();
            (x, m)
        })
        .collect())
}

/// Transversal intersection of `c1` translated by `t v` with `c2`, for a
/// concrete rational `t`.
pub fn translated_intersection(c1: &EmbeddedCurve, c2: &EmbeddedCurve, v: [i64; 2], t: Rational) -> Result<Divisor> {
    let shift = along(&[Rational::zero(), Rational::zero()], &v, t);
    transversal_intersection(&c1.translated(&shift), c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::curve_from_polynomial;
    use crate::fixtures;
    use crate::poly::TropicalPolynomial;
    use crate::scalar::{int, point_of, q};

    fn curve(terms: &[(&[i64], Rational)]) -> EmbeddedCurve {
        curve_from_polynomial(&TropicalPolynomial::from_terms(2, terms).unwrap()).unwrap()
    }

    fn line_at(c: [i64; 2]) -> EmbeddedCurve {
        // max(0, X - a, Y - b) has its vertex at (a, b).
        curve(&[(&[0, 0], int(0)), (&[1, 0], int(-c[0])), (&[0, 1], int(-c[1]))])
    }

    #[test]
    fn two_generic_lines_cross_once() {
        let d = transversal_intersection(&line_at([0, 0]), &line_at([1, -1])).unwrap();
        assert_eq!(d.degree(), 1);
        let s = stable_intersection(&line_at([0, 0]), &line_at([1, -1])).unwrap();
        assert_eq!(s, d);
    }

    #[test]
    fn horizontal_meets_vertical() {
        let h = fixtures::horizontal_line_curve(int(0));
        let v = curve(&[(&[0, 0], int(0)), (&[1, 0], int(-5))]);
        let d = transversal_intersection(&h, &v);
        // The synthetic vertex of X = 5 sits at (5, 0), on the other line.
        assert!(matches!(d, Err(TropError::NotTransversal(_))));
        let s = stable_intersection(&h, &v).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(&point_of(&[5, 0]), 1)]);
    }

    #[test]
    fn weight_scales_multiplicity() {
        // max(0, 3Y) is Y = 0 with weight 3.
        let h = curve(&[(&[0, 0], int(0)), (&[0, 3], int(0))]);
        let v = curve(&[(&[0, 0], int(0)), (&[1, 0], int(-5))]).translated(&[int(0), int(1)]);
        let d = transversal_intersection(&h, &v).unwrap();
        assert_eq!(d.multiplicity(&point_of(&[5, 0])), 3);
    }

    #[test]
    fn line_with_itself_concentrates_at_vertex() {
        let l = line_at([0, 0]);
        let s = stable_intersection(&l, &l).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(&point_of(&[0, 0]), 1)]);
        assert!(matches!(transversal_intersection(&l, &l), Err(TropError::NotTransversal(_))));
    }

    #[test]
    fn overlap_with_line_gives_four_points() {
        let line = fixtures::horizontal_line_curve(int(0));
        let c = curve_from_polynomial(&fixtures::four_point_overlap()).unwrap();
        let s = stable_intersection(&line, &c).unwrap();
        let expected: Divisor = (0..4).map(|x| (point_of(&[x, 0]), 1)).collect();
        assert_eq!(s, expected);
        let comps = intersection_components(&line, &c).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(local_stable_multiplicity(&line, &c, &comps[0]).unwrap(), 4);
    }

    #[test]
    fn quartic_meets_line_in_two_components() {
        let line = fixtures::horizontal_line_curve(int(1));
        let c = curve_from_polynomial(&fixtures::quartic_with_triple_root()).unwrap();
        let s = stable_intersection(&line, &c).unwrap();
        assert_eq!(s.multiplicity(&[int(-5), int(1)]), 1);
        assert_eq!(s.multiplicity(&[int(2), int(1)]), 3);
        assert_eq!(s.degree(), 4);
        let grouped = stable_by_component(&line, &c).unwrap();
        let mults: Vec<u64> = grouped.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults.iter().sum::<u64>(), 4);
        let seg = component_containing(&line, &c, &[int(2), int(1)]).unwrap();
        assert!(seg.is_compact());
        assert_eq!(
            local_stable_multiplicity(&line, &c, &seg).unwrap(),
            grouped.iter().find(|(x, _)| *x == seg).unwrap().1
        );
    }

    #[test]
    fn disjoint_curves_have_no_component() {
        let a = fixtures::horizontal_line_curve(int(0));
        let b = fixtures::horizontal_line_curve(int(1));
        assert!(intersection_components(&a, &b).unwrap().is_empty());
        let fake = IntersectionComponent { shapes: vec![Shape::Point(point_of(&[0, 0]))] };
        assert_eq!(local_stable_multiplicity(&a, &b, &fake), Err(TropError::NotAComponent));
        assert!(stable_intersection(&a, &b).unwrap().is_empty());
    }

    #[test]
    fn symmetric_and_matches_mixed_area() {
        let a = curve_from_polynomial(&fixtures::three_vertex_chain()).unwrap();
        let b = line_at([1, 0]);
        let ab = stable_intersection_detailed(&a, &b).unwrap();
        let ba = stable_intersection(&b, &a).unwrap();
        assert_eq!(ab.divisor, ba);
        assert_eq!(ab.escaping, 0);
        assert_eq!(ab.divisor.degree(), mixed_area(&leg_polygon(&a), &leg_polygon(&b)).to_integer() as i64);
    }

    #[test]
    fn leg_polygon_of_line_is_unit_triangle() {
        let p = leg_polygon(&line_at([3, 4]));
        assert_eq!(p.area(), q(1, 2));
    }

    #[test]
    fn small_translation_limits_agree() {
        let line = fixtures::horizontal_line_curve(int(0));
        let c = curve_from_polynomial(&fixtures::four_point_overlap()).unwrap();
        let t = q(1, 1000);
        let d = translated_intersection(&line, &c, [1, 7], t).unwrap();
        assert_eq!(d.degree(), 4);
    }
}
