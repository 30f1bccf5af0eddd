//! Tropical momentum of the legs of a curve about a reference point, and
//! recovery of one unknown leg from the vanishing of the total.
//!
//! Conventions: in the plane a leg with base `B`, primitive direction `v`
//! and weight `m` contributes `m * det(v, B - A)`; in space
//! `m * v x (B - A)`; in general the minors of the `2 x n` matrix with rows
//! `B - A` and `v`, over column pairs `(i, j)`, `i < j`, in lexicographic
//! order. Hence the general form is the negative of the planar one, and in
//! space it lists `(-c3, c2, -c1)` for the cross product `(c1, c2, c3)`.

use num_traits::{One, Zero};

use crate::curve::EmbeddedCurve;
use crate::error::{Result, TropError};
use crate::scalar::{add, cross3, det2, generalized_cross, int, sub, Point, Rational};

/// Momenta of the legs of a curve about `reference`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentumReport {
    pub reference: Point,
    /// `(leg id, contribution)`.
    pub per_leg: Vec<(usize, Vec<Rational>)>,
    pub total: Vec<Rational>,
    /// Whether the curve passed the balancing check; totals of unbalanced
    /// curves carry no meaning.
    pub balanced: bool,
}

impl MomentumReport {
    pub fn is_zero(&self) -> bool {
        self.total.iter().all(Zero::is_zero)
    }
}

fn report(
    c: &EmbeddedCurve,
    a: &[Rational],
    width: usize,
    contribution: impl Fn(&[Rational], &[Rational]) -> Result<Vec<Rational>>,
) -> Result<MomentumReport> {
    if a.len() != c.dim() {
        return Err(TropError::DimensionMismatch { expected: c.dim(), found: a.len() });
    }
    let mut total = vec![Rational::zero(); width];
    let mut per_leg = Vec::new();
    for leg in c.legs_of() {
        let rel = sub(&leg.base, a);
        let v = leg.direction.as_point();
        let m = int(leg.weight as i64);
        let x: Vec<Rational> = contribution(&v, &rel)?.into_iter().map(|t| t * m).collect();
        total = add(&total, &x);
        per_leg.push((leg.id, x));
    }
    Ok(MomentumReport { reference: a.to_vec(), per_leg, total, balanced: c.check_balancing().is_ok() })
}

fn require_dim(c: &EmbeddedCurve, n: usize) -> Result<()> {
    if c.dim() != n {
        return Err(TropError::DimensionMismatch { expected: n, found: c.dim() });
    }
    Ok(())
}

/// `sum m det(v, B - A)` over the legs of a plane curve.
pub fn momentum_2d(c: &EmbeddedCurve, a: &[Rational]) -> Result<MomentumReport> {
    require_dim(c, 2)?;
    report(c, a, 1, |v, w| Ok(vec![det2(v, w)]))
}

/// `sum m v x (B - A)` over the legs of a space curve.
pub fn momentum_3d(c: &EmbeddedCurve, a: &[Rational]) -> Result<MomentumReport> {
    require_dim(c, 3)?;
    report(c, a, 3, |v, w| Ok(cross3(v, w)))
}

/// `sum m minors([B - A; v])` over the legs of a curve in `Q^n`.
pub fn momentum_general(c: &EmbeddedCurve, a: &[Rational]) -> Result<MomentumReport> {
    let n = c.dim();
    if n < 2 {
        return Err(TropError::DimensionMismatch { expected: 2, found: n });
    }
    report(c, a, n * (n - 1) / 2, |v, w| generalized_cross(&[w.to_vec(), v.to_vec()]))
}

/// Momenta of the bounded edges, each taken from its tail in its direction.
/// They do not enter any total.
pub fn edge_momenta(c: &EmbeddedCurve, a: &[Rational]) -> Result<Vec<(usize, Vec<Rational>)>> {
    c.edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let rel = sub(&c.vertices()[e.tail], a);
            let m = int(e.weight as i64);
            let x = generalized_cross(&[rel, e.direction.as_point()])?;
            Ok((i, x.into_iter().map(|t| t * m).collect()))
        })
        .collect()
}

/// A leg of a partially known curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LegSlot {
    Known { base: Point, direction: Vec<i64>, weight: u64 },
    Unknown { direction: Vec<i64>, weight: u64 },
}

/// The legs of a curve with the listed ones marked unknown.
pub fn legs_with_unknown(c: &EmbeddedCurve, unknown: &[usize]) -> Vec<LegSlot> {
    c.legs_of()
        .into_iter()
        .map(|l| {
            let direction = l.direction.coords().to_vec();
            if unknown.contains(&l.id) {
                LegSlot::Unknown { direction, weight: l.weight }
            } else {
                LegSlot::Known { base: l.base, direction, weight: l.weight }
            }
        })
        .collect()
}

/// Affine set `particular + span(free)` of admissible base points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseConstraint {
    pub particular: Point,
    pub free: Vec<Point>,
}

impl BaseConstraint {
    pub fn contains(&self, p: &[Rational]) -> bool {
        // p - particular must lie in the span of `free`.
        let d = sub(p, &self.particular);
        let rows: Vec<Vec<Rational>> = (0..d.len()).map(|i| self.free.iter().map(|f| f[i]).collect()).collect();
        solve_linear(&rows, &d).is_some()
    }
}

/// Base points `B` of the unknown leg for which the total momentum about
/// `a` vanishes.
pub fn solve_missing_leg(legs: &[LegSlot], a: &[Rational]) -> Result<BaseConstraint> {
    let n = a.len();
    if n < 2 {
        return Err(TropError::DimensionMismatch { expected: 2, found: n });
    }
    let unknown: Vec<(&Vec<i64>, u64)> = legs
        .iter()
        .filter_map(|l| match l {
            LegSlot::Unknown { direction, weight } => Some((direction, *weight)),
            LegSlot::Known { .. } => None,
        })
        .collect();
    if unknown.len() != 1 {
        return Err(TropError::UnknownLegCount(unknown.len()));
    }
    let (d, m) = unknown[0];
    if d.len() != n {
        return Err(TropError::DimensionMismatch { expected: n, found: d.len() });
    }
    let mut known = vec![Rational::zero(); n * (n - 1) / 2];
    for l in legs {
        if let LegSlot::Known { base, direction, weight } = l {
            if base.len() != n || direction.len() != n {
                return Err(TropError::DimensionMismatch { expected: n, found: base.len().max(direction.len()) });
            }
            let x = generalized_cross(&[sub(base, a), direction.iter().map(|&c| int(c)).collect()])?;
            known = add(&known, &x.into_iter().map(|t| t * int(*weight as i64)).collect::<Vec<_>>());
        }
    }
    // Minor (i, j) of [x; d] is x_i d_j - x_j d_i, linear in x = B - A.
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let m = int(m as i64);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let mut row = vec![Rational::zero(); n];
            row[i] = int(d[j]) * m;
            row[j] = -int(d[i]) * m;
            rows.push(row);
            rhs.push(-known[k]);
            k += 1;
        }
    }
    let (x, free) = solve_linear(&rows, &rhs).ok_or(TropError::Unbalanceable)?;
    Ok(BaseConstraint { particular: add(&x, a), free })
}

/// Solves `rows . x = rhs` exactly: a particular solution and a basis of
/// the kernel, or `None` if the system is inconsistent.
fn solve_linear(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<(Point, Vec<Point>)> {
    let cols = rows.first().map_or(0, |r| r.len());
    if cols == 0 {
        return rhs.iter().all(Zero::is_zero).then(|| (vec![], vec![]));
    }
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(*b);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Rational::one() / m[row][col];
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col];
                #[allow(clippy::needless_range_loop)]
                for c in 0..=cols {
                    let delta = factor * m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols];
    }
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free_cols
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[r][f];
            }
            v
        })
        .collect();
    Some((x, kernel))
}
