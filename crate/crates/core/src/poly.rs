//! Tropical Laurent polynomials `max_I (A_I + I.X)` in `n` variables.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Result, TropError};
use crate::scalar::{dot_int, int, trop_sum, Point, Rational, TropicalScalar, TropicalSum};

/// A finite max-plus sum of monomials with integer exponents.
///
/// Terms strictly below the upper envelope are kept: evaluation and root
/// extraction ignore them, but they matter for coefficient bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropicalPolynomial {
    dim: usize,
    terms: BTreeMap<Vec<i64>, Rational>,
}

/// One term discarded while combining like exponents in a pullback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenanceEntry {
    /// Exponent in the pulled-back polynomial.
    pub exponent: Vec<i64>,
    /// Exponent of the source term that lost.
    pub source: Vec<i64>,
    pub kept: Rational,
    pub discarded: Rational,
}

/// Affine map `S -> p + M.S` from `Q^k` to `Q^n`; `matrix` has `n` rows of
/// length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub offset: Point,
    pub matrix: Vec<Vec<i64>>,
}

impl AffineMap {
    pub fn new(offset: Point, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if matrix.len() != offset.len() {
            return Err(TropError::DimensionMismatch { expected: offset.len(), found: matrix.len() });
        }
        let k = matrix.first().map_or(0, Vec::len);
        if let Some(row) = matrix.iter().find(|r| r.len() != k) {
            return Err(TropError::DimensionMismatch { expected: k, found: row.len() });
        }
        Ok(AffineMap { offset, matrix })
    }

    /// The parametrized line `s -> base + s * dir`.
    pub fn line(base: Point, dir: &[i64]) -> Self {
        AffineMap { offset: base, matrix: dir.iter().map(|&d| vec![d]).collect() }
    }

    /// Restriction to the hyperplane `X_i = value`: the remaining variables
    /// keep their order.
    pub fn fix_coordinate(n: usize, i: usize, value: Rational) -> Self {
        let mut offset = vec![Rational::zero(); n];
        offset[i] = value;
        let matrix = (0..n).map(|r| (0..n).filter(|&c| c != i).map(|c| i64::from(r == c)).collect()).collect();
        AffineMap { offset, matrix }
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn target_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn apply(&self, s: &[Rational]) -> Point {
        self.offset.iter().zip(&self.matrix).map(|(p, row)| p + dot_int(row, s)).collect()
    }
}

impl TropicalPolynomial {
    /// Builds a polynomial; `-inf` coefficients are dropped, duplicate
    /// exponents rejected.
    pub fn new<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, TropicalScalar)>,
    {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != dim {
                return Err(TropError::DimensionMismatch { expected: dim, found: e.len() });
            }
            if map.contains_key(&e) {
                return Err(TropError::DuplicateExponent(e));
            }
            if let TropicalScalar::Finite(v) = c {
                map.insert(e, v);
            }
        }
        if map.is_empty() {
            return Err(TropError::EmptyPolynomial);
        }
        Ok(TropicalPolynomial { dim, terms: map })
    }

    /// Builds a polynomial from finite terms.
    pub fn from_terms(dim: usize, terms: &[(&[i64], Rational)]) -> Result<Self> {
        Self::new(dim, terms.iter().map(|(e, c)| (e.to_vec(), TropicalScalar::Finite(*c))))
    }

    /// Univariate polynomial from `(exponent, coefficient)` pairs.
    pub fn univariate(terms: &[(i64, Rational)]) -> Result<Self> {
        Self::new(1, terms.iter().map(|&(e, c)| (vec![e], TropicalScalar::Finite(c))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[i64]) -> TropicalScalar {
        self.terms.get(e).map_or(TropicalScalar::NegInfinity, |&c| TropicalScalar::Finite(c))
    }

    /// Replaces (or removes, for `-inf`) the coefficient of one exponent.
    pub fn with_coefficient(&self, e: &[i64], c: TropicalScalar) -> Result<Self> {
        if e.len() != self.dim {
            return Err(TropError::DimensionMismatch { expected: self.dim, found: e.len() });
        }
        let mut terms = self.terms.clone();
        match c {
            TropicalScalar::Finite(v) => {
                terms.insert(e.to_vec(), v);
            }
            TropicalScalar::NegInfinity => {
                terms.remove(e);
            }
        }
        if terms.is_empty() {
            return Err(TropError::EmptyPolynomial);
        }
        Ok(TropicalPolynomial { dim: self.dim, terms })
    }

    fn check_point(&self, x: &[Rational]) {
        assert_eq!(x.len(), self.dim, "point dimension does not match polynomial");
    }

    /// `max_I (A_I + I.x)`.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.check_point(x);
        self.terms.iter().map(|(e, c)| c + dot_int(e, x)).max().expect("polynomial has at least one term")
    }

    /// Multivalued value at `x`: a down-set exactly when the maximum is tied.
    pub fn eval_multivalued(&self, x: &[Rational]) -> TropicalSum {
        self.check_point(x);
        trop_sum(self.terms.iter().map(|(e, c)| TropicalScalar::Finite(c + dot_int(e, x))))
    }

    /// Whether `x` lies in the corner locus, i.e. `-inf` belongs to `f(x)`.
    pub fn is_zero_point(&self, x: &[Rational]) -> bool {
        self.eval_multivalued(x).contains_neg_infinity()
    }

    /// Exponents attaining the maximum at `x`.
    pub fn argmax_terms(&self, x: &[Rational]) -> Vec<Vec<i64>> {
        let top = self.eval(x);
        self.terms.iter().filter(|(e, c)| *c + dot_int(e, x) == top).map(|(e, _)| e.clone()).collect()
    }

    /// Pullback along an affine map; like exponents are combined by max.
    pub fn pullback_affine(&self, map: &AffineMap) -> Result<TropicalPolynomial> {
        Ok(self.pullback_with_provenance(map)?.0)
    }

    /// Pullback plus the log of coefficients lost when exponents collide.
    pub fn pullback_with_provenance(&self, map: &AffineMap) -> Result<(TropicalPolynomial, Vec<ProvenanceEntry>)> {
        if map.target_dim() != self.dim {
            return Err(TropError::DimensionMismatch { expected: self.dim, found: map.target_dim() });
        }
        let k = map.source_dim();
        let mut out: BTreeMap<Vec<i64>, (Rational, Vec<i64>)> = BTreeMap::new();
        let mut log = Vec::new();
        for (e, c) in &self.terms {
            let coeff = c + dot_int(e, &map.offset);
            let exp: Vec<i64> =
                (0..k).map(|col| e.iter().zip(&map.matrix).map(|(i, row)| i * row[col]).sum()).collect();
            match out.get_mut(&exp) {
                None => {
                    out.insert(exp, (coeff, e.clone()));
                }
                Some(slot) => {
                    let (kept, lost, lost_src) = if coeff > slot.0 {
                        let old = std::mem::replace(slot, (coeff, e.clone()));
                        (coeff, old.0, old.1)
                    } else {
                        (slot.0, coeff, e.clone())
                    };
                    log.push(ProvenanceEntry { exponent: exp, source: lost_src, kept, discarded: lost });
                }
            }
        }
        let poly = TropicalPolynomial { dim: k, terms: out.into_iter().map(|(e, (c, _))| (e, c)).collect() };
        Ok((poly, log))
    }

    /// Restriction to the parametrized line `s -> base + s * dir`.
    pub fn restrict_to_line(&self, base: &[Rational], dir: &[i64]) -> Result<TropicalPolynomial> {
        self.pullback_affine(&AffineMap::line(base.to_vec(), dir))
    }

    /// Terms on the upper envelope of a univariate polynomial, by increasing
    /// exponent.
    pub fn upper_envelope(&self) -> Result<Vec<(i64, Rational)>> {
        self.require_univariate()?;
        let mut hull: Vec<(i64, Rational)> = Vec::new();
        for (e, &c) in &self.terms {
            let p = (e[0], c);
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                // Drop the middle point unless it lies strictly above the chord.
                let lhs = (y2 - y1) * int(p.0 - x1);
                let rhs = (p.1 - y1) * int(x2 - x1);
                if lhs <= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        Ok(hull)
    }

    fn require_univariate(&self) -> Result<()> {
        if self.dim != 1 {
            return Err(TropError::DimensionMismatch { expected: 1, found: self.dim });
        }
        Ok(())
    }

    /// Breakpoints of the upper envelope with multiplicities.
    pub fn univariate_roots(&self) -> Result<UnivariateRoots> {
        let hull = self.upper_envelope()?;
        let roots = hull
            .iter()
            .tuple_windows()
            .map(|(&(e1, a1), &(e2, a2))| ((a1 - a2) / int(e2 - e1), (e2 - e1) as u64))
            .collect();
        Ok(UnivariateRoots { roots, neg_infinity: hull[0].0 })
    }

    /// `sum position * multiplicity` over the finite roots.
    pub fn vieta_sum(&self) -> Result<Rational> {
        Ok(self.univariate_roots()?.roots.iter().map(|&(x, m)| x * int(m as i64)).sum())
    }

    /// Minimal and maximal exponent terms `(A_min, A_max)` of a univariate
    /// polynomial.
    pub fn extreme_coefficients(&self) -> Result<(Rational, Rational)> {
        self.require_univariate()?;
        let first = self.terms.values().next().copied().expect("nonempty");
        let last = self.terms.values().last().copied().expect("nonempty");
        Ok((first, last))
    }

    /// Translates the variables: `g(X) = f(X + t)`.
    pub fn shifted(&self, t: &[Rational]) -> TropicalPolynomial {
        TropicalPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c + dot_int(e, t))).collect(),
        }
    }

    /// Exponents of the terms, sorted.
    pub fn exponents(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }
}

/// Finite roots of a univariate polynomial, plus the order at `-inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateRoots {
    /// `(position, multiplicity)` with strictly increasing positions.
    pub roots: Vec<(Rational, u64)>,
    /// Minimal exponent. Positive values count roots escaping to `-inf`;
    /// negative values (Laurent terms) are poles there.
    pub neg_infinity: i64,
}

impl UnivariateRoots {
    pub fn degree(&self) -> u64 {
        self.roots.iter().map(|r| r.1).sum()
    }
}

fn variable_name(i: usize, dim: usize) -> String {
    if dim <= 3 {
        ["X", "Y", "Z"][i].to_string()
    } else {
        format!("X{}", i + 1)
    }
}

fn format_term(e: &[i64], c: Rational) -> String {
    let mut parts = Vec::new();
    if !c.is_zero() || e.iter().all(|&x| x == 0) {
        parts.push(c.to_string());
    }
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let v = variable_name(i, e.len());
        parts.push(match k {
            1 => v,
            -1 => format!("-{v}"),
            _ => format!("{k}{v}"),
        });
    }
    let mut s = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 && !p.starts_with('-') {
            s.push('+');
        }
        s.push_str(p);
    }
    s
}

impl fmt::Display for TropicalPolynomial {
    /// Renders as `max(1, 6+X, 4X)`, terms ordered by exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.terms.iter().map(|(e, c)| format_term(e, *c)).join(", ");
        if self.terms.len() == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "max({body})")
        }
    }
}

/// Whether two univariate polynomials define the same function, i.e. have
/// the same upper envelope.
pub fn same_envelope(f: &TropicalPolynomial, g: &TropicalPolynomial) -> Result<bool> {
    Ok(f.upper_envelope()? == g.upper_envelope()?)
}
