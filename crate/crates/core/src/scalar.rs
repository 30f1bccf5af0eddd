//! Scalars of the max-plus semiring, multivalued tropical addition, lattice
//! vectors, and the determinant kernels shared by the geometric modules.
//!
//! The library uses the max convention throughout: tropical addition is
//! `max`, tropical multiplication is `+`, and the additive neutral element is
//! `-inf`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Result, TropError};

/// Exact rational number. `Ratio` keeps values in lowest terms with a
/// positive denominator, so structural equality is numeric equality.
pub type Rational = Ratio<i128>;

/// A point with rational coordinates.
pub type Point = Vec<Rational>;

/// `n / d` as a rational.
pub fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n as i128)
}

/// Integer vector as a rational point.
pub fn point_of(coords: &[i64]) -> Point {
    coords.iter().map(|&c| int(c)).collect()
}

/// Parses an integer (`-3`), a fraction (`5/3`) or a finite decimal (`-1.3`)
/// into an exact rational. Decimals become fractions: `"1.3"` is `13/10`.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_decimal(num)?;
        let d = parse_decimal(den)?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(n / d);
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(format!("not a rational number: {s:?}"));
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("not a rational number: {s:?}"));
    }
    if frac.len() > 30 || whole.len() > 30 {
        return Err(format!("number too long: {s:?}"));
    }
    let digits = format!("{whole}{frac}");
    let numerator: i128 =
        if digits.is_empty() { 0 } else { digits.parse().map_err(|_| format!("not a rational number: {s:?}"))? };
    let denominator = 10i128.pow(frac.len() as u32);
    let value = Rational::new(numerator, denominator);
    Ok(if negative { -value } else { value })
}

/// Element of the tropical semiring: an exact rational or `-inf`.
///
/// The derived order puts `NegInfinity` below every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TropicalScalar {
    NegInfinity,
    Finite(Rational),
}

impl TropicalScalar {
    pub fn finite(self) -> Option<Rational> {
        match self {
            TropicalScalar::NegInfinity => None,
            TropicalScalar::Finite(v) => Some(v),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, TropicalScalar::Finite(_))
    }
}

impl From<Rational> for TropicalScalar {
    fn from(v: Rational) -> Self {
        TropicalScalar::Finite(v)
    }
}

impl fmt::Display for TropicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropicalScalar::NegInfinity => write!(f, "-inf"),
            TropicalScalar::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for TropicalScalar {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "-inf" | "-∞" | "−∞" => Ok(TropicalScalar::NegInfinity),
            other => parse_rational(other).map(TropicalScalar::Finite),
        }
    }
}

/// Result of multivalued tropical addition: a single value, or the down-set
/// `{x | x <= max}` produced by adding two equal values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TropicalSum {
    Single(TropicalScalar),
    DownSet(TropicalScalar),
}

impl TropicalSum {
    /// Largest element of the set.
    pub fn max(self) -> TropicalScalar {
        match self {
            TropicalSum::Single(v) | TropicalSum::DownSet(v) => v,
        }
    }

    /// Whether `-inf` belongs to the value, which is the zero-set criterion.
    pub fn contains_neg_infinity(self) -> bool {
        match self {
            TropicalSum::Single(v) => v == TropicalScalar::NegInfinity,
            TropicalSum::DownSet(_) => true,
        }
    }

    pub fn contains(self, x: TropicalScalar) -> bool {
        match self {
            TropicalSum::Single(v) => v == x,
            TropicalSum::DownSet(v) => x <= v,
        }
    }
}

impl fmt::Display for TropicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropicalSum::Single(v) => write!(f, "{v}"),
            TropicalSum::DownSet(v) => write!(f, "{{x | x <= {v}}}"),
        }
    }
}

/// Multivalued tropical addition, extended to sets element-wise.
pub fn trop_add(a: TropicalSum, b: TropicalSum) -> TropicalSum {
    use TropicalSum::{DownSet, Single};
    match (a, b) {
        (Single(x), Single(y)) => match x.cmp(&y) {
            Ordering::Equal => DownSet(x),
            Ordering::Less => Single(y),
            Ordering::Greater => Single(x),
        },
        (DownSet(d), Single(s)) | (Single(s), DownSet(d)) => {
            if s > d {
                Single(s)
            } else {
                DownSet(d)
            }
        }
        (DownSet(x), DownSet(y)) => DownSet(x.max(y)),
    }
}

/// Tropical sum of a sequence of values; `Single(-inf)` for an empty one.
pub fn trop_sum<I: IntoIterator<Item = TropicalScalar>>(values: I) -> TropicalSum {
    values
        .into_iter()
        .map(TropicalSum::Single)
        .reduce(trop_add)
        .unwrap_or(TropicalSum::Single(TropicalScalar::NegInfinity))
}

/// Tropical multiplication: ordinary addition with `-inf` absorbing.
pub fn trop_mul(a: TropicalScalar, b: TropicalScalar) -> TropicalScalar {
    match (a, b) {
        (TropicalScalar::Finite(x), TropicalScalar::Finite(y)) => TropicalScalar::Finite(x + y),
        _ => TropicalScalar::NegInfinity,
    }
}

/// Integer vector. `primitive_of` produces the primitive representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_primitive(&self) -> bool {
        let g = self.0.iter().fold(0i64, |g, &c| g.gcd(&c));
        g == 1
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn scaled(&self, k: i64) -> Vec<i64> {
        self.0.iter().map(|c| c * k).collect()
    }

    pub fn as_point(&self) -> Point {
        point_of(&self.0)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// Splits a nonzero integer vector into `multiplier * primitive`.
pub fn primitive_of(v: &[i64]) -> Result<(LatticeVector, u64)> {
    let g = v.iter().fold(0i64, |g, &c| g.gcd(&c));
    if g == 0 {
        return Err(TropError::ZeroDirection);
    }
    let g = g.abs();
    Ok((LatticeVector(v.iter().map(|c| c / g).collect()), g as u64))
}

/// Splits a nonzero rational vector into `length * primitive` with a
/// primitive integer direction and a positive rational length.
pub fn primitive_of_rational(v: &[Rational]) -> Result<(LatticeVector, Rational)> {
    let den = v.iter().fold(1i128, |l, c| l.lcm(c.denom()));
    let scaled: Vec<i128> = v.iter().map(|c| (c * den).to_integer()).collect();
    let g = scaled.iter().fold(0i128, |g, c| g.gcd(c));
    if g == 0 {
        return Err(TropError::ZeroDirection);
    }
    let dir: Vec<i64> = scaled.iter().map(|c| (c / g) as i64).collect();
    Ok((LatticeVector(dir), Rational::new(g, den)))
}

/// 2x2 determinant `u0*v1 - u1*v0`.
pub fn det2(u: &[Rational], v: &[Rational]) -> Rational {
    u[0] * v[1] - u[1] * v[0]
}

/// Integer 2x2 determinant.
pub fn det2i(u: &[i64], v: &[i64]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Determinant of a square rational matrix by fraction-exact elimination.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut det = Rational::from_integer(1);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for r in col + 1..n {
            let factor = m[r][col] / p;
            if factor.is_zero() {
                continue;
            }
            #[allow(clippy::needless_range_loop)]
            for c in col..n {
                let sub = factor * m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// All `k x k` minors of a `k x n` matrix, column subsets in lexicographic
/// order, each with its plain determinant sign.
///
/// For `k = 2, n = 3` the components are the minors on columns
/// `{1,2}, {1,3}, {2,3}`, so `(u x v) = (m23, -m13, m12)` in terms of them.
pub fn generalized_cross(rows: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    let k = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if k == 0 || k > n {
        return Err(TropError::DimensionMismatch { expected: n.max(1), found: k });
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(TropError::DimensionMismatch { expected: n, found: bad.len() });
    }
    Ok((0..n)
        .combinations(k)
        .map(|cols| {
            let sub: Vec<Vec<Rational>> = rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
            determinant(&sub)
        })
        .collect())
}

/// Classical cross product in three dimensions.
pub fn cross3(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    vec![u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Dot product of an integer vector with a rational vector.
pub fn dot_int(e: &[i64], x: &[Rational]) -> Rational {
    e.iter().zip(x).map(|(&a, b)| int(a) * b).sum()
}

pub fn add(u: &[Rational], v: &[Rational]) -> Point {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub(u: &[Rational], v: &[Rational]) -> Point {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn scale(k: Rational, v: &[Rational]) -> Point {
    v.iter().map(|c| k * c).collect()
}

/// `base + t * dir` for an integer direction.
pub fn along(base: &[Rational], dir: &[i64], t: Rational) -> Point {
    base.iter().zip(dir).map(|(b, &d)| b + t * int(d)).collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Absolute value of a rational.
pub fn abs(v: Rational) -> Rational {
    v.abs()
}

/// Formats a point as `(x,y,...)`.
pub fn fmt_point(p: &[Rational]) -> String {
    format!("({})", p.iter().join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use TropicalScalar::{Finite, NegInfinity};

    fn f(n: i128) -> TropicalScalar {
        Finite(Rational::from_integer(n))
    }

    #[test]
    fn add_of_distinct_values_is_single_max() {
        assert_eq!(trop_add(TropicalSum::Single(f(3)), TropicalSum::Single(f(5))), TropicalSum::Single(f(5)));
    }

    #[test]
    fn add_of_equal_values_is_down_set() {
        let s = trop_add(TropicalSum::Single(f(2)), TropicalSum::Single(f(2)));
        assert_eq!(s, TropicalSum::DownSet(f(2)));
        assert!(s.contains_neg_infinity());
        assert!(s.contains(f(-100)));
        assert!(!s.contains(f(3)));
    }

    #[test]
    fn neg_infinity_is_additive_identity() {
        assert_eq!(trop_add(TropicalSum::Single(NegInfinity), TropicalSum::Single(f(7))), TropicalSum::Single(f(7)));
    }

    #[test]
    fn down_set_with_single() {
        let d = TropicalSum::DownSet(f(2));
        assert_eq!(trop_add(d, TropicalSum::Single(f(5))), TropicalSum::Single(f(5)));
        assert_eq!(trop_add(d, TropicalSum::Single(f(1))), d);
        assert_eq!(trop_add(d, TropicalSum::Single(f(2))), d);
    }

    #[test]
    fn multiplication() {
        assert_eq!(trop_mul(f(2), f(3)), f(5));
        assert_eq!(trop_mul(NegInfinity, f(4)), NegInfinity);
        assert_eq!(trop_mul(f(0), Finite(q(5, 3))), Finite(q(5, 3)));
    }

    #[test]
    fn primitive_extraction() {
        assert_eq!(primitive_of(&[2, 4]).unwrap(), (LatticeVector::new(vec![1, 2]), 2));
        assert_eq!(primitive_of(&[0, 0, -3]).unwrap(), (LatticeVector::new(vec![0, 0, -1]), 3));
        assert_eq!(primitive_of(&[1, 1]).unwrap(), (LatticeVector::new(vec![1, 1]), 1));
        assert_eq!(primitive_of(&[0, 0]), Err(TropError::ZeroDirection));
    }

    #[test]
    fn rational_primitive_extraction() {
        let (d, len) = primitive_of_rational(&[q(3, 2), q(-9, 4)]).unwrap();
        assert_eq!(d.coords(), &[2, -3]);
        assert_eq!(len, q(3, 4));
    }

    #[test]
    fn generalized_cross_examples() {
        let r = |v: &[i64]| point_of(v);
        assert_eq!(generalized_cross(&[r(&[1, 0, 0]), r(&[0, 1, 0])]).unwrap(), point_of(&[1, 0, 0]));
        assert_eq!(generalized_cross(&[r(&[3, -2])]).unwrap(), point_of(&[3, -2]));
        assert_eq!(generalized_cross(&[r(&[1, 2, 0]), r(&[0, 1, 1])]).unwrap(), point_of(&[1, 1, 2]));
        assert!(generalized_cross(&[r(&[1, 2]), r(&[1, 2, 3])]).is_err());
        assert!(generalized_cross(&[r(&[1]), r(&[2]), r(&[3])]).is_err());
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("1.3").unwrap(), q(13, 10));
        assert_eq!(parse_rational("-1.3").unwrap(), q(-13, 10));
        assert_eq!(parse_rational("5/3").unwrap(), q(5, 3));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    fn scalar() -> impl Strategy<Value = TropicalScalar> {
        prop_oneof![
            1 => Just(NegInfinity),
            6 => (-4i128..4, 1i128..3).prop_map(|(n, d)| Finite(q(n, d))),
        ]
    }

    fn sum() -> impl Strategy<Value = TropicalSum> {
        (scalar(), any::<bool>()).prop_map(|(v, d)| if d { TropicalSum::DownSet(v) } else { TropicalSum::Single(v) })
    }

    /// Set-level oracle: the sum of two sets sampled on a grid of test points.
    fn set_sum_contains(a: TropicalSum, b: TropicalSum, x: TropicalScalar, grid: &[TropicalScalar]) -> bool {
        grid.iter().filter(|&&u| a.contains(u)).any(|&u| {
            grid.iter()
                .filter(|&&v| b.contains(v))
                .any(|&v| trop_add(TropicalSum::Single(u), TropicalSum::Single(v)).contains(x))
        })
    }

    proptest! {
        #[test]
        fn add_commutes(a in sum(), b in sum()) {
            prop_assert_eq!(trop_add(a, b), trop_add(b, a));
        }

        #[test]
        fn add_associates(a in sum(), b in sum(), c in sum()) {
            prop_assert_eq!(trop_add(trop_add(a, b), c), trop_add(a, trop_add(b, c)));
        }

        #[test]
        fn add_matches_elementwise_definition(a in sum(), b in sum()) {
            let mut grid: Vec<TropicalScalar> = vec![NegInfinity];
            grid.extend((-16..=16).map(|k| Finite(q(k, 4))));
            let got = trop_add(a, b);
            for &x in &grid {
                prop_assert_eq!(got.contains(x), set_sum_contains(a, b, x, &grid), "x = {}", x);
            }
        }

        #[test]
        fn mul_distributes_over_single_valued_add(a in scalar(), b in scalar(), c in scalar()) {
            prop_assume!(b != c);
            let lhs = trop_mul(a, trop_add(TropicalSum::Single(b), TropicalSum::Single(c)).max());
            let rhs = trop_add(TropicalSum::Single(trop_mul(a, b)), TropicalSum::Single(trop_mul(a, c))).max();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn primitive_roundtrip(v in proptest::collection::vec(-30i64..30, 1..5)) {
            prop_assume!(v.iter().any(|&c| c != 0));
            let (p, m) = primitive_of(&v).unwrap();
            prop_assert!(p.is_primitive());
            prop_assert_eq!(p.scaled(m as i64), v);
        }

        #[test]
        fn dependent_rows_have_zero_minors(
            u in proptest::collection::vec(-5i64..5, 4),
            k in -3i64..3,
        ) {
            let a = point_of(&u);
            let b: Point = u.iter().map(|&c| int(c * k)).collect();
            let minors = generalized_cross(&[a, b]).unwrap();
            prop_assert!(is_zero_vec(&minors));
        }

        #[test]
        fn two_by_two_minor_is_det(u in proptest::collection::vec(-9i64..9, 2), v in proptest::collection::vec(-9i64..9, 2)) {
            let (a, b) = (point_of(&u), point_of(&v));
            prop_assert_eq!(generalized_cross(&[a.clone(), b.clone()]).unwrap(), vec![det2(&a, &b)]);
        }

        #[test]
        fn three_dim_minors_relate_to_cross_product(u in proptest::collection::vec(-9i64..9, 3), v in proptest::collection::vec(-9i64..9, 3)) {
            let (a, b) = (point_of(&u), point_of(&v));
            let m = generalized_cross(&[a.clone(), b.clone()]).unwrap();
            prop_assert_eq!(cross3(&a, &b), vec![m[2], -m[1], m[0]]);
        }
    }
}
