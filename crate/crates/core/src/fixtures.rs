//! Worked configurations used by the test suites, the command-line corpus
//! and `tropmod selftest`.

use crate::curve::{curve_from_polynomial, EmbeddedCurve};
use crate::pl::{LegFunction, MetricGraph, PlFunction};
use crate::poly::TropicalPolynomial;
use crate::scalar::{int, q, Rational, TropicalScalar};

fn poly2(terms: &[([i64; 2], Rational)]) -> TropicalPolynomial {
    TropicalPolynomial::new(2, terms.iter().map(|(e, c)| (e.to_vec(), TropicalScalar::Finite(*c))))
        .expect("fixture polynomial is valid")
}

/// `max(0, X, Y)`.
pub fn tropical_line() -> TropicalPolynomial {
    poly2(&[([0, 0], int(0)), ([1, 0], int(0)), ([0, 1], int(0))])
}

/// `max(c, Y)`: the horizontal line `Y = c`.
pub fn horizontal_line(c: Rational) -> TropicalPolynomial {
    poly2(&[([0, 0], c), ([0, 1], int(0))])
}

/// `max(1, 6+X, 5+X+Y, 4+X+2Y, 5/3+2X, 2+3X, 4X)`: a quartic whose curve
/// meets `Y = 1` along a weight-2 edge, with a weight-3 leg at one end.
pub fn quartic_with_triple_root() -> TropicalPolynomial {
    poly2(&[
        ([0, 0], int(1)),
        ([1, 0], int(6)),
        ([1, 1], int(5)),
        ([1, 2], int(4)),
        ([2, 0], q(5, 3)),
        ([3, 0], int(2)),
        ([4, 0], int(0)),
    ])
}

/// Ten-term polynomial whose curve has vertices `(-2,0), (1,0), (4,0)` joined
/// by horizontal edges of weights 3 and 2.
pub fn three_vertex_chain() -> TropicalPolynomial {
    poly2(&[
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

/// `max(0, X, 2X-1, 3X-3, 4X-6, X+Y, 2X+Y-1, 3X+Y-3)`: its curve contains
/// the segment `[0,3] x {0}` and meets `Y = 0` stably at `X = 0, 1, 2, 3`.
pub fn four_point_overlap() -> TropicalPolynomial {
    poly2(&[
        ([0, 0], int(0)),
        ([1, 0], int(0)),
        ([2, 0], int(-1)),
        ([3, 0], int(-3)),
        ([4, 0], int(-6)),
        ([1, 1], int(0)),
        ([2, 1], int(-1)),
        ([3, 1], int(-3)),
    ])
}

/// `max(Y, 3+X+Y, 1+2X, 2+2X+Y, 3+X+2Y, 2X+2Y)`: a quartic whose
/// tangent line [`inflection_tangent`] meets it at four stable points.
pub fn inflection_quartic() -> TropicalPolynomial {
    poly2(&[([0, 1], int(0)), ([1, 1], int(3)), ([2, 0], int(1)), ([2, 1], int(2)), ([1, 2], int(3)), ([2, 2], int(0))])
}

/// `max(0, Y, X-1)`: the tropical line with vertex `(1, 0)`.
pub fn inflection_tangent() -> TropicalPolynomial {
    poly2(&[([0, 0], int(0)), ([0, 1], int(0)), ([1, 0], int(-1))])
}

/// `max(0, X-1, 2X-3)`: two chips at 1 and 2.
pub fn chips_quadratic() -> TropicalPolynomial {
    TropicalPolynomial::univariate(&[(0, int(0)), (1, int(-1)), (2, int(-3))]).expect("valid")
}

/// The curve of `max(c, Y)`: one synthetic vertex `(0, c)`, leg 0 towards
/// `-X` and leg 1 towards `+X`.
pub fn horizontal_line_curve(c: Rational) -> EmbeddedCurve {
    curve_from_polynomial(&horizontal_line(c)).expect("line")
}

/// A function on [`horizontal_line_curve`] given by its values along `X`:
/// `left` lists `(X, value)` breakpoints for `X <= 0` in decreasing `X`
/// order (first entry at `X = 0`) and `right` for `X >= 0`.
pub fn function_on_horizontal_line(
    curve: &EmbeddedCurve,
    left: &[(Rational, Rational)],
    left_tail: i64,
    right: &[(Rational, Rational)],
    right_tail: i64,
) -> PlFunction {
    let g = curve.metric_graph();
    let leg_left = LegFunction { points: left.iter().map(|&(x, v)| (-x, v)).collect(), tail_slope: left_tail };
    let leg_right = LegFunction { points: right.to_vec(), tail_slope: right_tail };
    PlFunction::new(&g, vec![], vec![leg_left, leg_right]).expect("valid function on the line")
}

/// Lift on `Y = 0` with divisor at `0, 7/10, 23/10, 3`: slopes `0,1,2,3,4`.
/// It is rationally equivalent to the stable restriction of
/// [`four_point_overlap`] but exceeds it at `X = 1`.
pub fn moved_chips_lift(line: &EmbeddedCurve) -> PlFunction {
    function_on_horizontal_line(
        line,
        &[(int(0), int(0))],
        0,
        &[(int(0), int(0)), (q(7, 10), q(7, 10)), (q(23, 10), q(39, 10)), (int(3), int(6))],
        4,
    )
}

/// `max(-5/3, 5/6+X, 3/2+2X, -2+3X)` on `Y = 0`, subordinate to the stable
/// restriction of [`three_vertex_chain`].
pub fn three_root_lift(line: &EmbeddedCurve) -> PlFunction {
    function_on_horizontal_line(
        line,
        &[(int(0), q(3, 2)), (q(-2, 3), q(1, 6)), (q(-5, 2), q(-5, 3))],
        0,
        &[(int(0), q(3, 2)), (q(7, 2), q(17, 2))],
        3,
    )
}

/// The projective line as a metric graph: one vertex at `X = 0`, leg 0
/// towards `-inf` (`X = -s`) and leg 1 towards `+inf` (`X = s`).
pub fn projective_line() -> MetricGraph {
    MetricGraph::new(1, vec![], vec![0, 0]).expect("valid")
}

/// A function on [`projective_line`] from breakpoints in `X`, as for
/// [`function_on_horizontal_line`].
pub fn function_on_projective_line(
    left: &[(Rational, Rational)],
    left_tail: i64,
    right: &[(Rational, Rational)],
    right_tail: i64,
) -> PlFunction {
    let g = projective_line();
    let leg_left = LegFunction { points: left.iter().map(|&(x, v)| (-x, v)).collect(), tail_slope: left_tail };
    let leg_right = LegFunction { points: right.to_vec(), tail_slope: right_tail };
    PlFunction::new(&g, vec![], vec![leg_left, leg_right]).expect("valid function on TP1")
}

/// `max(0, X)` and `max(2 - X, 0)` on the projective line.
pub fn weil_pair() -> (MetricGraph, PlFunction, PlFunction) {
    let f = function_on_projective_line(&[(int(0), int(0))], 0, &[(int(0), int(0))], 1);
    let g = function_on_projective_line(&[(int(0), int(2))], 1, &[(int(0), int(2)), (int(2), int(0))], 0);
    (projective_line(), f, g)
}
