//! Exact computational tropical geometry in the max-plus convention.
//!
//! The crate computes plane tropical curves and their dual subdivisions,
//! transversal and stable intersections, tropical modifications of the plane
//! and of curves, tropical momenta, and the Weil reciprocity sums for
//! piecewise-linear functions on metric graphs. All arithmetic is exact over
//! the rationals.
//!
//! Conventions:
//! - tropical addition is `max`, so polynomials are `max_I (A_I + I.X)` and
//!   subdivisions come from the *upper* hull of the lifted exponents;
//! - curve points are addressed by `(edge, offset)` with offsets in lattice
//!   steps of the primitive edge direction;
//! - the momentum of a leg with base `B`, primitive direction `v` and weight
//!   `m` about `A` is `m * det(v, B - A)` in the plane and `m * v x (B - A)`
//!   in space; the general version lists the minors of the `2 x n` matrix
//!   `[B - A; v]` over column pairs in lexicographic order.

pub mod audit;
pub mod curve;
pub mod error;
pub mod fixtures;
pub mod intersect;
pub mod modify;
pub mod momentum;
pub mod pl;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod subdivision;
pub mod weil;

pub use curve::{curve_from_polynomial, plane_curve_with_dual, CurvePoint, EmbeddedCurve};
pub use error::{Result, TropError};
pub use pl::{ExtValue, GraphPoint, LegFunction, MetricEdge, MetricGraph, PlFunction};
pub use poly::{AffineMap, TropicalPolynomial, UnivariateRoots};
pub use scalar::{
    generalized_cross, parse_rational, primitive_of, trop_add, trop_mul, LatticeVector, Point, Rational,
    TropicalScalar, TropicalSum,
};
pub use subdivision::{dual_subdivision, NewtonSubdivision};
