use thiserror::Error;

use crate::pl::GraphPoint;

/// Errors raised by the library. Every variant is a domain error; parse
/// errors live in the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropError {
    #[error("the zero vector has no primitive direction")]
    ZeroDirection,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial has no finite terms")]
    EmptyPolynomial,

    #[error("duplicate exponent {0:?}")]
    DuplicateExponent(Vec<i64>),

    #[error("polynomial has a single monomial on its upper envelope; its corner locus is empty")]
    EmptyCurve,

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid piecewise-linear function: {0}")]
    InvalidFunction(String),

    #[error("intersection is not transversal: {0}")]
    NotTransversal(String),

    #[error("no connected component of the intersection contains the given reference")]
    NotAComponent,

    #[error(
        "the curve lies in the corner locus of the polynomial; a modification along itself sends \
         the curve to -inf and is not defined under the canonical degree-one projection"
    )]
    SelfModification,

    #[error("lift is not subordinate: {0}")]
    NotSubordinate(String),

    #[error("coefficient of exponent {exponent:?} would increase from {current} to {requested}")]
    CoefficientIncrease { exponent: Vec<i64>, current: String, requested: String },

    #[error("indeterminate term: infinite value {value} meets nonzero order {order} at {point:?}")]
    IndeterminateTerm { point: GraphPoint, value: String, order: i64 },

    #[error("triple is not admissible: {0}")]
    NotAdmissible(String),

    #[error("expected exactly one unknown leg, found {0}")]
    UnknownLegCount(usize),

    #[error("no balanced completion exists for the unknown leg")]
    Unbalanceable,

    #[error("adjacent dual faces carry further vertical edges ({0}); use the chain area audit")]
    PreconditionExtension(String),

    #[error("malformed chain: {0}")]
    MalformedChain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, TropError>;
