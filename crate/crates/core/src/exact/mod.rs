//! Exact arithmetic: rationals, dense univariate and sparse multivariate
//! polynomials, and fraction-free linear algebra.

mod matrix;
mod multipoly;
mod parse;
mod ring;
mod unipoly;

pub use matrix::{det_exact, kernel_over_field, null_space_exact, rank_exact, Matrix};
pub use multipoly::{var_list, Monomial, MultiPoly, VarList};
pub use parse::{parse_multi, parse_qpoly, ParseError};
pub use ring::{parse_rational, rational_root, rational_text, ExactDiv, Field, Ring};
pub use unipoly::{poly_arith, ArithOp, Degree, QPoly, UniPoly};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("variable mismatch: '{left}' vs '{right}'")]
    VariableMismatch { left: String, right: String },
    #[error("determinant of a non-square {rows}x{cols} matrix")]
    NotSquare { rows: usize, cols: usize },
}

/// Shorthand for a rational from a machine integer.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for the rational `n/d`.
pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
