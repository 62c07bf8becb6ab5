//! Exact arithmetic: rationals and prime fields, sparse multivariate
//! polynomials, Gröbner bases and zero-dimensional quotient lengths.

pub mod field;
pub mod groebner;
pub mod ideal;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;

use thiserror::Error;

pub use field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
pub use groebner::{groebner_basis, GroebnerBudget};
pub use ideal::{jacobian_minors, Ideal};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse_polynomial;
pub use poly::{poly_arith, ArithOp, Polynomial, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("operands belong to different polynomial rings")]
    RingMismatch,
    #[error("{0} is not an odd prime below 2^32")]
    InvalidPrime(u64),
    #[error("coefficient is not invertible in the target field")]
    NotInvertible,
    #[error("Gröbner budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no Gröbner basis has been computed for this ideal")]
    MissingBasis,
    #[error("quotient is positive dimensional (dimension {0})")]
    PositiveDimensional(usize),
    #[error("wrong arity: {0}")]
    Arity(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}
