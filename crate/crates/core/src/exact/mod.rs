//! Exact arithmetic: rationals, polynomials over ℚ, cyclotomic fields,
//! factorization, and linear algebra.

pub mod cyclotomic;
pub mod factor;
pub mod linalg;
pub mod poly;
pub mod rat;

pub use cyclotomic::{cyclotomic_polynomial, factor_cyclotomic_over, CycElem, CycField, CycPoly};
pub use factor::{factor_over_q, Factorization};
pub use poly::Poly;
pub use rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("{0} is not coprime to {1}")]
    NotCoprime(i64, u64),
    #[error("{0} does not divide {1}")]
    NotDivisor(u64, u64),
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("degree {0} exceeds the factoring bound {1}")]
    DegreeTooLarge(usize, usize),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("shape error: {0}")]
    Shape(String),
}
