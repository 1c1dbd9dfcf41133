//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in field inversion")]
    ZeroInversion,
    #[error("element is a zero divisor modulo a reducible minimal polynomial")]
    NonInvertible,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime modulus {0} exceeds the supported bound 2^31")]
    PrimeTooLarge(u64),
    #[error("minimal polynomial is invalid: {0}")]
    BadMinimalPolynomial(String),
    #[error("minimal polynomial {0} is reducible over the base field")]
    ReducibleMinPoly(String),
    #[error("operands belong to different coefficient fields")]
    FieldMismatch,
    #[error("operands have different variable counts")]
    VariableCountMismatch,
    #[error("monomial basis does not match the polynomial (missing {0})")]
    BasisMismatch(String),
    #[error("polynomials do not live in the same graded ring")]
    RingMismatch,
    #[error("divisor does not have leading coefficient 1")]
    NonUnitLeadingTerm,
    #[error("chi(O_S) is not an integer; invariant violated for a valid configuration")]
    NonIntegerChi,
    #[error("rho_gamma is not an integer: {0}")]
    NonIntegerRho(String),
    #[error("rho_gamma is negative: {0}")]
    NegativeRho(i64),
    #[error("quotient dimension in degree {degree} is {actual}, Koszul predicts {expected}")]
    RegularityViolation {
        degree: i64,
        actual: usize,
        expected: usize,
    },
    #[error("polynomial of degree {degree} does not lie in the ideal generated by the surface equations")]
    NotInIdeal { degree: i64 },
    #[error("consistency check failed: {0}")]
    ConsistencyFailure(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
