//! Exact-arithmetic invariants of complete-intersection surfaces inside
//! complete-intersection Calabi-Yau 4-folds.
//!
//! The crate computes, over exact coefficient fields (Q, F_p, and simple
//! algebraic extensions):
//!
//! * Hilbert functions and Hilbert polynomials of complete-intersection
//!   quotients through the Koszul alternating sum;
//! * Chern-class invariants of the surface: chi(O_S), the self-intersection
//!   gamma^2, and chi of the normal bundle;
//! * h^0 of the normal bundle of an explicitly given surface, obtained as
//!   the kernel dimension of a graded obstruction map built from cofactors
//!   of the ambient equations;
//! * the virtual dimension vd, the reduced virtual dimension rvd, and the
//!   Hodge-locus codimension rho;
//! * closed-form rvd/rho values for lagrangian surfaces in holomorphic
//!   symplectic 4-folds.
//!
//! See the `examples/` directory for one runnable example per capability and
//! the `cicy4` binary for the command-line interface.

pub mod chern;
pub mod cli;
pub mod config;
pub mod constructions;
pub mod error;
pub mod field;
pub mod hilbert;
pub mod invariants;
pub mod linalg;
pub mod normal_bundle;
pub mod poly;
pub mod symplectic;

pub use error::{Error, Result};
pub use field::{CoefficientField, FieldElement};
pub use poly::{monomial_basis, HomogeneousPolynomial, Monomial};
