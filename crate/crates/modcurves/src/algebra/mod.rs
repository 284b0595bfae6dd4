//! Exact algebra: field contexts, polynomials, factorization, real root
//! counting and small linear algebra.
//!
//! Arithmetic is organized around *context objects*: a [`Field`] value (for
//! example [`Rationals`] or a [`PrimeField`]) owns the modulus/defining data,
//! and elements are plain data passed back into the context for every
//! operation.  This keeps elements cheap to store in bulk (point counting,
//! subgroup enumeration) and lets the same polynomial code run over Q,
//! quadratic fields, cyclotomic fields and finite fields.

pub mod factor;
pub mod fields;
pub mod linalg;
pub mod poly;
pub mod sturm;

pub use fields::{
    ff_sqrt, CyclotomicField, ExtField, Field, FiniteField, PrimeField, Quad, QuadField, Rationals,
};
pub use poly::Poly;

use thiserror::Error;

/// Errors raised by exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a square")]
    NotASquare,
    #[error("expected a nonzero polynomial")]
    ZeroPolynomial,
    #[error("{0}")]
    Unsupported(String),
}
