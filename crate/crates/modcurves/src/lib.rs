//! Exact arithmetic for the hyperelliptic modular curve models of composite
//! level with rank-zero Jacobian: point counts and L-polynomials over small
//! finite fields, cuspidal subgroups and torsion bounds, quadratic point
//! enumeration, Eisenstein series identities on cuspidal divisors, and an
//! explicit construction of an 11-isogeny over a quadratic field.
//!
//! Everything is exact: rationals, quadratic and cyclotomic field elements,
//! and finite field elements; no floating point enters any verification.

pub mod algebra;
pub mod db;
pub mod isogeny;
pub mod jacobian;
pub mod qseries;

/// Entry point used by the command line binary; returns the process exit code.
pub fn cli_main() -> i32 {
    2
}
