//! Hyperelliptic curve models, their Jacobians over finite fields and over Q.
//!
//! The pieces: model bookkeeping and reduction (`models`), point counting and
//! L-polynomials (`count`), exact divisor-class arithmetic in balanced
//! Mumford form (`mumford`), finite abelian group structure from explicit
//! subgroups (`group`), rational points and the cuspidal subgroup (`cusps`),
//! torsion bounds, rational 2-torsion and the level-48 descent (`torsion`),
//! and full enumeration of the rational divisor classes in genus 2
//! (`enumerate`).

pub mod count;
pub mod cusps;
pub mod enumerate;
pub mod group;
pub mod models;
pub mod mumford;
pub mod torsion;

pub use count::LPolynomial;
pub use group::GroupStructure;
pub use models::{CurveModel, RationalPoint, ReducedCurve};
pub use mumford::{Divisor, JacCurve};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum JacobianError {
    #[error("bad reduction at {p}: {reason}")]
    BadReduction { p: u64, reason: String },
    #[error("leading coefficient is not a square over F_{p}; pick another prime")]
    NonSplit { p: u64 },
    #[error("{0}")]
    Unsupported(String),
}
