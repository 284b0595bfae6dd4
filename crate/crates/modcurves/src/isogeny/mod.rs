//! Elliptic curves and isogenies in exact arithmetic: Weierstrass models
//! and their invariants, division polynomials, quotient curves from a
//! kernel polynomial, recovery of a kernel from the two curves alone, and
//! the fully verified 11-isogeny over Q(sqrt -143) attached to level 22.

pub mod division;
pub mod elkies;
pub mod level22;
pub mod velu;
pub mod weierstrass;

pub use division::{odd_division_polynomial, scaled_division_polynomials};
pub use elkies::kernel_from_curves;
pub use level22::Level22Isogeny;
pub use velu::{isogeny_image, power_sums};
pub use weierstrass::{LongModel, Point, ShortModel};
