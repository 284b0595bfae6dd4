//! Division polynomials of a short Weierstrass curve, in the scaled form
//! that stays inside the univariate ring: for psi_m the classical division
//! polynomial in Z[x, y]/(y^2 - x^3 - ax - b),
//!
//!   w_m = psi_m        for m odd (a polynomial in x alone),
//!   w_m = psi_m / (2y) for m even (again a polynomial in x alone).
//!
//! The duplication identities turn into a single recurrence for w, with the
//! curve cubic entering through (2y)^4 = 16 f^2.

use super::weierstrass::ShortModel;
use crate::algebra::{Field, Poly};

/// The scaled division polynomials w_0, ..., w_upto.
pub fn scaled_division_polynomials<F: Field>(
    f: &F,
    e: &ShortModel<F>,
    upto: usize,
) -> Vec<Poly<F>> {
    let a = &e.a;
    let b = &e.b;
    let mut w: Vec<Poly<F>> = Vec::with_capacity(upto.max(4) + 1);
    w.push(Poly::zero());
    w.push(Poly::one(f));
    w.push(Poly::one(f));
    // psi_3 = 3x^4 + 6ax^2 + 12bx - a^2.
    w.push(Poly::new(
        f,
        vec![
            f.neg(&f.mul(a, a)),
            f.mul(&f.from_i64(12), b),
            f.mul(&f.from_i64(6), a),
            f.zero(),
            f.from_i64(3),
        ],
    ));
    // psi_4 / 2y = 2(x^6 + 5ax^4 + 20bx^3 - 5a^2x^2 - 4abx - 8b^2 - a^3).
    let a2 = f.mul(a, a);
    let inner = Poly::new(
        f,
        vec![
            f.sub(
                &f.mul(&f.from_i64(-8), &f.mul(b, b)),
                &f.mul(&a2, a),
            ),
            f.mul(&f.from_i64(-4), &f.mul(a, b)),
            f.mul(&f.from_i64(-5), &a2),
            f.mul(&f.from_i64(20), b),
            f.mul(&f.from_i64(5), a),
            f.zero(),
            f.one(),
        ],
    );
    w.push(Poly::mul_scalar(f, &inner, &f.from_i64(2)));

    let cubic = e.cubic(f);
    let sixteen_f2 = Poly::mul_scalar(f, &Poly::mul(f, &cubic, &cubic), &f.from_i64(16));
    for m in 5..=upto {
        let next = if m % 2 == 1 {
            let k = m / 2;
            // psi_{2k+1} = psi_{k+2} psi_k^3 - psi_{k-1} psi_{k+1}^3;
            // the even-index cubes contribute (2y)^4 = 16 f^2.
            let first = Poly::mul(f, &w[k + 2], &Poly::pow(f, &w[k], 3));
            let second = Poly::mul(f, &w[k - 1], &Poly::pow(f, &w[k + 1], 3));
            if k % 2 == 0 {
                Poly::sub(f, &Poly::mul(f, &sixteen_f2, &first), &second)
            } else {
                Poly::sub(f, &first, &Poly::mul(f, &sixteen_f2, &second))
            }
        } else {
            let k = m / 2;
            // psi_{2k} = psi_k (psi_{k+2} psi_{k-1}^2 - psi_{k-2} psi_{k+1}^2) / 2y;
            // the y factors cancel identically for both parities of k.
            let diff = Poly::sub(
                f,
                &Poly::mul(f, &w[k + 2], &Poly::mul(f, &w[k - 1], &w[k - 1])),
                &Poly::mul(f, &w[k - 2], &Poly::mul(f, &w[k + 1], &w[k + 1])),
            );
            Poly::mul(f, &w[k], &diff)
        };
        w.push(next);
    }
    w.truncate(upto + 1);
    w
}

/// The full division polynomial psi_m for odd m, a polynomial in x of degree
/// (m^2 - 1)/2 with leading coefficient m; its roots are the x-coordinates
/// of the nonzero m-torsion points killed by no smaller odd divisor pattern.
pub fn odd_division_polynomial<F: Field>(f: &F, e: &ShortModel<F>, m: u64) -> Poly<F> {
    assert!(m % 2 == 1, "division polynomial requested for even index");
    scaled_division_polynomials(f, e, m as usize)
        .pop()
        .expect("sequence is nonempty")
}
