//! The image curve of a separable isogeny with odd cyclic kernel, computed
//! from the kernel polynomial alone.
//!
//! For a kernel of odd order the nonzero kernel points come in pairs with a
//! common x-coordinate, so the kernel polynomial h has degree d = (l-1)/2
//! and the classical image formulas reduce to the first three power sums
//! s_k of its roots:
//!
//!   T = 6 s_2 + 2 a d,   W = 10 s_3 + 6 a s_1 + 4 b d,
//!   a' = a - 5 T,        b' = b - 7 W.
//!
//! The resulting isogeny is normalized: it pulls the invariant differential
//! dx'/2y' of the image back to dx/2y.

use super::weierstrass::ShortModel;
use crate::algebra::{AlgebraError, Field, Poly};

/// First `count` power sums of the roots of a monic polynomial, from the
/// Newton identities; elementary symmetric functions beyond the degree are
/// zero, so this works uniformly for low degrees.
pub fn power_sums<F: Field>(f: &F, monic: &Poly<F>, count: usize) -> Vec<F::Elem> {
    let d = monic.deg();
    assert!(d >= 0, "power sums of the zero polynomial");
    let d = d as usize;
    // e_k with sign: e_k = (-1)^k coeff_{d-k}.
    let elem = |k: usize| -> F::Elem {
        if k > d {
            return f.zero();
        }
        let c = monic.coeff(f, d - k);
        if k % 2 == 1 {
            f.neg(&c)
        } else {
            c
        }
    };
    let mut s: Vec<F::Elem> = Vec::with_capacity(count);
    for k in 1..=count {
        // s_k = sum_{i=1}^{k-1} (-1)^{i-1} e_i s_{k-i} + (-1)^{k-1} k e_k.
        let mut acc = f.zero();
        for i in 1..k {
            let term = f.mul(&elem(i), &s[k - i - 1]);
            acc = if i % 2 == 1 {
                f.add(&acc, &term)
            } else {
                f.sub(&acc, &term)
            };
        }
        let tail = f.mul(&f.from_i64(k as i64), &elem(k));
        acc = if k % 2 == 1 {
            f.add(&acc, &tail)
        } else {
            f.sub(&acc, &tail)
        };
        s.push(acc);
    }
    s
}

/// Image of the normalized isogeny with the given odd-order kernel
/// polynomial. The kernel must be coprime to the curve cubic (no
/// two-torsion x-coordinates), which is what odd order means here.
pub fn isogeny_image<F: Field>(
    f: &F,
    e: &ShortModel<F>,
    kernel: &Poly<F>,
) -> Result<ShortModel<F>, AlgebraError> {
    if kernel.deg() < 0 {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if kernel.deg() == 0 {
        // Trivial kernel: the identity map.
        return Ok(e.clone());
    }
    let monic = Poly::monic(f, kernel)?;
    if Poly::gcd(f, &monic, &e.cubic(f)).deg() != 0 {
        return Err(AlgebraError::Unsupported(
            "kernel polynomial shares a root with the curve cubic".into(),
        ));
    }
    let d = f.from_i64(monic.deg());
    let s = power_sums(f, &monic, 3);
    let t = f.add(
        &f.mul(&f.from_i64(6), &s[1]),
        &f.mul(&f.from_i64(2), &f.mul(&e.a, &d)),
    );
    let mut w = f.mul(&f.from_i64(10), &s[2]);
    w = f.add(&w, &f.mul(&f.from_i64(6), &f.mul(&e.a, &s[0])));
    w = f.add(&w, &f.mul(&f.from_i64(4), &f.mul(&e.b, &d)));
    Ok(ShortModel::new(
        f.sub(&e.a, &f.mul(&f.from_i64(5), &t)),
        f.sub(&e.b, &f.mul(&f.from_i64(7), &w)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, PrimeField, Rationals};

    #[test]
    fn power_sums_of_a_cubic() {
        let q = Rationals;
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6.
        let p = Poly::from_i64(&q, &[-6, 11, -6, 1]);
        let s = power_sums(&q, &p, 4);
        assert_eq!(s[0], q.from_i64(6));
        assert_eq!(s[1], q.from_i64(14));
        assert_eq!(s[2], q.from_i64(36));
        assert_eq!(s[3], q.from_i64(98));
    }

    #[test]
    fn three_isogeny_image_matches_direct_quotient() {
        // On y^2 = x^3 + x over F_13 the point (x, y) with x a root of the
        // 3-division polynomial spans a rational 3-kernel when the root is
        // rational; check the image against an independently known quotient
        // by comparing j-invariants of the two sides of the 3-isogeny
        // relation via the modular polynomial evaluated by brute force:
        // here we only check the image is smooth and 3-isogenous in the
        // sense that applying the dual recovers j up to the known list of
        // neighbours.
        let f = PrimeField::new(13);
        let e = ShortModel::new(f.one(), f.zero());
        // psi_3 = 3x^4 + 6x^2 - 1; x = 4 is a root mod 13:
        // 3*256 + 6*16 - 1 = 863 = 66*13 + 5, not zero; search instead.
        let psi3 = crate::isogeny::division::odd_division_polynomial(&f, &e, 3);
        let mut root = None;
        for x in 0..13u64 {
            if f.is_zero(&Poly::eval(&f, &psi3, &x)) {
                root = Some(x);
                break;
            }
        }
        let root = root.expect("rational 3-torsion x-coordinate");
        let kernel = Poly::new(&f, vec![f.neg(&root), f.one()]);
        let image = isogeny_image(&f, &e, &kernel).unwrap();
        assert!(image.is_smooth(&f));
        // A 3-isogeny multiplies the degree of the composed dual to 9, so
        // pushing the kernel of the dual back must land on a curve with the
        // original j-invariant.
        let j0 = e.j_invariant(&f).unwrap();
        let psi3_image = crate::isogeny::division::odd_division_polynomial(&f, &image, 3);
        let mut back = None;
        for x in 0..13u64 {
            if f.is_zero(&Poly::eval(&f, &psi3_image, &x)) {
                let k = Poly::new(&f, vec![f.neg(&x), f.one()]);
                let cand = isogeny_image(&f, &image, &k).unwrap();
                if cand.j_invariant(&f).unwrap() == j0 {
                    back = Some(cand);
                    break;
                }
            }
        }
        assert!(back.is_some(), "no dual kernel recovers the original j");
    }
}
