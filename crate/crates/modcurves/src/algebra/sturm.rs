//! Sturm sequences and exact real root counting over Q.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::fields::Rationals;
use super::poly::Poly;

/// Sturm sequence of a squarefree polynomial: p0 = f, p1 = f',
/// p_{i+1} = -(p_{i-1} mod p_i).
fn sturm_sequence(f: &Poly<Rationals>) -> Vec<Poly<Rationals>> {
    let q = Rationals;
    let mut seq = vec![f.clone(), Poly::derivative(&q, f)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            return seq;
        }
        let r = Poly::rem(&q, &seq[n - 2], &seq[n - 1]).unwrap();
        if r.is_zero() {
            return seq;
        }
        seq.push(Poly::neg(&q, &r));
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(seq: &[Poly<Rationals>], x: &BigRational) -> usize {
    let q = Rationals;
    variations(seq.iter().map(|p| sign(&Poly::eval(&q, p, x))))
}

fn variations_at_infinity(seq: &[Poly<Rationals>], positive: bool) -> usize {
    variations(seq.iter().map(|p| {
        match p.lc() {
            None => 0,
            Some(lc) => {
                let s = sign(lc);
                if positive || p.deg() % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }))
}

/// Number of distinct real roots of f.
pub fn real_root_count(f: &Poly<Rationals>) -> usize {
    let q = Rationals;
    if f.deg() < 1 {
        return 0;
    }
    let sf = Poly::squarefree_part(&q, f);
    let seq = sturm_sequence(&sf);
    variations_at_infinity(&seq, false) - variations_at_infinity(&seq, true)
}

/// Number of distinct real roots of f in the half-open interval (a, b].
pub fn real_roots_in(f: &Poly<Rationals>, a: &BigRational, b: &BigRational) -> usize {
    let q = Rationals;
    assert!(a < b);
    if f.deg() < 1 {
        return 0;
    }
    let sf = Poly::squarefree_part(&q, f);
    let seq = sturm_sequence(&sf);
    variations_at(&seq, a) - variations_at(&seq, b)
}

/// True when f(x) < 0 for every real x.
pub fn negative_definite(f: &Poly<Rationals>) -> bool {
    let q = Rationals;
    if real_root_count(f) != 0 {
        return false;
    }
    sign(&Poly::eval(&q, f, &BigRational::zero())) < 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fields::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qp(coeffs: &[i64]) -> Poly<Rationals> {
        Poly::from_i64(&Rationals, coeffs)
    }

    #[test]
    fn known_root_counts() {
        assert_eq!(real_root_count(&qp(&[1, 0, 1])), 0); // x^2 + 1
        assert_eq!(real_root_count(&qp(&[-2, 0, 1])), 2); // x^2 - 2
        assert_eq!(real_root_count(&qp(&[0, -1, 0, 1])), 3); // x^3 - x
        assert_eq!(real_root_count(&qp(&[5, 1])), 1);
        // Repeated roots are counted once.
        let q = Rationals;
        let f = Poly::mul(
            &q,
            &Poly::pow(&q, &qp(&[-1, 1]), 2),
            &qp(&[2, 1]),
        );
        assert_eq!(real_root_count(&f), 2);
    }

    #[test]
    fn interval_counts_are_half_open() {
        let q = Rationals;
        // Roots at 1..6.
        let mut f = Poly::one(&q);
        for r in 1..=6i64 {
            f = Poly::mul(&q, &f, &qp(&[-r, 1]));
        }
        assert_eq!(real_root_count(&f), 6);
        assert_eq!(real_roots_in(&f, &q.frac(3, 2), &q.frac(9, 2)), 3);
        // (a, b] includes b and excludes a.
        assert_eq!(real_roots_in(&f, &q.from_i64(1), &q.from_i64(2)), 1);
        assert_eq!(real_roots_in(&f, &q.from_i64(0), &q.from_i64(1)), 1);
        assert_eq!(real_roots_in(&f, &q.from_i64(6), &q.from_i64(10)), 0);
    }

    #[test]
    fn randomized_product_counts() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for _ in 0..200 {
            // Distinct rational roots, padded with real-root-free quadratics.
            let mut roots: Vec<i64> = (0..rng.gen_range(0..=4)).map(|_| rng.gen_range(-20..=20)).collect();
            roots.sort();
            roots.dedup();
            let mut f = Poly::one(&q);
            for &r in &roots {
                f = Poly::mul(&q, &f, &qp(&[-r, 1]));
            }
            for _ in 0..rng.gen_range(0..=2) {
                let b = rng.gen_range(-5..=5);
                // x^2 + bx + c with b^2 < 4c keeps the factor root-free.
                let c = b * b / 4 + rng.gen_range(1..=6);
                f = Poly::mul(&q, &f, &qp(&[c, b, 1]));
            }
            assert_eq!(real_root_count(&f), roots.len());
        }
    }

    #[test]
    fn negative_definite_detection() {
        let q = Rationals;
        assert!(negative_definite(&qp(&[-1, 0, -1]))); // -x^2 - 1
        assert!(negative_definite(&qp(&[-2, 0, -3, 0, -1]))); // -x^4 - 3x^2 - 2
        assert!(!negative_definite(&qp(&[2, 0, -1]))); // -x^2 + 2 has real roots
        assert!(!negative_definite(&qp(&[1, 0, 1]))); // positive at 0
        assert!(!negative_definite(&qp(&[0, 0, -1]))); // root at 0
        let _ = q;
    }
}
