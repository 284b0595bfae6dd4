//! Dense univariate polynomials over a field context.
//!
//! Coefficients are stored constant term first with no trailing zeros, so the
//! zero polynomial has an empty coefficient vector and `deg` returns -1 for
//! it.  Every operation borrows the coefficient field context.

use super::fields::Field;
use super::AlgebraError;

pub struct Poly<F: Field> {
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Clone for Poly<F> {
    fn clone(&self) -> Self {
        Poly {
            coeffs: self.coeffs.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> PartialOrd for Poly<F> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> Ord for Poly<F> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl<F: Field> Poly<F> {
    pub fn new(f: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().map(|c| f.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(f: &F) -> Self {
        Poly {
            coeffs: vec![f.one()],
        }
    }

    pub fn constant(f: &F, c: F::Elem) -> Self {
        Poly::new(f, vec![c])
    }

    pub fn x(f: &F) -> Self {
        Poly {
            coeffs: vec![f.zero(), f.one()],
        }
    }

    pub fn monomial(f: &F, c: F::Elem, k: usize) -> Self {
        let mut v = vec![f.zero(); k + 1];
        v[k] = c;
        Poly::new(f, v)
    }

    pub fn from_i64(f: &F, coeffs: &[i64]) -> Self {
        Poly::new(f, coeffs.iter().map(|&n| f.from_i64(n)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with deg 0 = -1.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, f: &F, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    /// Leading coefficient; None for the zero polynomial.
    pub fn lc(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn eval(f: &F, a: &Self, x: &F::Elem) -> F::Elem {
        let mut acc = f.zero();
        for c in a.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    pub fn add(f: &F, a: &Self, b: &Self) -> Self {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.coeffs.get(i);
            let y = b.coeffs.get(i);
            v.push(match (x, y) {
                (Some(x), Some(y)) => f.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(f, v)
    }

    pub fn neg(f: &F, a: &Self) -> Self {
        Poly {
            coeffs: a.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn sub(f: &F, a: &Self, b: &Self) -> Self {
        Self::add(f, a, &Self::neg(f, b))
    }

    pub fn mul(f: &F, a: &Self, b: &Self) -> Self {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(x, y));
            }
        }
        Poly::new(f, v)
    }

    pub fn mul_scalar(f: &F, a: &Self, c: &F::Elem) -> Self {
        Poly::new(f, a.coeffs.iter().map(|x| f.mul(x, c)).collect())
    }

    /// Multiply by x^k.
    pub fn mul_xpow(f: &F, a: &Self, k: usize) -> Self {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![f.zero(); k];
        v.extend(a.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn divrem(f: &F, a: &Self, b: &Self) -> Result<(Self, Self), AlgebraError> {
        if b.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let db = b.coeffs.len();
        if a.coeffs.len() < db {
            return Ok((Poly::zero(), a.clone()));
        }
        let lb_inv = f.inv(b.lc().unwrap())?;
        let mut rem = a.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - db + 1];
        while rem.len() >= db {
            let c = f.mul(rem.last().unwrap(), &lb_inv);
            let shift = rem.len() - db;
            if !f.is_zero(&c) {
                quot[shift] = c.clone();
                for i in 0..db - 1 {
                    let t = f.mul(&c, &b.coeffs[i]);
                    rem[shift + i] = f.sub(&rem[shift + i], &t);
                }
            }
            rem.pop();
            while rem.last().map(|c| f.is_zero(c)).unwrap_or(false) {
                rem.pop();
            }
        }
        Ok((Poly::new(f, quot), Poly { coeffs: rem }))
    }

    pub fn rem(f: &F, a: &Self, b: &Self) -> Result<Self, AlgebraError> {
        Ok(Self::divrem(f, a, b)?.1)
    }

    /// Exact division; panics in debug builds if the remainder is nonzero.
    pub fn div_exact(f: &F, a: &Self, b: &Self) -> Result<Self, AlgebraError> {
        let (q, r) = Self::divrem(f, a, b)?;
        debug_assert!(r.is_zero(), "division was not exact");
        Ok(q)
    }

    pub fn monic(f: &F, a: &Self) -> Result<Self, AlgebraError> {
        let lc = a.lc().ok_or(AlgebraError::ZeroPolynomial)?;
        if f.is_one(lc) {
            return Ok(a.clone());
        }
        let inv = f.inv(lc)?;
        Ok(Self::mul_scalar(f, a, &inv))
    }

    /// Monic gcd.
    pub fn gcd(f: &F, a: &Self, b: &Self) -> Self {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = Self::rem(f, &a, &b).unwrap();
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            Self::monic(f, &a).unwrap()
        }
    }

    /// Extended gcd: returns (g, s, t) with s*a + t*b = g.
    /// g is not normalized to be monic.
    pub fn xgcd(f: &F, a: &Self, b: &Self) -> (Self, Self, Self) {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        let mut s0 = Poly::one(f);
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one(f);
        while !r1.is_zero() {
            let (q, r) = Self::divrem(f, &r0, &r1).unwrap();
            r0 = r1;
            r1 = r;
            let s = Self::sub(f, &s0, &Self::mul(f, &q, &s1));
            s0 = s1;
            s1 = s;
            let t = Self::sub(f, &t0, &Self::mul(f, &q, &t1));
            t0 = t1;
            t1 = t;
        }
        (r0, s0, t0)
    }

    pub fn derivative(f: &F, a: &Self) -> Self {
        if a.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut v = Vec::with_capacity(a.coeffs.len() - 1);
        for (i, c) in a.coeffs.iter().enumerate().skip(1) {
            v.push(f.mul(c, &f.from_i64(i as i64)));
        }
        Poly::new(f, v)
    }

    pub fn pow(f: &F, a: &Self, e: u64) -> Self {
        let mut acc = Poly::one(f);
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mul(f, &acc, &base);
            }
            base = Self::mul(f, &base, &base);
            e >>= 1;
        }
        acc
    }

    /// a^e mod m.
    pub fn powmod(f: &F, a: &Self, e: u128, m: &Self) -> Self {
        let mut acc = Poly::one(f);
        let mut base = Self::rem(f, a, m).unwrap();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::rem(f, &Self::mul(f, &acc, &base), m).unwrap();
            }
            base = Self::rem(f, &Self::mul(f, &base, &base), m).unwrap();
            e >>= 1;
        }
        acc
    }

    /// Composition a(b(x)).
    pub fn compose(f: &F, a: &Self, b: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in a.coeffs.iter().rev() {
            acc = Self::mul(f, &acc, b);
            acc = Self::add(f, &acc, &Poly::constant(f, c.clone()));
        }
        acc
    }

    /// Map the coefficients into another field.
    pub fn map_coeffs<G: Field>(
        &self,
        g: &G,
        map: impl Fn(&F::Elem) -> G::Elem,
    ) -> Poly<G> {
        Poly::new(g, self.coeffs.iter().map(|c| map(c)).collect())
    }

    /// Resultant via the Euclidean remainder sequence.
    pub fn resultant(f: &F, a: &Self, b: &Self) -> F::Elem {
        if a.is_zero() || b.is_zero() {
            return f.zero();
        }
        let mut a = a.clone();
        let mut b = b.clone();
        let mut acc = f.one();
        loop {
            if b.is_zero() {
                return if a.deg() == 0 { acc } else { f.zero() };
            }
            if b.deg() == 0 {
                // res(a, c) = c^deg(a)
                let c = b.lc().unwrap();
                return f.mul(&acc, &f.pow(c, a.deg() as u64));
            }
            let r = Self::rem(f, &a, &b).unwrap();
            let da = a.deg();
            let db = b.deg();
            let dr = r.deg(); // -1 if zero
            // res(a, b) = (-1)^(da db) lc(b)^(da - dr) res(b, r)
            let sign = if (da * db) % 2 == 1 {
                f.neg(&f.one())
            } else {
                f.one()
            };
            let exp = (da - dr.max(0)) as u64;
            let exp = if r.is_zero() { da as u64 } else { exp };
            acc = f.mul(&acc, &f.mul(&sign, &f.pow(b.lc().unwrap(), exp)));
            a = b;
            b = r;
            if b.is_zero() {
                return if a.deg() == 0 { acc } else { f.zero() };
            }
        }
    }

    /// Discriminant (-1)^(n(n-1)/2) res(a, a') / lc(a).
    pub fn discriminant(f: &F, a: &Self) -> Result<F::Elem, AlgebraError> {
        let n = a.deg();
        if n < 1 {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let res = Self::resultant(f, a, &Self::derivative(f, a));
        let lc_inv = f.inv(a.lc().unwrap())?;
        let d = f.mul(&res, &lc_inv);
        Ok(if (n * (n - 1) / 2) % 2 == 1 {
            f.neg(&d)
        } else {
            d
        })
    }

    /// Product of the distinct irreducible factors (characteristic 0 only).
    pub fn squarefree_part(f: &F, a: &Self) -> Self {
        debug_assert_eq!(f.characteristic(), 0);
        if a.deg() < 1 {
            return Self::monic(f, a).unwrap_or_else(|_| Poly::zero());
        }
        let g = Self::gcd(f, a, &Self::derivative(f, a));
        let q = Self::div_exact(f, a, &g).unwrap();
        Self::monic(f, &q).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fields::{FiniteField, PrimeField, Rationals};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_poly(f: &PrimeField, max_deg: usize, rng: &mut ChaCha8Rng) -> Poly<PrimeField> {
        let deg = rng.gen_range(0..=max_deg);
        Poly::new(f, (0..=deg).map(|_| rng.gen_range(0..97)).collect())
    }

    fn qp(coeffs: &[i64]) -> Poly<Rationals> {
        Poly::from_i64(&Rationals, coeffs)
    }

    #[test]
    fn division_identity() {
        let f = PrimeField::new(97);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..500 {
            let a = rand_poly(&f, 8, &mut rng);
            let b = rand_poly(&f, 5, &mut rng);
            if b.is_zero() {
                assert!(Poly::divrem(&f, &a, &b).is_err());
                continue;
            }
            let (q, r) = Poly::divrem(&f, &a, &b).unwrap();
            assert_eq!(Poly::add(&f, &Poly::mul(&f, &q, &b), &r), a);
            assert!(r.deg() < b.deg());
        }
    }

    #[test]
    fn gcd_divides_and_bezout() {
        let f = PrimeField::new(97);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let a = rand_poly(&f, 6, &mut rng);
            let b = rand_poly(&f, 6, &mut rng);
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let g = Poly::gcd(&f, &a, &b);
            assert_eq!(g.lc(), Some(&1));
            if !a.is_zero() {
                assert!(Poly::rem(&f, &a, &g).unwrap().is_zero());
            }
            if !b.is_zero() {
                assert!(Poly::rem(&f, &b, &g).unwrap().is_zero());
            }
            let (g2, s, t) = Poly::xgcd(&f, &a, &b);
            let combo = Poly::add(&f, &Poly::mul(&f, &s, &a), &Poly::mul(&f, &t, &b));
            assert_eq!(combo, g2);
            assert_eq!(Poly::monic(&f, &g2).unwrap(), g);
            // A shared factor is always detected.
            let h = rand_poly(&f, 3, &mut rng);
            if h.deg() >= 1 {
                let g3 = Poly::gcd(&f, &Poly::mul(&f, &a, &h), &Poly::mul(&f, &b, &h));
                if !(a.is_zero() && b.is_zero()) {
                    assert!(Poly::rem(&f, &g3, &h).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn resultant_detects_common_roots() {
        let f = PrimeField::new(97);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..300 {
            let a = rand_poly(&f, 5, &mut rng);
            let b = rand_poly(&f, 5, &mut rng);
            if a.is_zero() || b.is_zero() || a.deg() == 0 || b.deg() == 0 {
                continue;
            }
            let res = Poly::resultant(&f, &a, &b);
            let g = Poly::gcd(&f, &a, &b);
            assert_eq!(res == 0, g.deg() > 0);
            // Multiplicative in the first argument.
            let c = rand_poly(&f, 3, &mut rng);
            if !c.is_zero() {
                let lhs = Poly::resultant(&f, &Poly::mul(&f, &a, &c), &b);
                let rhs = f.mul(&res, &Poly::resultant(&f, &c, &b));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn resultant_as_root_product() {
        // res(f, g) = prod g(a_i) for monic f with roots a_i.
        let q = Rationals;
        let f = qp(&[-1, 1]); // x - 1
        let f = Poly::mul(&q, &f, &qp(&[-2, 1]));
        let f = Poly::mul(&q, &f, &qp(&[-3, 1]));
        let g = qp(&[2, 0, 5, 1]); // x^3 + 5x^2 + 2
        let expected = [1i64, 2, 3]
            .iter()
            .map(|&r| Poly::eval(&q, &g, &q.from_i64(r)))
            .fold(q.one(), |acc, v| q.mul(&acc, &v));
        assert_eq!(Poly::resultant(&q, &f, &g), expected);
    }

    #[test]
    fn discriminant_closed_forms() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let b = q.frac(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            let c = q.frac(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            // disc(x^2 + bx + c) = b^2 - 4c.
            let quad = Poly::new(&q, vec![c.clone(), b.clone(), q.one()]);
            let expect = q.sub(&q.mul(&b, &b), &q.mul(&q.from_i64(4), &c));
            assert_eq!(Poly::discriminant(&q, &quad).unwrap(), expect);
            // disc(x^3 + px + q) = -4p^3 - 27q^2.
            let cubic = Poly::new(&q, vec![c.clone(), b.clone(), q.zero(), q.one()]);
            let expect3 = q.sub(
                &q.mul(&q.from_i64(-4), &q.pow(&b, 3)),
                &q.mul(&q.from_i64(27), &q.mul(&c, &c)),
            );
            assert_eq!(Poly::discriminant(&q, &cubic).unwrap(), expect3);
        }
        // Squared root differences: disc((x-1)(x-2)(x-3)) = 4.
        let f = Poly::mul(&q, &Poly::mul(&q, &qp(&[-1, 1]), &qp(&[-2, 1])), &qp(&[-3, 1]));
        assert_eq!(Poly::discriminant(&q, &f).unwrap(), q.from_i64(4));
    }

    #[test]
    fn compose_matches_pointwise() {
        let f = PrimeField::new(97);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..200 {
            let a = rand_poly(&f, 5, &mut rng);
            let b = rand_poly(&f, 4, &mut rng);
            let c = Poly::compose(&f, &a, &b);
            let x = f.random_elem(&mut rng);
            let inner = Poly::eval(&f, &b, &x);
            assert_eq!(Poly::eval(&f, &c, &x), Poly::eval(&f, &a, &inner));
        }
    }

    #[test]
    fn powmod_matches_pow() {
        let f = PrimeField::new(97);
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..100 {
            let a = rand_poly(&f, 3, &mut rng);
            let mut m = rand_poly(&f, 4, &mut rng);
            if m.deg() < 1 {
                m = Poly::from_i64(&f, &[1, 3, 1]);
            }
            let e = rng.gen_range(0..20u64);
            let slow = Poly::rem(&f, &Poly::pow(&f, &a, e), &m).unwrap();
            assert_eq!(Poly::powmod(&f, &a, e as u128, &m), slow);
        }
    }

    #[test]
    fn derivative_product_rule() {
        let q = Rationals;
        let a = qp(&[3, -1, 0, 2, 7]);
        let b = qp(&[-5, 2, 1]);
        let lhs = Poly::derivative(&q, &Poly::mul(&q, &a, &b));
        let rhs = Poly::add(
            &q,
            &Poly::mul(&q, &Poly::derivative(&q, &a), &b),
            &Poly::mul(&q, &a, &Poly::derivative(&q, &b)),
        );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        let q = Rationals;
        // (x-1)^2 (x+2) -> (x-1)(x+2).
        let f = Poly::mul(
            &q,
            &Poly::mul(&q, &qp(&[-1, 1]), &qp(&[-1, 1])),
            &qp(&[2, 1]),
        );
        assert_eq!(Poly::squarefree_part(&q, &f), qp(&[-2, 1, 1]));
    }

    #[test]
    fn basic_shapes() {
        let q = Rationals;
        assert_eq!(Poly::<Rationals>::zero().deg(), -1);
        assert_eq!(Poly::one(&q).deg(), 0);
        assert_eq!(Poly::x(&q).deg(), 1);
        assert_eq!(qp(&[0, 0, 0]).deg(), -1); // trailing zeros trimmed
        assert_eq!(Poly::monomial(&q, q.from_i64(3), 4).deg(), 4);
        let f = qp(&[1, 2, 3]);
        assert_eq!(Poly::mul_xpow(&q, &f, 2), qp(&[0, 0, 1, 2, 3]));
        assert_eq!(f.coeff(&q, 7), q.zero());
        assert_eq!(
            Poly::mul_scalar(&q, &f, &q.from_i64(-2)),
            qp(&[-2, -4, -6])
        );
        let g = Poly::div_exact(&q, &Poly::mul(&q, &f, &qp(&[5, 1])), &qp(&[5, 1])).unwrap();
        assert_eq!(g, f);
    }
}
