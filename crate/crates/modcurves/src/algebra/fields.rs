//! Field contexts: Q, Q(sqrt d), Q(zeta_m), F_p and F_{p^k}.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use super::AlgebraError;

/// A field given as a context object; elements are plain data.
///
/// All operations borrow the context so that a single context can serve
/// arbitrarily many elements (polynomials, divisors, series coefficients).
pub trait Field {
    type Elem: Clone + Ord + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, AlgebraError>;

    /// Characteristic of the field; 0 in characteristic zero.
    fn characteristic(&self) -> u64;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, AlgebraError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// A finite field F_q with elements indexable by 0..q.
pub trait FiniteField: Field {
    /// The order q = p^k.
    fn order(&self) -> u64;

    fn from_index(&self, i: u64) -> Self::Elem;
    fn to_index(&self, a: &Self::Elem) -> u64;

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        self.from_index(rng.gen_range(0..self.order()))
    }
}

/// Square root in a finite field of odd order (Tonelli-Shanks).
pub fn ff_sqrt<F: FiniteField>(f: &F, a: &F::Elem) -> Option<F::Elem> {
    let q = f.order();
    debug_assert!(q % 2 == 1);
    if f.is_zero(a) {
        return Some(f.zero());
    }
    // Euler criterion.
    if !f.is_one(&f.pow(a, (q - 1) / 2)) {
        return None;
    }
    let mut t = q - 1;
    let mut s = 0u32;
    while t % 2 == 0 {
        t /= 2;
        s += 1;
    }
    if s == 1 {
        // q = 3 mod 4.
        return Some(f.pow(a, (q + 1) / 4));
    }
    // Deterministic search for a non-residue.
    let minus_one = f.neg(&f.one());
    let mut z = f.zero();
    for i in 2..q {
        let cand = f.from_index(i);
        if f.pow(&cand, (q - 1) / 2) == minus_one {
            z = cand;
            break;
        }
    }
    let mut m = s;
    let mut c = f.pow(&z, t);
    let mut u = f.pow(a, t);
    let mut r = f.pow(a, (t + 1) / 2);
    loop {
        if f.is_one(&u) {
            return Some(r);
        }
        // Least i with u^(2^i) = 1.
        let mut i = 0u32;
        let mut probe = u.clone();
        while !f.is_one(&probe) {
            probe = f.mul(&probe, &probe);
            i += 1;
        }
        let b = f.pow(&c, 1u64 << (m - i - 1));
        m = i;
        c = f.mul(&b, &b);
        u = f.mul(&u, &c);
        r = f.mul(&r, &b);
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// The field Q with `BigRational` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Rationals {
    /// Convenience constructor for n/d.
    pub fn frac(&self, n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
}

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational, AlgebraError> {
        if a.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

// ---------------------------------------------------------------------------
// Quadratic fields
// ---------------------------------------------------------------------------

/// An element a + b*sqrt(d) of a quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Quad {
    pub a: BigRational,
    pub b: BigRational,
}

impl Quad {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Quad { a, b }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

/// The field Q(sqrt d) for a squarefree integer d != 0, 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadField {
    pub d: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Self {
        assert!(d != 0 && d != 1, "d must not be 0 or 1");
        assert!(is_squarefree(d), "d = {} must be squarefree", d);
        QuadField { d }
    }

    /// The generator sqrt(d).
    pub fn gen(&self) -> Quad {
        Quad::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_rational(&self, r: &BigRational) -> Quad {
        Quad::new(r.clone(), BigRational::zero())
    }

    /// Galois conjugate a - b*sqrt(d).
    pub fn conj(&self, x: &Quad) -> Quad {
        Quad::new(x.a.clone(), -&x.b)
    }

    /// Norm a^2 - d b^2 down to Q.
    pub fn norm(&self, x: &Quad) -> BigRational {
        &x.a * &x.a - BigRational::from_integer(BigInt::from(self.d)) * &x.b * &x.b
    }

    /// Trace 2a down to Q.
    pub fn trace(&self, x: &Quad) -> BigRational {
        &x.a + &x.a
    }
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut f = 2u64;
    while f * f <= n {
        if n % (f * f) == 0 {
            return false;
        }
        while n % f == 0 {
            n /= f;
        }
        f += 1;
    }
    true
}

impl Field for QuadField {
    type Elem = Quad;

    fn zero(&self) -> Quad {
        Quad::new(BigRational::zero(), BigRational::zero())
    }
    fn one(&self) -> Quad {
        Quad::new(BigRational::one(), BigRational::zero())
    }
    fn from_i64(&self, n: i64) -> Quad {
        Quad::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }
    fn add(&self, x: &Quad, y: &Quad) -> Quad {
        Quad::new(&x.a + &y.a, &x.b + &y.b)
    }
    fn neg(&self, x: &Quad) -> Quad {
        Quad::new(-&x.a, -&x.b)
    }
    fn mul(&self, x: &Quad, y: &Quad) -> Quad {
        let d = BigRational::from_integer(BigInt::from(self.d));
        Quad::new(&x.a * &y.a + &d * &x.b * &y.b, &x.a * &y.b + &x.b * &y.a)
    }
    fn inv(&self, x: &Quad) -> Result<Quad, AlgebraError> {
        let n = self.norm(x);
        if n.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let c = self.conj(x);
        Ok(Quad::new(&c.a / &n, &c.b / &n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// The prime field F_p for an odd prime p < 2^32.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 32), "p must be an odd prime < 2^32");
        assert!(is_prime_u64(p), "p = {} must be prime", p);
        PrimeField { p }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3u64;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        let p = self.p as i64;
        (((n % p) + p) % p) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Result<u64, AlgebraError> {
        if *a == 0 {
            return Err(AlgebraError::DivisionByZero);
        }
        // Extended Euclid.
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            let r = r0 - q * r1;
            r0 = r1;
            r1 = r;
            let s = s0 - q * s1;
            s0 = s1;
            s1 = s;
        }
        debug_assert_eq!(r0, 1);
        let p = self.p as i128;
        Ok((((s0 % p) + p) % p) as u64)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> u64 {
        self.p
    }
    fn from_index(&self, i: u64) -> u64 {
        debug_assert!(i < self.p);
        i
    }
    fn to_index(&self, a: &u64) -> u64 {
        *a
    }
}

// ---------------------------------------------------------------------------
// Extension fields F_{p^k}
// ---------------------------------------------------------------------------

/// The field F_{p^k}, k >= 2, as F_p[x] modulo a monic irreducible polynomial.
///
/// Elements are coefficient vectors of fixed length k, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    base: PrimeField,
    k: usize,
    /// Monic modulus, constant first, length k+1.
    modulus: Vec<u64>,
}

impl ExtField {
    /// Build from an explicit monic irreducible modulus (not re-checked).
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        let base = PrimeField::new(p);
        let k = modulus.len() - 1;
        assert!(k >= 2, "use PrimeField for degree 1");
        assert_eq!(modulus[k], 1, "modulus must be monic");
        ExtField { base, k, modulus }
    }

    /// The field F_{p^k} with the lexicographically first monic irreducible
    /// modulus, so that repeated runs construct identical fields.
    pub fn of_degree(p: u64, k: usize) -> Self {
        let base = PrimeField::new(p);
        assert!(k >= 2);
        let mut counter = 0u64;
        let total = p.pow(k as u32);
        while counter < total {
            let mut m: Vec<u64> = Vec::with_capacity(k + 1);
            let mut c = counter;
            for _ in 0..k {
                m.push(c % p);
                c /= p;
            }
            m.push(1);
            if ext_modulus_irreducible(&base, &m) {
                return ExtField { base, k, modulus: m };
            }
            counter += 1;
        }
        unreachable!("irreducible polynomial of degree {} over F_{} exists", k, p)
    }

    pub fn p(&self) -> u64 {
        self.base.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The class of x, a generator of the field over F_p.
    pub fn gen(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        if self.k >= 2 {
            v[1] = 1;
        }
        v
    }

    /// Embed a base-field element.
    pub fn embed(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = a % self.base.p;
        v
    }

    fn reduce(&self, buf: &mut Vec<u64>) -> Vec<u64> {
        let p = self.base.p;
        // Subtract multiples of the monic modulus from the top down.
        while buf.len() > self.k {
            let top = buf.len() - 1;
            let c = buf[top];
            if c != 0 {
                let shift = top - self.k;
                for i in 0..self.k {
                    let t = (c as u128 * self.modulus[i] as u128) % p as u128;
                    let cur = buf[shift + i];
                    buf[shift + i] = if cur >= t as u64 {
                        cur - t as u64
                    } else {
                        cur + p - t as u64
                    };
                }
            }
            buf.pop();
        }
        buf.resize(self.k, 0);
        buf.clone()
    }
}

/// Irreducibility of a monic polynomial over F_p by the Frobenius criterion:
/// x^(p^k) = x mod m, and gcd(x^(p^(k/l)) - x, m) = 1 for each prime l | k.
fn ext_modulus_irreducible(base: &PrimeField, m: &[u64]) -> bool {
    let k = m.len() - 1;
    if m[0] == 0 {
        return false; // divisible by x
    }
    let frob = |v: &[u64]| -> Vec<u64> {
        // v^p mod m by square and multiply.
        let mut acc = vec![1u64];
        let mut b = v.to_vec();
        let mut e = base.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = raw_polymulmod(base, &acc, &b, m);
            }
            b = raw_polymulmod(base, &b, &b, m);
            e >>= 1;
        }
        acc
    };
    let x = vec![0u64, 1];
    let mut pow = x.clone();
    let mut pows = Vec::with_capacity(k);
    for _ in 0..k {
        pow = frob(&pow);
        pows.push(pow.clone());
    }
    if raw_trim(&pows[k - 1]) != raw_trim(&x) {
        return false;
    }
    let mut l = 2;
    let mut kk = k;
    while kk > 1 {
        if kk % l == 0 {
            let sub = &pows[k / l - 1];
            let mut diff = sub.clone();
            if diff.len() < 2 {
                diff.resize(2, 0);
            }
            diff[1] = if diff[1] >= 1 { diff[1] - 1 } else { base.p - 1 };
            if raw_polygcd_deg(base, &diff, m) != 0 {
                return false;
            }
            while kk % l == 0 {
                kk /= l;
            }
        }
        l += 1;
    }
    true
}

fn raw_trim(v: &[u64]) -> Vec<u64> {
    let mut v = v.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn raw_polymulmod(base: &PrimeField, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let p = base.p as u128;
    let mut buf = vec![0u64; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = (buf[i + j] as u128 + *ai as u128 * *bj as u128) % p;
            buf[i + j] = t as u64;
        }
    }
    // Reduce mod monic m.
    let k = m.len() - 1;
    while buf.len() > k {
        let top = buf.len() - 1;
        let c = buf[top];
        if c != 0 {
            let shift = top - k;
            for i in 0..k {
                let t = (c as u128 * m[i] as u128) % p;
                let cur = buf[shift + i];
                buf[shift + i] = if cur >= t as u64 {
                    cur - t as u64
                } else {
                    cur + base.p - t as u64
                };
            }
        }
        buf.pop();
    }
    while buf.last() == Some(&0) {
        buf.pop();
    }
    buf
}

/// Degree of gcd(a, b) over F_p (only the degree is needed).
fn raw_polygcd_deg(base: &PrimeField, a: &[u64], b: &[u64]) -> usize {
    let mut a = raw_trim(a);
    let mut b = raw_trim(b);
    while !b.is_empty() {
        // a mod b
        let lb_inv = base.inv(b.last().unwrap()).unwrap();
        while a.len() >= b.len() && !a.is_empty() {
            let c = base.mul(a.last().unwrap(), &lb_inv);
            if c != 0 {
                let shift = a.len() - b.len();
                for i in 0..b.len() {
                    let t = base.mul(&c, &b[i]);
                    a[shift + i] = base.sub(&a[shift + i], &t);
                }
            }
            a.pop();
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if a.is_empty() {
        usize::MAX // zero gcd; callers treat any nonzero degree as failure
    } else {
        a.len() - 1
    }
}

impl Field for ExtField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.embed(self.base.from_i64(n))
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| self.base.add(x, y))
            .collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.base.p as u128;
        let mut buf = vec![0u64; 2 * self.k - 1];
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let t = (buf[i + j] as u128 + *ai as u128 * *bj as u128) % p;
                buf[i + j] = t as u64;
            }
        }
        self.reduce(&mut buf)
    }
    fn inv(&self, a: &Vec<u64>) -> Result<Vec<u64>, AlgebraError> {
        if self.is_zero(a) {
            return Err(AlgebraError::DivisionByZero);
        }
        // Extended Euclid over F_p[x] against the modulus.
        let base = &self.base;
        let mut r0 = raw_trim(&self.modulus);
        let mut r1 = raw_trim(a);
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            // Divide r0 by r1.
            let mut q: Vec<u64> = vec![0; r0.len().saturating_sub(r1.len()) + 1];
            let lb_inv = base.inv(r1.last().unwrap()).unwrap();
            let mut rem = r0.clone();
            while rem.len() >= r1.len() && !rem.is_empty() {
                let c = base.mul(rem.last().unwrap(), &lb_inv);
                let shift = rem.len() - r1.len();
                q[shift] = c;
                if c != 0 {
                    for i in 0..r1.len() {
                        let t = base.mul(&c, &r1[i]);
                        rem[shift + i] = base.sub(&rem[shift + i], &t);
                    }
                }
                rem.pop();
                while rem.last() == Some(&0) {
                    rem.pop();
                }
            }
            // s = s0 - q*s1
            let mut qs1 = vec![0u64; q.len() + s1.len()];
            for (i, qi) in q.iter().enumerate() {
                for (j, sj) in s1.iter().enumerate() {
                    let t = base.mul(qi, sj);
                    qs1[i + j] = base.add(&qs1[i + j], &t);
                }
            }
            let n = s0.len().max(qs1.len());
            let mut s = vec![0u64; n];
            for i in 0..n {
                let x = s0.get(i).copied().unwrap_or(0);
                let y = qs1.get(i).copied().unwrap_or(0);
                s[i] = base.sub(&x, &y);
            }
            while s.last() == Some(&0) {
                s.pop();
            }
            r0 = r1;
            r1 = raw_trim(&rem);
            s0 = s1;
            s1 = s;
        }
        // r0 = gcd is a nonzero constant (modulus irreducible).
        debug_assert_eq!(r0.len(), 1);
        let c_inv = base.inv(&r0[0])?;
        let mut out: Vec<u64> = s0.iter().map(|x| base.mul(x, &c_inv)).collect();
        out.resize(self.k, 0);
        Ok(out)
    }
    fn characteristic(&self) -> u64 {
        self.base.p
    }
}

impl FiniteField for ExtField {
    fn order(&self) -> u64 {
        self.base.p.pow(self.k as u32)
    }
    fn from_index(&self, i: u64) -> Vec<u64> {
        let p = self.base.p;
        let mut v = Vec::with_capacity(self.k);
        let mut i = i;
        for _ in 0..self.k {
            v.push(i % p);
            i /= p;
        }
        v
    }
    fn to_index(&self, a: &Vec<u64>) -> u64 {
        let p = self.base.p;
        let mut idx = 0u64;
        for c in a.iter().rev() {
            idx = idx * p + c;
        }
        idx
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic fields
// ---------------------------------------------------------------------------

/// The cyclotomic field Q(zeta_m) as Q[x] modulo the m-th cyclotomic
/// polynomial; elements are coefficient vectors of fixed length phi(m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    m: u64,
    /// Phi_m, monic with integer coefficients, constant first.
    phi: Vec<BigRational>,
}

impl CyclotomicField {
    pub fn new(m: u64) -> Self {
        assert!(m >= 2);
        let phi = cyclotomic_polynomial(m);
        CyclotomicField { m, phi }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi_poly(&self) -> Poly<Rationals> {
        Poly::new(&Rationals, self.phi.clone())
    }

    /// The generator zeta_m.
    pub fn zeta(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree()];
        if self.degree() >= 2 {
            v[1] = BigRational::one();
        } else {
            // degree 1: zeta = root of linear phi, i.e. -phi[0]
            v[0] = -self.phi[0].clone();
        }
        v
    }

    /// zeta_m^j for any integer j (negative allowed).
    pub fn zeta_pow(&self, j: i64) -> Vec<BigRational> {
        let m = self.m as i64;
        let j = ((j % m) + m) % m;
        let mut acc = self.one();
        let z = self.zeta();
        for _ in 0..j {
            acc = self.mul(&acc, &z);
        }
        acc
    }

    pub fn from_rational(&self, r: &BigRational) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree()];
        v[0] = r.clone();
        v
    }

    /// If the element lies in Q, return it.
    pub fn to_rational(&self, a: &Vec<BigRational>) -> Option<BigRational> {
        if a.iter().skip(1).all(|c| c.is_zero()) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    /// Galois action zeta -> zeta^j for gcd(j, m) = 1.
    pub fn galois(&self, a: &Vec<BigRational>, j: i64) -> Vec<BigRational> {
        let mut acc = self.zero();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let zp = self.zeta_pow(j * i as i64);
            let term: Vec<BigRational> = zp.iter().map(|x| x * c).collect();
            acc = self.add(&acc, &term);
        }
        acc
    }

    fn reduce(&self, buf: &mut Vec<BigRational>) -> Vec<BigRational> {
        let k = self.degree();
        while buf.len() > k {
            let c = buf.pop().unwrap();
            if !c.is_zero() {
                let shift = buf.len() - k;
                for i in 0..k {
                    let t = &c * &self.phi[i];
                    buf[shift + i] -= t;
                }
            }
        }
        buf.resize(k, BigRational::zero());
        buf.clone()
    }
}

/// Phi_m by repeatedly dividing x^m - 1 by the cyclotomic polynomials of the
/// proper divisors of m.
fn cyclotomic_polynomial(m: u64) -> Vec<BigRational> {
    let q = Rationals;
    let mut num = vec![BigRational::zero(); m as usize + 1];
    num[0] = -BigRational::one();
    num[m as usize] = BigRational::one();
    let mut poly = Poly::new(&q, num);
    for d in 1..m {
        if m % d == 0 {
            let phi_d = Poly::new(&q, cyclotomic_polynomial(d));
            let (quot, rem) = Poly::divrem(&q, &poly, &phi_d).unwrap();
            debug_assert!(rem.is_zero());
            poly = quot;
        }
    }
    poly.into_coeffs()
}

impl Field for CyclotomicField {
    type Elem = Vec<BigRational>;

    fn zero(&self) -> Vec<BigRational> {
        vec![BigRational::zero(); self.degree()]
    }
    fn one(&self) -> Vec<BigRational> {
        self.from_rational(&BigRational::one())
    }
    fn from_i64(&self, n: i64) -> Vec<BigRational> {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
    }
    fn add(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> Vec<BigRational> {
        a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
    }
    fn neg(&self, a: &Vec<BigRational>) -> Vec<BigRational> {
        a.iter().map(|x| -x).collect()
    }
    fn mul(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> Vec<BigRational> {
        let k = self.degree();
        let mut buf = vec![BigRational::zero(); 2 * k - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    buf[i + j] += ai * bj;
                }
            }
        }
        self.reduce(&mut buf)
    }
    fn inv(&self, a: &Vec<BigRational>) -> Result<Vec<BigRational>, AlgebraError> {
        if self.is_zero(a) {
            return Err(AlgebraError::DivisionByZero);
        }
        let q = Rationals;
        let pa = Poly::new(&q, a.clone());
        let (g, s, _) = Poly::xgcd(&q, &pa, &self.phi_poly());
        // Phi_m is irreducible, so the gcd is a nonzero constant.
        debug_assert_eq!(g.deg(), 0);
        let c = g.coeff(&q, 0);
        let c_inv = c.recip();
        let mut out = s.into_coeffs();
        for x in out.iter_mut() {
            *x *= &c_inv;
        }
        out.resize(self.degree(), BigRational::zero());
        Ok(out)
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// Format a rational as "p" or "p/q" (used by serialization and reports).
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "p" or "p/q" into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// Integer square root check: if r = (a/b)^2 exactly, return a/b >= 0.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    /// Commutativity, associativity, distributivity, identities, inverses.
    fn check_axioms<F: Field>(f: &F, elems: &[F::Elem]) {
        for a in elems {
            assert_eq!(f.add(a, &f.zero()), *a);
            assert_eq!(f.mul(a, &f.one()), *a);
            assert!(f.is_zero(&f.add(a, &f.neg(a))));
            if !f.is_zero(a) {
                assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
                assert_eq!(f.div(&f.one(), a).unwrap(), f.inv(a).unwrap());
            }
            for b in elems {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.sub(a, b), f.add(a, &f.neg(b)));
                for c in elems {
                    assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
                    assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                    assert_eq!(
                        f.mul(a, &f.add(b, c)),
                        f.add(&f.mul(a, b), &f.mul(a, c))
                    );
                }
            }
        }
    }

    fn random_rationals(n: usize, seed: u64) -> Vec<BigRational> {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| q.frac(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
            .collect()
    }

    #[test]
    fn rationals_axioms() {
        check_axioms(&Rationals, &random_rationals(12, 1));
        assert_eq!(Rationals.characteristic(), 0);
    }

    #[test]
    fn quad_field_axioms() {
        for d in [5, -1, -143] {
            let k = QuadField::new(d);
            let elems: Vec<Quad> = random_rationals(24, 2)
                .chunks(2)
                .map(|c| Quad::new(c[0].clone(), c[1].clone()))
                .collect();
            check_axioms(&k, &elems);
        }
    }

    #[test]
    fn quad_field_norm_and_conj() {
        let k = QuadField::new(-143);
        let g = k.gen();
        // gen^2 = d.
        assert_eq!(k.mul(&g, &g), k.from_rational(&Rationals.from_i64(-143)));
        let elems: Vec<Quad> = random_rationals(20, 3)
            .chunks(2)
            .map(|c| Quad::new(c[0].clone(), c[1].clone()))
            .collect();
        for a in &elems {
            assert_eq!(k.conj(&k.conj(a)), *a);
            assert_eq!(k.norm(a), Rationals.mul(&k.mul(a, &k.conj(a)).a, &BigRational::one()));
            for b in &elems {
                assert_eq!(k.conj(&k.mul(a, b)), k.mul(&k.conj(a), &k.conj(b)));
                assert_eq!(
                    k.norm(&k.mul(a, b)),
                    Rationals.mul(&k.norm(a), &k.norm(b))
                );
            }
        }
    }

    #[test]
    fn prime_field_matches_integer_arithmetic() {
        let p = 10007u64;
        let f = PrimeField::new(p);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        check_axioms(&f, &(0..10).map(|_| f.random_elem(&mut rng)).collect::<Vec<_>>());
        for _ in 0..500 {
            let a = f.random_elem(&mut rng);
            let b = f.random_elem(&mut rng);
            assert_eq!(f.add(&a, &b), (a + b) % p);
            assert_eq!(f.mul(&a, &b), (a as u128 * b as u128 % p as u128) as u64);
            if b != 0 {
                let inv = f.inv(&b).unwrap();
                assert_eq!(f.mul(&b, &inv), 1);
            }
        }
        assert!(f.inv(&0).is_err());
    }

    #[test]
    fn primality_check() {
        let primes = [2u64, 3, 5, 7, 11, 10007, 1_000_003, 4_294_967_291];
        let composites = [0u64, 1, 4, 9, 91, 10005, 1_000_001, 4_294_967_295];
        for p in primes {
            assert!(is_prime_u64(p), "{p} is prime");
        }
        for n in composites {
            assert!(!is_prime_u64(n), "{n} is not prime");
        }
    }

    #[test]
    fn ext_field_lex_first_moduli() {
        // First monic irreducible in index order: x^2 + 1 over F_3 and F_7,
        // x^2 + 2 over F_5.
        assert_eq!(ExtField::of_degree(3, 2).modulus(), &[1, 0, 1]);
        assert_eq!(ExtField::of_degree(5, 2).modulus(), &[2, 0, 1]);
        assert_eq!(ExtField::of_degree(7, 2).modulus(), &[1, 0, 1]);
    }

    #[test]
    fn ext_field_axioms_and_frobenius() {
        for (p, k) in [(3u64, 2usize), (5, 3), (7, 2)] {
            let f = ExtField::of_degree(p, k);
            let q = f.order();
            assert_eq!(q, p.pow(k as u32));
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let elems: Vec<_> = (0..10).map(|_| f.random_elem(&mut rng)).collect();
            check_axioms(&f, &elems);
            for a in &elems {
                // Index round trip.
                assert_eq!(f.from_index(f.to_index(a)), *a);
                // Lagrange: a^q = a.
                assert_eq!(f.pow(a, q), *a);
                if !f.is_zero(a) {
                    assert!(f.is_one(&f.pow(a, q - 1)));
                }
                // Frobenius is additive.
                for b in &elems {
                    assert_eq!(
                        f.pow(&f.add(a, b), p),
                        f.add(&f.pow(a, p), &f.pow(b, p))
                    );
                }
            }
            // The generator satisfies the modulus.
            let g = f.gen();
            let modulus = Poly::new(&f, f.modulus().iter().map(|&c| f.embed(c)).collect());
            assert!(f.is_zero(&Poly::eval(&f, &modulus, &g)));
        }
    }

    #[test]
    fn ff_sqrt_all_elements() {
        // F_101 has 2^2 | p - 1, exercising the full Tonelli-Shanks loop.
        let f = PrimeField::new(101);
        let mut squares = 0usize;
        for i in 0..101u64 {
            match ff_sqrt(&f, &i) {
                Some(r) => {
                    assert_eq!(f.mul(&r, &r), i);
                    squares += 1;
                }
                None => assert_eq!(f.pow(&i, 50), 100),
            }
        }
        assert_eq!(squares, 51);

        let f9 = ExtField::of_degree(3, 2);
        let mut squares9 = 0usize;
        for i in 0..9u64 {
            let a = f9.from_index(i);
            if let Some(r) = ff_sqrt(&f9, &a) {
                assert_eq!(f9.mul(&r, &r), a);
                squares9 += 1;
            }
        }
        assert_eq!(squares9, 5);
    }

    #[test]
    fn cyclotomic_polynomials() {
        let k12 = CyclotomicField::new(12);
        assert_eq!(k12.degree(), 4);
        assert_eq!(
            k12.phi_poly(),
            Poly::from_i64(&Rationals, &[1, 0, -1, 0, 1])
        );
        let k20 = CyclotomicField::new(20);
        assert_eq!(k20.degree(), 8);
        assert_eq!(
            k20.phi_poly(),
            Poly::from_i64(&Rationals, &[1, 0, -1, 0, 1, 0, -1, 0, 1])
        );
    }

    #[test]
    fn cyclotomic_axioms_and_primitivity() {
        for m in [5u64, 12, 20] {
            let k = CyclotomicField::new(m);
            let deg = k.degree();
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            let q = Rationals;
            let elems: Vec<Vec<BigRational>> = (0..8)
                .map(|_| {
                    (0..deg)
                        .map(|_| q.frac(rng.gen_range(-4..=4), rng.gen_range(1..=4)))
                        .collect()
                })
                .collect();
            check_axioms(&k, &elems);
            // zeta^j = 1 exactly when m | j.
            for j in 1..=m {
                let z = k.zeta_pow(j as i64);
                assert_eq!(k.is_one(&z), j == m, "m={m} j={j}");
            }
            assert_eq!(k.zeta_pow(-1), k.inv(&k.zeta()).unwrap());
        }
    }

    #[test]
    fn cyclotomic_galois_action() {
        let k = CyclotomicField::new(12);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = Rationals;
        let elems: Vec<Vec<BigRational>> = (0..6)
            .map(|_| {
                (0..4)
                    .map(|_| q.frac(rng.gen_range(-4..=4), rng.gen_range(1..=4)))
                    .collect()
            })
            .collect();
        for j in [1i64, 5, 7, 11] {
            assert_eq!(k.galois(&k.zeta(), j), k.zeta_pow(j));
            for a in &elems {
                for b in &elems {
                    assert_eq!(
                        k.galois(&k.mul(a, b), j),
                        k.mul(&k.galois(a, j), &k.galois(b, j))
                    );
                }
                // sigma_j has order dividing 2 in (Z/12)^*.
                assert_eq!(k.galois(&k.galois(a, j), j), *a);
            }
        }
        // Rational elements are fixed by every automorphism.
        let r = k.from_rational(&q.frac(-7, 3));
        assert_eq!(k.galois(&r, 5), r);
        assert_eq!(k.to_rational(&r), Some(q.frac(-7, 3)));
        assert_eq!(k.to_rational(&k.zeta()), None);
    }

    #[test]
    fn rational_parsing_and_sqrt() {
        let q = Rationals;
        assert_eq!(parse_rational("3/4"), Some(q.frac(3, 4)));
        assert_eq!(parse_rational("-12"), Some(q.from_i64(-12)));
        assert_eq!(parse_rational("x"), None);
        for r in random_rationals(50, 8) {
            assert_eq!(parse_rational(&rational_string(&r)), Some(r.clone()));
            let sq = &r * &r;
            let root = rational_sqrt(&sq).unwrap();
            assert_eq!(&root * &root, sq);
        }
        assert_eq!(rational_sqrt(&q.frac(49, 4)), Some(q.frac(7, 2)));
        assert_eq!(rational_sqrt(&q.from_i64(2)), None);
        assert_eq!(rational_sqrt(&q.from_i64(-4)), None);
    }
}
