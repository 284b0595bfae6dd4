//! Truncated q-expansions and the weight-2 Eisenstein identities used to pin
//! down the kernel-sum forms of the hyperelliptic involutions.
//!
//! Exponents are tracked as integers in units of q^(1/denom) so that the
//! half-integral expansions arising from subgroups generated by q^(1/2) times
//! a root of unity live in the same type as ordinary integral expansions.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{AlgebraError, CyclotomicField, Field, Poly, Rationals};

/// A truncated series sum of c_m q^(m/denom) over m < prec.
///
/// Zero coefficients are never stored, and no operation consults
/// coefficients at or beyond the precision bound.
pub struct Series<F: Field> {
    denom: u32,
    prec: i64,
    coeffs: BTreeMap<i64, F::Elem>,
}

impl<F: Field> Clone for Series<F> {
    fn clone(&self) -> Self {
        Series {
            denom: self.denom,
            prec: self.prec,
            coeffs: self.coeffs.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for Series<F> {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("Series")
            .field("denom", &self.denom)
            .field("prec", &self.prec)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<F: Field> PartialEq for Series<F> {
    fn eq(&self, other: &Self) -> bool {
        self.denom == other.denom && self.prec == other.prec && self.coeffs == other.coeffs
    }
}

impl<F: Field> Eq for Series<F> {}

impl<F: Field> Series<F> {
    pub fn new(f: &F, denom: u32, prec: i64, entries: Vec<(i64, F::Elem)>) -> Self {
        assert!(denom >= 1);
        let mut coeffs = BTreeMap::new();
        for (m, c) in entries {
            if m >= prec || f.is_zero(&c) {
                continue;
            }
            let cur = coeffs.remove(&m);
            let total = match cur {
                Some(prev) => f.add(&prev, &c),
                None => c,
            };
            if !f.is_zero(&total) {
                coeffs.insert(m, total);
            }
        }
        Series { denom, prec, coeffs }
    }

    pub fn zero(denom: u32, prec: i64) -> Self {
        assert!(denom >= 1);
        Series {
            denom,
            prec,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(f: &F, c: F::Elem, denom: u32, prec: i64) -> Self {
        Series::new(f, denom, prec, vec![(0, c)])
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, F::Elem> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of q^(m/denom); the exponent must be below the precision.
    pub fn coeff(&self, f: &F, m: i64) -> F::Elem {
        assert!(m < self.prec, "coefficient {m} beyond precision {}", self.prec);
        self.coeffs.get(&m).cloned().unwrap_or_else(|| f.zero())
    }

    /// Lower bound for the valuation: the least stored exponent, or the
    /// precision itself when no coefficient is known to be nonzero.
    pub fn valuation_bound(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.prec)
    }

    pub fn add(f: &F, a: &Self, b: &Self) -> Self {
        assert_eq!(a.denom, b.denom);
        let prec = a.prec.min(b.prec);
        let mut entries: Vec<(i64, F::Elem)> = Vec::new();
        for (&m, c) in &a.coeffs {
            entries.push((m, c.clone()));
        }
        for (&m, c) in &b.coeffs {
            entries.push((m, c.clone()));
        }
        Series::new(f, a.denom, prec, entries)
    }

    pub fn neg(f: &F, a: &Self) -> Self {
        let entries = a.coeffs.iter().map(|(&m, c)| (m, f.neg(c))).collect();
        Series::new(f, a.denom, a.prec, entries)
    }

    pub fn sub(f: &F, a: &Self, b: &Self) -> Self {
        Series::add(f, a, &Series::neg(f, b))
    }

    pub fn scale(f: &F, a: &Self, c: &F::Elem) -> Self {
        let entries = a.coeffs.iter().map(|(&m, v)| (m, f.mul(v, c))).collect();
        Series::new(f, a.denom, a.prec, entries)
    }

    /// Product, with the precision of the result reduced by the valuation
    /// bounds of the operands in the usual way.
    pub fn mul(f: &F, a: &Self, b: &Self) -> Self {
        assert_eq!(a.denom, b.denom);
        let prec = (a.prec + b.valuation_bound()).min(b.prec + a.valuation_bound());
        let mut entries = Vec::new();
        for (&ma, ca) in &a.coeffs {
            for (&mb, cb) in &b.coeffs {
                if ma + mb < prec {
                    entries.push((ma + mb, f.mul(ca, cb)));
                }
            }
        }
        Series::new(f, a.denom, prec, entries)
    }

    /// Reinterpret with exponent denominator multiplied by k (same series).
    pub fn upscale_denom(&self, k: u32) -> Self {
        assert!(k >= 1);
        Series {
            denom: self.denom * k,
            prec: self.prec * k as i64,
            coeffs: self.coeffs.iter().map(|(&m, c)| (m * k as i64, c.clone())).collect(),
        }
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Series {
            denom: self.denom,
            prec: self.prec.min(prec),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&m, _)| m < self.prec.min(prec))
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<G: Field>(&self, g: &G, map: impl Fn(&F::Elem) -> G::Elem) -> Series<G> {
        Series::new(
            g,
            self.denom,
            self.prec,
            self.coeffs.iter().map(|(&m, c)| (m, map(c))).collect(),
        )
    }

    /// Expansion of num/den as a power series; den must be invertible at 0.
    pub fn from_rational_function(
        f: &F,
        num: &Poly<F>,
        den: &Poly<F>,
        denom: u32,
        prec: i64,
    ) -> Result<Self, AlgebraError> {
        assert!(prec >= 0);
        let d0 = den.coeff(f, 0);
        let d0_inv = f.inv(&d0)?;
        // Power series inverse of den by the standard recurrence.
        let mut inv: Vec<F::Elem> = Vec::with_capacity(prec as usize);
        for k in 0..prec as usize {
            if k == 0 {
                inv.push(d0_inv.clone());
                continue;
            }
            let mut acc = f.zero();
            for i in 1..=k.min(den.deg().max(0) as usize) {
                acc = f.add(&acc, &f.mul(&den.coeff(f, i), &inv[k - i]));
            }
            inv.push(f.neg(&f.mul(&acc, &d0_inv)));
        }
        let mut entries = Vec::new();
        for (i, c) in num.coeffs().iter().enumerate() {
            for (k, v) in inv.iter().enumerate() {
                let m = (i + k) as i64;
                if m < prec {
                    entries.push((m, f.mul(c, v)));
                }
            }
        }
        Ok(Series::new(f, denom, prec, entries))
    }

    /// First exponent where the two series differ, scanning the exponents
    /// below both precisions; None means they agree on the common range.
    pub fn first_difference(f: &F, a: &Self, b: &Self) -> Option<i64> {
        assert_eq!(a.denom, b.denom);
        let prec = a.prec.min(b.prec);
        let mut exps: Vec<i64> = a
            .coeffs
            .keys()
            .chain(b.coeffs.keys())
            .copied()
            .filter(|&m| m < prec)
            .collect();
        exps.sort();
        exps.dedup();
        exps.into_iter().find(|&m| a.coeff(f, m) != b.coeff(f, m))
    }
}

/// Divisor power sums sigma_k(m) for 1 <= m < prec, by sieving.
fn sigma_sieve(power: u32, prec: i64) -> Vec<i64> {
    let n = prec.max(0) as usize;
    let mut out = vec![0i64; n];
    for d in 1..n as i64 {
        let dk = d.pow(power);
        let mut m = d;
        while m < n as i64 {
            out[m as usize] += dk;
            m += d;
        }
    }
    out
}

/// Level-one Eisenstein series of weight 2, 4 or 6, in the normalization
/// with q-coefficients sigma_1, sigma_3, sigma_5 and constant terms
/// -1/24, 1/240, -1/504.
pub fn eisenstein(weight: u32, prec: i64) -> Result<Series<Rationals>, AlgebraError> {
    assert!(prec >= 1);
    let q = Rationals;
    let (power, constant) = match weight {
        2 => (1, q.frac(-1, 24)),
        4 => (3, q.frac(1, 240)),
        6 => (5, q.frac(-1, 504)),
        _ => {
            return Err(AlgebraError::Unsupported(format!(
                "no Eisenstein series of weight {weight} here"
            )))
        }
    };
    let sig = sigma_sieve(power, prec);
    let mut entries = vec![(0, constant)];
    for (m, s) in sig.iter().enumerate().skip(1) {
        entries.push((m as i64, q.from_i64(*s)));
    }
    Ok(Series::new(&q, 1, prec, entries))
}

/// The weight-2 form E2(q) - d E2(q^d); holomorphic for d > 1, with constant
/// term (d-1)/24 and coefficient sigma_1(m) - d sigma_1(m/d) at q^m.
pub fn e2_level(d: u64, prec: i64) -> Result<Series<Rationals>, AlgebraError> {
    if d < 1 {
        return Err(AlgebraError::Unsupported(format!("bad level {d}")));
    }
    assert!(prec >= 1);
    let q = Rationals;
    let e2 = eisenstein(2, prec)?;
    let mut entries: Vec<(i64, BigRational)> = e2
        .coeffs()
        .iter()
        .map(|(&m, c)| (m, c.clone()))
        .collect();
    let di = d as i64;
    for (&m, c) in e2.coeffs() {
        if m * di < prec {
            entries.push((m * di, q.mul(&q.from_i64(-di), c)));
        }
    }
    Ok(Series::new(&q, 1, prec, entries))
}

/// The involutions whose kernel-sum forms are known in Eisenstein terms:
/// Atkin-Lehner w_d, and the two non-Atkin-Lehner hyperelliptic involutions,
/// induced by Ogg's matrices of determinant 20 (level 40) and 12 (level 48).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Involution {
    AtkinLehner(u64),
    Beta40,
    Beta48,
}

/// The weight-2 form A attached to an involution: the sum of the
/// x-coordinates of the nonzero points of the kernel subgroup C.
///
/// For Atkin-Lehner w_d this is -2d (E2(q) - d E2(q^d)); for the two
/// exceptional involutions it is the combination
/// 40(E2^(5) - 3 E2^(10) + E2^(20)) resp. 24(E2^(3) - 3 E2^(6) + E2^(12)).
pub fn a_gamma_series(inv: &Involution, prec: i64) -> Result<Series<Rationals>, AlgebraError> {
    let q = Rationals;
    match inv {
        Involution::AtkinLehner(d) => {
            let base = e2_level(*d, prec)?;
            Ok(Series::scale(&q, &base, &q.from_i64(-2 * *d as i64)))
        }
        Involution::Beta40 => {
            let mut acc = e2_level(5, prec)?;
            acc = Series::sub(
                &q,
                &acc,
                &Series::scale(&q, &e2_level(10, prec)?, &q.from_i64(3)),
            );
            acc = Series::add(&q, &acc, &e2_level(20, prec)?);
            Ok(Series::scale(&q, &acc, &q.from_i64(40)))
        }
        Involution::Beta48 => {
            let mut acc = e2_level(3, prec)?;
            acc = Series::sub(
                &q,
                &acc,
                &Series::scale(&q, &e2_level(6, prec)?, &q.from_i64(3)),
            );
            acc = Series::add(&q, &acc, &e2_level(12, prec)?);
            Ok(Series::scale(&q, &acc, &q.from_i64(24)))
        }
    }
}

/// The rational function S_m = m^2 x^m/(1-x^m)^2 - x/(1-x)^2 as a
/// numerator/denominator pair over the common denominator
/// (1-x^m)^2 (1-x)^2.
pub fn s_m_rational(m: u64) -> Result<(Poly<Rationals>, Poly<Rationals>), AlgebraError> {
    if m < 1 {
        return Err(AlgebraError::Unsupported("need m >= 1".into()));
    }
    let q = Rationals;
    let one_minus_x = Poly::from_i64(&q, &[1, -1]);
    let mut one_minus_xm = Poly::monomial(&q, q.from_i64(-1), m as usize);
    one_minus_xm = Poly::add(&q, &one_minus_xm, &Poly::one(&q));
    let sq = |p: &Poly<Rationals>| Poly::mul(&q, p, p);
    let num = Poly::sub(
        &q,
        &Poly::mul_scalar(
            &q,
            &Poly::mul_xpow(&q, &sq(&one_minus_x), m as usize),
            &q.from_i64((m * m) as i64),
        ),
        &Poly::mul_xpow(&q, &sq(&one_minus_xm), 1),
    );
    let den = Poly::mul(&q, &sq(&one_minus_xm), &sq(&one_minus_x));
    Ok((num, den))
}

/// The value S_m(1), computed as a genuine limit: after cancelling the
/// (1-x)^2 factor, both numerator and denominator still vanish to second
/// order at 1, so the value is the ratio of second derivatives there.
pub fn s_m_at_one(m: u64) -> Result<BigRational, AlgebraError> {
    if m < 1 {
        return Err(AlgebraError::Unsupported("need m >= 1".into()));
    }
    let q = Rationals;
    // S_m = g/h with g = m^2 x^m - x s(x)^2, h = (1-x)^2 s(x)^2, where
    // s = 1 + x + ... + x^(m-1).
    let s = Poly::new(&q, vec![q.one(); m as usize]);
    let s2 = Poly::mul(&q, &s, &s);
    let g = Poly::sub(
        &q,
        &Poly::monomial(&q, q.from_i64((m * m) as i64), m as usize),
        &Poly::mul_xpow(&q, &s2, 1),
    );
    if g.is_zero() {
        return Ok(q.zero());
    }
    let h = Poly::mul(&q, &Poly::from_i64(&q, &[1, -2, 1]), &s2);
    let one = q.one();
    let dd = |p: &Poly<Rationals>| {
        Poly::eval(&q, &Poly::derivative(&q, &Poly::derivative(&q, p)), &one)
    };
    let (g1, dg1) = (
        Poly::eval(&q, &g, &one),
        Poly::eval(&q, &Poly::derivative(&q, &g), &one),
    );
    assert!(g1.is_zero() && dg1.is_zero(), "limit is not 0/0 of order two");
    q.div(&dd(&g), &dd(&h))
}

/// Outcome of the subgroup-sum certification, with the first disagreeing
/// exponent (in units of q^(1/2)) when the two expansions differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub equal: bool,
    pub first_mismatch: Option<i64>,
}

/// Certify the Eisenstein expression for the kernel-sum form of a
/// non-Atkin-Lehner involution directly from its definition.
///
/// The kernel on the Tate curve is cyclic of order M (20 or 12), generated
/// by q^(1/2) zeta_M.  Each nonzero point contributes its x-coordinate
/// -2 E2(q) + sum over the Z-orbit of q^n zeta/(1-q^n zeta)^2, expanded in
/// Q(zeta_M)[[q^(1/2)]]: orbit members with positive exponent expand as
/// sum of l y^l, negative ones are first flipped through y -> 1/y (the
/// same symmetry as S_m(x) = S_m(1/x)), and exponent-zero members are
/// honest cyclotomic constants zeta/(1-zeta)^2.  The summed coefficients
/// must all descend to Q, and the result is compared with a_gamma_series.
///
/// `perturb` adds 1 to the stated coefficient of the direct expansion
/// before comparing; it exists as a negative control.
pub fn a_gamma_subgroup_oracle(
    which: &Involution,
    prec: i64,
    perturb: Option<i64>,
) -> Result<OracleVerdict, AlgebraError> {
    assert!(prec >= 2);
    let order: u64 = match which {
        Involution::Beta40 => 20,
        Involution::Beta48 => 12,
        Involution::AtkinLehner(_) => {
            return Err(AlgebraError::Unsupported(
                "subgroup certification only covers the two exceptional involutions".into(),
            ))
        }
    };
    let k = CyclotomicField::new(order);
    let q = Rationals;
    let prec2 = 2 * prec;

    // -2 (#C - 1) E2(q), embedded with doubled exponents.
    let e2 = eisenstein(2, prec)?;
    let mut lhs = e2
        .map_coeffs(&k, |c| k.from_rational(c))
        .upscale_denom(2);
    lhs = Series::scale(&k, &lhs, &k.from_rational(&q.from_i64(-2 * (order as i64 - 1))));

    let mut extra: Vec<(i64, Vec<BigRational>)> = Vec::new();
    for j in 1..order as i64 {
        // Orbit members q^(e/2) zeta^j with e = 2n + j, n over Z.
        // Positive and negative e are mirror images; e ranges over all
        // integers of the parity of j.
        let mut e = if j % 2 == 0 { 2 } else { 1 };
        while e < prec2 {
            let mut l = 1;
            while e * l < prec2 {
                let root_sum = k.add(&k.zeta_pow(j * l), &k.zeta_pow(-j * l));
                extra.push((e * l, k.mul(&k.from_rational(&q.from_i64(l)), &root_sum)));
                l += 1;
            }
            e += 2;
        }
        if j % 2 == 0 {
            // The member with exponent zero is the constant zeta^j/(1-zeta^j)^2.
            let z = k.zeta_pow(j);
            let denom = k.mul(
                &k.sub(&k.one(), &z),
                &k.sub(&k.one(), &z),
            );
            extra.push((0, k.mul(&z, &k.inv(&denom)?)));
        }
    }
    lhs = Series::add(&k, &lhs, &Series::new(&k, 2, prec2, extra));

    if let Some(m) = perturb {
        let bump = Series::new(&k, 2, prec2, vec![(m, k.one())]);
        lhs = Series::add(&k, &lhs, &bump);
    }

    // Every coefficient must collapse to a rational number.
    let lhs_q = lhs.map_coeffs(&q, |c| {
        k.to_rational(c)
            .expect("subgroup sum failed to descend to rational coefficients")
    });

    let rhs = a_gamma_series(which, prec)?.upscale_denom(2);
    let first_mismatch = Series::first_difference(&q, &lhs_q, &rhs);
    Ok(OracleVerdict {
        equal: first_mismatch.is_none(),
        first_mismatch,
    })
}
