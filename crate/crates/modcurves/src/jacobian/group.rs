//! Structure of finite abelian groups realized as explicit sets of divisor
//! classes.
//!
//! The workhorse is order statistics: inside an abelian l-group, the count
//! c_k of elements killed by l^k determines the partition of exponents,
//! since the number of cyclic factors of exponent at least k is
//! log_l(c_k / c_{k-1}). Sylow subgroups of J(F_p) are produced as explicit
//! sets by multiplying random classes by the prime-to-l part of the group
//! order and closing under addition; the run is certified complete when the
//! set size reaches the full l-valuation, so the randomness only affects
//! how fast that happens, never the answer.

use crate::algebra::{factor::is_irreducible_ff, fields::ff_sqrt, ExtField, Field, FiniteField, Poly, PrimeField};
use crate::jacobian::count::{jacobian_order, LPolynomial};
use crate::jacobian::models::ReducedCurve;
use crate::jacobian::mumford::{Divisor, JacCurve};
use crate::jacobian::JacobianError;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Prime factorization by trial division, (prime, multiplicity) ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0);
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A finite abelian group in elementary divisor form: d_1 | d_2 | ... | d_r,
/// ascending, all > 1. The trivial group is the empty list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure {
    pub divisors: Vec<u64>,
}

impl GroupStructure {
    pub fn trivial() -> Self {
        GroupStructure { divisors: Vec::new() }
    }

    pub fn from_elementary(divisors: Vec<u64>) -> Self {
        for w in divisors.windows(2) {
            assert!(w[1] % w[0] == 0, "elementary divisors form a chain");
        }
        assert!(divisors.iter().all(|&d| d > 1));
        GroupStructure { divisors }
    }

    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.divisors.last().copied().unwrap_or(1)
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// "0" for the trivial group, otherwise "Z/d1 x Z/d2 x ...".
    pub fn label(&self) -> String {
        if self.divisors.is_empty() {
            "0".into()
        } else {
            self.divisors
                .iter()
                .map(|d| format!("Z/{d}"))
                .collect::<Vec<_>>()
                .join(" x ")
        }
    }

    /// Exponents of l in the elementary divisors, descending, zeros dropped.
    pub fn sylow_exponents(&self, l: u64) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .divisors
            .iter()
            .map(|&d| {
                let mut d = d;
                let mut e = 0;
                while d % l == 0 {
                    d /= l;
                    e += 1;
                }
                e
            })
            .filter(|&e| e > 0)
            .collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Primes dividing the order.
    pub fn primes(&self) -> Vec<u64> {
        factor_u64(self.order().max(1)).into_iter().map(|(l, _)| l).collect()
    }

    /// Rank of the l-torsion subgroup.
    pub fn rank_at(&self, l: u64) -> usize {
        self.sylow_exponents(l).len()
    }

    /// Assemble from per-prime exponent partitions (descending).
    pub fn from_sylow_parts(parts: &BTreeMap<u64, Vec<u32>>) -> Self {
        let rank = parts.values().map(|v| v.len()).max().unwrap_or(0);
        let mut divisors = Vec::new();
        for i in 0..rank {
            let mut d: u64 = 1;
            for (&l, v) in parts {
                if i < v.len() {
                    d *= l.pow(v[i]);
                }
            }
            divisors.push(d);
        }
        divisors.reverse();
        GroupStructure::from_elementary(divisors)
    }

    /// Whether a group with this structure embeds into `other`: for each
    /// prime, the descending exponent partitions compare componentwise.
    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        for l in self.primes() {
            let a = self.sylow_exponents(l);
            let b = other.sylow_exponents(l);
            if a.len() > b.len() {
                return false;
            }
            if a.iter().zip(b.iter()).any(|(x, y)| x > y) {
                return false;
            }
        }
        true
    }

    /// Greatest structure embedding in both: componentwise minimum of the
    /// per-prime partitions.
    pub fn meet(&self, other: &Self) -> Self {
        let mut primes: BTreeSet<u64> = self.primes().into_iter().collect();
        primes.extend(other.primes());
        let mut parts = BTreeMap::new();
        for l in primes {
            let a = self.sylow_exponents(l);
            let b = other.sylow_exponents(l);
            let mins: Vec<u32> = a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| *x.min(y))
                .filter(|&e| e > 0)
                .collect();
            if !mins.is_empty() {
                parts.insert(l, mins);
            }
        }
        GroupStructure::from_sylow_parts(&parts)
    }
}

/// Close a subgroup set under addition of one more generator.
pub fn extend_subgroup<F: Field + Clone>(
    jac: &JacCurve<F>,
    set: &mut BTreeSet<Divisor<F>>,
    gen: &Divisor<F>,
) {
    if set.contains(gen) {
        return;
    }
    // Cosets S, S + g, S + 2g, ... until a multiple of g falls back in S.
    let mut kg = gen.clone();
    let mut coset_reps = Vec::new();
    while !set.contains(&kg) {
        coset_reps.push(kg.clone());
        kg = jac.add(&kg, gen);
    }
    let base: Vec<Divisor<F>> = set.iter().cloned().collect();
    for rep in coset_reps {
        for b in &base {
            set.insert(jac.add(&rep, b));
        }
    }
}

/// Subgroup generated by the given classes, as an explicit set.
pub fn subgroup_closure<F: Field + Clone>(
    jac: &JacCurve<F>,
    gens: &[Divisor<F>],
) -> BTreeSet<Divisor<F>> {
    let mut set = BTreeSet::new();
    set.insert(jac.zero());
    for g in gens {
        extend_subgroup(jac, &mut set, g);
    }
    set
}

/// Structure of a finite subgroup given as an explicit closed set.
pub fn structure_from_elements<F: Field + Clone>(
    jac: &JacCurve<F>,
    set: &BTreeSet<Divisor<F>>,
) -> GroupStructure {
    let n = set.len() as u64;
    let mut parts = BTreeMap::new();
    for (l, e) in factor_u64(n) {
        // c_k = #elements killed by l^k; the partition falls out of the
        // successive quotients.
        let mut ranks = Vec::new();
        let mut prev = 1u64;
        for k in 1..=e {
            let lk = l.pow(k);
            let c = set
                .iter()
                .filter(|d| jac.is_zero_class(&jac.mul_i64(d, lk as i64)))
                .count() as u64;
            if c == prev {
                break;
            }
            let mut quot = c / prev;
            assert!(c % prev == 0);
            let mut r = 0;
            while quot > 1 {
                assert!(quot % l == 0, "quotients of kill counts are powers of l");
                quot /= l;
                r += 1;
            }
            ranks.push(r as u32);
            prev = c;
        }
        // ranks[k-1] = #factors with exponent >= k; transpose to exponents.
        let mut lambda = Vec::new();
        let total: u32 = {
            let rmax = ranks.first().copied().unwrap_or(0);
            for i in 1..=rmax {
                let exp = ranks.iter().filter(|&&r| r >= i).count() as u32;
                lambda.push(exp);
            }
            lambda.iter().sum()
        };
        assert_eq!(total, e, "partition accounts for the full l-part");
        lambda.sort_unstable_by(|a, b| b.cmp(a));
        parts.insert(l, lambda);
    }
    GroupStructure::from_sylow_parts(&parts)
}

/// A random class on J(F_p): a random irreducible u of degree <= g with a
/// square root of F mod u, balanced at infinity, plus an occasional shift
/// by the difference of the infinite points.
pub fn random_divisor(
    jac: &JacCurve<PrimeField>,
    rng: &mut ChaCha8Rng,
) -> Divisor<PrimeField> {
    let fp = *jac.field();
    let p = fp.order();
    let g = jac.genus();
    loop {
        let d = rng.gen_range(1..=g);
        let mut coeffs: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        coeffs.push(1);
        let u = Poly::new(&fp, coeffs);
        if u.deg() != d as i64 || !is_irreducible_ff(&fp, &u) {
            continue;
        }
        // F mod u lives in the field F_p[x]/u; take a square root there.
        let v = if d == 1 {
            let x0 = fp.neg(&u.coeff(&fp, 0));
            let fx = Poly::eval(&fp, jac.big_f(), &x0);
            match ff_sqrt(&fp, &fx) {
                Some(w) => Poly::constant(&fp, w),
                None => continue,
            }
        } else {
            let ext = ExtField::new(p, u.coeffs().to_vec());
            let mut fu = ext.zero();
            let alpha = ext.gen();
            for c in jac.big_f().coeffs().iter().rev() {
                fu = ext.add(&ext.mul(&fu, &alpha), &ext.embed(*c));
            }
            match ff_sqrt(&ext, &fu) {
                Some(w) => Poly::new(&fp, w),
                None => continue,
            }
        };
        let kplus = if jac.is_split() { rng.gen_range(0..=(d as i64)) } else { 0 };
        let mut cls = jac.from_effective(&u, &v, kplus);
        if jac.is_split() {
            let shift = rng.gen_range(0..=(g as i64));
            if shift > 0 {
                cls = jac.add(&cls, &jac.infinity_multiple(shift));
            }
        }
        return cls;
    }
}

/// The full l-Sylow subgroup of J(F_p) as an explicit set. `group_order`
/// must be |J(F_p)|. Certified by reaching size l^{v_l(order)}.
pub fn sylow_subgroup(
    jac: &JacCurve<PrimeField>,
    group_order: u64,
    l: u64,
    seed: u64,
) -> Result<BTreeSet<Divisor<PrimeField>>, JacobianError> {
    let e = {
        let mut n = group_order;
        let mut e = 0;
        while n % l == 0 {
            n /= l;
            e += 1;
        }
        e
    };
    let target = l.pow(e);
    let cofactor = (group_order / target) as i64;
    let mut set = BTreeSet::new();
    set.insert(jac.zero());
    if e == 0 {
        return Ok(set);
    }
    let p = jac.field().order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 20) ^ (l << 8));
    for _ in 0..400 {
        if set.len() as u64 == target {
            return Ok(set);
        }
        let d = random_divisor(jac, &mut rng);
        let x = jac.mul_i64(&d, cofactor);
        extend_subgroup(jac, &mut set, &x);
        debug_assert!(target % set.len() as u64 == 0);
    }
    if set.len() as u64 == target {
        Ok(set)
    } else {
        Err(JacobianError::Unsupported(format!(
            "could not fill the {l}-Sylow subgroup at p = {p}: \
             reached {} of {target}",
            set.len()
        )))
    }
}

/// Jacobian context over F_p for a reduced model.
pub fn jac_context(red: &ReducedCurve) -> JacCurve<PrimeField> {
    let sqrt_lc = if red.big_f.deg() % 2 == 0 {
        let lc = *red.big_f.lc().expect("F nonzero");
        Some(ff_sqrt(&red.fp, &lc).expect("leading coefficient is a square mod p"))
    } else {
        None
    };
    JacCurve::new(red.fp, red.big_f.clone(), sqrt_lc).expect("good reduction")
}

/// Order and full group structure of J(F_p), via per-prime Sylow sets.
pub fn group_structure_mod_p(
    red: &ReducedCurve,
    seed: u64,
) -> Result<(LPolynomial, GroupStructure), JacobianError> {
    let (l_poly, order) = jacobian_order(red)?;
    let jac = jac_context(red);
    let mut parts = BTreeMap::new();
    for (l, _) in factor_u64(order) {
        let syl = sylow_subgroup(&jac, order, l, seed)?;
        let st = structure_from_elements(&jac, &syl);
        let expo = st.sylow_exponents(l);
        if !expo.is_empty() {
            parts.insert(l, expo);
        }
    }
    let st = GroupStructure::from_sylow_parts(&parts);
    assert_eq!(st.order(), order, "Sylow parts multiply to L(1)");
    Ok((l_poly, st))
}
