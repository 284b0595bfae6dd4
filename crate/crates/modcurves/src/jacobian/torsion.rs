//! Rational torsion of the Jacobians: reduction bounds, exact 2-torsion
//! over Q, and the mod 5 descent that settles level 48.
//!
//! The sandwich is cuspidal <= J(Q)_tors <= meet of the J(F_p) structures
//! over good odd p, where each prime constrains only the away-from-p part.
//! When the meet is still too big at 2, the exact Galois computation of
//! J(Q)[2] truncates the 2-part: the rational 2-torsion rank equals the
//! number of cyclic factors in the 2-primary part of J(Q)_tors.
//!
//! J(Q)[2] itself comes from the factorization of F: classes of even
//! stable sets of roots modulo the full set, plus classes whose root set is
//! swapped with its complement by a quadratic field Q(sqrt e) (possible
//! only when g is odd, and only when every irreducible factor of F splits
//! over that field; e is then supported on disc F).

use crate::algebra::{
    factor::{factor_q, factor_quad},
    Poly, PrimeField, QuadField, Rationals,
};
use crate::jacobian::count::jacobian_order;
use crate::jacobian::cusps::cuspidal_structure;
use crate::jacobian::group::{
    jac_context, structure_from_elements, sylow_subgroup, GroupStructure,
};
use crate::jacobian::models::{integer_discriminant, reduce_poly, CurveModel};
use crate::jacobian::mumford::Divisor;
use crate::jacobian::JacobianError;
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use std::collections::{BTreeMap, BTreeSet};

/// Meet of the structures J(F_p), each prime constraining only its
/// away-from-p part. Needs at least two distinct primes so every l has a
/// constraint.
pub fn structure_meet(per_prime: &[(u64, GroupStructure)]) -> GroupStructure {
    assert!(per_prime.len() >= 2, "need two primes to constrain every l");
    let mut all_primes: BTreeSet<u64> = BTreeSet::new();
    for (_, st) in per_prime {
        all_primes.extend(st.primes());
    }
    let mut parts = BTreeMap::new();
    for l in all_primes {
        let mut mins: Option<Vec<u32>> = None;
        let mut bounded = true;
        for (p, st) in per_prime {
            if *p == l {
                continue;
            }
            let part = st.sylow_exponents(l);
            if part.is_empty() {
                bounded = false;
                mins = None;
                break;
            }
            mins = Some(match mins {
                None => part,
                Some(prev) => prev
                    .iter()
                    .zip(part.iter())
                    .map(|(a, b)| *a.min(b))
                    .collect(),
            });
        }
        if !bounded {
            continue;
        }
        if let Some(v) = mins {
            let v: Vec<u32> = v.into_iter().filter(|&e| e > 0).collect();
            if !v.is_empty() {
                parts.insert(l, v);
            }
        }
    }
    GroupStructure::from_sylow_parts(&parts)
}

#[derive(Clone, Debug)]
pub struct TorsionBound {
    pub n: u64,
    pub cuspidal: GroupStructure,
    pub per_prime: Vec<(u64, GroupStructure)>,
    /// Raw meet of the per-prime structures.
    pub meet: GroupStructure,
    /// Meet with the 2-part truncated to the exact rational 2-torsion rank.
    pub refined: GroupStructure,
    pub two_torsion_rank: Option<usize>,
    /// Sandwich closed: refined equals the cuspidal structure.
    pub closed: bool,
}

/// Compute the sandwich for one model over the given primes.
pub fn torsion_bound(
    model: &CurveModel,
    primes: &[u64],
    height: i64,
    seed: u64,
) -> Result<TorsionBound, JacobianError> {
    let good: Vec<u64> = primes.iter().copied().filter(|&p| model.is_good_prime(p)).collect();
    if good.len() < 2 {
        return Err(JacobianError::Unsupported(
            "need at least two good primes for a torsion bound".into(),
        ));
    }
    let (cuspidal, _) = cuspidal_structure(model, &good, height)?;
    let mut per_prime = Vec::new();
    for &p in &good {
        let red = model.reduce(p)?;
        let (_, st) = crate::jacobian::group::group_structure_mod_p(&red, seed)?;
        per_prime.push((p, st));
    }
    let meet = structure_meet(&per_prime);
    assert!(
        cuspidal.is_subgroup_of(&meet),
        "cuspidal group embeds in every reduction"
    );

    // Exact 2-torsion refinement: J(Q)_tors has exactly `rank` cyclic
    // factors of even order, so the meet's 2-part truncates to that rank.
    let (refined, rank) = match rational_two_torsion(model, &good) {
        Ok(tt) => {
            let mut parts = BTreeMap::new();
            for l in meet.primes() {
                let mut part = meet.sylow_exponents(l);
                if l == 2 {
                    part.truncate(tt.rank);
                }
                if !part.is_empty() {
                    parts.insert(l, part);
                }
            }
            (GroupStructure::from_sylow_parts(&parts), Some(tt.rank))
        }
        Err(_) => (meet.clone(), None),
    };
    let closed = refined == cuspidal;
    Ok(TorsionBound {
        n: model.n,
        cuspidal,
        per_prime,
        meet,
        refined,
        two_torsion_rank: rank,
        closed,
    })
}

#[derive(Clone, Debug)]
pub struct TwoTorsion {
    /// dim_F2 J(Q)[2].
    pub rank: usize,
    /// Rank of the classes with Galois-stable root sets.
    pub stable_rank: usize,
    /// The quadratic discriminants e giving swapped root sets.
    pub swap_discs: Vec<i64>,
    pub factor_degrees: Vec<usize>,
    /// min over supplied good p of the 2-rank of J(F_p); the exact rank can
    /// be strictly smaller, which is the whole point of the computation.
    pub reduction_rank_bound: usize,
}

/// Distinct primes dividing a nonzero integer, by trial division; errors if
/// a cofactor above the trial bound remains composite-undecided.
fn distinct_prime_divisors(v: &BigInt) -> Result<Vec<u64>, JacobianError> {
    let mut m = v.magnitude().clone();
    let zero = BigUint::from(0u64);
    let mut out = Vec::new();
    let mut q = 2u64;
    while q <= 100_000 && !m.is_one() {
        if &m % q == zero {
            out.push(q);
            while &m % q == zero {
                m /= q;
            }
        }
        q += 1;
    }
    if !m.is_one() {
        return Err(JacobianError::Unsupported(format!(
            "discriminant has a large factor {m}"
        )));
    }
    Ok(out)
}

/// Exact computation of J(Q)[2] from the factorization of F over Q and
/// over the candidate quadratic fields.
pub fn rational_two_torsion(
    model: &CurveModel,
    reduction_primes: &[u64],
) -> Result<TwoTorsion, JacobianError> {
    let big_f = model.big_f();
    let g = model.genus();
    let factors = factor_q(&big_f);
    assert!(factors.iter().all(|(_, m)| *m == 1), "F is squarefree");
    let mut degrees: Vec<usize> = factors.iter().map(|(p, _)| p.deg() as usize).collect();
    degrees.sort_unstable();
    let t = degrees.len();
    let any_odd = degrees.iter().any(|d| d % 2 == 1);
    // Even-cardinality stable root subsets from unions of factors, modulo
    // the full set: dimension t (all unions) cut by parity if some factor
    // has odd degree, minus one for the complement relation.
    let stable_rank = if any_odd { t - 2 } else { t - 1 };

    // Swapped classes: a set T with sigma T = complement has |T| = g + 1,
    // which must be even, so only odd genus contributes. The field Q(sqrt e)
    // works iff every irreducible factor of F splits over it.
    let mut swap_discs = Vec::new();
    if g % 2 == 1 {
        let disc = integer_discriminant(&big_f).map_err(|e| {
            JacobianError::Unsupported(format!("discriminant: {e}"))
        })?;
        let primes = distinct_prime_divisors(&disc)?;
        let subsets = 1u32 << primes.len();
        for sign in [1i64, -1] {
            for mask in 0..subsets {
                let mut e: i64 = sign;
                for (i, &p) in primes.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        e = e.checked_mul(p as i64).expect("small discriminant support");
                    }
                }
                if e == 1 {
                    continue;
                }
                let k = QuadField::new(e);
                let splits_all = factors.iter().all(|(fac, _)| {
                    if fac.deg() % 2 == 1 {
                        // An odd-degree factor never splits over a
                        // quadratic field.
                        return false;
                    }
                    let fk = fac.map_coeffs(&k, |c| k.from_rational(c));
                    let kf = factor_quad(&k, &fk);
                    !(kf.len() == 1 && kf[0].1 == 1 && kf[0].0.deg() == fac.deg())
                });
                if splits_all {
                    swap_discs.push(e);
                }
            }
        }
    }
    let swaps = swap_discs.len() + 1;
    assert!(swaps.is_power_of_two(), "valid discriminants with 1 form a group");
    let rank = stable_rank + swaps.trailing_zeros() as usize;

    // Reduction cross-check: J(Q)[2] embeds into J(F_p)[2] for every good
    // odd p, so the exact rank can never exceed the minimum reduction rank.
    let mut bound = usize::MAX;
    for &p in reduction_primes {
        let red = model.reduce(p)?;
        let (_, order) = jacobian_order(&red)?;
        if order % 2 != 0 {
            bound = 0;
            break;
        }
        let jac = jac_context(&red);
        let syl = sylow_subgroup(&jac, order, 2, 17)?;
        let st = structure_from_elements(&jac, &syl);
        bound = bound.min(st.rank_at(2));
    }
    assert!(
        rank <= bound,
        "exact 2-torsion embeds in every good reduction"
    );
    Ok(TwoTorsion {
        rank,
        stable_rank,
        swap_discs,
        factor_degrees: degrees,
        reduction_rank_bound: bound,
    })
}

/// Everything the mod 5 descent at level 48 verifies.
#[derive(Clone, Debug)]
pub struct Descent48 {
    pub cuspidal: GroupStructure,
    pub full_group: GroupStructure,
    /// Number of nonzero classes of C/2C checked against 2 J(F_5).
    pub residues_checked: usize,
    /// C/2C injects into J(F_5)/2J(F_5).
    pub injective: bool,
    /// Control: the same test on 2C/4C reports every class in the kernel.
    pub control_all_kernel: bool,
}

/// The descent for the level 48 model: J(F_5) is a 2-group, so everything
/// can be enumerated, and injectivity of C/2C -> J(F_5)/2J(F_5) is a
/// finite check.
pub fn descent48_check(model: &CurveModel, height: i64) -> Result<Descent48, JacobianError> {
    assert_eq!(model.n, 48);
    let p = 5;
    let red = model.reduce(p)?;
    let (_, order) = jacobian_order(&red)?;
    assert!(order.is_power_of_two(), "J(F_5) is a 2-group at level 48");
    let jac = jac_context(&red);
    let full = sylow_subgroup(&jac, order, 2, 23)?;
    assert_eq!(full.len() as u64, order);
    let full_group = structure_from_elements(&jac, &full);

    let (cusp_set, cuspidal) = crate::jacobian::cusps::cuspidal_subgroup(model, p, height)?;

    let double = |set: &BTreeSet<Divisor<PrimeField>>| -> BTreeSet<Divisor<PrimeField>> {
        set.iter().map(|d| jac.add(d, d)).collect()
    };
    let two_j = double(&full);
    let two_c = double(&cusp_set);

    // Coset representatives of C / 2C.
    let mut reps: Vec<Divisor<PrimeField>> = Vec::new();
    for c in &cusp_set {
        let mut seen = false;
        for r in &reps {
            if two_c.contains(&jac.sub(c, r)) {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(c.clone());
        }
    }
    let nonzero: Vec<&Divisor<PrimeField>> =
        reps.iter().filter(|r| !two_c.contains(r)).collect();
    let injective = nonzero.iter().all(|r| !two_j.contains(r));

    // Control: 2C/4C maps to zero in J/2J, so the same membership test
    // must report kernel everywhere; this guards against a vacuous
    // injectivity test.
    let four_c = double(&two_c);
    let mut control_reps: Vec<Divisor<PrimeField>> = Vec::new();
    for c in &two_c {
        let mut seen = false;
        for r in &control_reps {
            if four_c.contains(&jac.sub(c, r)) {
                seen = true;
                break;
            }
        }
        if !seen {
            control_reps.push(c.clone());
        }
    }
    let control_all_kernel = control_reps.iter().all(|r| two_j.contains(r));

    Ok(Descent48 {
        cuspidal,
        full_group,
        residues_checked: nonzero.len(),
        injective,
        control_all_kernel,
    })
}

/// Order of the class [A - oo+ - oo-] in J(F_p), where A is the effective
/// divisor with Mumford pair (u, v) over Q (v in completed coordinates).
pub fn class_order_mod_p(
    model: &CurveModel,
    u: &Poly<Rationals>,
    v: &Poly<Rationals>,
    p: u64,
) -> Result<u64, JacobianError> {
    let red = model.reduce(p)?;
    let ubar = reduce_poly(u, &red.fp).ok_or(JacobianError::BadReduction {
        p,
        reason: "u does not reduce".into(),
    })?;
    let vbar = reduce_poly(v, &red.fp).ok_or(JacobianError::BadReduction {
        p,
        reason: "v does not reduce".into(),
    })?;
    if ubar.deg() != u.deg() {
        return Err(JacobianError::BadReduction { p, reason: "deg u drops".into() });
    }
    let jac = jac_context(&red);
    let kplus = (u.deg() + 1) / 2;
    let cls = jac.from_effective(&ubar, &vbar, kplus);
    let (_, order) = jacobian_order(&red)?;
    Ok(jac.class_order(&cls, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::Involution;

    fn model(n: u64, h: &[i64], f: &[i64]) -> CurveModel {
        CurveModel::from_i64(n, h, f, Involution::AtkinLehner(n)).unwrap()
    }

    fn m30() -> CurveModel {
        model(30, &[0, 0, -1, -1, -1], &[4, 28, 79, 121, 110, 60, 19, 3])
    }

    fn m46() -> CurveModel {
        model(
            46,
            &[-1, 0, 0, -1, 0, -1, -1],
            &[-2, 2, 3, 6, -16, 33, -29, 21, -7, 1, 1, -1],
        )
    }

    fn m48() -> CurveModel {
        model(48, &[], &[1, 0, 0, 0, 14, 0, 0, 0, 1])
    }

    #[test]
    fn meet_uses_only_foreign_primes() {
        // The p-part of J(F_p) must not constrain the meet at p.
        let a = (3u64, GroupStructure::from_elementary(vec![9, 18]));
        let b = (5u64, GroupStructure::from_elementary(vec![2, 18]));
        let meet = structure_meet(&[a, b]);
        // 3-part: only p=5 constrains: [2, 2] from 18, 9 -> wait: from
        // (2, 18): 3-exponents [2]; 2-part: only p=3 constrains: from
        // (9, 18): [1]; so meet = Z/2 x Z/9 ... exponents: 2-part [1],
        // 3-part [2].
        assert_eq!(meet.divisors, vec![18]);
    }

    #[test]
    fn two_torsion_level_30() {
        let tt = rational_two_torsion(&m30(), &[7, 11]).unwrap();
        assert_eq!(tt.factor_degrees, vec![2, 2, 4]);
        assert_eq!(tt.stable_rank, 2);
        assert_eq!(tt.swap_discs, vec![5]);
        assert_eq!(tt.rank, 3);
    }

    #[test]
    fn two_torsion_level_48() {
        let tt = rational_two_torsion(&m48(), &[5, 7]).unwrap();
        assert_eq!(tt.factor_degrees, vec![4, 4]);
        assert_eq!(tt.stable_rank, 1);
        assert_eq!(tt.swap_discs, vec![3, -1, -3]);
        assert_eq!(tt.rank, 3);
    }

    #[test]
    fn two_torsion_level_46_beats_reduction() {
        let tt = rational_two_torsion(&m46(), &[3, 5]).unwrap();
        assert_eq!(tt.factor_degrees, vec![3, 3, 6]);
        assert_eq!(tt.stable_rank, 1);
        assert!(tt.swap_discs.is_empty(), "cubic factors never split");
        assert_eq!(tt.rank, 1);
        // Reduction alone cannot see below rank 2 here.
        assert!(tt.reduction_rank_bound >= 2);
    }

    #[test]
    fn torsion_closes_level_23() {
        let m23 = model(23, &[-1, -1, 0, -1], &[-2, 2, -3, 0, 0, -2]);
        let tb = torsion_bound(&m23, &[3, 5, 7, 13], 10, 1).unwrap();
        assert_eq!(tb.cuspidal.divisors, vec![11]);
        assert_eq!(tb.refined.divisors, vec![11]);
        assert!(tb.closed);
    }

    #[test]
    fn torsion_closes_level_33() {
        let m33 = model(33, &[-1, 0, -1, 0, -1], &[8, -11, 20, -10, 11, -2, 2]);
        let tb = torsion_bound(&m33, &[5, 7], 10, 1).unwrap();
        assert_eq!(tb.cuspidal.divisors, vec![10, 10]);
        assert_eq!(tb.meet.divisors, vec![10, 10]);
        assert!(tb.closed);
    }

    #[test]
    fn descent_closes_level_48() {
        let d = descent48_check(&m48(), 10).unwrap();
        assert_eq!(d.cuspidal.divisors, vec![4, 4, 8]);
        assert_eq!(d.cuspidal.order(), 128);
        assert_eq!(d.full_group.divisors, vec![2, 4, 8, 8]);
        assert_eq!(d.residues_checked, 7);
        assert!(d.injective);
        assert!(d.control_all_kernel);
        // The cuspidal structure is a 2-group, so reduction is faithful at
        // every odd good prime; certify 128 is not an artifact of p = 5.
        let (st, used) =
            crate::jacobian::cusps::cuspidal_structure(&m48(), &[5, 7, 11, 13], 10).unwrap();
        assert_eq!(st.divisors, vec![4, 4, 8]);
        assert_eq!(used, vec![5, 7, 11, 13]);
    }
}
