//! The cuspidal subgroup: divisor classes supported on the rational points.
//!
//! For the models in the dataset every rational point is a cusp, the number
//! of rational cusps of X_0(n) being #{d | n : gcd(d, n/d) <= 2}. The
//! subgroup of J(F_p) generated by differences of the reduced rational
//! points is computed as an explicit set; for good odd p not dividing the
//! subgroup order, reduction identifies it with the cuspidal subgroup over
//! Q, so its structure must not depend on p. That independence is a test
//! and a CLI check, not an assumption.

use crate::algebra::PrimeField;
use crate::jacobian::group::{
    structure_from_elements, subgroup_closure, GroupStructure,
};
use crate::jacobian::models::{
    rational_point_search, reduce_rational, CurveModel, RationalPoint, ReducedCurve,
};
use crate::jacobian::mumford::{Divisor, JacCurve};
use crate::jacobian::JacobianError;
use std::collections::BTreeSet;

/// The class [P - oo+] of a rational point reduced mod p.
pub fn reduced_point_class(
    model: &CurveModel,
    red: &ReducedCurve,
    jac: &JacCurve<PrimeField>,
    pt: &RationalPoint,
) -> Result<Divisor<PrimeField>, JacobianError> {
    let p = red.p();
    match pt {
        RationalPoint::Affine { x, y } => {
            let w = model.w_coord(x, y);
            let xbar = reduce_rational(x, &red.fp).ok_or(JacobianError::BadReduction {
                p,
                reason: "point denominator vanishes mod p".into(),
            })?;
            let wbar = reduce_rational(&w, &red.fp).ok_or(JacobianError::BadReduction {
                p,
                reason: "point denominator vanishes mod p".into(),
            })?;
            Ok(jac.point_class(&xbar, &wbar, true))
        }
        RationalPoint::Infinity { plus: true } => Ok(jac.zero()),
        // [oo- - oo+].
        RationalPoint::Infinity { plus: false } => Ok(jac.neg(&jac.infinity_diff())),
    }
}

/// The subgroup of J(F_p) generated by differences of rational points, as
/// an explicit set with its structure. Checks p does not divide the order.
pub fn cuspidal_subgroup(
    model: &CurveModel,
    p: u64,
    height: i64,
) -> Result<(BTreeSet<Divisor<PrimeField>>, GroupStructure), JacobianError> {
    let red = model.reduce(p)?;
    let jac = crate::jacobian::group::jac_context(&red);
    let pts = rational_point_search(model, height);
    if pts.is_empty() {
        return Ok((
            std::iter::once(jac.zero()).collect(),
            GroupStructure::trivial(),
        ));
    }
    let base = reduced_point_class(model, &red, &jac, &pts[0])?;
    let mut gens = Vec::new();
    for pt in &pts[1..] {
        let cls = reduced_point_class(model, &red, &jac, pt)?;
        gens.push(jac.sub(&cls, &base));
    }
    let set = subgroup_closure(&jac, &gens);
    let structure = structure_from_elements(&jac, &set);
    if structure.order() % p == 0 {
        return Err(JacobianError::BadReduction {
            p,
            reason: "p divides the cuspidal order; reduction need not be injective".into(),
        });
    }
    Ok((set, structure))
}

/// Cuspidal structure computed at several primes, with the p-independence
/// check. Returns the common structure and the primes used.
pub fn cuspidal_structure(
    model: &CurveModel,
    primes: &[u64],
    height: i64,
) -> Result<(GroupStructure, Vec<u64>), JacobianError> {
    let mut result: Option<GroupStructure> = None;
    let mut used = Vec::new();
    for &p in primes {
        if !model.is_good_prime(p) {
            continue;
        }
        let (_, st) = match cuspidal_subgroup(model, p, height) {
            Ok(v) => v,
            // p dividing the order: skip, another prime will serve.
            Err(JacobianError::BadReduction { .. }) => continue,
            Err(e) => return Err(e),
        };
        if let Some(prev) = &result {
            if *prev != st {
                return Err(JacobianError::Unsupported(format!(
                    "cuspidal structure at p = {p} is {}, earlier primes gave {}",
                    st.label(),
                    prev.label()
                )));
            }
        } else {
            result = Some(st);
        }
        used.push(p);
    }
    result
        .map(|st| (st, used))
        .ok_or_else(|| JacobianError::Unsupported("no usable prime".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::models::rational_cusp_count;
    use crate::qseries::Involution;

    fn model(n: u64, h: &[i64], f: &[i64]) -> CurveModel {
        CurveModel::from_i64(n, h, f, Involution::AtkinLehner(n)).unwrap()
    }

    #[test]
    fn level_23_cuspidal_is_z11() {
        let m = model(23, &[-1, -1, 0, -1], &[-2, 2, -3, 0, 0, -2]);
        for p in [3, 5, 7, 13] {
            let (set, st) = cuspidal_subgroup(&m, p, 10).unwrap();
            assert_eq!(set.len(), 11, "at p = {p}");
            assert_eq!(st.divisors, vec![11]);
        }
    }

    #[test]
    fn level_22_cuspidal_order_25() {
        // h = -x^3, f = -x^4 + 5x^3 - 10x^2 + 12x - 8.
        let m = model(22, &[0, 0, 0, -1], &[-8, 12, -10, 5, -1]);
        let (set, st) = cuspidal_subgroup(&m, 7, 10).unwrap();
        assert_eq!(set.len(), 25);
        assert_eq!(st.divisors, vec![5, 5]);
        // Four rational points on the model, matching the cusp count.
        assert_eq!(rational_point_search(&m, 10).len() as u64, rational_cusp_count(22));
    }

    #[test]
    fn level_30_cuspidal_structure() {
        let m = model(30, &[0, 0, -1, -1, -1], &[4, 28, 79, 121, 110, 60, 19, 3]);
        let (st, used) = cuspidal_structure(&m, &[7, 11, 13], 10).unwrap();
        assert_eq!(st.divisors, vec![2, 4, 24]);
        assert_eq!(st.order(), 192);
        assert_eq!(used, vec![7, 11, 13]);
    }

    #[test]
    fn level_33_and_39_cuspidal() {
        // p = 5 divides the cuspidal order 100, so reduction would not be
        // injective there; use p = 7 instead.
        let m33 = model(33, &[-1, 0, -1, 0, -1], &[8, -11, 20, -10, 11, -2, 2]);
        assert!(cuspidal_subgroup(&m33, 5, 10).is_err());
        let (_, st33) = cuspidal_subgroup(&m33, 7, 10).unwrap();
        assert_eq!(st33.divisors, vec![10, 10]);

        let m39 = model(39, &[-1, -1, -1, -1, -1], &[0, -2, 0, 2, -7, 2, 0, -2]);
        let (_, st39) = cuspidal_subgroup(&m39, 5, 10).unwrap();
        assert_eq!(st39.divisors, vec![2, 28]);
    }

    #[test]
    fn point_count_matches_cusp_rule_across_levels() {
        let models = [
            model(23, &[-1, -1, 0, -1], &[-2, 2, -3, 0, 0, -2]),
            model(30, &[0, 0, -1, -1, -1], &[4, 28, 79, 121, 110, 60, 19, 3]),
            model(33, &[-1, 0, -1, 0, -1], &[8, -11, 20, -10, 11, -2, 2]),
            model(39, &[-1, -1, -1, -1, -1], &[0, -2, 0, 2, -7, 2, 0, -2]),
        ];
        for m in &models {
            let pts = rational_point_search(m, 20);
            assert_eq!(pts.len() as u64, rational_cusp_count(m.n), "level {}", m.n);
        }
    }
}
