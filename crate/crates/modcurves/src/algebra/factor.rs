//! Polynomial factorization over finite fields, Q, and quadratic fields.
//!
//! Finite fields use squarefree decomposition, distinct-degree splitting and
//! Cantor-Zassenhaus equal-degree splitting (odd order only).  Rational
//! factorization is Zassenhaus: factor modulo a good small prime, lift the
//! factors by quadratic Hensel steps past the Mignotte bound, then recombine
//! subsets.  Quadratic fields reduce to Q through norms (Trager's method).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::fields::{is_prime_u64, Field, FiniteField, PrimeField, Quad, QuadField, Rationals};
use super::poly::Poly;

// ---------------------------------------------------------------------------
// Finite fields
// ---------------------------------------------------------------------------

/// Factor a nonzero polynomial over a finite field of odd order into monic
/// irreducibles with multiplicities, sorted for determinism.
pub fn factor_ff<F: FiniteField>(
    f: &F,
    a: &Poly<F>,
    rng: &mut ChaCha8Rng,
) -> Vec<(Poly<F>, usize)> {
    assert!(!a.is_zero(), "cannot factor the zero polynomial");
    assert!(f.order() % 2 == 1);
    let monic = Poly::monic(f, a).unwrap();
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomp_ff(f, &monic) {
        for (g, d) in distinct_degree(f, &part) {
            for irred in equal_degree(f, &g, d, rng) {
                out.push((irred, mult));
            }
        }
    }
    out.sort();
    out
}

/// Roots in the base field, sorted, with multiplicity collapsed.
pub fn roots_ff<F: FiniteField>(f: &F, a: &Poly<F>, rng: &mut ChaCha8Rng) -> Vec<F::Elem> {
    let mut roots: Vec<F::Elem> = factor_ff(f, a, rng)
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| f.neg(&g.coeff(f, 0)))
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

/// Irreducibility over F_q by the Frobenius criterion.
pub fn is_irreducible_ff<F: FiniteField>(f: &F, a: &Poly<F>) -> bool {
    let n = a.deg();
    if n < 1 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let monic = Poly::monic(f, a).unwrap();
    let q = f.order() as u128;
    let x = Poly::x(f);
    // Iterated Frobenius x^(q^i) mod a.
    let mut pows = Vec::with_capacity(n as usize);
    let mut h = x.clone();
    for _ in 0..n {
        h = Poly::powmod(f, &h, q, &monic);
        pows.push(h.clone());
    }
    if pows[n as usize - 1] != Poly::rem(f, &x, &monic).unwrap() {
        return false;
    }
    let mut k = n as usize;
    let mut l = 2usize;
    while k > 1 {
        if k % l == 0 {
            let diff = Poly::sub(f, &pows[n as usize / l - 1], &x);
            if Poly::gcd(f, &diff, &monic).deg() != 0 {
                return false;
            }
            while k % l == 0 {
                k /= l;
            }
        }
        l += 1;
    }
    true
}

/// Squarefree decomposition in characteristic p (handles f' = 0 by taking
/// p-th roots).
fn squarefree_decomp_ff<F: FiniteField>(f: &F, a: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    let p = f.characteristic() as usize;
    if a.deg() < 1 {
        return Vec::new();
    }
    let da = Poly::derivative(f, a);
    if da.is_zero() {
        // a = b(x^p); recurse on the p-th root.
        let b = pth_root(f, a);
        return squarefree_decomp_ff(f, &b)
            .into_iter()
            .map(|(g, e)| (g, e * p))
            .collect();
    }
    let mut out = Vec::new();
    let c0 = Poly::gcd(f, a, &da);
    let mut b = Poly::div_exact(f, a, &c0).unwrap();
    let mut c = c0.clone();
    let mut i = 1usize;
    while b.deg() > 0 {
        let y = Poly::gcd(f, &b, &c);
        let z = Poly::div_exact(f, &b, &y).unwrap();
        if z.deg() > 0 {
            out.push((z, i));
        }
        c = Poly::div_exact(f, &c, &y).unwrap();
        b = y;
        i += 1;
    }
    // Whatever remains of c is a p-th power.
    if c.deg() > 0 {
        let b = pth_root(f, &c);
        for (g, e) in squarefree_decomp_ff(f, &b) {
            // Merge with existing entries of the same factor if any.
            out.push((g, e * p));
        }
    }
    merge_repeats(f, out)
}

fn merge_repeats<F: FiniteField>(
    _f: &F,
    mut list: Vec<(Poly<F>, usize)>,
) -> Vec<(Poly<F>, usize)> {
    list.sort();
    let mut out: Vec<(Poly<F>, usize)> = Vec::new();
    for (g, e) in list {
        if let Some(last) = out.last_mut() {
            if last.0 == g {
                last.1 += e;
                continue;
            }
        }
        out.push((g, e));
    }
    out
}

/// For a = b(x^p), recover b; coefficients need the inverse Frobenius
/// c -> c^(q/p).
fn pth_root<F: FiniteField>(f: &F, a: &Poly<F>) -> Poly<F> {
    let p = f.characteristic();
    let q = f.order();
    let e = q / p; // c^(q/p) is the p-th root of c in F_q
    let coeffs = a.coeffs();
    let mut v = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if i % p as usize == 0 {
            v.push(f.pow(c, e));
        } else {
            debug_assert!(f.is_zero(c));
        }
    }
    Poly::new(f, v)
}

/// Distinct-degree decomposition of a monic squarefree polynomial; returns
/// (product of irreducibles of degree d, d).
fn distinct_degree<F: FiniteField>(f: &F, a: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    let q = f.order() as u128;
    let mut out = Vec::new();
    let mut rest = a.clone();
    let x = Poly::x(f);
    let mut h = x.clone();
    let mut d = 0usize;
    while rest.deg() >= 2 * (d as i64 + 1) {
        d += 1;
        h = Poly::powmod(f, &h, q, &rest);
        let g = Poly::gcd(f, &Poly::sub(f, &h, &x), &rest);
        if g.deg() > 0 {
            out.push((g.clone(), d));
            rest = Poly::div_exact(f, &rest, &g).unwrap();
            h = Poly::rem(f, &h, &rest).unwrap();
        }
    }
    if rest.deg() > 0 {
        out.push((rest.clone(), rest.deg() as usize));
    }
    out
}

/// Cantor-Zassenhaus split of a monic product of degree-d irreducibles.
fn equal_degree<F: FiniteField>(
    f: &F,
    a: &Poly<F>,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Poly<F>> {
    if a.deg() == d as i64 {
        return vec![a.clone()];
    }
    let q = f.order() as u128;
    let e = (q.checked_pow(d as u32).expect("q^d overflows") - 1) / 2;
    loop {
        let r = Poly::new(
            f,
            (0..a.deg() as usize)
                .map(|_| f.random_elem(rng))
                .collect(),
        );
        if r.deg() < 1 {
            continue;
        }
        let s = Poly::powmod(f, &r, e, a);
        let s1 = Poly::sub(f, &s, &Poly::one(f));
        let t = Poly::gcd(f, &s1, a);
        if t.deg() > 0 && t.deg() < a.deg() {
            let rest = Poly::div_exact(f, a, &t).unwrap();
            let mut out = equal_degree(f, &t, d, rng);
            out.extend(equal_degree(f, &rest, d, rng));
            return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Characteristic zero: Yun's squarefree decomposition
// ---------------------------------------------------------------------------

/// Yun's algorithm; input any nonzero polynomial over a characteristic-zero
/// field, output monic squarefree parts with multiplicities.
pub fn squarefree_decomp_char0<F: Field>(f: &F, a: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    debug_assert_eq!(f.characteristic(), 0);
    assert!(!a.is_zero());
    if a.deg() < 1 {
        return Vec::new();
    }
    let a = Poly::monic(f, a).unwrap();
    let da = Poly::derivative(f, &a);
    let g = Poly::gcd(f, &a, &da);
    if g.deg() == 0 {
        return vec![(a, 1)];
    }
    let mut out = Vec::new();
    let mut b = Poly::div_exact(f, &a, &g).unwrap();
    let mut c = Poly::div_exact(f, &da, &g).unwrap();
    let mut d = Poly::sub(f, &c, &Poly::derivative(f, &b));
    let mut i = 1usize;
    while b.deg() > 0 {
        let gi = Poly::gcd(f, &b, &d);
        if gi.deg() > 0 {
            out.push((gi.clone(), i));
        }
        b = Poly::div_exact(f, &b, &gi).unwrap();
        c = Poly::div_exact(f, &d, &gi).unwrap();
        d = Poly::sub(f, &c, &Poly::derivative(f, &b));
        i += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Rationals: Zassenhaus
// ---------------------------------------------------------------------------

/// Factor a nonzero rational polynomial into monic irreducibles with
/// multiplicities, sorted for determinism.
pub fn factor_q(a: &Poly<Rationals>) -> Vec<(Poly<Rationals>, usize)> {
    let q = Rationals;
    assert!(!a.is_zero());
    if a.deg() < 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomp_char0(&q, a) {
        for g in zassenhaus_squarefree(&part) {
            out.push((g, mult));
        }
    }
    out.sort();
    out
}

/// Rational roots, sorted and deduplicated.
pub fn roots_q(a: &Poly<Rationals>) -> Vec<BigRational> {
    let q = Rationals;
    let mut roots: Vec<BigRational> = factor_q(a)
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| -g.coeff(&q, 0))
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

/// Primitive integer model of a rational polynomial: returns coefficients
/// with content 1 and positive leading coefficient.
fn to_integer_primitive(a: &Poly<Rationals>) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::one();
    for c in a.coeffs() {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let mut v: Vec<BigInt> = a
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let mut content = BigInt::zero();
    for c in &v {
        content = content.gcd(c);
    }
    if !content.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &content;
        }
    }
    if v.last().unwrap().is_negative() {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

fn zint_to_poly(v: &[BigInt]) -> Poly<Rationals> {
    Poly::new(
        &Rationals,
        v.iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect(),
    )
}

fn zassenhaus_squarefree(a: &Poly<Rationals>) -> Vec<Poly<Rationals>> {
    let q = Rationals;
    if a.deg() == 1 {
        return vec![Poly::monic(&q, a).unwrap()];
    }
    let fz = to_integer_primitive(a);
    let n = fz.len() - 1;

    // A prime not dividing the leading coefficient modulo which f stays
    // squarefree.
    let mut p = 3u64;
    let pf = loop {
        if is_prime_u64(p) {
            let pf = PrimeField::new(p);
            let lc_mod = mod_u64(&fz[n], p);
            if lc_mod != 0 {
                let fp = Poly::new(&pf, fz.iter().map(|c| mod_u64(c, p)).collect());
                let dfp = Poly::derivative(&pf, &fp);
                if !dfp.is_zero() && Poly::gcd(&pf, &fp, &dfp).deg() == 0 {
                    break pf;
                }
            }
        }
        p += 2;
    };
    let p = pf.p;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_fac7);
    let fp = Poly::new(&pf, fz.iter().map(|c| mod_u64(c, p)).collect());
    let local: Vec<Poly<PrimeField>> = factor_ff(&pf, &fp, &mut rng)
        .into_iter()
        .map(|(g, e)| {
            debug_assert_eq!(e, 1);
            g
        })
        .collect();
    if local.len() == 1 {
        return vec![Poly::monic(&q, a).unwrap()];
    }

    // Mignotte-style bound on factor coefficients, times the leading
    // coefficient: lift until the modulus exceeds twice this.
    let norm2: BigInt = fz.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound: BigInt = fz[n].abs() * (BigInt::one() << n) * norm2;
    let mut modulus = BigInt::from(p);
    let mut steps = 0usize;
    while modulus < (&bound << 1) + 1 {
        modulus = &modulus * &modulus;
        steps += 1;
    }

    // Monic model of fz modulo the lifted modulus.
    let lc_inv = int_inv_mod(&fz[n], &modulus);
    let f_monic: Vec<BigInt> = fz
        .iter()
        .map(|c| (c * &lc_inv).mod_floor(&modulus))
        .collect();
    let lifted = hensel_tree(&pf, &f_monic, &local, &modulus, steps);

    // Subset recombination.
    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut fz_cur = fz;
    let mut out: Vec<Poly<Rationals>> = Vec::new();
    'outer: loop {
        let r = remaining.len();
        if r == 0 {
            break;
        }
        for card in 1..=r / 2 {
            for mask in subsets_of_card(r, card) {
                let lc = fz_cur.last().unwrap().clone();
                let mut prod: Vec<BigInt> = vec![lc.mod_floor(&modulus)];
                for (i, g) in remaining.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        prod = zm_mul(&prod, g, &modulus);
                    }
                }
                let cand: Vec<BigInt> = prod.iter().map(|c| sym_mod(c, &modulus)).collect();
                let cand_prim = primitive_of(&cand);
                let cand_poly = zint_to_poly(&cand_prim);
                if cand_poly.deg() < 1 {
                    continue;
                }
                let fz_poly = zint_to_poly(&fz_cur);
                if let Ok((quot, rem)) = Poly::divrem(&q, &fz_poly, &cand_poly) {
                    if rem.is_zero() {
                        out.push(Poly::monic(&q, &cand_poly).unwrap());
                        fz_cur = to_integer_primitive(&quot);
                        let keep: Vec<Vec<BigInt>> = remaining
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask & (1 << i) == 0)
                            .map(|(_, g)| g.clone())
                            .collect();
                        remaining = keep;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    if fz_cur.len() > 1 {
        out.push(Poly::monic(&q, &zint_to_poly(&fz_cur)).unwrap());
    }
    out
}

fn subsets_of_card(n: usize, card: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for mask in 0u64..(1 << n) {
        if mask.count_ones() as usize == card {
            out.push(mask);
        }
    }
    out
}

fn mod_u64(c: &BigInt, p: u64) -> u64 {
    let m = c.mod_floor(&BigInt::from(p));
    let (_, digits) = m.to_u64_digits();
    *digits.first().unwrap_or(&0)
}

fn sym_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

fn int_inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn primitive_of(v: &[BigInt]) -> Vec<BigInt> {
    let mut v = v.to_vec();
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut content = BigInt::zero();
    for c in &v {
        content = content.gcd(c);
    }
    if !content.is_zero() && !content.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &content;
        }
    }
    if v.last().unwrap().is_negative() {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

// Integer polynomials modulo m, constant first, trimmed.

fn zm_trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn zm_norm(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    zm_trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn zm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        v.push((x + y).mod_floor(m));
    }
    zm_trim(v)
}

fn zm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        v.push((x - y).mod_floor(m));
    }
    zm_trim(v)
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    zm_norm(&v, m)
}

/// Division with remainder by a monic polynomial, coefficients mod m.
fn zm_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    debug_assert!(b.last().map(|c| c.is_one()).unwrap_or(false));
    let db = b.len();
    let mut rem = a.to_vec();
    if rem.len() < db {
        return (Vec::new(), zm_trim(rem));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db + 1];
    while rem.len() >= db {
        let c = rem.last().unwrap().clone();
        let shift = rem.len() - db;
        if !c.is_zero() {
            quot[shift] = c.clone();
            for i in 0..db - 1 {
                let t = (&rem[shift + i] - &c * &b[i]).mod_floor(m);
                rem[shift + i] = t;
            }
        }
        rem.pop();
        while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
            rem.pop();
        }
    }
    (zm_trim(quot), zm_trim(rem))
}

/// Lift the factorization f = prod(local) from mod p to the target modulus
/// by recursively splitting the factor list in half.
fn hensel_tree(
    pf: &PrimeField,
    f_monic: &[BigInt],
    local: &[Poly<PrimeField>],
    modulus: &BigInt,
    steps: usize,
) -> Vec<Vec<BigInt>> {
    if local.len() == 1 {
        return vec![f_monic.to_vec()];
    }
    let mid = local.len() / 2;
    let (left, right) = local.split_at(mid);
    let mut g0 = Poly::one(pf);
    for g in left {
        g0 = Poly::mul(pf, &g0, g);
    }
    let mut h0 = Poly::one(pf);
    for h in right {
        h0 = Poly::mul(pf, &h0, h);
    }
    // Bezout over F_p with deg s < deg h, deg t < deg g.
    let (d, s, _) = Poly::xgcd(pf, &g0, &h0);
    debug_assert_eq!(d.deg(), 0);
    let d_inv = pf.inv(d.lc().unwrap()).unwrap();
    let s = Poly::mul_scalar(pf, &s, &d_inv);
    let s = Poly::rem(pf, &s, &h0).unwrap();
    // t = (1 - s g)/h exactly.
    let one_minus = Poly::sub(pf, &Poly::one(pf), &Poly::mul(pf, &s, &g0));
    let t = Poly::div_exact(pf, &one_minus, &h0).unwrap();

    let p = pf.p;
    let to_z = |poly: &Poly<PrimeField>| -> Vec<BigInt> {
        poly.coeffs().iter().map(|&c| BigInt::from(c)).collect()
    };
    let mut g = to_z(&g0);
    let mut h = to_z(&h0);
    let mut s = to_z(&s);
    let mut t = to_z(&t);
    let mut m = BigInt::from(p);
    for _ in 0..steps {
        let m2 = &m * &m;
        let f_cur = zm_norm(f_monic, &m2);
        // e = f - g h
        let e = zm_sub(&f_cur, &zm_mul(&g, &h, &m2), &m2);
        let (qq, r) = zm_divrem_monic(&zm_mul(&s, &e, &m2), &h, &m2);
        let g_new = zm_add(&zm_add(&g, &zm_mul(&t, &e, &m2), &m2), &zm_mul(&qq, &g, &m2), &m2);
        let h_new = zm_add(&h, &r, &m2);
        // Update the Bezout pair.
        let b = zm_sub(
            &zm_add(&zm_mul(&s, &g_new, &m2), &zm_mul(&t, &h_new, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let (cc, dd) = zm_divrem_monic(&zm_mul(&s, &b, &m2), &h_new, &m2);
        let s_new = zm_sub(&s, &dd, &m2);
        let t_new = zm_sub(
            &t,
            &zm_add(&zm_mul(&t, &b, &m2), &zm_mul(&cc, &g_new, &m2), &m2),
            &m2,
        );
        g = g_new;
        h = h_new;
        s = s_new;
        t = t_new;
        m = m2;
    }
    let g = zm_norm(&g, modulus);
    let h = zm_norm(&h, modulus);
    debug_assert_eq!(
        zm_sub(&zm_norm(f_monic, modulus), &zm_mul(&g, &h, modulus), modulus),
        Vec::<BigInt>::new()
    );
    let mut out = hensel_tree(pf, &g, left, modulus, steps);
    out.extend(hensel_tree(pf, &h, right, modulus, steps));
    out
}

// ---------------------------------------------------------------------------
// Quadratic fields: Trager
// ---------------------------------------------------------------------------

/// Factor a nonzero polynomial over Q(sqrt d) into monic irreducibles with
/// multiplicities, sorted for determinism.
pub fn factor_quad(kf: &QuadField, a: &Poly<QuadField>) -> Vec<(Poly<QuadField>, usize)> {
    assert!(!a.is_zero());
    if a.deg() < 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomp_char0(kf, a) {
        for g in trager_squarefree(kf, &part) {
            out.push((g, mult));
        }
    }
    out.sort();
    out
}

/// Roots in Q(sqrt d), sorted.
pub fn roots_quad(kf: &QuadField, a: &Poly<QuadField>) -> Vec<Quad> {
    let mut roots: Vec<Quad> = factor_quad(kf, a)
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| kf.neg(&g.coeff(kf, 0)))
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

/// The norm of a polynomial down to Q: the product with its coefficientwise
/// conjugate, which must have rational coefficients.
fn norm_to_q(kf: &QuadField, a: &Poly<QuadField>) -> Poly<Rationals> {
    let conj = a.map_coeffs(kf, |c| kf.conj(c));
    let prod = Poly::mul(kf, a, &conj);
    Poly::new(
        &Rationals,
        prod.coeffs()
            .iter()
            .map(|c| {
                debug_assert!(c.is_rational());
                c.a.clone()
            })
            .collect(),
    )
}

fn trager_squarefree(kf: &QuadField, u: &Poly<QuadField>) -> Vec<Poly<QuadField>> {
    let q = Rationals;
    if u.deg() == 1 {
        return vec![u.clone()];
    }
    let alpha = kf.gen();
    // Shift until the norm becomes squarefree.
    let mut s = 0i64;
    let (shift_s, norm) = loop {
        let shift = Poly::new(
            kf,
            vec![
                kf.mul(&kf.from_i64(-s), &alpha),
                kf.one(),
            ],
        );
        let shifted = Poly::compose(kf, u, &shift);
        let norm = norm_to_q(kf, &shifted);
        let dn = Poly::derivative(&q, &norm);
        if !dn.is_zero() && Poly::gcd(&q, &norm, &dn).deg() == 0 {
            break (s, norm);
        }
        s += 1;
        assert!(s < 100, "no squarefree norm shift found");
    };
    let factors = factor_q(&norm);
    if factors.len() == 1 {
        return vec![u.clone()];
    }
    let unshift = Poly::new(
        kf,
        vec![kf.mul(&kf.from_i64(shift_s), &alpha), kf.one()],
    );
    let mut out = Vec::new();
    for (nj, _) in factors {
        let nj_k = nj.map_coeffs(kf, |c| kf.from_rational(c));
        let nj_shifted = Poly::compose(kf, &nj_k, &unshift);
        let g = Poly::gcd(kf, u, &nj_shifted);
        if g.deg() > 0 {
            out.push(g);
        }
    }
    debug_assert_eq!(
        out.iter().map(|g| g.deg()).sum::<i64>(),
        u.deg(),
        "norm factors must partition the polynomial"
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fields::PrimeField;
    use rand::Rng;

    fn qp(coeffs: &[i64]) -> Poly<Rationals> {
        Poly::from_i64(&Rationals, coeffs)
    }

    fn product<F: Field>(f: &F, factors: &[(Poly<F>, usize)]) -> Poly<F> {
        let mut acc = Poly::one(f);
        for (g, m) in factors {
            acc = Poly::mul(f, &acc, &Poly::pow(f, g, *m as u64));
        }
        acc
    }

    #[test]
    fn finite_field_factor_roundtrip() {
        for p in [3u64, 5, 7, 13] {
            let f = PrimeField::new(p);
            let mut rng = ChaCha8Rng::seed_from_u64(20 + p);
            for round in 0..120 {
                let deg = 1 + (round % 7) as usize;
                let mut coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
                if coeffs[deg] == 0 {
                    coeffs[deg] = 1;
                }
                let mut a = Poly::new(&f, coeffs);
                if round % 3 == 0 {
                    // Exercise repeated factors.
                    a = Poly::mul(&f, &a, &a);
                }
                let factors = factor_ff(&f, &a, &mut rng);
                assert_eq!(product(&f, &factors), Poly::monic(&f, &a).unwrap());
                let mut sorted = factors.clone();
                sorted.sort();
                assert_eq!(factors, sorted);
                for (g, _) in &factors {
                    assert!(is_irreducible_ff(&f, g), "p={p} factor {g:?}");
                    assert_eq!(g.lc(), Some(&1));
                }
            }
        }
    }

    #[test]
    fn finite_field_roots_match_scan() {
        let f = PrimeField::new(13);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let deg = rng.gen_range(1..=6usize);
            let mut coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..13)).collect();
            if coeffs[deg] == 0 {
                coeffs[deg] = 1;
            }
            let a = Poly::new(&f, coeffs);
            let by_factor = roots_ff(&f, &a, &mut rng);
            let by_scan: Vec<u64> = (0..13)
                .filter(|x| f.is_zero(&Poly::eval(&f, &a, x)))
                .collect();
            assert_eq!(by_factor, by_scan);
        }
    }

    #[test]
    fn irreducibility_oracles() {
        let f3 = PrimeField::new(3);
        let f5 = PrimeField::new(5);
        // x^2 + 1: -1 is a non-residue mod 3, a residue mod 5.
        assert!(is_irreducible_ff(&f3, &Poly::from_i64(&f3, &[1, 0, 1])));
        assert!(!is_irreducible_ff(&f5, &Poly::from_i64(&f5, &[1, 0, 1])));
        // x^3 + x + 1 has no root mod 5, so the cubic is irreducible.
        assert!(is_irreducible_ff(&f5, &Poly::from_i64(&f5, &[1, 1, 0, 1])));
        assert!(!is_irreducible_ff(&f5, &Poly::from_i64(&f5, &[1])));
    }

    #[test]
    fn rational_factor_known_splittings() {
        let q = Rationals;
        // x^4 - 1.
        let fac = factor_q(&qp(&[-1, 0, 0, 0, 1]));
        let mut expect = vec![(qp(&[-1, 1]), 1), (qp(&[1, 1]), 1), (qp(&[1, 0, 1]), 1)];
        expect.sort();
        assert_eq!(fac, expect);
        // x^12 - 1 is the product of the cyclotomic polynomials for d | 12.
        let fac12 = factor_q(&qp(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]));
        let mut expect12 = vec![
            (qp(&[-1, 1]), 1),
            (qp(&[1, 1]), 1),
            (qp(&[1, 0, 1]), 1),
            (qp(&[1, -1, 1]), 1),
            (qp(&[1, 1, 1]), 1),
            (qp(&[1, 0, -1, 0, 1]), 1),
        ];
        expect12.sort();
        assert_eq!(fac12, expect12);
        // Non-monic input: 6x^2 - 5x + 1 = 6(x - 1/2)(x - 1/3).
        let fac6 = factor_q(&qp(&[1, -5, 6]));
        let half = Poly::new(&q, vec![q.frac(-1, 2), q.one()]);
        let third = Poly::new(&q, vec![q.frac(-1, 3), q.one()]);
        let mut expect6 = vec![(half, 1), (third, 1)];
        expect6.sort();
        assert_eq!(fac6, expect6);
        assert_eq!(roots_q(&qp(&[1, -5, 6])), vec![q.frac(1, 3), q.frac(1, 2)]);
        // Swinnerton-Dyer quartic: reducible modulo every prime, irreducible
        // over Q, so the recombination search has to merge modular factors.
        assert_eq!(factor_q(&qp(&[1, 0, -10, 0, 1])).len(), 1);
        // Eisenstein at 2.
        assert_eq!(factor_q(&qp(&[-2, 0, 0, 0, 0, 0, 0, 0, 1])).len(), 1);
    }

    #[test]
    fn rational_factor_curve_discriminant_shapes() {
        // Branch loci that recur throughout the Jacobian computations, with
        // their irreducible factors pinned down.
        let q30 = [qp(&[1, 3, 1]), qp(&[4, 6, 1]), qp(&[4, 10, 11, 5, 1])];
        let q46 = [
            qp(&[-1, 3, -2, 1]),
            qp(&[7, -1, 1, 1]),
            qp(&[1, 2, 2, -1, 4, -1, 1]),
        ];
        let q48 = [qp(&[1, 2, 2, -2, 1]), qp(&[1, -2, 2, 2, 1])];
        for parts in [&q30[..], &q46[..], &q48[..]] {
            let f = Rationals;
            let mut input = Poly::one(&f);
            let mut expect = Vec::new();
            for g in parts {
                input = Poly::mul(&f, &input, g);
                expect.push((g.clone(), 1usize));
            }
            expect.sort();
            assert_eq!(factor_q(&input), expect);
        }
    }

    #[test]
    fn rational_factor_random_products() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..60 {
            let parts = rng.gen_range(2..=3usize);
            let mut input = Poly::one(&q);
            for _ in 0..parts {
                let deg = rng.gen_range(1..=3usize);
                let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-5..=5)).collect();
                if coeffs[deg] == 0 {
                    coeffs[deg] = 1;
                }
                input = Poly::mul(&q, &input, &qp(&coeffs));
            }
            let factors = factor_q(&input);
            assert_eq!(product(&q, &factors), Poly::monic(&q, &input).unwrap());
            for (g, _) in &factors {
                // Irreducible means the factor refuses to split further.
                assert_eq!(factor_q(g), vec![(g.clone(), 1)]);
            }
            // Squaring doubles every multiplicity.
            let squared = factor_q(&Poly::mul(&q, &input, &input));
            let doubled: Vec<_> = factors.iter().map(|(g, m)| (g.clone(), 2 * m)).collect();
            assert_eq!(squared, doubled);
        }
    }

    #[test]
    fn quadratic_field_factor_known_splittings() {
        let q = Rationals;
        let k5 = QuadField::new(5);
        // x^2 - 5 = (x - sqrt5)(x + sqrt5); the norm is a square, so the
        // Trager loop must shift before factoring.
        let x2m5 = qp(&[-5, 0, 1]).map_coeffs(&k5, |c| k5.from_rational(c));
        let fac = factor_quad(&k5, &x2m5);
        let root = k5.gen();
        let mut expect = vec![
            (Poly::new(&k5, vec![k5.neg(&root), k5.one()]), 1),
            (Poly::new(&k5, vec![root, k5.one()]), 1),
        ];
        expect.sort();
        assert_eq!(fac, expect);
        // The branch-locus quartic of level 30 splits over Q(sqrt5) into a
        // conjugate pair of quadratics and stays irreducible over Q(sqrt2).
        let quartic = qp(&[4, 10, 11, 5, 1]);
        let over5 = quartic.map_coeffs(&k5, |c| k5.from_rational(c));
        let fac5 = factor_quad(&k5, &over5);
        assert_eq!(fac5.len(), 2);
        let lo = Poly::new(
            &k5,
            vec![
                Quad::new(q.from_i64(3), q.from_i64(-1)),
                Quad::new(q.frac(5, 2), q.frac(-1, 2)),
                k5.one(),
            ],
        );
        let hi = Poly::new(
            &k5,
            vec![
                Quad::new(q.from_i64(3), q.from_i64(1)),
                Quad::new(q.frac(5, 2), q.frac(1, 2)),
                k5.one(),
            ],
        );
        assert_eq!(fac5, vec![(lo, 1), (hi, 1)]);
        let k2 = QuadField::new(2);
        let over2 = quartic.map_coeffs(&k2, |c| k2.from_rational(c));
        assert_eq!(factor_quad(&k2, &over2).len(), 1);
        // Gaussian rationals: x^2 + 1 splits, and the level-48 quartics break
        // into conjugate pairs with no fixed factor.
        let ki = QuadField::new(-1);
        let x2p1 = qp(&[1, 0, 1]).map_coeffs(&ki, |c| ki.from_rational(c));
        assert_eq!(factor_quad(&ki, &x2p1).len(), 2);
        for quartic in [qp(&[1, 2, 2, -2, 1]), qp(&[1, -2, 2, 2, 1])] {
            let over_i = quartic.map_coeffs(&ki, |c| ki.from_rational(c));
            let fac = factor_quad(&ki, &over_i);
            assert_eq!(fac.len(), 2);
            assert_eq!(fac[0].0.deg(), 2);
            let conj = Poly::new(
                &ki,
                fac[0].0.coeffs().iter().map(|c| ki.conj(c)).collect(),
            );
            assert_eq!(conj, fac[1].0);
        }
        // A cubic with no rational root cannot split over a quadratic field.
        let cubic = qp(&[-2, 0, 0, 1]);
        let over2 = cubic.map_coeffs(&k2, |c| k2.from_rational(c));
        assert_eq!(factor_quad(&k2, &over2).len(), 1);
    }

    #[test]
    fn quadratic_field_factor_random_products() {
        let q = Rationals;
        for d in [5i64, -1] {
            let k = QuadField::new(d);
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            for _ in 0..40 {
                let parts = rng.gen_range(2..=3usize);
                let mut input = Poly::one(&k);
                for _ in 0..parts {
                    let deg = rng.gen_range(1..=2usize);
                    let mut coeffs: Vec<Quad> = (0..=deg)
                        .map(|_| {
                            Quad::new(
                                q.from_i64(rng.gen_range(-3..=3)),
                                q.from_i64(rng.gen_range(-3..=3)),
                            )
                        })
                        .collect();
                    if k.is_zero(&coeffs[deg]) {
                        coeffs[deg] = k.one();
                    }
                    input = Poly::mul(&k, &input, &Poly::new(&k, coeffs));
                }
                let factors = factor_quad(&k, &input);
                assert_eq!(product(&k, &factors), Poly::monic(&k, &input).unwrap());
                for (g, _) in &factors {
                    assert_eq!(factor_quad(&k, g), vec![(g.clone(), 1)]);
                }
            }
        }
    }

    #[test]
    fn quadratic_field_roots() {
        let q = Rationals;
        let k5 = QuadField::new(5);
        // x^2 - x - 1 has roots (1 +- sqrt5)/2.
        let f = qp(&[-1, -1, 1]).map_coeffs(&k5, |c| k5.from_rational(c));
        let roots = roots_quad(&k5, &f);
        assert_eq!(
            roots,
            vec![
                Quad::new(q.frac(1, 2), q.frac(-1, 2)),
                Quad::new(q.frac(1, 2), q.frac(1, 2)),
            ]
        );
    }

    #[test]
    fn squarefree_decomposition() {
        let q = Rationals;
        // (x-1)^3 (x^2+1)^2.
        let a = Poly::mul(
            &q,
            &Poly::pow(&q, &qp(&[-1, 1]), 3),
            &Poly::pow(&q, &qp(&[1, 0, 1]), 2),
        );
        let parts = squarefree_decomp_char0(&q, &a);
        assert_eq!(parts, vec![(qp(&[1, 0, 1]), 2), (qp(&[-1, 1]), 3)]);
        // Constants have no factors.
        assert!(factor_q(&qp(&[7])).is_empty());
    }
}
