//! Exact divisor class arithmetic on hyperelliptic Jacobians in balanced
//! Mumford form.
//!
//! The curve is w^2 = F(x) with deg F = 2g + 2 and square leading
//! coefficient c^2 (the split case: two points oo+ and oo- at infinity), or
//! deg F = 2g + 1 (the ramified case: one point at infinity, used by a few
//! tests and toy models). Characteristic 2 is excluded.
//!
//! A class is stored as (u, v, n): u monic with deg u <= g, v reduced mod u
//! with u | F - v^2, and 0 <= n <= g - deg u. It denotes
//!
//!     [ A(u, v) + n oo+ + (g - deg u - n) oo- - B ],
//!
//! where A(u, v) is the affine divisor cut out by u with w = v(x), and
//! B = ceil(g/2) oo+ + floor(g/2) oo- is the fixed base divisor. Every
//! class has exactly one such representative, which the small field
//! enumeration test certifies by counting against the zeta function. In the
//! ramified case n is carried as 0 and B = g oo.
//!
//! Reduction uses lifts of v adapted to one of the infinite points. With
//! V the degree g+1 polynomial such that deg(F - V^2) <= g and lc V = c,
//! the oo+ adapted lift is vhat = V - ((V - v) mod u); replacing
//! (u, v) by (monic((F - vhat^2)/u), -vhat mod u) moves the class by
//! div(w - vhat(x)) and changes n by deg u - (g + 1 - deg u'') bookkeeping
//! worked out below. One adapted step always brings deg u to at most g, and
//! each further oo+ step decreases n by g + 1 - deg u, so normalization
//! terminates.

use crate::algebra::{Field, Poly};
use crate::jacobian::JacobianError;

/// A divisor class in balanced Mumford form. Ordering is derived so classes
/// can live in BTreeSets; it has no arithmetic meaning.
pub struct Divisor<F: Field> {
    pub u: Poly<F>,
    pub v: Poly<F>,
    pub n: i64,
}

impl<F: Field> Clone for Divisor<F> {
    fn clone(&self) -> Self {
        Divisor { u: self.u.clone(), v: self.v.clone(), n: self.n }
    }
}

impl<F: Field> std::fmt::Debug for Divisor<F> {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "Divisor(u={:?}, v={:?}, n={})", self.u, self.v, self.n)
    }
}

impl<F: Field> PartialEq for Divisor<F> {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v && self.n == other.n
    }
}

impl<F: Field> Eq for Divisor<F> {}

impl<F: Field> PartialOrd for Divisor<F> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> Ord for Divisor<F> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.u, &self.v, self.n).cmp(&(&other.u, &other.v, other.n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Parity {
    /// deg F = 2g + 2, lc F = c^2; carries c and the square root
    /// approximation V.
    Split,
    /// deg F = 2g + 1.
    Ramified,
}

/// The Jacobian of w^2 = F(x) over a fixed field context.
#[derive(Clone, Debug)]
pub struct JacCurve<F: Field + Clone> {
    field: F,
    big_f: Poly<F>,
    genus: usize,
    parity: Parity,
    /// sqrt of lc F (split case only).
    c: F::Elem,
    /// deg g+1 approximation to sqrt F: deg(F - V^2) <= g, lc V = c.
    vplus: Poly<F>,
}

impl<F: Field + Clone> JacCurve<F> {
    /// Build the Jacobian context. For even-degree F the caller supplies
    /// `sqrt_lc` with sqrt_lc^2 = lc F; use `None` for odd degree.
    pub fn new(
        field: F,
        big_f: Poly<F>,
        sqrt_lc: Option<F::Elem>,
    ) -> Result<Self, JacobianError> {
        assert!(field.characteristic() != 2, "characteristic 2 is not supported");
        let d = big_f.deg();
        assert!(d >= 3, "genus at least 1 expected");
        debug_assert!(
            {
                let der = Poly::derivative(&field, &big_f);
                Poly::gcd(&field, &big_f, &der).deg() == 0
            },
            "F must be squarefree for a smooth model"
        );
        if d % 2 == 1 {
            let c = field.zero();
            return Ok(JacCurve {
                genus: ((d + 1) / 2 - 1) as usize,
                field,
                big_f,
                parity: Parity::Ramified,
                c,
                vplus: Poly::zero(),
            });
        }
        let genus = (d / 2 - 1) as usize;
        let c = sqrt_lc.ok_or(JacobianError::Unsupported(
            "even-degree model needs a square root of the leading coefficient".into(),
        ))?;
        let lc = big_f.lc().expect("F nonzero").clone();
        if field.mul(&c, &c) != lc {
            return Err(JacobianError::Unsupported(
                "supplied square root does not square to lc F".into(),
            ));
        }
        let vplus = sqrt_approx(&field, &big_f, genus, &c);
        Ok(JacCurve { field, big_f, genus, parity: Parity::Split, c, vplus })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn big_f(&self) -> &Poly<F> {
        &self.big_f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn is_split(&self) -> bool {
        self.parity == Parity::Split
    }

    /// The degree g+1 square root approximation V (split case).
    pub fn v_plus(&self) -> &Poly<F> {
        &self.vplus
    }

    /// The chosen square root of lc F (split case).
    pub fn sqrt_lc(&self) -> &F::Elem {
        &self.c
    }

    fn half_up(&self) -> i64 {
        // ceil(g/2), the oo+ weight of the base divisor.
        ((self.genus + 1) / 2) as i64
    }

    pub fn zero(&self) -> Divisor<F> {
        let n = if self.is_split() { self.half_up() } else { 0 };
        Divisor { u: Poly::one(&self.field), v: Poly::zero(), n }
    }

    pub fn is_zero_class(&self, d: &Divisor<F>) -> bool {
        *d == self.zero()
    }

    /// The class [oo+ - oo-] (split case).
    pub fn infinity_diff(&self) -> Divisor<F> {
        assert!(self.is_split());
        self.canonicalize(Divisor {
            u: Poly::one(&self.field),
            v: Poly::zero(),
            n: self.half_up() + 1,
        })
    }

    /// Class of an affine divisor A(u, v) minus k+ oo+ and (deg u - k+) oo-.
    /// Requires u | F - v^2.
    pub fn from_effective(&self, u: &Poly<F>, v: &Poly<F>, kplus: i64) -> Divisor<F> {
        let f = &self.field;
        let u = Poly::monic(f, u).expect("u nonzero");
        let v = Poly::rem(f, v, &u).expect("u nonzero");
        debug_assert!(self.semi_reduced(&u, &v), "v^2 = F on the support of u");
        let n = if self.is_split() { self.half_up() - kplus } else { 0 };
        self.canonicalize(Divisor { u, v, n })
    }

    /// The class [P - oo+] (plus = true) or [P - oo-] for an affine point
    /// P = (x0, w0) in completed coordinates, w0^2 = F(x0).
    pub fn point_class(&self, x0: &F::Elem, w0: &F::Elem, plus: bool) -> Divisor<F> {
        let f = &self.field;
        let u = Poly::new(f, vec![f.neg(x0), f.one()]);
        let v = Poly::constant(f, w0.clone());
        let kplus = if self.is_split() && !plus { 0 } else { 1 };
        self.from_effective(&u, &v, kplus)
    }

    /// Difference of infinite points class times k, i.e. k [oo+ - oo-].
    pub fn infinity_multiple(&self, k: i64) -> Divisor<F> {
        self.mul_i64(&self.infinity_diff(), k)
    }

    fn semi_reduced(&self, u: &Poly<F>, v: &Poly<F>) -> bool {
        let f = &self.field;
        let v2 = Poly::mul(f, v, v);
        let diff = Poly::sub(f, &self.big_f, &v2);
        match Poly::rem(f, &diff, u) {
            Ok(r) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Whether (u, v, n) is in normal form.
    pub fn is_normal(&self, d: &Divisor<F>) -> bool {
        let du = d.u.deg();
        if d.u.lc().map(|c| !self.field.is_one(c)).unwrap_or(true) {
            return false;
        }
        if du > self.genus as i64 || d.v.deg() >= du {
            return false;
        }
        if !self.semi_reduced(&d.u, &d.v) {
            return false;
        }
        if self.is_split() {
            d.n >= 0 && d.n <= self.genus as i64 - du
        } else {
            d.n == 0
        }
    }

    /// One reduction step via a lift of v adapted to oo+ (split case).
    /// Always lands at deg u' <= g and sends n to n - (g + 1 - deg u).
    fn plus_step(&self, d: &mut Divisor<F>) {
        let f = &self.field;
        let g1 = self.genus as i64 + 1;
        let r = Poly::rem(f, &Poly::sub(f, &self.vplus, &d.v), &d.u).expect("u nonzero");
        let vhat = Poly::sub(f, &self.vplus, &r);
        let dplus = if r.is_zero() {
            let fv2 = Poly::sub(f, &self.big_f, &Poly::mul(f, &self.vplus, &self.vplus));
            fv2.deg() - g1
        } else {
            r.deg()
        };
        let fv2 = Poly::sub(f, &self.big_f, &Poly::mul(f, &vhat, &vhat));
        let unew = Poly::monic(f, &Poly::div_exact(f, &fv2, &d.u).expect("u | F - vhat^2"))
            .expect("F - vhat^2 nonzero");
        let vnew = Poly::rem(f, &Poly::neg(f, &vhat), &unew).expect("u' nonzero");
        d.n += dplus - unew.deg();
        d.u = unew;
        d.v = vnew;
    }

    /// One reduction step adapted to oo-: mirror of `plus_step`, increases n
    /// by g + 1 - deg u'. Only used with deg u <= g.
    fn minus_step(&self, d: &mut Divisor<F>) {
        let f = &self.field;
        let g1 = self.genus as i64 + 1;
        let r = Poly::rem(f, &Poly::add(f, &self.vplus, &d.v), &d.u).expect("u nonzero");
        let vhat = Poly::sub(f, &r, &self.vplus);
        let fv2 = Poly::sub(f, &self.big_f, &Poly::mul(f, &vhat, &vhat));
        let unew = Poly::monic(f, &Poly::div_exact(f, &fv2, &d.u).expect("u | F - vhat^2"))
            .expect("F - vhat^2 nonzero");
        let vnew = Poly::rem(f, &Poly::neg(f, &vhat), &unew).expect("u' nonzero");
        d.n += g1 - unew.deg();
        d.u = unew;
        d.v = vnew;
    }

    /// Classic reduction step for the ramified case.
    fn ramified_step(&self, d: &mut Divisor<F>) {
        let f = &self.field;
        let fv2 = Poly::sub(f, &self.big_f, &Poly::mul(f, &d.v, &d.v));
        let unew = Poly::monic(f, &Poly::div_exact(f, &fv2, &d.u).expect("u | F - v^2"))
            .expect("F - v^2 nonzero");
        let vnew = Poly::rem(f, &Poly::neg(f, &d.v), &unew).expect("u' nonzero");
        d.u = unew;
        d.v = vnew;
    }

    /// Bring a semi-reduced triple to the unique normal form.
    pub fn canonicalize(&self, mut d: Divisor<F>) -> Divisor<F> {
        let f = &self.field;
        d.u = Poly::monic(f, &d.u).expect("u nonzero");
        d.v = Poly::rem(f, &d.v, &d.u).expect("u nonzero");
        let g = self.genus as i64;
        if !self.is_split() {
            while d.u.deg() > g {
                self.ramified_step(&mut d);
            }
            d.n = 0;
            return d;
        }
        loop {
            if d.u.deg() > g {
                self.plus_step(&mut d);
            } else if d.n < 0 {
                self.minus_step(&mut d);
            } else if d.n > g - d.u.deg() {
                self.plus_step(&mut d);
            } else {
                break;
            }
        }
        d
    }

    pub fn neg(&self, d: &Divisor<F>) -> Divisor<F> {
        let f = &self.field;
        let vneg = Poly::rem(f, &Poly::neg(f, &d.v), &d.u).expect("u nonzero");
        let n = if self.is_split() {
            let g = self.genus as i64;
            g + (g % 2) - d.u.deg() - d.n
        } else {
            0
        };
        self.canonicalize(Divisor { u: d.u.clone(), v: vneg, n })
    }

    /// Cantor composition followed by normalization.
    pub fn add(&self, a: &Divisor<F>, b: &Divisor<F>) -> Divisor<F> {
        let f = &self.field;
        let (d1, e1, e2) = Poly::xgcd(f, &a.u, &b.u);
        let vsum = Poly::add(f, &a.v, &b.v);
        let (s, c1, c2) = Poly::xgcd(f, &d1, &vsum);
        // s = c1 (e1 u1 + e2 u2) + c2 (v1 + v2), already monic from xgcd.
        let w1 = Poly::mul(f, &c1, &e1);
        let w2 = Poly::mul(f, &c1, &e2);
        let w3 = c2;

        let u1u2 = Poly::mul(f, &a.u, &b.u);
        let s2 = Poly::mul(f, &s, &s);
        let u3 = Poly::div_exact(f, &u1u2, &s2).expect("s^2 | u1 u2");

        // v3 = (w1 u1 v2 + w2 u2 v1 + w3 (v1 v2 + F)) / s mod u3.
        let t1 = Poly::mul(f, &Poly::mul(f, &w1, &a.u), &b.v);
        let t2 = Poly::mul(f, &Poly::mul(f, &w2, &b.u), &a.v);
        let t3 = Poly::mul(f, &w3, &Poly::add(f, &Poly::mul(f, &a.v, &b.v), &self.big_f));
        let num = Poly::add(f, &Poly::add(f, &t1, &t2), &t3);
        let v3 = Poly::div_exact(f, &num, &s).expect("s | composition numerator");
        let v3 = Poly::rem(f, &v3, &u3).expect("u3 nonzero");

        let n3 = if self.is_split() {
            a.n + b.n + s.deg() - self.half_up()
        } else {
            0
        };
        self.canonicalize(Divisor { u: u3, v: v3, n: n3 })
    }

    pub fn sub(&self, a: &Divisor<F>, b: &Divisor<F>) -> Divisor<F> {
        self.add(a, &self.neg(b))
    }

    pub fn mul_i64(&self, d: &Divisor<F>, k: i64) -> Divisor<F> {
        let (mut base, mut k) = if k < 0 {
            (self.neg(d), (-(k as i128)) as u64)
        } else {
            (d.clone(), k as u64)
        };
        let mut acc = self.zero();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    /// Order of a class given a multiple of it: `group_order` must kill d
    /// (for instance the group order over a finite field). Factored here by
    /// trial division, so keep it below about 10^12.
    pub fn class_order(&self, d: &Divisor<F>, group_order: u64) -> u64 {
        let mut o = group_order;
        let mut primes: Vec<u64> = Vec::new();
        let mut m = group_order;
        let mut q = 2;
        while q * q <= m {
            if m % q == 0 {
                primes.push(q);
                while m % q == 0 {
                    m /= q;
                }
            }
            q += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        debug_assert!(self.is_zero_class(&self.mul_i64(d, group_order as i64)));
        for &l in &primes {
            while o % l == 0 {
                let cand = self.mul_i64(d, (o / l) as i64);
                if self.is_zero_class(&cand) {
                    o /= l;
                } else {
                    break;
                }
            }
        }
        o
    }
}

/// The degree g+1 polynomial V with deg(F - V^2) <= g and lc V = c, solved
/// top-down by matching coefficients of x^{2g+2} .. x^{g+1}.
fn sqrt_approx<F: Field>(f: &F, big_f: &Poly<F>, genus: usize, c: &F::Elem) -> Poly<F> {
    let g = genus;
    let two_c_inv = f
        .inv(&f.add(c, c))
        .expect("2c invertible away from characteristic 2");
    let mut v = vec![f.zero(); g + 2];
    v[g + 1] = c.clone();
    // Solve v_t from the x^{g+1+t} coefficient, t = g down to 0.
    for t in (0..=g).rev() {
        let m = g + 1 + t;
        let mut acc = f.zero();
        // Ordered pairs (i, j) with i + j = m other than (t, g+1) and
        // (g+1, t) have both indices in (t, g], so this sum is complete.
        for i in (t + 1)..=g {
            let j = m - i;
            acc = f.add(&acc, &f.mul(&v[i], &v[j]));
        }
        // The two special pairs contribute 2 c v_t.
        let fm = big_f.coeff(f, m);
        let rhs = f.sub(&fm, &acc);
        v[t] = f.mul(&rhs, &two_c_inv);
    }
    let vp = Poly::new(f, v);
    debug_assert!({
        let v2 = Poly::mul(f, &vp, &vp);
        Poly::sub(f, big_f, &v2).deg() <= g as i64
    });
    vp
}
