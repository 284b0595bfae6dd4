//! The 11-isogeny attached to the level 22 fiber over x = -1, built end to
//! end from the curated data and verified from several independent angles.
//!
//! The fiber generates Q(sqrt -143) and carries a point P = (-1, beta) with
//! beta^2 + beta + 36 = 0. The dataset records an elliptic curve E for P,
//! the weight-2 evaluations g4, g6 pinning down the twisting scalar mu, the
//! kernel-sum value of the involution form, and the kernel polynomial of
//! the isogeny from E to the (-11)-twist of its Galois conjugate. Here all
//! of those are recomputed: mu and lambda from the printed g4, g6; the
//! kernel sum from the kernel polynomial and independently from the
//! Eisenstein evaluation; the image curve from the power-sum formulas; the
//! kernel again from the two curves alone; and everything once more after
//! reduction at two split primes.

use num_rational::BigRational;
use num_traits::Zero;

use super::division::odd_division_polynomial;
use super::elkies::kernel_from_curves;
use super::velu::{isogeny_image, power_sums};
use super::weierstrass::{LongModel, ShortModel};
use crate::algebra::{ff_sqrt, Field, Poly, PrimeField, Quad, QuadField, Rationals};
use crate::db::{Check, Dataset, LevelReport};
use crate::jacobian::models::reduce_rational;

/// Split primes used for the reduction cross-check: -143 is a nonzero
/// square modulo both, and both curves have good reduction there.
pub const SPLIT_PRIMES: [u64; 2] = [7, 19];

/// All artifacts of the construction, in the field Q(sqrt -143).
pub struct Level22Isogeny {
    pub field: QuadField,
    pub beta: Quad,
    pub curve: LongModel<QuadField>,
    pub short: ShortModel<QuadField>,
    pub c4: Quad,
    pub c6: Quad,
    /// Values of the printed weight-4 and weight-6 quotients at the point.
    pub g4_value: Quad,
    pub g6_value: Quad,
    pub mu: Quad,
    pub lambda: Quad,
    /// Kernel-sum value of the involution form, from the kernel polynomial.
    pub kernel_sum: Quad,
    /// The same value from the Eisenstein evaluation at x = -1.
    pub eisenstein_sum: BigRational,
    /// Kernel polynomial in the printed long coordinates and after the
    /// shift to the short model.
    pub kernel_long: Poly<QuadField>,
    pub kernel: Poly<QuadField>,
    /// Image of the kernel under the power-sum formulas.
    pub image: ShortModel<QuadField>,
    /// Target invariants lambda^2 sigma(c4), lambda^3 sigma(c6).
    pub target: ShortModel<QuadField>,
    pub delta: i64,
}

fn pair_to_quad(k: &QuadField, beta: &Quad, r: &BigRational, s: &BigRational) -> Quad {
    // r + s beta.
    k.add(&k.from_rational(r), &k.mul(&k.from_rational(s), beta))
}

/// Build the whole construction from the dataset. Structural failures
/// (wrong field, singular curve, impossible inversion) surface as errors;
/// value comparisons are left to `report`.
pub fn build(ds: &Dataset) -> Result<Level22Isogeny, String> {
    let sp = &ds.special.n22;
    let q = Rationals;

    // The quadratic field: the minimal polynomial of beta must have the
    // recorded squarefree discriminant.
    let mp = sp.beta_minpoly_poly();
    if mp.deg() != 2 {
        return Err("the recorded minimal polynomial is not quadratic".into());
    }
    let disc = Poly::discriminant(&q, &mp).map_err(|e| e.to_string())?;
    let (dsf, rest) = crate::jacobian::enumerate::squarefree_part(&disc);
    if dsf != sp.disc || rest != q.one() {
        return Err(format!(
            "minimal polynomial discriminant {disc} does not reduce to the recorded field {}",
            sp.disc
        ));
    }
    let k = QuadField::new(sp.disc);
    // beta = (-c1 + w)/(2 c2) for monic x^2 + c1 x + c0; here (w - 1)/2.
    let c1 = mp.coeff(&q, 1);
    let beta = Quad::new(-&c1 / BigRational::from_integer(2.into()), q.frac(1, 2));
    let mp_at_beta = k.add(
        &k.add(&k.mul(&beta, &beta), &k.mul(&k.from_rational(&c1), &beta)),
        &k.from_rational(&mp.coeff(&q, 0)),
    );
    if !k.is_zero(&mp_at_beta) {
        return Err("beta does not satisfy its minimal polynomial".into());
    }

    if sp.curve_a.len() != 5 {
        return Err("expected five curve coefficients".into());
    }
    let a: Vec<Quad> = sp
        .curve_a
        .iter()
        .map(|(r, s)| pair_to_quad(&k, &beta, r, s))
        .collect();
    let curve = LongModel::new(a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone());
    if k.is_zero(&curve.discriminant(&k)) {
        return Err("the recorded curve is singular".into());
    }
    let (c4, c6) = curve.c_invariants(&k);
    let short = curve.short(&k).map_err(|e| e.to_string())?;
    let shift = curve.short_shift(&k).map_err(|e| e.to_string())?;

    // Values of the printed quotients at P = (point_x, beta).
    let x0 = sp.point_x.clone();
    let g4_value = k
        .div(
            &k.add(
                &k.mul(&k.from_rational(&Poly::eval(&q, &sp.g4_y_poly(), &x0)), &beta),
                &k.from_rational(&Poly::eval(&q, &sp.g4_x_poly(), &x0)),
            ),
            &k.from_rational(&sp.g4_scale),
        )
        .map_err(|e| e.to_string())?;
    let g6_value = k
        .div(
            &k.add(
                &k.mul(&k.from_rational(&Poly::eval(&q, &sp.g6_y_poly(), &x0)), &beta),
                &k.from_rational(&Poly::eval(&q, &sp.g6_x_poly(), &x0)),
            ),
            &k.from_rational(&sp.g6_scale),
        )
        .map_err(|e| e.to_string())?;

    // mu = 21 g6 c4 / (10 g4 c6) and lambda = -delta sigma(mu)/mu.
    let delta = sp.gamma[0][0] * sp.gamma[1][1] - sp.gamma[0][1] * sp.gamma[1][0];
    let mu = k
        .div(
            &k.mul(&k.from_i64(21), &k.mul(&g6_value, &c4)),
            &k.mul(&k.from_i64(10), &k.mul(&g4_value, &c6)),
        )
        .map_err(|e| e.to_string())?;
    let lambda = k
        .div(&k.mul(&k.from_i64(-delta), &k.conj(&mu)), &mu)
        .map_err(|e| e.to_string())?;

    // Kernel polynomial: printed in the long coordinates; the short model
    // shifts x by b2/12, so roots move the other way.
    let kernel_long = Poly::new(
        &k,
        sp.kernel_poly_beta
            .iter()
            .map(|(r, s)| pair_to_quad(&k, &beta, r, s))
            .collect(),
    );
    let to_short = Poly::new(&k, vec![k.neg(&shift), k.one()]);
    let kernel = Poly::compose(&k, &kernel_long, &to_short);

    let s1 = power_sums(&k, &kernel, 1)[0].clone();
    let kernel_sum = k.mul(&k.from_i64(2), &s1);
    // Independent evaluation: -2 delta times the printed weight-2 quotient.
    let eis = Poly::eval(&q, &sp.e2_num_poly(), &x0) / &sp.e2_scale;
    let eisenstein_sum = BigRational::from_integer((-2 * delta).into()) * eis;

    let image = isogeny_image(&k, &short, &kernel).map_err(|e| e.to_string())?;
    let lam2 = k.mul(&lambda, &lambda);
    let lam3 = k.mul(&lam2, &lambda);
    let c4_target = k.mul(&lam2, &k.conj(&c4));
    let c6_target = k.mul(&lam3, &k.conj(&c6));
    let target = ShortModel::new(
        k.div(&c4_target, &k.from_i64(-48)).map_err(|e| e.to_string())?,
        k.div(&c6_target, &k.from_i64(-864)).map_err(|e| e.to_string())?,
    );

    Ok(Level22Isogeny {
        field: k,
        beta,
        curve,
        short,
        c4,
        c6,
        g4_value,
        g6_value,
        mu,
        lambda,
        kernel_sum,
        eisenstein_sum,
        kernel_long,
        kernel,
        image,
        target,
        delta,
    })
}

fn rational_quad(r: &BigRational) -> Quad {
    Quad::new(r.clone(), BigRational::zero())
}

/// Reduce a quadratic element at a split prime, mapping the generator to
/// the given square root of the field discriminant.
fn quad_mod(fp: &PrimeField, wroot: u64, x: &Quad) -> Option<u64> {
    let a = reduce_rational(&x.a, fp)?;
    let b = reduce_rational(&x.b, fp)?;
    Some(fp.add(&a, &fp.mul(&b, &wroot)))
}

fn poly_mod(fp: &PrimeField, wroot: u64, a: &Poly<QuadField>) -> Option<Poly<PrimeField>> {
    let mut out = Vec::with_capacity(a.coeffs().len());
    for c in a.coeffs() {
        out.push(quad_mod(fp, wroot, c)?);
    }
    Some(Poly::new(fp, out))
}

/// Run the construction and compare every stage against the recorded
/// values and against independent recomputations.
pub fn report(ds: &Dataset) -> LevelReport {
    let mut rep = LevelReport::new(22);
    let iso = match build(ds) {
        Ok(iso) => iso,
        Err(e) => {
            rep.checks.push(Check::mismatch("construction", e));
            return rep;
        }
    };
    let sp = &ds.special.n22;
    let k = &iso.field;
    let q = Rationals;

    // The fiber of the model over x = -1 generates the same field, and the
    // point (x0, beta) lies on the model.
    match ds.curve(22).map(|rec| rec.model()) {
        Some(Ok(model)) => {
            let hx = Poly::eval(&q, &model.h, &sp.point_x);
            let fx = Poly::eval(&q, &model.f, &sp.point_x);
            let on_model = k.sub(
                &k.add(
                    &k.mul(&iso.beta, &iso.beta),
                    &k.mul(&k.from_rational(&hx), &iso.beta),
                ),
                &k.from_rational(&fx),
            );
            if k.is_zero(&on_model) {
                rep.checks.push(Check::ok(
                    "fiber",
                    format!(
                        "(x, beta) = ({}, beta) lies on the model and generates Q(sqrt {})",
                        sp.point_x, sp.disc
                    ),
                ));
            } else {
                rep.checks.push(Check::mismatch(
                    "fiber",
                    "the recorded point does not satisfy the model equation",
                ));
            }
        }
        _ => rep.checks.push(Check::mismatch(
            "fiber",
            "no usable level 22 model in the dataset",
        )),
    }

    // The printed weight-4 and weight-6 values normalize the curve exactly:
    // 240 g4(P) = mu^2 c4 and 504 g6(P) = mu^3 c6.
    let mu2 = k.mul(&iso.mu, &iso.mu);
    let mu3 = k.mul(&mu2, &iso.mu);
    let id4 = k.mul(&k.from_i64(240), &iso.g4_value) == k.mul(&mu2, &iso.c4);
    let id6 = k.mul(&k.from_i64(504), &iso.g6_value) == k.mul(&mu3, &iso.c6);
    let mu_ok = iso.mu == rational_quad(&sp.mu);
    let lambda_ok = iso.lambda == rational_quad(&sp.lambda);
    if id4 && id6 && mu_ok && lambda_ok {
        rep.checks.push(Check::ok(
            "normalization",
            format!(
                "240 g4 = mu^2 c4 and 504 g6 = mu^3 c6 with mu = {}, lambda = {}",
                sp.mu, sp.lambda
            ),
        ));
    } else {
        rep.checks.push(Check::mismatch(
            "normalization",
            format!(
                "weight identities: {id4}/{id6}, mu as recorded: {mu_ok}, lambda as recorded: {lambda_ok}"
            ),
        ));
    }

    // Kernel sum two ways: twice the first power sum of the shifted kernel
    // polynomial, and the Eisenstein evaluation -2 delta r(x0).
    let sum_ok = iso.kernel_sum == rational_quad(&iso.eisenstein_sum)
        && iso.eisenstein_sum == sp.a_gamma;
    if sum_ok {
        rep.checks.push(Check::ok(
            "kernel-sum",
            format!("both evaluations give {}", sp.a_gamma),
        ));
    } else {
        rep.checks.push(Check::mismatch(
            "kernel-sum",
            format!(
                "kernel polynomial gives {:?}, Eisenstein evaluation {}, recorded {}",
                iso.kernel_sum, iso.eisenstein_sum, sp.a_gamma
            ),
        ));
    }

    // The kernel polynomial divides the 11-division polynomial.
    let psi11 = odd_division_polynomial(k, &iso.short, 11);
    match Poly::rem(k, &psi11, &iso.kernel) {
        Ok(r) if r.is_zero() => rep.checks.push(Check::ok(
            "division",
            "the kernel polynomial divides the 11-division polynomial",
        )),
        Ok(_) => rep.checks.push(Check::mismatch(
            "division",
            "the kernel polynomial does not divide the 11-division polynomial",
        )),
        Err(e) => rep.checks.push(Check::mismatch("division", e.to_string())),
    }

    // The image of the kernel matches the lambda-twist of the conjugate.
    if iso.image == iso.target {
        rep.checks.push(Check::ok(
            "image",
            format!(
                "the quotient invariants are lambda^2 sigma(c4), lambda^3 sigma(c6) with lambda = {}",
                sp.lambda
            ),
        ));
    } else {
        rep.checks.push(Check::mismatch(
            "image",
            "the quotient does not match the twisted conjugate invariants",
        ));
    }

    // The kernel is recovered from the two curves alone.
    match kernel_from_curves(k, 11, &iso.short, &iso.target) {
        Ok(rec) if rec == iso.kernel => rep.checks.push(Check::ok(
            "recovery",
            "the two curves determine the recorded kernel polynomial",
        )),
        Ok(_) => rep.checks.push(Check::mismatch(
            "recovery",
            "kernel recovery returned a different polynomial",
        )),
        Err(e) => rep.checks.push(Check::mismatch("recovery", e.to_string())),
    }

    // Reduction at split primes: good reduction, the reduced kernel still
    // divides the reduced division polynomial, and the image formulas
    // commute with reduction.
    let mut prime_notes = Vec::new();
    let mut prime_fail = None;
    for &p in &SPLIT_PRIMES {
        let fp = PrimeField::new(p);
        let dmod = reduce_rational(&BigRational::from_integer(sp.disc.into()), &fp)
            .expect("integer discriminant reduces");
        let wroot = match ff_sqrt(&fp, &dmod) {
            Some(r) if !fp.is_zero(&r) => r,
            _ => {
                prime_fail = Some(format!("{p} is not split in the field"));
                break;
            }
        };
        let reduce_model = |m: &ShortModel<QuadField>| -> Option<ShortModel<PrimeField>> {
            Some(ShortModel::new(
                quad_mod(&fp, wroot, &m.a)?,
                quad_mod(&fp, wroot, &m.b)?,
            ))
        };
        let (short_p, image_p, kernel_p) = match (
            reduce_model(&iso.short),
            reduce_model(&iso.image),
            poly_mod(&fp, wroot, &iso.kernel),
        ) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                prime_fail = Some(format!("denominators vanish at {p}"));
                break;
            }
        };
        if !short_p.is_smooth(&fp) || !image_p.is_smooth(&fp) {
            prime_fail = Some(format!("bad reduction at {p}"));
            break;
        }
        let velu_p = match isogeny_image(&fp, &short_p, &kernel_p) {
            Ok(v) => v,
            Err(e) => {
                prime_fail = Some(format!("image formulas fail at {p}: {e}"));
                break;
            }
        };
        if velu_p != image_p {
            prime_fail = Some(format!("image does not commute with reduction at {p}"));
            break;
        }
        let psi_p = odd_division_polynomial(&fp, &short_p, 11);
        match Poly::rem(&fp, &psi_p, &kernel_p) {
            Ok(r) if r.is_zero() => prime_notes.push(p.to_string()),
            _ => {
                prime_fail = Some(format!("kernel fails division at {p}"));
                break;
            }
        }
    }
    match prime_fail {
        None => rep.checks.push(Check::ok(
            "split-primes",
            format!("reductions verified at {}", prime_notes.join(", ")),
        )),
        Some(e) => rep.checks.push(Check::mismatch("split-primes", e)),
    }

    // No complex multiplication among the tabulated discriminants: the
    // j-invariant is irrational and no embedded class polynomial kills it.
    match iso.short.j_invariant(k) {
        Ok(j) if !j.is_rational() => {
            let mut hit = None;
            for d in ds.special.class_polynomials.keys() {
                let dnum: i64 = d.parse().unwrap_or(0);
                if let Some(h) = ds.class_polynomial(dnum) {
                    let hk = h.map_coeffs(k, |c| k.from_rational(c));
                    if k.is_zero(&Poly::eval(k, &hk, &j)) {
                        hit = Some(dnum);
                        break;
                    }
                }
            }
            match hit {
                None => rep.checks.push(Check::ok(
                    "cm",
                    "j is irrational and not a root of any embedded class polynomial",
                )),
                Some(d) => rep.checks.push(Check::mismatch(
                    "cm",
                    format!("j satisfies the class polynomial of discriminant {d}"),
                )),
            }
        }
        Ok(_) => rep.checks.push(Check::mismatch(
            "cm",
            "the j-invariant is rational",
        )),
        Err(e) => rep.checks.push(Check::mismatch("cm", e.to_string())),
    }

    rep
}
