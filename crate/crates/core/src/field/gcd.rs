//! Multivariate polynomial gcd by recursive primitive remainder sequences.
//!
//! Polynomials are viewed as univariate in their highest-index variable with
//! coefficients in the ring of the remaining variables. Degrees in this crate
//! stay small, so the classical primitive PRS is adequate.

use num_traits::One;

use super::mpoly::MPoly;
use super::Rat;

/// Greatest common divisor, normalized to integer coefficients with positive
/// leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = MPoly::term(ma.gcd(&mb), Rat::one());
    if a.len() == 1 || b.len() == 1 {
        return mono;
    }
    let a = &a.exact_div(&MPoly::term(ma, Rat::one())).expect("monomial divides");
    let b = &b.exact_div(&MPoly::term(mb, Rat::one())).expect("monomial divides");
    normalize(&(&mono * &gcd_nonmonomial(a, b)))
}

/// Gcd of two polynomials without monomial content.
fn gcd_nonmonomial(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let (pa, pb) = (a.primitive().1, b.primitive().1);
    if pa == pb {
        return pa;
    }
    if pb.len() <= pa.len() && pa.exact_div(&pb).is_some() {
        return pb;
    }
    if pa.len() <= pb.len() && pb.exact_div(&pa).is_some() {
        return pa;
    }
    let top = a.max_var().max(b.max_var()).expect("non-constant");
    for v in (0..=top).rev() {
        match (a.involves(v), b.involves(v)) {
            (true, false) => return gcd(&content_in(a, v), b),
            (false, true) => return gcd(a, &content_in(b, v)),
            _ => {}
        }
    }
    if coprime_by_images(a, b, top) {
        return MPoly::one();
    }
    let v = top;
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let g = prs(pa, pb, v);
    let c = gcd(&ca, &cb);
    normalize(&(&g * &c))
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a MPoly>>(polys: I) -> MPoly {
    let mut acc = MPoly::zero();
    for p in polys {
        acc = gcd(&acc, p);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Least common multiple (up to a rational unit).
pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    let g = gcd(a, b);
    normalize(&(a * &b.exact_div(&g).expect("gcd divides")))
}

/// Content with respect to `var`: gcd of the coefficients of `p` as a
/// polynomial in `var`.
pub fn content_in(p: &MPoly, var: usize) -> MPoly {
    gcd_all(p.coeffs_in(var).iter().filter(|c| !c.is_zero()))
}

fn normalize(p: &MPoly) -> MPoly {
    if p.is_zero() {
        return MPoly::zero();
    }
    if p.is_constant() {
        return MPoly::one();
    }
    p.primitive().1
}

fn primitive_in(p: &MPoly, var: usize) -> MPoly {
    let c = content_in(p, var);
    let q = p.exact_div(&c).expect("content divides");
    q.primitive().1
}

/// Sound one-sided coprimality test: for each variable, specialise the others
/// at a point preserving the leading coefficient of `a` and check that the
/// univariate images are coprime.
fn coprime_by_images(a: &MPoly, b: &MPoly, top: usize) -> bool {
    let vars: Vec<usize> = (0..=top).filter(|&v| a.involves(v) || b.involves(v)).collect();
    for &v in &vars {
        let mut ok = false;
        for attempt in 0..3i64 {
            let mut ia = a.clone();
            let mut ib = b.clone();
            for (t, &u) in vars.iter().enumerate() {
                if u != v {
                    let point = Rat::from_integer((3 + 7 * attempt + 2 * t as i64).into());
                    ia = ia.eval_var(u, &point);
                    ib = ib.eval_var(u, &point);
                }
            }
            if ia.degree_in(v) != a.degree_in(v) {
                continue;
            }
            if ib.is_zero() || prs(ia, ib, v).degree_in(v) > 0 {
                return false;
            }
            ok = true;
            break;
        }
        if !ok {
            return false;
        }
    }
    true
}

/// Pseudo-remainder of `a` by `b` as polynomials in `var`.
fn prem(a: &MPoly, b: &MPoly, var: usize) -> MPoly {
    let db = b.degree_in(var);
    let bc = b.coeffs_in(var);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.coeffs_in(var)[dr as usize].clone();
        let shift = crate::field::mpoly::Monomial::var(var, dr - db);
        let t = (&lr * b).mul_monomial(&shift, &Rat::one());
        r = &(&lb * &r) - &t;
    }
    r
}

fn prs(a: MPoly, b: MPoly, var: usize) -> MPoly {
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if b.is_zero() {
            return primitive_in(&a, var);
        }
        if b.degree_in(var) == 0 {
            return MPoly::one();
        }
        let r = prem(&a, &b, var);
        a = b;
        b = if r.is_zero() { r } else { primitive_in(&r, var) };
    }
}
