//! Exact arithmetic: rationals, multivariate polynomials, rational functions
//! and linear solving over their fraction field.

pub mod gcd;
pub mod linsolve;
pub mod mpoly;
pub mod ratfunc;

pub use linsolve::{solve_linear, solve_poly_system, PolySolution};
pub use mpoly::{Monomial, MPoly};
pub use ratfunc::RatFunc;

use num_bigint::BigInt;
use num_traits::Signed;

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rising factorial `(x)_k = x (x+1) ... (x+k-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: &MPoly, k: u32) -> MPoly {
    let mut acc = MPoly::one();
    for t in 0..k {
        acc = &acc * &(x + &MPoly::from_int(t as i64));
    }
    acc
}

/// `(n + c)_k` as a polynomial in variable `var`.
pub fn pochhammer_shifted(var: usize, c: i64, k: u32) -> MPoly {
    pochhammer(&(&MPoly::var(var) + &MPoly::from_int(c)), k)
}

/// Rising factorial of a rational number.
pub fn pochhammer_rat(x: &Rat, k: u32) -> Rat {
    let mut acc = int(1);
    for t in 0..k {
        acc *= x + int(t as i64);
    }
    acc
}

/// Exact square root of a non-negative rational, if it has one.
pub fn rational_sqrt(c: &Rat) -> Option<Rat> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}
