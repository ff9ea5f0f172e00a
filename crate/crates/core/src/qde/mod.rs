//! Homogeneous quadratic differential equations and the δ₂ operator.
//!
//! The δ₂ operator enumerates the products `f^(i-2) f^(j-2)` for
//! `1 <= j <= i` row by row, with the conventions `f^(-1) = 1` and
//! `f^(0) = f`:
//!
//! ```text
//! k:   1    2    3    4     5      6      7     8  ...
//!      1    f    f²   f'    f f'   f'²    f''   f f'' ...
//! ```

mod search;
mod text;

pub use search::{find_qde, solve_level, verify_qde, QdeError};
pub use text::QdeParseError;

use std::collections::BTreeSet;
use std::fmt;

use crate::expr::{differentiate, Expr};
use crate::field::gcd::gcd_all;
use crate::field::{MPoly, Rat};

/// Default bound on the δ₂ index searched by [`find_qde`].
pub const DEFAULT_MAX_INDEX: usize = 21;

/// The default index bound, overridden by `QFPS_MAX_INDEX` when set.
pub fn default_max_index() -> usize {
    std::env::var("QFPS_MAX_INDEX")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_INDEX)
}

/// The pair `(i, j)`, `1 <= j <= i`, enumerated at position `k >= 1`.
pub fn nu(k: usize) -> (usize, usize) {
    assert!(k >= 1, "δ₂ indices start at 1");
    let mut l = ((2.0 * k as f64 + 0.25).sqrt() - 0.5).floor() as usize;
    while l * (l + 1) / 2 > k {
        l -= 1;
    }
    while (l + 1) * (l + 2) / 2 <= k {
        l += 1;
    }
    let n = l * (l + 1) / 2;
    if n == k {
        (l, l)
    } else {
        (l + 1, k - n)
    }
}

/// Inverse of [`nu`].
pub fn nu_inverse(i: usize, j: usize) -> usize {
    assert!(1 <= j && j <= i, "need 1 <= j <= i");
    i * (i - 1) / 2 + j
}

/// A differential monomial in `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiffMonomial {
    /// `y^(j)`
    Linear(usize),
    /// `y^(i) y^(j)` with `i <= j`
    Quadratic(usize, usize),
}

impl DiffMonomial {
    /// The monomial `δ₂^k y`; `None` for `k = 1`, which is the constant 1.
    pub fn from_index(k: usize) -> Option<DiffMonomial> {
        let (i, j) = nu(k);
        match j {
            1 if i == 1 => None,
            1 => Some(DiffMonomial::Linear(i - 2)),
            _ => Some(DiffMonomial::Quadratic(j - 2, i - 2)),
        }
    }

    pub fn index(self) -> usize {
        match self {
            DiffMonomial::Linear(j) => nu_inverse(j + 2, 1),
            DiffMonomial::Quadratic(i, j) => nu_inverse(i.max(j) + 2, i.min(j) + 2),
        }
    }

    pub fn order(self) -> usize {
        match self {
            DiffMonomial::Linear(j) => j,
            DiffMonomial::Quadratic(i, j) => i.max(j),
        }
    }
}

/// `δ₂^k f` as an expression.
pub fn delta2(f: &Expr, k: usize) -> Expr {
    let (i, j) = nu(k);
    let factor = |m: usize| if m == 1 { Expr::one() } else { differentiate(f, m - 2) };
    if i == j {
        return Expr::powi(factor(i), 2);
    }
    Expr::mul(vec![factor(i), factor(j)])
}

/// `sum_k P_k(z) δ₂^k y = 0`. Coefficients are polynomials in `z`
/// (variable 0) and the parameters (variables `1..=params.len()`), with no
/// common polynomial or rational content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qde {
    params: Vec<String>,
    terms: Vec<(DiffMonomial, MPoly)>,
}

impl Qde {
    /// Builds a normalized equation from `(monomial, coefficient)` pairs.
    /// Zero coefficients are dropped; like monomials are merged.
    pub fn new(params: Vec<String>, terms: Vec<(DiffMonomial, MPoly)>) -> Qde {
        let mut merged: Vec<(DiffMonomial, MPoly)> = Vec::new();
        for (m, c) in terms {
            match merged.iter_mut().find(|(n, _)| *n == m) {
                Some((_, acc)) => *acc = &*acc + &c,
                None => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        merged.sort_by_key(|(m, _)| m.index());
        let mut q = Qde { params, terms: merged };
        q.normalize();
        q
    }

    /// The trivial equation `y = 0`.
    pub fn zero_function(params: Vec<String>) -> Qde {
        Qde { params, terms: vec![(DiffMonomial::Linear(0), MPoly::one())] }
    }

    fn normalize(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let g = gcd_all(self.terms.iter().map(|(_, c)| c));
        if !g.is_constant() {
            for (_, c) in self.terms.iter_mut() {
                *c = c.exact_div(&g).expect("gcd divides");
            }
        }
        let content = joint_content(self.terms.iter().map(|(_, c)| c));
        let lead_negative = self
            .terms
            .last()
            .and_then(|(_, c)| c.leading_term().map(|(_, v)| v < &Rat::from_integer(0.into())))
            .unwrap_or(false);
        let factor = if lead_negative { -content } else { content };
        let inv = factor.recip();
        for (_, c) in self.terms.iter_mut() {
            *c = c.scale(&inv);
        }
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Terms in increasing δ₂ index.
    pub fn terms(&self) -> &[(DiffMonomial, MPoly)] {
        &self.terms
    }

    pub fn coefficient(&self, m: DiffMonomial) -> Option<&MPoly> {
        self.terms.iter().find(|(n, _)| *n == m).map(|(_, c)| c)
    }

    pub fn order(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.order()).max().unwrap_or(0)
    }

    /// Largest δ₂ index with a nonzero coefficient.
    pub fn leading_index(&self) -> usize {
        self.terms.last().map(|(m, _)| m.index()).unwrap_or(0)
    }

    pub fn is_linear(&self) -> bool {
        self.terms.iter().all(|(m, _)| matches!(m, DiffMonomial::Linear(_)))
    }

    /// True if the two equations agree up to a factor from the fraction
    /// field of `z` and the parameters.
    pub fn proportional(&self, other: &Qde) -> bool {
        if self.params != other.params || self.terms.len() != other.terms.len() {
            return false;
        }
        if self.terms.iter().zip(&other.terms).any(|((a, _), (b, _))| a != b) {
            return false;
        }
        let Some(((_, a0), (_, b0))) = self.terms.first().zip(other.terms.first()) else {
            return true;
        };
        self.terms.iter().zip(&other.terms).all(|((_, a), (_, b))| a * b0 == b * a0)
    }

    /// Variable names for rendering coefficients.
    pub fn var_names(&self, var: &str) -> Vec<String> {
        let mut names = vec![var.to_string()];
        names.extend(self.params.iter().cloned());
        names
    }

    /// Parses the text rendering, e.g. `-y^2 - 2*y'^2 + y*y'' = 0`.
    pub fn parse(text: &str, params: &BTreeSet<String>) -> Result<Qde, QdeParseError> {
        text::parse_qde(text, params)
    }
}

/// Positive rational content of a family of polynomials.
fn joint_content<'a, I: IntoIterator<Item = &'a MPoly>>(polys: I) -> Rat {
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let mut num = num_bigint::BigInt::zero();
    let mut den = num_bigint::BigInt::one();
    for p in polys {
        for (_, c) in p.terms() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
    }
    if num.is_zero() {
        Rat::one()
    } else {
        Rat::new(num, den)
    }
}

impl fmt::Display for Qde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render(self, "z"))
    }
}

#[cfg(test)]
mod tests;
