//! Quadratic recurrence equations for power series coefficients.
//!
//! For `y = sum a_n z^n`, the rewrite rules are
//!
//! ```text
//! z^p y^(j)        ->  (n+1-p)_j a_{n+j-p}
//! z^p y^(i) y^(j)  ->  sum_{k=0}^{n-p} (k+1)_i (n-p-k+1)_j a_{k+i} a_{n-p-k+j}
//! ```
//!
//! The equation holds for every `n >= 0`, with `a_m = 0` for `m < 0` and
//! empty sums when `n < p`.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::field::{int, pochhammer_rat, pochhammer_shifted, MPoly, Monomial, Rat};
use crate::qde::{DiffMonomial, Qde};

/// `coeff(n) * a_{n+shift}`; `coeff` is a polynomial in `n` (variable 0)
/// and the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearTerm {
    pub coeff: MPoly,
    pub shift: i64,
}

/// `c * sum_{k=0}^{n-p} (k+1)_i (n-p-k+1)_j a_{k+i} a_{n-p-k+j}` with
/// `i <= j`; `c` involves the parameters only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convolution {
    pub c: MPoly,
    pub i: usize,
    pub j: usize,
    pub p: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qre {
    params: Vec<String>,
    linear: Vec<LinearTerm>,
    convolutions: Vec<Convolution>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QreError {
    #[error("evaluation at n = {n} needs a_0 .. a_{} but only {have} values are known", .needed - 1)]
    InsufficientPrefix { n: usize, needed: usize, have: usize },
    #[error("the recurrence has parameters ({0}); numeric evaluation needs a parameter-free recurrence")]
    Parametric(String),
}

/// The QRE at a fixed `n` as a polynomial in its highest coefficient `x`:
/// `quadratic * x^2 + linear * x + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QreValue {
    /// Index of `x`, or `None` when no coefficient occurs with nonzero weight.
    pub index: Option<usize>,
    pub quadratic: Rat,
    pub linear: Rat,
    pub constant: Rat,
}

impl QreValue {
    /// The unique root when the value is linear in `x`.
    pub fn solve(&self) -> Option<Rat> {
        if self.quadratic.is_zero() && !self.linear.is_zero() {
            Some(-&self.constant / &self.linear)
        } else {
            None
        }
    }

    pub fn at(&self, x: &Rat) -> Rat {
        &self.quadratic * x * x + &self.linear * x + &self.constant
    }
}

/// Applies the rewrite rules term by term.
pub fn qde_to_qre(q: &Qde) -> Qre {
    let np = q.params().len();
    let mut linear: Vec<LinearTerm> = Vec::new();
    let mut convolutions: Vec<Convolution> = Vec::new();
    for (m, coeff) in q.terms() {
        for (mono, c) in coeff.terms() {
            let p = mono.exponent(0) as usize;
            let rest: Vec<u32> = (0..=np).map(|v| if v == 0 { 0 } else { mono.exponent(v) }).collect();
            let scalar = MPoly::term(Monomial::from_exponents(rest), c.clone());
            match *m {
                DiffMonomial::Linear(j) => {
                    let w = &scalar * &pochhammer_shifted(0, 1 - p as i64, j as u32);
                    let shift = j as i64 - p as i64;
                    match linear.iter_mut().find(|t| t.shift == shift) {
                        Some(t) => t.coeff = &t.coeff + &w,
                        None => linear.push(LinearTerm { coeff: w, shift }),
                    }
                }
                DiffMonomial::Quadratic(i, j) => {
                    match convolutions.iter_mut().find(|t| (t.i, t.j, t.p) == (i, j, p)) {
                        Some(t) => t.c = &t.c + &scalar,
                        None => convolutions.push(Convolution { c: scalar, i, j, p }),
                    }
                }
            }
        }
    }
    Qre::new(q.params().to_vec(), linear, convolutions)
}

impl Qre {
    pub fn new(params: Vec<String>, linear: Vec<LinearTerm>, convolutions: Vec<Convolution>) -> Qre {
        let mut linear: Vec<LinearTerm> = linear.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        linear.sort_by_key(|t| std::cmp::Reverse(t.shift));
        let mut convolutions: Vec<Convolution> = convolutions
            .into_iter()
            .filter(|t| !t.c.is_zero())
            .map(|t| Convolution { i: t.i.min(t.j), j: t.i.max(t.j), ..t })
            .collect();
        convolutions.sort_by_key(|t| (t.p, std::cmp::Reverse(t.j), std::cmp::Reverse(t.i)));
        Qre { params, linear, convolutions }
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Linear terms by decreasing shift.
    pub fn linear(&self) -> &[LinearTerm] {
        &self.linear
    }

    pub fn convolutions(&self) -> &[Convolution] {
        &self.convolutions
    }

    /// The largest index offset `M`: the equation at `n` involves
    /// coefficients up to `a_{n+M}`.
    pub fn max_offset(&self) -> i64 {
        let lin = self.linear.iter().map(|t| t.shift);
        let conv = self.convolutions.iter().map(|t| t.j as i64 - t.p as i64);
        lin.chain(conv).max().unwrap_or(0)
    }

    fn check_numeric(&self) -> Result<(), QreError> {
        if self.params.is_empty() {
            Ok(())
        } else {
            Err(QreError::Parametric(self.params.join(", ")))
        }
    }

    /// Every `(index, weight)` pair of linear occurrences and every
    /// `(index, index, weight)` triple of products at this `n`.
    #[allow(clippy::type_complexity)]
    fn occurrences(&self, n: usize) -> (Vec<(usize, Rat)>, Vec<(usize, usize, Rat)>) {
        let nr = int(n as i64);
        let mut lin = Vec::new();
        for t in &self.linear {
            let idx = n as i64 + t.shift;
            if idx < 0 {
                continue;
            }
            let w = t.coeff.eval(std::slice::from_ref(&nr));
            if !w.is_zero() {
                lin.push((idx as usize, w));
            }
        }
        let mut quad = Vec::new();
        for t in &self.convolutions {
            if n < t.p {
                continue;
            }
            let c = t.c.constant_value().expect("parameter-free");
            let m = n - t.p;
            for k in 0..=m {
                let w = &c
                    * pochhammer_rat(&int(k as i64 + 1), t.i as u32)
                    * pochhammer_rat(&int((m - k) as i64 + 1), t.j as u32);
                if !w.is_zero() {
                    quad.push((k + t.i, m - k + t.j, w));
                }
            }
        }
        (lin, quad)
    }

    /// The equation at `n` with `a_0 .. a_{M-1}` taken from `coeffs`, as a
    /// polynomial in the highest occurring coefficient `a_M`.
    pub fn evaluate(&self, coeffs: &[Rat], n: usize) -> Result<QreValue, QreError> {
        self.check_numeric()?;
        let (lin, quad) = self.occurrences(n);
        let top = lin.iter().map(|(i, _)| *i).chain(quad.iter().map(|(i, j, _)| *i.max(j))).max();
        let mut v = QreValue { index: top, quadratic: Rat::zero(), linear: Rat::zero(), constant: Rat::zero() };
        let Some(top) = top else { return Ok(v) };
        if coeffs.len() < top {
            return Err(QreError::InsufficientPrefix { n, needed: top, have: coeffs.len() });
        }
        for (i, w) in lin {
            if i == top {
                v.linear += w;
            } else {
                v.constant += w * &coeffs[i];
            }
        }
        for (i, j, w) in quad {
            match (i == top, j == top) {
                (true, true) => v.quadratic += w,
                (true, false) => v.linear += w * &coeffs[j],
                (false, true) => v.linear += w * &coeffs[i],
                (false, false) => v.constant += w * &coeffs[i] * &coeffs[j],
            }
        }
        Ok(v)
    }

    /// The left-hand side at `n` with every coefficient known.
    pub fn residual(&self, coeffs: &[Rat], n: usize) -> Result<Rat, QreError> {
        let v = self.evaluate(coeffs, n)?;
        Ok(match v.index {
            None => Rat::zero(),
            Some(top) => {
                let x = coeffs.get(top).ok_or(QreError::InsufficientPrefix {
                    n,
                    needed: top + 1,
                    have: coeffs.len(),
                })?;
                v.at(x)
            }
        })
    }

    /// Variable names for coefficient rendering.
    pub fn var_names(&self) -> Vec<String> {
        let mut names = vec!["n".to_string()];
        names.extend(self.params.iter().cloned());
        names
    }
}

/// `a(n+s)` with the offset folded into the index text.
pub(crate) fn index_text(var: &str, s: i64) -> String {
    match s {
        0 => var.to_string(),
        s if s > 0 => format!("{}+{}", var, s),
        s => format!("{}-{}", var, -s),
    }
}

/// `(x+1)*(x+2)*...` for the Pochhammer symbol `(x+c)_k`.
pub(crate) fn pochhammer_text(x: &str, c: i64, k: usize) -> Vec<String> {
    (0..k as i64).map(|t| format!("({})", index_text(x, c + t))).collect()
}

/// Parenthesized polynomial unless it is a single factor.
pub(crate) fn coeff_text(p: &MPoly, names: &[String]) -> (bool, String) {
    if p.len() == 1 {
        let neg = p.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false);
        let mag = if neg { -p } else { p.clone() };
        (neg, if mag.is_one() { String::new() } else { mag.display_with(names) })
    } else {
        (false, format!("({})", p.display_with(names)))
    }
}

impl fmt::Display for Qre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.var_names();
        let mut parts: Vec<(bool, String)> = Vec::new();
        for t in &self.linear {
            let (neg, c) = coeff_text(&t.coeff, &names);
            let a = format!("a({})", index_text("n", t.shift));
            parts.push((neg, if c.is_empty() { a } else { format!("{}*{}", c, a) }));
        }
        for t in &self.convolutions {
            let (neg, c) = coeff_text(&t.c, &names);
            let upper = index_text("n", -(t.p as i64));
            let rest = format!("n-k{}", if t.p > 0 { format!("-{}", t.p) } else { String::new() });
            let mut factors = pochhammer_text("k", 1, t.i);
            factors.extend(pochhammer_text(&rest, 1, t.j));
            factors.push(format!("a({})", index_text("k", t.i as i64)));
            factors.push(format!("a({})", index_text(&rest, t.j as i64)));
            let sum = format!("sum(k=0..{}, {})", upper, factors.join("*"));
            parts.push((neg, if c.is_empty() { sum } else { format!("{}*{}", c, sum) }));
        }
        if parts.is_empty() {
            return write!(f, "0 = 0");
        }
        for (idx, (neg, body)) in parts.iter().enumerate() {
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", body)?;
        }
        write!(f, " = 0")
    }
}
