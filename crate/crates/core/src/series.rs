//! Truncated Laurent series at `z = 0` with exact rational coefficients.
//!
//! This is an oracle independent of the differential-equation machinery:
//! every catalog function is expanded by plain series arithmetic and the
//! first-order ODE it satisfies.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::expr::{Exponent, Expr, Func};
use crate::field::{int, rational_sqrt, Rat};

/// Largest truncation order tried by [`valuation`].
pub const VALUATION_CAP: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("parameter `{0}` is not allowed in series expansion")]
    Parameter(String),
    #[error("{0}: argument has a pole at 0, expansion is not Laurent")]
    NotLaurent(&'static str),
    #[error("{0}: the value at the expansion point is not a known rational")]
    IrrationalConstant(&'static str),
    #[error("{0}: branch point at 0")]
    Branch(&'static str),
    #[error("division by a series that vanishes to the working order")]
    DivisionByZero,
    #[error("could not reach order {0} within the precision budget")]
    PrecisionExhausted(i64),
    #[error("no nonzero coefficient through order {0}; possibly identically zero")]
    PossiblyZero(i64),
}

type Result<T> = std::result::Result<T, SeriesError>;

/// `sum_{k} coeffs[k] z^{start + k} + O(z^prec)`.
///
/// After normalization either `coeffs[0] != 0` or `coeffs` is empty and
/// `start == prec` (zero to the known order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    start: i64,
    coeffs: Vec<Rat>,
    prec: i64,
}

impl TruncSeries {
    pub fn new(start: i64, coeffs: Vec<Rat>, prec: i64) -> Self {
        assert!(prec >= start, "precision below start");
        let mut coeffs = coeffs;
        coeffs.truncate((prec - start) as usize);
        coeffs.resize((prec - start) as usize, Rat::zero());
        let mut s = TruncSeries { start, coeffs, prec };
        s.normalize();
        s
    }

    pub fn zero(prec: i64) -> Self {
        TruncSeries { start: prec, coeffs: Vec::new(), prec }
    }

    pub fn constant(c: Rat, prec: i64) -> Self {
        TruncSeries::new(0, vec![c], prec.max(0))
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
    }

    /// Least exponent with a nonzero coefficient, if one is known.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start)
        }
    }

    /// Exponents `< precision()` are exact.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^n`; `None` beyond the known order.
    pub fn coeff(&self, n: i64) -> Option<Rat> {
        if n >= self.prec {
            None
        } else if n < self.start {
            Some(Rat::zero())
        } else {
            Some(self.coeffs[(n - self.start) as usize].clone())
        }
    }

    /// Coefficients of `z^from .. z^to` inclusive.
    pub fn coeffs_range(&self, from: i64, to: i64) -> Option<Vec<Rat>> {
        (from..=to).map(|n| self.coeff(n)).collect()
    }

    /// Drops every term of exponent greater than `t`.
    pub fn truncate(&self, t: i64) -> Self {
        if t + 1 >= self.prec {
            return self.clone();
        }
        let keep = (t + 1 - self.start).max(0) as usize;
        TruncSeries::new(self.start.min(t + 1), self.coeffs[..keep.min(self.coeffs.len())].to_vec(), t + 1)
    }

    fn rel(&self) -> i64 {
        self.prec - self.start
    }

    pub fn neg(&self) -> Self {
        TruncSeries { start: self.start, coeffs: self.coeffs.iter().map(|c| -c).collect(), prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let start = self.start.min(other.start).min(prec);
        let mut out = vec![Rat::zero(); (prec - start) as usize];
        for s in [self, other] {
            for (k, c) in s.coeffs.iter().enumerate() {
                let e = s.start + k as i64;
                if e < prec {
                    out[(e - start) as usize] += c;
                }
            }
        }
        TruncSeries::new(start, out, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let start = self.start + other.start;
        let rel = self.rel().min(other.rel());
        let n = rel as usize;
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        TruncSeries::new(start, out, start + rel)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return TruncSeries::zero(self.prec);
        }
        TruncSeries { start: self.start, coeffs: self.coeffs.iter().map(|x| x * c).collect(), prec: self.prec }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        let inv = ps_inv(&self.coeffs);
        let rel = self.rel();
        Ok(TruncSeries::new(-self.start, inv, -self.start + rel))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc: Option<TruncSeries> = None;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc.unwrap_or_else(|| TruncSeries::constant(Rat::one(), self.rel().max(1))))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, c)| c * int(self.start + k as i64)).collect();
        TruncSeries::new(self.start - 1, coeffs, self.prec - 1)
    }

    /// Dense coefficients of `z^0 .. z^{prec-1}`; requires no negative powers.
    fn dense(&self, what: &'static str) -> Result<Vec<Rat>> {
        if self.start < 0 {
            return Err(SeriesError::NotLaurent(what));
        }
        let mut v = vec![Rat::zero(); self.prec.max(0) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[self.start as usize + k] = c.clone();
        }
        Ok(v)
    }

    fn from_dense(v: Vec<Rat>) -> Self {
        let n = v.len() as i64;
        TruncSeries::new(0, v, n)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.start + k as i64;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let zpart = match e {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{}", if e < 0 { format!("({})", e) } else { e.to_string() }),
            };
            if zpart.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", zpart)?;
            } else {
                write!(f, "{}*{}", mag, zpart)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.prec)
    }
}

fn ps_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().min(b.len());
    let mut out = vec![Rat::zero(); n];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

/// Reciprocal of a power series with nonzero constant term.
fn ps_inv(a: &[Rat]) -> Vec<Rat> {
    let n = a.len();
    let a0 = a[0].recip();
    let mut out: Vec<Rat> = Vec::with_capacity(n);
    out.push(a0.clone());
    for m in 1..n {
        let mut s = Rat::zero();
        for k in 1..=m {
            s += &a[k] * &out[m - k];
        }
        out.push(-s * &a0);
    }
    out
}

/// `∫ q` with constant term `c`.
fn ps_integrate(q: &[Rat], c: Rat) -> Vec<Rat> {
    let mut out = Vec::with_capacity(q.len() + 1);
    out.push(c);
    for (k, x) in q.iter().enumerate() {
        out.push(x / int(k as i64 + 1));
    }
    out
}

fn ps_deriv(u: &[Rat]) -> Vec<Rat> {
    u.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect()
}

/// Solves `y' = u' y` with `y(0) = 1`, given `u(0) = 0`.
fn ps_exp(u: &[Rat]) -> Vec<Rat> {
    let n = u.len();
    let mut e = vec![Rat::one()];
    for m in 1..n {
        let mut s = Rat::zero();
        for k in 1..=m {
            s += int(k as i64) * &u[k] * &e[m - k];
        }
        e.push(s / int(m as i64));
    }
    e
}

/// `(sin u, cos u)` or `(sinh u, cosh u)` for `u(0) = 0`.
fn ps_sincos(u: &[Rat], hyperbolic: bool) -> (Vec<Rat>, Vec<Rat>) {
    let n = u.len();
    let mut s = vec![Rat::zero()];
    let mut c = vec![Rat::one()];
    for m in 1..n {
        let mut ss = Rat::zero();
        let mut cs = Rat::zero();
        for k in 1..=m {
            let w = int(k as i64) * &u[k];
            ss += &w * &c[m - k];
            cs += &w * &s[m - k];
        }
        let m = int(m as i64);
        s.push(ss / &m);
        c.push(if hyperbolic { cs / &m } else { -cs / &m });
    }
    (s, c)
}

/// Square root of a power series whose constant term is a rational square.
fn ps_sqrt(u: &[Rat], what: &'static str) -> Result<Vec<Rat>> {
    let s0 = match rational_sqrt(&u[0]) {
        Some(r) if !r.is_zero() => r,
        _ => return Err(SeriesError::IrrationalConstant(what)),
    };
    let two_s0 = &s0 * int(2);
    let mut s = vec![s0];
    for m in 1..u.len() {
        let mut acc = u[m].clone();
        for k in 1..m {
            acc -= &s[k] * &s[m - k];
        }
        s.push(acc / &two_s0);
    }
    Ok(s)
}

fn evaluate(e: &Expr, w: i64) -> Result<TruncSeries> {
    Ok(match e {
        Expr::Num(c) => TruncSeries::constant(c.clone(), w),
        Expr::Var => TruncSeries::new(1, vec![Rat::one()], w.max(2)),
        Expr::Param(p) => return Err(SeriesError::Parameter(p.clone())),
        Expr::Sum(ts) => {
            let mut acc = evaluate(&ts[0], w)?;
            for t in &ts[1..] {
                acc = acc.add(&evaluate(t, w)?);
            }
            acc
        }
        Expr::Product(fs) => {
            let mut acc = evaluate(&fs[0], w)?;
            for f in &fs[1..] {
                acc = acc.mul(&evaluate(f, w)?);
            }
            acc
        }
        Expr::Pow(b, x) => match x {
            Exponent::Int(n) => evaluate(b, w)?.powi(*n)?,
            Exponent::Param(p) => return Err(SeriesError::Parameter(p.clone())),
        },
        Expr::App(f, a) => apply(*f, &evaluate(a, w)?)?,
    })
}

fn apply(f: Func, u: &TruncSeries) -> Result<TruncSeries> {
    let name = f.name();
    match f {
        Func::Tan => return apply(Func::Sin, u)?.div(&apply(Func::Cos, u)?),
        Func::Cot => return apply(Func::Cos, u)?.div(&apply(Func::Sin, u)?),
        Func::Sec => return apply(Func::Cos, u)?.recip(),
        Func::Csc => return apply(Func::Sin, u)?.recip(),
        Func::Tanh => return apply(Func::Sinh, u)?.div(&apply(Func::Cosh, u)?),
        Func::Sqrt => return sqrt(u),
        _ => {}
    }
    let d = u.dense(name)?;
    if d.is_empty() {
        return Err(SeriesError::PrecisionExhausted(0));
    }
    let at_zero = |needed: Rat| -> Result<()> {
        if d[0] == needed {
            Ok(())
        } else {
            Err(SeriesError::IrrationalConstant(name))
        }
    };
    let out = match f {
        Func::Exp => {
            at_zero(Rat::zero())?;
            ps_exp(&d)
        }
        Func::Log => {
            if d[0].is_zero() {
                return Err(SeriesError::Branch(name));
            }
            at_zero(Rat::one())?;
            let q = ps_mul(&ps_deriv(&d), &ps_inv(&d[..d.len() - 1]));
            ps_integrate(&q, Rat::zero())
        }
        Func::Sin | Func::Cos | Func::Sinh | Func::Cosh => {
            at_zero(Rat::zero())?;
            let (s, c) = ps_sincos(&d, matches!(f, Func::Sinh | Func::Cosh));
            if matches!(f, Func::Sin | Func::Sinh) {
                s
            } else {
                c
            }
        }
        Func::Arctan | Func::Arctanh | Func::Arcsin | Func::Arcsinh => {
            at_zero(Rat::zero())?;
            let du = ps_deriv(&d);
            let sign = if matches!(f, Func::Arctan | Func::Arcsinh) { int(1) } else { int(-1) };
            let u2 = ps_mul(&d, &d);
            let mut w: Vec<Rat> = u2[..du.len()].iter().map(|c| c * &sign).collect();
            if w.is_empty() {
                return Ok(TruncSeries::zero(1));
            }
            w[0] += Rat::one();
            let inner = if matches!(f, Func::Arcsin | Func::Arcsinh) { ps_sqrt(&w, name)? } else { w };
            ps_integrate(&ps_mul(&du, &ps_inv(&inner)), Rat::zero())
        }
        _ => unreachable!(),
    };
    Ok(TruncSeries::from_dense(out))
}

fn sqrt(u: &TruncSeries) -> Result<TruncSeries> {
    let v = match u.valuation() {
        Some(v) => v,
        None if u.precision() > 0 => return Ok(TruncSeries::zero(u.precision() / 2)),
        None => return Err(SeriesError::PrecisionExhausted(0)),
    };
    if v % 2 != 0 {
        return Err(SeriesError::Branch("sqrt"));
    }
    let s = ps_sqrt(&u.coeffs, "sqrt")?;
    let rel = u.rel();
    Ok(TruncSeries::new(v / 2, s, v / 2 + rel))
}

/// Exact coefficients of `e` through `z^t`.
pub fn series_of(e: &Expr, t: i64) -> Result<TruncSeries> {
    let mut w = t.max(0) + 4;
    let budget = t.max(0) + 8 + 4 * VALUATION_CAP;
    loop {
        match evaluate(e, w) {
            Ok(s) if s.precision() > t => return Ok(s.truncate(t)),
            Ok(_) | Err(SeriesError::DivisionByZero) | Err(SeriesError::PrecisionExhausted(_)) => {}
            Err(err) => return Err(err),
        }
        if w >= budget {
            return Err(SeriesError::PrecisionExhausted(t));
        }
        w = (2 * w).min(budget);
    }
}

/// Least exponent with a nonzero coefficient, doubling the order up to
/// [`VALUATION_CAP`].
pub fn valuation(e: &Expr) -> Result<i64> {
    let mut t = 8;
    loop {
        let s = series_of(e, t)?;
        if let Some(v) = s.valuation() {
            return Ok(v);
        }
        if t >= VALUATION_CAP {
            return Err(SeriesError::PossiblyZero(VALUATION_CAP));
        }
        t = (2 * t).min(VALUATION_CAP);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::field::rat;
    use std::collections::BTreeSet;

    fn s(text: &str, t: i64) -> TruncSeries {
        series_of(&parse(text, &BTreeSet::new()).unwrap(), t).unwrap()
    }

    fn coeffs(text: &str, from: i64, to: i64) -> Vec<Rat> {
        s(text, to).coeffs_range(from, to).unwrap()
    }

    #[test]
    fn sec_and_tan() {
        let z = Rat::zero();
        assert_eq!(
            coeffs("sec(z)", 0, 7),
            vec![int(1), z.clone(), rat(1, 2), z.clone(), rat(5, 24), z.clone(), rat(61, 720), z.clone()]
        );
        assert_eq!(
            coeffs("tan(z)", 0, 7),
            vec![z.clone(), int(1), z.clone(), rat(1, 3), z.clone(), rat(2, 15), z.clone(), rat(17, 315)]
        );
    }

    #[test]
    fn bernoulli_generating_function() {
        assert_eq!(coeffs("z/(exp(z)-1)", 0, 2), vec![int(1), rat(-1, 2), rat(1, 12)]);
    }

    #[test]
    fn laurent_reciprocal_of_log() {
        let r = s("1/log(1+z)", 1);
        assert_eq!(r.valuation(), Some(-1));
        assert_eq!(r.coeffs_range(-1, 1).unwrap(), vec![int(1), rat(1, 2), rat(-1, 12)]);
    }

    #[test]
    fn valuations() {
        let v = |t: &str| valuation(&parse(t, &BTreeSet::new()).unwrap());
        assert_eq!(v("1/log(1+z)"), Ok(-1));
        assert_eq!(v("tan(z)"), Ok(1));
        assert_eq!(v("z/(exp(z)-1)"), Ok(0));
        assert_eq!(v("sin(z)^2+cos(z)^2-1"), Err(SeriesError::PossiblyZero(VALUATION_CAP)));
    }

    #[test]
    fn inverse_functions_invert() {
        for (outer, inner) in [("arcsin", "sin"), ("arctan", "tan"), ("arcsinh", "sinh"), ("arctanh", "tanh")] {
            let r = s(&format!("{}({}(z))", outer, inner), 12);
            assert_eq!(r, s("z", 12), "{}", outer);
        }
        assert!(s("exp(log(1+z)) - 1 - z", 12).is_zero());
        assert!(s("sqrt(1+z)^2 - 1 - z", 12).is_zero());
        assert_eq!(s("sqrt(4*z^2 + 4*z^3)", 5), s("2*z*sqrt(1+z)", 5));
    }

    #[test]
    fn rejected_inputs() {
        let e = |t: &str, ps: &[&str]| {
            let set: BTreeSet<String> = ps.iter().map(|p| p.to_string()).collect();
            series_of(&parse(t, &set).unwrap(), 5).unwrap_err()
        };
        assert_eq!(e("exp(1/z)", &[]), SeriesError::NotLaurent("exp"));
        assert_eq!(e("log(z)", &[]), SeriesError::Branch("log"));
        assert_eq!(e("exp(1+z)", &[]), SeriesError::IrrationalConstant("exp"));
        assert_eq!(e("sqrt(z)", &[]), SeriesError::Branch("sqrt"));
        assert_eq!(e("sec(z)^k", &["k"]), SeriesError::Parameter("k".into()));
    }

    #[test]
    fn cancellation_recovers_precision() {
        let r = s("(exp(z) - 1 - z - z^2/2)/z^3", 6);
        assert_eq!(r.coeff(0), Some(rat(1, 6)));
        assert_eq!(r.coeff(6), Some(rat(1, 362880)));
    }

    #[test]
    fn display() {
        assert_eq!(s("1/z - z^2/3", 3).to_string(), "z^(-1) - 1/3*z^2 + O(z^4)");
        assert_eq!(TruncSeries::zero(5).to_string(), "0 + O(z^5)");
    }
}
