//! Differential towers of transcendental kernels and canonical rational forms
//! over them.
//!
//! Variable layout in every polynomial: index 0 is `z`, indices `1..=P` are
//! the declared parameters, and each kernel gets the next free index in
//! creation order. A kernel's argument only involves lower indices, so
//! reduction can proceed from the highest variable downwards.
//!
//! The only algebraic relations used are `sin² + cos² = 1`,
//! `cosh² - sinh² = 1` and `sqrt(u)² = u`; distinct kernels are otherwise
//! treated as independent.

mod factors;
mod form;

pub use factors::Factors;
pub use form::CanonicalForm;

use thiserror::Error;

use crate::expr::{Exponent, Expr, Func};
use crate::field::{int, rational_sqrt, MPoly, Monomial};

pub const DEFAULT_DEPTH_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("not canonicalizable: kernel nesting exceeds depth limit {0}")]
    DepthExceeded(usize),
    #[error("subexpression `{0}` is not generated by the tower")]
    Ungenerated(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("undeclared parameter `{0}`")]
    UnknownParameter(String),
}

type Result<T> = std::result::Result<T, TowerError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelKind {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
    Arctan,
    Arctanh,
    Arcsin,
    Arcsinh,
    Sqrt,
    /// `arg^k` for the parameter with the given variable index.
    Pow(usize),
}

#[derive(Clone, Debug)]
pub struct Kernel {
    pub kind: KernelKind,
    pub arg: CanonicalForm,
    pub deriv: CanonicalForm,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct Tower {
    params: Vec<String>,
    kernels: Vec<Kernel>,
    depth_limit: usize,
    frozen: bool,
}

impl Tower {
    pub fn new(params: &[String], depth_limit: usize) -> Self {
        Tower { params: params.to_vec(), kernels: Vec::new(), depth_limit, frozen: false }
    }

    /// Builds the tower generated by `e`: every kernel of `e` together with
    /// the closure under differentiation.
    pub fn build(e: &Expr, params: &[String], depth_limit: usize) -> Result<Tower> {
        let mut t = Tower::new(params, depth_limit);
        t.absorb(e)?;
        Ok(t)
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn kernels(&self) -> &[Kernel] {
        &self.kernels
    }

    /// Index of the first kernel variable.
    pub fn first_kernel(&self) -> usize {
        1 + self.params.len()
    }

    pub fn kernel(&self, var: usize) -> Option<&Kernel> {
        var.checked_sub(self.first_kernel()).and_then(|i| self.kernels.get(i))
    }

    /// Display names of all variables, in index order.
    pub fn var_names(&self) -> Vec<String> {
        let mut names = vec!["z".to_string()];
        names.extend(self.params.iter().cloned());
        for i in 0..self.kernels.len() {
            names.push(format!("K{}", i));
        }
        names
    }

    /// Canonical form of `e`, extending the tower as needed.
    pub fn absorb(&mut self, e: &Expr) -> Result<CanonicalForm> {
        self.canon(e)
    }

    /// Canonical form of `e` over the existing kernels only.
    pub fn canonicalize(&self, e: &Expr) -> Result<CanonicalForm> {
        let mut t = self.clone();
        t.frozen = true;
        t.canon(e)
    }

    // Arithmetic.

    pub fn add(&self, a: &CanonicalForm, b: &CanonicalForm) -> CanonicalForm {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let (l, ma, mb) = a.den.lcm(&b.den);
        let num = &(&a.num * &ma) + &(&b.num * &mb);
        self.reduce(num, l)
    }

    pub fn sub(&self, a: &CanonicalForm, b: &CanonicalForm) -> CanonicalForm {
        self.add(a, &b.neg())
    }

    pub fn mul(&self, a: &CanonicalForm, b: &CanonicalForm) -> CanonicalForm {
        if a.is_zero() || b.is_zero() {
            return CanonicalForm::zero();
        }
        let num = &a.num * &b.num;
        self.reduce(num, a.den.mul(&b.den))
    }

    pub fn inv(&self, a: &CanonicalForm) -> Result<CanonicalForm> {
        if a.is_zero() {
            return Err(TowerError::DivisionByZero);
        }
        let (scalar, den) = Factors::from_poly(&a.num);
        let num = a.den.expand().scale(&scalar.recip());
        Ok(self.reduce(num, den))
    }

    pub fn div(&self, a: &CanonicalForm, b: &CanonicalForm) -> Result<CanonicalForm> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &CanonicalForm, n: i64) -> Result<CanonicalForm> {
        let base = if n < 0 { self.inv(a)? } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = CanonicalForm::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        Ok(acc)
    }

    pub fn equal(&self, a: &CanonicalForm, b: &CanonicalForm) -> bool {
        a == b || self.sub(a, b).is_zero()
    }

    /// Reduces `num` modulo the tower relations and cancels common factors.
    pub fn reduce(&self, num: MPoly, den: Factors) -> CanonicalForm {
        let (num, extra) = self.reduce_poly(num);
        let mut den = den.mul(&extra);
        let num = den.cancel(num);
        CanonicalForm { num, den }
    }

    /// Reduces a polynomial modulo the relations; square-root reduction may
    /// require multiplying through by the radicand's denominator, which is
    /// returned as the second component.
    pub fn reduce_poly(&self, p: MPoly) -> (MPoly, Factors) {
        let mut p = p;
        let mut extra = Factors::one();
        let first = self.first_kernel();
        for (i, k) in self.kernels.iter().enumerate().rev() {
            let v = first + i;
            if p.degree_in(v) < 2 {
                continue;
            }
            match k.kind {
                KernelKind::Sin | KernelKind::Sinh => {
                    // Partner cosine is the preceding kernel.
                    let c = MPoly::var(v - 1);
                    let c2 = &c * &c;
                    let sub = if k.kind == KernelKind::Sin {
                        &MPoly::one() - &c2
                    } else {
                        &c2 - &MPoly::one()
                    };
                    p = reduce_square(&p, v, &sub, &MPoly::one());
                }
                KernelKind::Sqrt => {
                    let m = p.degree_in(v) / 2;
                    let fu = k.arg.den.expand();
                    p = reduce_square(&p, v, &k.arg.num, &fu);
                    extra = extra.mul(&k.arg.den.pow(m));
                }
                _ => {}
            }
        }
        (p, extra)
    }

    /// Rewrites forms over one common denominator, returning the reduced
    /// numerators and that denominator.
    pub fn common_denominator(&self, forms: &[CanonicalForm]) -> (Vec<MPoly>, Factors) {
        let mut state: Vec<(MPoly, Factors)> =
            forms.iter().map(|f| (f.num.clone(), f.den.clone())).collect();
        let mut reduced = true;
        loop {
            if !reduced {
                for (p, d) in state.iter_mut() {
                    let (r, extra) = self.reduce_poly(std::mem::take(p));
                    *p = r;
                    *d = d.mul(&extra);
                }
            }
            let mut l = Factors::one();
            for (_, d) in &state {
                l = l.lcm(d).0;
            }
            if reduced && state.iter().all(|(_, d)| *d == l) {
                return (state.into_iter().map(|(p, _)| p).collect(), l);
            }
            let mut changed = false;
            for (p, d) in state.iter_mut() {
                let (_, m, _) = d.lcm(&l);
                if !m.is_one() {
                    changed = true;
                    *p = &*p * &m;
                }
                *d = l.clone();
            }
            reduced = !changed;
        }
    }

    // Derivation.

    /// `d/dz` of a polynomial in the tower variables.
    pub fn deriv_poly(&self, p: &MPoly) -> CanonicalForm {
        let mut acc = CanonicalForm::poly(p.partial(0));
        let first = self.first_kernel();
        for (i, k) in self.kernels.iter().enumerate() {
            let v = first + i;
            if p.involves(v) {
                let dp = CanonicalForm::poly(p.partial(v));
                acc = self.add(&acc, &self.mul(&dp, &k.deriv));
            }
        }
        acc
    }

    pub fn deriv(&self, a: &CanonicalForm) -> CanonicalForm {
        if a.is_zero() {
            return CanonicalForm::zero();
        }
        let mut inner = self.deriv_poly(&a.num);
        for (f, e) in a.den.items() {
            let df = self.deriv_poly(f);
            if df.is_zero() {
                continue;
            }
            let scaled = CanonicalForm::poly(a.num.scale(&int(*e as i64)));
            let term = self.mul(&scaled, &df);
            let term = self.div_factors(&term, &Factors::from_poly(f).1);
            inner = self.sub(&inner, &term);
        }
        self.div_factors(&inner, &a.den)
    }

    pub fn deriv_n(&self, a: &CanonicalForm, n: usize) -> CanonicalForm {
        let mut cur = a.clone();
        for _ in 0..n {
            cur = self.deriv(&cur);
        }
        cur
    }

    fn div_factors(&self, a: &CanonicalForm, f: &Factors) -> CanonicalForm {
        let mut den = a.den.mul(f);
        let num = den.cancel(a.num.clone());
        CanonicalForm { num, den }
    }

    /// The numerator split by kernel monomial; each coefficient is a
    /// polynomial in z and the parameters.
    pub fn collect_kernel_coefficients(&self, cf: &CanonicalForm) -> Vec<(Monomial, MPoly)> {
        cf.num.split_at(self.first_kernel()).into_iter().collect()
    }

    /// True if the form only involves z and parameters.
    pub fn is_rational(&self, cf: &CanonicalForm) -> bool {
        cf.is_rational_in(self.first_kernel())
    }

    // Conversion to expressions.

    pub fn var_expr(&self, v: usize) -> Expr {
        if v == 0 {
            return Expr::z();
        }
        if v <= self.params.len() {
            return Expr::param(&self.params[v - 1]);
        }
        let k = self.kernel(v).expect("kernel variable");
        let a = self.to_expr(&k.arg);
        match &k.kind {
            KernelKind::Sin => Expr::app(Func::Sin, a),
            KernelKind::Cos => Expr::app(Func::Cos, a),
            KernelKind::Sinh => Expr::app(Func::Sinh, a),
            KernelKind::Cosh => Expr::app(Func::Cosh, a),
            KernelKind::Exp => Expr::app(Func::Exp, a),
            KernelKind::Log => Expr::app(Func::Log, a),
            KernelKind::Arctan => Expr::app(Func::Arctan, a),
            KernelKind::Arctanh => Expr::app(Func::Arctanh, a),
            KernelKind::Arcsin => Expr::app(Func::Arcsin, a),
            KernelKind::Arcsinh => Expr::app(Func::Arcsinh, a),
            KernelKind::Sqrt => Expr::app(Func::Sqrt, a),
            KernelKind::Pow(p) => Expr::pow(a, Exponent::Param(self.params[p - 1].clone())),
        }
    }

    pub fn poly_expr(&self, p: &MPoly) -> Expr {
        let mut terms = Vec::new();
        for (m, c) in p.terms().rev() {
            let mut fs = vec![Expr::num(c.clone())];
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    fs.push(Expr::powi(self.var_expr(v), e as i64));
                }
            }
            terms.push(Expr::mul(fs));
        }
        Expr::add(terms)
    }

    pub fn to_expr(&self, cf: &CanonicalForm) -> Expr {
        let mut fs = vec![self.poly_expr(&cf.num)];
        for (f, e) in cf.den.items() {
            fs.push(Expr::powi(self.poly_expr(f), -(*e as i64)));
        }
        Expr::mul(fs)
    }

    // Canonicalization and kernel management.

    fn param_var(&self, name: &str) -> Result<usize> {
        self.params
            .iter()
            .position(|p| p == name)
            .map(|i| i + 1)
            .ok_or_else(|| TowerError::UnknownParameter(name.to_string()))
    }

    fn var(&self, v: usize) -> CanonicalForm {
        CanonicalForm::poly(MPoly::var(v))
    }

    fn form_depth(&self, cf: &CanonicalForm) -> usize {
        let first = self.first_kernel();
        let mut d = 0;
        let mut seen = |m: &Monomial| {
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 && v >= first {
                    d = d.max(self.kernels[v - first].depth);
                }
            }
        };
        for (m, _) in cf.num.terms() {
            seen(m);
        }
        for (f, _) in cf.den.items() {
            for (m, _) in f.terms() {
                seen(m);
            }
        }
        d
    }

    fn find_kernel(&self, kind: &KernelKind, arg: &CanonicalForm) -> Option<usize> {
        let first = self.first_kernel();
        self.kernels
            .iter()
            .position(|k| &k.kind == kind && self.equal(&k.arg, arg))
            .map(|i| first + i)
    }

    fn check_new(&self, kind: &KernelKind, arg: &CanonicalForm) -> Result<usize> {
        if self.frozen {
            let name = format!("{:?}({})", kind, self.to_expr(arg)).to_lowercase();
            return Err(TowerError::Ungenerated(name));
        }
        let depth = 1 + self.form_depth(arg);
        if depth > self.depth_limit {
            return Err(TowerError::DepthExceeded(self.depth_limit));
        }
        Ok(depth)
    }

    fn push(&mut self, kind: KernelKind, arg: CanonicalForm, depth: usize) -> usize {
        self.kernels.push(Kernel { kind, arg, deriv: CanonicalForm::zero(), depth });
        self.first_kernel() + self.kernels.len() - 1
    }

    fn set_deriv(&mut self, v: usize, d: CanonicalForm) {
        let i = v - self.first_kernel();
        self.kernels[i].deriv = d;
    }

    /// Kernel variables `(cos, sin)` (or `(cosh, sinh)`) for `arg`.
    fn pair(&mut self, arg: CanonicalForm, hyperbolic: bool) -> Result<(usize, usize)> {
        let (ck, sk) = if hyperbolic {
            (KernelKind::Cosh, KernelKind::Sinh)
        } else {
            (KernelKind::Cos, KernelKind::Sin)
        };
        if let Some(c) = self.find_kernel(&ck, &arg) {
            return Ok((c, c + 1));
        }
        let depth = self.check_new(&ck, &arg)?;
        let du = self.deriv(&arg);
        let c = self.push(ck, arg.clone(), depth);
        let s = self.push(sk, arg, depth);
        let dc = self.mul(&self.var(s), &du);
        let dc = if hyperbolic { dc } else { dc.neg() };
        let ds = self.mul(&self.var(c), &du);
        self.set_deriv(c, dc);
        self.set_deriv(s, ds);
        Ok((c, s))
    }

    fn simple_kernel(&mut self, kind: KernelKind, arg: CanonicalForm) -> Result<usize> {
        if let Some(v) = self.find_kernel(&kind, &arg) {
            return Ok(v);
        }
        let depth = self.check_new(&kind, &arg)?;
        let du = self.deriv(&arg);
        let one = CanonicalForm::one();
        let u2 = self.mul(&arg, &arg);
        // Derivatives that need auxiliary kernels are prepared before the
        // kernel itself is created so that indices stay ordered.
        let pre = match kind {
            KernelKind::Arcsin => Some(self.sqrt_form(self.sub(&one, &u2))?),
            KernelKind::Arcsinh => Some(self.sqrt_form(self.add(&one, &u2))?),
            _ => None,
        };
        let depth = match &pre {
            Some(r) => depth.max(1 + self.form_depth(r)),
            None => depth,
        };
        if depth > self.depth_limit {
            return Err(TowerError::DepthExceeded(self.depth_limit));
        }
        let v = self.push(kind.clone(), arg.clone(), depth);
        let me = self.var(v);
        let d = match kind {
            KernelKind::Exp => self.mul(&du, &me),
            KernelKind::Log => self.div(&du, &arg)?,
            KernelKind::Arctan => self.div(&du, &self.add(&one, &u2))?,
            KernelKind::Arctanh => self.div(&du, &self.sub(&one, &u2))?,
            KernelKind::Arcsin => {
                let r = pre.expect("radical");
                self.div(&self.mul(&du, &r), &self.sub(&one, &u2))?
            }
            KernelKind::Arcsinh => {
                let r = pre.expect("radical");
                self.div(&self.mul(&du, &r), &self.add(&one, &u2))?
            }
            KernelKind::Sqrt => {
                let two_u = arg.scale(&int(2));
                self.div(&self.mul(&du, &me), &two_u)?
            }
            KernelKind::Pow(p) => {
                let k = self.var(p);
                self.mul(&k, &self.mul(&me, &self.div(&du, &arg)?))
            }
            _ => unreachable!("paired kernels are created by pair()"),
        };
        self.set_deriv(v, d);
        Ok(v)
    }

    fn sqrt_form(&mut self, u: CanonicalForm) -> Result<CanonicalForm> {
        if u.is_zero() {
            return Ok(CanonicalForm::zero());
        }
        if let Some(c) = u.constant_value() {
            if let Some(r) = rational_sqrt(&c) {
                return Ok(CanonicalForm::constant(r));
            }
        }
        let v = self.simple_kernel(KernelKind::Sqrt, u)?;
        Ok(self.var(v))
    }

    fn canon(&mut self, e: &Expr) -> Result<CanonicalForm> {
        Ok(match e {
            Expr::Num(r) => CanonicalForm::constant(r.clone()),
            Expr::Var => self.var(0),
            Expr::Param(p) => self.var(self.param_var(p)?),
            Expr::Sum(ts) => {
                let mut acc = CanonicalForm::zero();
                for t in ts {
                    let f = self.canon(t)?;
                    acc = self.add(&acc, &f);
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = CanonicalForm::one();
                for t in fs {
                    let f = self.canon(t)?;
                    acc = self.mul(&acc, &f);
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
            Expr::Pow(b, Exponent::Int(n)) => {
                let f = self.canon(b)?;
                self.pow(&f, *n)?
            }
            Expr::Pow(b, Exponent::Param(k)) => {
                let f = self.canon(b)?;
                if f.is_one() {
                    return Ok(CanonicalForm::one());
                }
                if f.is_zero() {
                    return Err(TowerError::DivisionByZero);
                }
                let p = self.param_var(k)?;
                let v = self.simple_kernel(KernelKind::Pow(p), f)?;
                self.var(v)
            }
            Expr::App(func, a) => {
                let u = self.canon(a)?;
                self.apply(*func, u)?
            }
        })
    }

    fn apply(&mut self, func: Func, u: CanonicalForm) -> Result<CanonicalForm> {
        let zero_arg = u.is_zero();
        Ok(match func {
            Func::Exp if zero_arg => CanonicalForm::one(),
            Func::Exp => {
                let v = self.simple_kernel(KernelKind::Exp, u)?;
                self.var(v)
            }
            Func::Log if u.is_one() => CanonicalForm::zero(),
            Func::Log => {
                if zero_arg {
                    return Err(TowerError::DivisionByZero);
                }
                let v = self.simple_kernel(KernelKind::Log, u)?;
                self.var(v)
            }
            Func::Sin | Func::Sinh if zero_arg => CanonicalForm::zero(),
            Func::Cos | Func::Cosh if zero_arg => CanonicalForm::one(),
            Func::Tan | Func::Tanh if zero_arg => CanonicalForm::zero(),
            Func::Sec if zero_arg => CanonicalForm::one(),
            Func::Csc | Func::Cot if zero_arg => return Err(TowerError::DivisionByZero),
            Func::Sin | Func::Cos | Func::Tan | Func::Sec | Func::Csc | Func::Cot => {
                let (c, s) = self.pair(u, false)?;
                let (c, s) = (self.var(c), self.var(s));
                match func {
                    Func::Sin => s,
                    Func::Cos => c,
                    Func::Tan => self.div(&s, &c)?,
                    Func::Sec => self.inv(&c)?,
                    Func::Csc => self.inv(&s)?,
                    _ => self.div(&c, &s)?,
                }
            }
            Func::Sinh | Func::Cosh | Func::Tanh => {
                let (c, s) = self.pair(u, true)?;
                let (c, s) = (self.var(c), self.var(s));
                match func {
                    Func::Sinh => s,
                    Func::Cosh => c,
                    _ => self.div(&s, &c)?,
                }
            }
            Func::Arcsin | Func::Arctan | Func::Arcsinh | Func::Arctanh if zero_arg => {
                CanonicalForm::zero()
            }
            Func::Arcsin => self.kernel_form(KernelKind::Arcsin, u)?,
            Func::Arctan => self.kernel_form(KernelKind::Arctan, u)?,
            Func::Arcsinh => self.kernel_form(KernelKind::Arcsinh, u)?,
            Func::Arctanh => self.kernel_form(KernelKind::Arctanh, u)?,
            Func::Sqrt => self.sqrt_form(u)?,
        })
    }

    fn kernel_form(&mut self, kind: KernelKind, u: CanonicalForm) -> Result<CanonicalForm> {
        let v = self.simple_kernel(kind, u)?;
        Ok(self.var(v))
    }
}

/// Replaces `x_v^2` by `num / den` throughout `p`, multiplying through by the
/// needed power of `den` (the largest exponent halved).
fn reduce_square(p: &MPoly, v: usize, num: &MPoly, den: &MPoly) -> MPoly {
    let coeffs = p.coeffs_in(v);
    let m = (coeffs.len() - 1) / 2;
    let mut num_pows = vec![MPoly::one()];
    let mut den_pows = vec![MPoly::one()];
    for i in 1..=m {
        num_pows.push(&num_pows[i - 1] * num);
        den_pows.push(&den_pows[i - 1] * den);
    }
    let x = MPoly::var(v);
    let mut out = MPoly::zero();
    for (e, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let q = e / 2;
        let mut t = &(c * &num_pows[q]) * &den_pows[m - q];
        if e % 2 == 1 {
            t = &t * &x;
        }
        out = &out + &t;
    }
    out
}

#[cfg(test)]
mod tests;
