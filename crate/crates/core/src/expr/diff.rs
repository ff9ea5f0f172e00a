use thiserror::Error;

use super::{Exponent, Expr, Func};
use crate::field::rat;

/// Symbolic derivative `d^n e / dz^n`. The result is unsimplified apart from
/// constant folding.
pub fn differentiate(e: &Expr, n: usize) -> Expr {
    let mut cur = e.clone();
    for _ in 0..n {
        cur = d(&cur);
    }
    cur
}

fn sq(e: &Expr) -> Expr {
    Expr::powi(e.clone(), 2)
}

fn d(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::Param(_) => Expr::zero(),
        Expr::Var => Expr::one(),
        Expr::Sum(ts) => Expr::add(ts.iter().map(d).collect()),
        Expr::Product(fs) => {
            let mut terms = Vec::new();
            for i in 0..fs.len() {
                let di = d(&fs[i]);
                if di.is_zero() {
                    continue;
                }
                let mut v = fs.clone();
                v[i] = di;
                terms.push(Expr::mul(v));
            }
            Expr::add(terms)
        }
        Expr::Pow(b, x) => {
            let db = d(b);
            if db.is_zero() {
                return Expr::zero();
            }
            match x {
                Exponent::Int(n) => Expr::mul(vec![Expr::int(*n), Expr::powi((**b).clone(), n - 1), db]),
                Exponent::Param(k) => Expr::mul(vec![
                    Expr::param(k),
                    e.clone(),
                    db,
                    Expr::powi((**b).clone(), -1),
                ]),
            }
        }
        Expr::App(f, u) => {
            let du = d(u);
            if du.is_zero() {
                return Expr::zero();
            }
            let u = (**u).clone();
            let outer = match f {
                Func::Exp => e.clone(),
                Func::Log => Expr::powi(u, -1),
                Func::Sin => Expr::app(Func::Cos, u),
                Func::Cos => Expr::neg(Expr::app(Func::Sin, u)),
                Func::Tan => Expr::add(vec![Expr::one(), sq(e)]),
                Func::Sec => Expr::mul(vec![e.clone(), Expr::app(Func::Tan, u)]),
                Func::Csc => Expr::mul(vec![Expr::int(-1), e.clone(), Expr::app(Func::Cot, u)]),
                Func::Cot => Expr::neg(Expr::add(vec![Expr::one(), sq(e)])),
                Func::Sinh => Expr::app(Func::Cosh, u),
                Func::Cosh => Expr::app(Func::Sinh, u),
                Func::Tanh => Expr::sub(Expr::one(), sq(e)),
                Func::Arcsin => Expr::powi(
                    Expr::app(Func::Sqrt, Expr::sub(Expr::one(), sq(&u))),
                    -1,
                ),
                Func::Arcsinh => Expr::powi(
                    Expr::app(Func::Sqrt, Expr::add(vec![Expr::one(), sq(&u)])),
                    -1,
                ),
                Func::Arctan => Expr::powi(Expr::add(vec![Expr::one(), sq(&u)]), -1),
                Func::Arctanh => Expr::powi(Expr::sub(Expr::one(), sq(&u)), -1),
                Func::Sqrt => Expr::mul(vec![Expr::num(rat(1, 2)), Expr::powi(e.clone(), -1)]),
            };
            Expr::mul(vec![outer, du])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symbol {
    Z,
    Param(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstituteError {
    #[error("parameter `{0}` appears as an exponent; the value must be an integer or a parameter")]
    NonIntegerExponent(String),
}

/// Replaces every occurrence of `sym` by `value`.
pub fn substitute(e: &Expr, sym: &Symbol, value: &Expr) -> Result<Expr, SubstituteError> {
    Ok(match e {
        Expr::Num(_) => e.clone(),
        Expr::Var => {
            if *sym == Symbol::Z {
                value.clone()
            } else {
                e.clone()
            }
        }
        Expr::Param(p) => match sym {
            Symbol::Param(q) if q == p => value.clone(),
            _ => e.clone(),
        },
        Expr::Sum(v) => Expr::add(v.iter().map(|t| substitute(t, sym, value)).collect::<Result<_, _>>()?),
        Expr::Product(v) => {
            Expr::mul(v.iter().map(|t| substitute(t, sym, value)).collect::<Result<_, _>>()?)
        }
        Expr::Pow(b, x) => {
            let nb = substitute(b, sym, value)?;
            let nx = match (x, sym) {
                (Exponent::Param(k), Symbol::Param(q)) if k == q => match value {
                    Expr::Num(r) if r.is_integer() => {
                        let n: i64 = r
                            .numer()
                            .try_into()
                            .map_err(|_| SubstituteError::NonIntegerExponent(k.clone()))?;
                        Exponent::Int(n)
                    }
                    Expr::Param(p) => Exponent::Param(p.clone()),
                    _ => return Err(SubstituteError::NonIntegerExponent(k.clone())),
                },
                _ => x.clone(),
            };
            Expr::pow(nb, nx)
        }
        Expr::App(f, a) => Expr::app(*f, substitute(a, sym, value)?),
    })
}
