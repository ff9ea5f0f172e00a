//! Expression trees for elementary functions of the series variable `z`.
//!
//! Sums and products are n-ary and flattened, numeric constants are folded at
//! construction (collected last in sums, first in products). No other
//! simplification happens here.

mod diff;
mod parse;
mod print;

pub use diff::{differentiate, substitute, SubstituteError, Symbol};
pub use parse::{parse, ParseError, ParseErrorKind};

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::field::Rat;

/// The closed catalog of elementary functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sec,
    Csc,
    Cot,
    Sinh,
    Cosh,
    Tanh,
    Arcsin,
    Arctan,
    Arcsinh,
    Arctanh,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 16] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sec,
        Func::Csc,
        Func::Cot,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Arcsin,
        Func::Arctan,
        Func::Arcsinh,
        Func::Arctanh,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sec => "sec",
            Func::Csc => "csc",
            Func::Cot => "cot",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Arcsin => "arcsin",
            Func::Arctan => "arctan",
            Func::Arcsinh => "arcsinh",
            Func::Arctanh => "arctanh",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// Exponents are integers or a single parameter symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Int(i64),
    Param(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(Rat),
    /// The series variable `z`.
    Var,
    /// A symbolic constant, transcendental over the rationals.
    Param(String),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, Exponent),
    App(Func, Box<Expr>),
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn num(r: Rat) -> Expr {
        Expr::Num(r)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Num(Rat::from_integer(n.into()))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn z() -> Expr {
        Expr::Var
    }

    pub fn param(name: &str) -> Expr {
        Expr::Param(name.to_string())
    }

    pub fn app(f: Func, arg: Expr) -> Expr {
        Expr::App(f, Box::new(arg))
    }

    pub fn as_num(&self) -> Option<&Rat> {
        match self {
            Expr::Num(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(r) if r.is_zero())
    }

    pub fn add(terms: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(terms.len());
        let mut c = Rat::zero();
        for t in terms {
            match t {
                Expr::Sum(inner) => {
                    for u in inner {
                        match u {
                            Expr::Num(r) => c += r,
                            other => flat.push(other),
                        }
                    }
                }
                Expr::Num(r) => c += r,
                other => flat.push(other),
            }
        }
        if !c.is_zero() {
            flat.push(Expr::Num(c));
        }
        match flat.len() {
            0 => Expr::zero(),
            1 => flat.pop().unwrap(),
            _ => Expr::Sum(flat),
        }
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(factors.len());
        let mut c = Rat::one();
        for f in factors {
            match f {
                Expr::Product(inner) => {
                    for u in inner {
                        match u {
                            Expr::Num(r) => c *= r,
                            other => flat.push(other),
                        }
                    }
                }
                Expr::Num(r) => c *= r,
                other => flat.push(other),
            }
        }
        if c.is_zero() {
            return Expr::zero();
        }
        if !c.is_one() {
            flat.insert(0, Expr::Num(c));
        }
        match flat.len() {
            0 => Expr::one(),
            1 => flat.pop().unwrap(),
            _ => Expr::Product(flat),
        }
    }

    pub fn pow(base: Expr, exp: Exponent) -> Expr {
        match exp {
            Exponent::Int(0) => Expr::one(),
            Exponent::Int(1) => base,
            Exponent::Int(n) => match base {
                Expr::Num(r) if !(r.is_zero() && n < 0) => {
                    let p = if n >= 0 {
                        num_traits::pow(r, n as usize)
                    } else {
                        num_traits::pow(r.recip(), n.unsigned_abs() as usize)
                    };
                    Expr::Num(p)
                }
                Expr::Pow(b, Exponent::Int(m)) => Expr::pow(*b, Exponent::Int(m * n)),
                other => Expr::Pow(Box::new(other), Exponent::Int(n)),
            },
            Exponent::Param(p) => Expr::Pow(Box::new(base), Exponent::Param(p)),
        }
    }

    pub fn powi(base: Expr, n: i64) -> Expr {
        Expr::pow(base, Exponent::Int(n))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::mul(vec![Expr::int(-1), e])
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::add(vec![a, Expr::neg(b)])
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::mul(vec![a, Expr::powi(b, -1)])
    }

    /// Parameter names appearing anywhere in the tree.
    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) | Expr::Var => {}
            Expr::Param(p) => {
                out.insert(p.clone());
            }
            Expr::Sum(v) | Expr::Product(v) => v.iter().for_each(|e| e.collect_params(out)),
            Expr::Pow(b, e) => {
                b.collect_params(out);
                if let Exponent::Param(p) = e {
                    out.insert(p.clone());
                }
            }
            Expr::App(_, a) => a.collect_params(out),
        }
    }

    pub fn is_parameter_free(&self) -> bool {
        self.params().is_empty()
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Var | Expr::Param(_) => 1,
            Expr::Sum(v) | Expr::Product(v) => 1 + v.iter().map(Expr::depth).max().unwrap_or(0),
            Expr::Pow(b, _) => 1 + b.depth(),
            Expr::App(_, a) => 1 + a.depth(),
        }
    }

    /// True if the numeric value is a negative rational or a product
    /// led by one; used by the printer for sign placement.
    pub(crate) fn leading_negative(&self) -> bool {
        match self {
            Expr::Num(r) => r.is_negative(),
            Expr::Product(v) => matches!(v.first(), Some(Expr::Num(r)) if r.is_negative()),
            _ => false,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::to_text(self))
    }
}
