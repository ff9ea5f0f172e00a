use num_traits::{One, Signed};

use super::{Exponent, Expr};
use crate::field::Rat;

/// Renders in the input grammar; the output parses back to the same tree.
pub(crate) fn to_text(e: &Expr) -> String {
    match e {
        Expr::Sum(terms) => {
            let mut s = String::new();
            for (i, t) in terms.iter().enumerate() {
                if i == 0 {
                    s.push_str(&term_text(t));
                } else if t.leading_negative() {
                    s.push_str(" - ");
                    s.push_str(&term_text(&negate(t)));
                } else {
                    s.push_str(" + ");
                    s.push_str(&term_text(t));
                }
            }
            s
        }
        other => term_text(other),
    }
}

fn negate(e: &Expr) -> Expr {
    match e {
        Expr::Num(r) => Expr::Num(-r.clone()),
        Expr::Product(v) => {
            let mut v = v.clone();
            if let Some(Expr::Num(r)) = v.first_mut() {
                *r = -r.clone();
            }
            Expr::mul(v)
        }
        other => Expr::neg(other.clone()),
    }
}

fn rat_text(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn term_text(e: &Expr) -> String {
    match e {
        Expr::Num(r) => rat_text(r),
        Expr::Product(factors) => {
            let (coeff, rest) = match factors.first() {
                Some(Expr::Num(r)) => (r.clone(), &factors[1..]),
                _ => (Rat::one(), &factors[..]),
            };
            let mut s = String::new();
            if coeff.is_negative() {
                s.push('-');
            }
            let a = coeff.abs();
            let first_is_reciprocal = matches!(rest.first(), Some(Expr::Pow(_, Exponent::Int(n))) if *n < 0);
            let mut wrote = false;
            if !a.is_one() || first_is_reciprocal {
                s.push_str(&rat_text(&a));
                wrote = true;
            }
            for f in rest {
                match f {
                    Expr::Pow(b, Exponent::Int(n)) if *n < 0 && wrote => {
                        s.push('/');
                        s.push_str(&power_text(b, &Exponent::Int(-n)));
                    }
                    _ => {
                        if wrote {
                            s.push('*');
                        }
                        s.push_str(&factor_text(f));
                    }
                }
                wrote = true;
            }
            s
        }
        other => factor_text(other),
    }
}

fn factor_text(e: &Expr) -> String {
    match e {
        Expr::Sum(_) | Expr::Product(_) => format!("({})", to_text(e)),
        Expr::Num(r) if r.is_negative() || !r.is_integer() => format!("({})", rat_text(r)),
        Expr::Pow(b, x) => power_text(b, x),
        _ => atom_text(e),
    }
}

fn power_text(base: &Expr, x: &Exponent) -> String {
    let b = match base {
        Expr::Var | Expr::Param(_) | Expr::App(..) => atom_text(base),
        Expr::Num(r) if r.is_integer() && !r.is_negative() => rat_text(r),
        _ => format!("({})", to_text(base)),
    };
    match x {
        Exponent::Int(1) => b,
        Exponent::Int(n) if *n < 0 => format!("{}^({})", b, n),
        Exponent::Int(n) => format!("{}^{}", b, n),
        Exponent::Param(p) => format!("{}^{}", b, p),
    }
}

fn atom_text(e: &Expr) -> String {
    match e {
        Expr::Var => "z".to_string(),
        Expr::Param(p) => p.clone(),
        Expr::Num(r) => rat_text(r),
        Expr::App(f, a) => format!("{}({})", f.name(), to_text(a)),
        other => format!("({})", to_text(other)),
    }
}
