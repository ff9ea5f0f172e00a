#![allow(dead_code)]

use std::collections::BTreeSet;

use qfps::expr::{parse, Expr, Func};
use qfps::field::{rat, MPoly};
use qfps::series::{series_of, TruncSeries};
use qfps::tower::{CanonicalForm, KernelKind, Tower, DEFAULT_DEPTH_LIMIT};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn p(s: &str) -> Expr {
    parse(s, &BTreeSet::new()).unwrap()
}

pub fn pp(s: &str, params: &[&str]) -> Expr {
    parse(s, &params.iter().map(|x| x.to_string()).collect()).unwrap()
}

/// Parameter-free inputs whose normal forms the engine is expected to find.
pub const CORPUS: &[&str] = &[
    "1/log(1+z)",
    "tan(z)",
    "sec(z)",
    "z/log(1+z)",
    "z/(exp(z)-1)",
    "log(1+sin(z))",
    "1/(1+sin(z))",
    "log(tan(z/2)+sec(z/2))",
    "arcsinh(sin(z)/(1+cos(z)))",
    "2*arctanh(sin(2*z)/(1+cos(2*z)))",
    "log((1+tan(z))/(1-tan(z)))",
    "exp(2*arctanh(sin(2*z)/(1+cos(2*z))))",
];

/// Random catalog expression of nesting depth at most `depth`. Many
/// results have no series at 0; callers filter.
pub fn random_expr(rng: &mut ChaCha8Rng, depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..4) {
            0 | 1 => Expr::z(),
            2 => Expr::int(rng.gen_range(1..4)),
            _ => Expr::num(rat(rng.gen_range(-3..4), rng.gen_range(1..4))),
        };
    }
    match rng.gen_range(0..6) {
        0 => Expr::add(vec![random_expr(rng, depth - 1), random_expr(rng, depth - 1)]),
        1 => Expr::mul(vec![random_expr(rng, depth - 1), random_expr(rng, depth - 1)]),
        2 => Expr::powi(random_expr(rng, depth - 1), rng.gen_range(-2..4)),
        _ => {
            let f = Func::ALL[rng.gen_range(0..Func::ALL.len())];
            // Keep arguments small at 0 so most applications have a series.
            let arg = Expr::mul(vec![Expr::z(), random_expr(rng, depth - 1)]);
            let arg = match f {
                Func::Log | Func::Sqrt => Expr::add(vec![Expr::one(), arg]),
                Func::Cot | Func::Csc => Expr::add(vec![Expr::int(1), arg]),
                _ => arg,
            };
            Expr::app(f, arg)
        }
    }
}

fn kernel_expr(tower: &Tower, var: usize) -> Expr {
    let k = tower.kernel(var).expect("kernel variable");
    let a = form_expr(tower, &k.arg);
    let f = match k.kind {
        KernelKind::Sin => Func::Sin,
        KernelKind::Cos => Func::Cos,
        KernelKind::Sinh => Func::Sinh,
        KernelKind::Cosh => Func::Cosh,
        KernelKind::Exp => Func::Exp,
        KernelKind::Log => Func::Log,
        KernelKind::Arctan => Func::Arctan,
        KernelKind::Arctanh => Func::Arctanh,
        KernelKind::Arcsin => Func::Arcsin,
        KernelKind::Arcsinh => Func::Arcsinh,
        KernelKind::Sqrt => Func::Sqrt,
        KernelKind::Pow(_) => panic!("parameter powers are not expected here"),
    };
    Expr::app(f, a)
}

fn poly_expr(tower: &Tower, p: &MPoly) -> Expr {
    let terms = p
        .terms()
        .map(|(m, c)| {
            let mut fs = vec![Expr::num(c.clone())];
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if v == 0 { Expr::z() } else { kernel_expr(tower, v) };
                fs.push(Expr::powi(base, e as i64));
            }
            Expr::mul(fs)
        })
        .collect();
    Expr::add(terms)
}

/// A canonical form turned back into an expression over `z` and its kernels.
pub fn form_expr(tower: &Tower, f: &CanonicalForm) -> Expr {
    let mut fs = vec![poly_expr(tower, f.numerator())];
    for (q, m) in f.denominator().items() {
        fs.push(Expr::powi(poly_expr(tower, q), -(*m as i64)));
    }
    Expr::mul(fs)
}

/// Random expressions with a series through `z^t` and a canonical form.
pub fn sample(seed: u64, count: usize, depth: usize, t: i64) -> Vec<(Expr, TruncSeries)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        assert!(tries < 100 * count, "generator too restrictive");
        let e = random_expr(&mut rng, depth);
        if e.depth() > depth || e.as_num().is_some() {
            continue;
        }
        if let Ok(s) = series_of(&e, t) {
            if Tower::build(&e, &[], DEFAULT_DEPTH_LIMIT).is_ok() {
                out.push((e, s));
            }
        }
    }
    out
}
