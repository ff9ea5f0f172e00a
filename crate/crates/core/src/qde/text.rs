use std::collections::BTreeSet;

use num_traits::Signed;
use thiserror::Error;

use super::{DiffMonomial, Qde};
use crate::expr::{parse, ParseError};
use crate::field::{MPoly, Monomial};
use crate::tower::{Tower, DEFAULT_DEPTH_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QdeParseError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("not a homogeneous quadratic differential equation: {0}")]
    Shape(String),
}

const Y_PREFIX: &str = "qde_y";

fn monomial_text(m: DiffMonomial) -> String {
    let y = |j: usize| format!("y{}", "'".repeat(j));
    match m {
        DiffMonomial::Linear(j) => y(j),
        DiffMonomial::Quadratic(i, j) if i == j => format!("{}^2", y(i)),
        DiffMonomial::Quadratic(i, j) => format!("{}*{}", y(i), y(j)),
    }
}

pub(super) fn render(q: &Qde, var: &str) -> String {
    let names = q.var_names(var);
    let mut s = String::new();
    for (idx, (m, c)) in q.terms().iter().enumerate() {
        let mono = monomial_text(*m);
        let (neg, body) = if c.len() == 1 {
            let neg = c.leading_term().map(|(_, v)| v.is_negative()).unwrap_or(false);
            let mag = if neg { -c } else { c.clone() };
            let body = if mag.is_one() { mono } else { format!("{}*{}", mag.display_with(&names), mono) };
            (neg, body)
        } else {
            (false, format!("({})*{}", c.display_with(&names), mono))
        };
        match (idx, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&body);
    }
    if s.is_empty() {
        s.push('0');
    }
    s.push_str(" = 0");
    s
}

/// Replaces `y`, `y'`, `y''`, ... by placeholder symbols; returns the new
/// text and the highest derivative order seen.
fn substitute_y(text: &str) -> (String, Option<usize>) {
    let chars: Vec<char> = text.chars().collect();
    let ident = |c: char| c.is_ascii_alphanumeric() || c == '_';
    let mut out = String::with_capacity(text.len());
    let mut top: Option<usize> = None;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let standalone = c == 'y'
            && (i == 0 || !ident(chars[i - 1]))
            && chars.get(i + 1).is_none_or(|&n| !ident(n));
        if standalone {
            let mut j = i + 1;
            while j < chars.len() && chars[j] == '\'' {
                j += 1;
            }
            let order = j - i - 1;
            top = Some(top.map_or(order, |t| t.max(order)));
            out.push_str(&format!("{}{}", Y_PREFIX, order));
            i = j;
        } else {
            out.push(c);
            i += 1;
        }
    }
    (out, top)
}

pub(super) fn parse_qde(text: &str, params: &BTreeSet<String>) -> Result<Qde, QdeParseError> {
    if params.contains("y") {
        return Err(QdeParseError::Shape("`y` cannot be a parameter".into()));
    }
    let lhs = match text.split_once('=') {
        Some((l, r)) if r.trim() == "0" => l,
        Some(_) => return Err(QdeParseError::Shape("right-hand side must be 0".into())),
        None => text,
    };
    let (body, top) = substitute_y(lhs);
    let top = top.ok_or_else(|| QdeParseError::Shape("no occurrence of y".into()))?;
    let user: Vec<String> = params.iter().cloned().collect();
    let mut all = user.clone();
    all.extend((0..=top).map(|m| format!("{}{}", Y_PREFIX, m)));
    let set: BTreeSet<String> = all.iter().cloned().collect();
    let e = parse(&body, &set)?;

    let mut tower = Tower::new(&all, DEFAULT_DEPTH_LIMIT);
    let cf = tower
        .absorb(&e)
        .map_err(|err| QdeParseError::Shape(err.to_string()))?;
    if !tower.kernels().is_empty() || !cf.denominator().is_one() {
        return Err(QdeParseError::Shape("coefficients must be polynomials in z".into()));
    }
    let first_y = 1 + user.len();
    let mut terms: Vec<(DiffMonomial, MPoly)> = Vec::new();
    for (mono, c) in cf.numerator().terms() {
        let mut orders = Vec::new();
        for m in 0..=top {
            for _ in 0..mono.exponent(first_y + m) {
                orders.push(m);
            }
        }
        let dm = match orders[..] {
            [j] => DiffMonomial::Linear(j),
            [i, j] => DiffMonomial::Quadratic(i.min(j), i.max(j)),
            _ => return Err(QdeParseError::Shape("every term must have degree 1 or 2 in y".into())),
        };
        let low: Vec<u32> = (0..first_y).map(|v| mono.exponent(v)).collect();
        terms.push((dm, MPoly::term(Monomial::from_exponents(low), c.clone())));
    }
    Ok(Qde::new(user, terms))
}
