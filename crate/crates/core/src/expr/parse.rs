//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := '-'? factor (('*'|'/') factor)*
//! factor   := base ('^' exponent)?
//! exponent := integer | symbol | '(' '-'? integer ')' | '(' symbol ')' | '-' integer
//! base     := integer | 'z' | symbol | func '(' expr ')' | '(' expr ')'
//! ```

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

use super::{Exponent, Expr, Func};
use crate::field::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownFunction(String),
    UnboundSymbol(String),
    DivisionByZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{} at position {position}", describe(.kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax(m) => format!("syntax error: {}", m),
        ParseErrorKind::UnknownFunction(f) => format!("unknown function `{}`", f),
        ParseErrorKind::UnboundSymbol(s) => format!("unbound symbol `{}`", s),
        ParseErrorKind::DivisionByZero => "division by zero".to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| *c).collect();
            out.push((Tok::Int(s.parse().expect("digits")), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| *c).collect();
            out.push((Tok::Ident(s), pos));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("unexpected character `{}`", c)),
                position: pos,
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    params: &'a BTreeSet<String>,
}

/// Parses `text`; every free symbol other than `z` must be listed in `params`.
pub fn parse(text: &str, params: &BTreeSet<String>) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), params };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn err_here(&self, msg: &str) -> ParseError {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(Tok::Int(n)) => format!("`{}`", n),
            Some(Tok::Ident(s)) => format!("`{}`", s),
            Some(Tok::Op(c)) => format!("`{}`", c),
        };
        ParseError {
            kind: ParseErrorKind::Syntax(format!("{}, found {}", msg, found)),
            position: self.pos(),
        }
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(self.err_here(&format!("expected `{}`", op)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(Expr::neg(self.term()?));
            } else {
                break;
            }
        }
        Ok(Expr::add(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let negate = self.eat('-');
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                let f = self.factor()?;
                acc = Expr::mul(vec![acc, f]);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                let f = self.factor()?;
                if f.is_zero() {
                    return Err(ParseError { kind: ParseErrorKind::DivisionByZero, position: pos });
                }
                acc = Expr::div(acc, f);
            } else {
                break;
            }
        }
        Ok(if negate { Expr::neg(acc) } else { acc })
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.eat('^') {
            let pos = self.pos();
            let exp = self.exponent()?;
            if base.is_zero() && matches!(exp, Exponent::Int(n) if n < 0) {
                return Err(ParseError { kind: ParseErrorKind::DivisionByZero, position: pos });
            }
            return Ok(Expr::pow(base, exp));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Exponent, ParseError> {
        if self.eat('(') {
            let e = self.bare_exponent()?;
            self.expect(')')?;
            Ok(e)
        } else {
            self.bare_exponent()
        }
    }

    fn bare_exponent(&mut self) -> Result<Exponent, ParseError> {
        let neg = self.eat('-');
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let v: i64 = n.try_into().map_err(|_| ParseError {
                    kind: ParseErrorKind::Syntax("exponent too large".into()),
                    position: pos,
                })?;
                Ok(Exponent::Int(if neg { -v } else { v }))
            }
            Some(Tok::Ident(s)) if !neg => {
                self.at += 1;
                if self.params.contains(&s) {
                    Ok(Exponent::Param(s))
                } else {
                    Err(ParseError { kind: ParseErrorKind::UnboundSymbol(s), position: pos })
                }
            }
            _ => Err(self.err_here("expected an integer or parameter exponent")),
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            Some(Tok::Ident(s)) => {
                self.at += 1;
                if self.peek() == Some(&Tok::Op('(')) {
                    let f = Func::from_name(&s).ok_or(ParseError {
                        kind: ParseErrorKind::UnknownFunction(s.clone()),
                        position: pos,
                    })?;
                    self.at += 1;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::app(f, arg));
                }
                if s == "z" {
                    Ok(Expr::Var)
                } else if self.params.contains(&s) {
                    Ok(Expr::Param(s))
                } else if Func::from_name(&s).is_some() {
                    Err(ParseError {
                        kind: ParseErrorKind::Syntax(format!("function `{}` needs an argument", s)),
                        position: pos,
                    })
                } else {
                    Err(ParseError { kind: ParseErrorKind::UnboundSymbol(s), position: pos })
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(self.err_here("expected an operand")),
        }
    }
}
