use std::fmt;

use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::{PeeledConvolution, SeriesRep};
use crate::field::{MPoly, Rat};
use crate::qre::{coeff_text, index_text, pochhammer_text};

/// `n + shift` rendered as a polynomial shifted by `base`.
fn shifted(p: &MPoly, base: usize) -> MPoly {
    p.substitute(0, &(&MPoly::var(0) + &MPoly::from_int(base as i64)))
}

fn rat_text(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The text `n-k+c`.
fn n_minus_k(c: i64) -> String {
    index_text("n-k", c)
}

fn sum_text(t: &PeeledConvolution, base: usize) -> String {
    let d = base as i64 - t.p as i64;
    let upper = index_text("n", d - t.upper_trim as i64);
    let mut factors = pochhammer_text("k", 1, t.i);
    factors.extend(pochhammer_text("n-k", d + 1, t.j));
    factors.push(format!("a({})", index_text("k", t.i as i64)));
    factors.push(format!("a({})", n_minus_k(d + t.j as i64)));
    format!("sum(k={}..{}, {})", t.lower, upper, factors.join("*"))
}

impl SeriesRep {
    /// Numerator terms as `(negative, body)` pairs.
    fn numerator_parts(&self) -> Vec<(bool, String)> {
        let names = vec!["n".to_string()];
        let mut parts = Vec::new();
        for t in &self.recurrence.linear {
            let (neg, c) = coeff_text(&shifted(&t.coeff, self.base), &names);
            let a = format!("a({})", index_text("n", t.shift + self.base as i64));
            parts.push((neg, if c.is_empty() { a } else { format!("{}*{}", c, a) }));
        }
        for t in &self.recurrence.convolutions {
            let neg = t.c.is_negative();
            let mag = t.c.abs();
            let s = sum_text(t, self.base);
            parts.push((neg, if mag.is_one() { s } else { format!("{}*{}", rat_text(&mag), s) }));
        }
        parts
    }

    /// `a(n+M) = -(...)/(...)`.
    pub fn recurrence_text(&self) -> String {
        let lhs = format!("a({})", index_text("n", self.lhs_offset()));
        let mut parts = self.numerator_parts();
        // An all-negative numerator absorbs the leading sign.
        let flip = !parts.is_empty() && parts.iter().all(|(neg, _)| *neg);
        if flip {
            parts.iter_mut().for_each(|(neg, _)| *neg = false);
        }
        let sign = if flip { "" } else { "-" };
        let mut num = String::new();
        for (idx, (neg, body)) in parts.iter().enumerate() {
            match (idx, neg) {
                (0, true) => num.push('-'),
                (0, false) => {}
                (_, true) => num.push_str(" - "),
                (_, false) => num.push_str(" + "),
            }
            num.push_str(body);
        }
        if num.is_empty() {
            num.push('0');
        }
        let den = shifted(&self.recurrence.denominator, self.base);
        let rhs = match den.constant_value() {
            Some(c) if c.is_one() => format!("{}({})", sign, num),
            _ => format!("{}({})/({})", sign, num, den.display_with(&["n".to_string()])),
        };
        format!("{} = {}, n >= {}", lhs, rhs, self.displayed_valid_from())
    }

    pub fn series_text(&self) -> String {
        let power = index_text("n", self.shift);
        let zpow = if self.shift == 0 { "z^n".to_string() } else { format!("z^({})", power) };
        format!("{} = sum(n >= 0, a(n)*{})", self.expr, zpow)
    }

    pub fn initial_values_text(&self) -> String {
        let parts: Vec<String> =
            self.initial_values.iter().enumerate().map(|(i, v)| format!("a({}) = {}", i, rat_text(v))).collect();
        parts.join(", ")
    }

    pub fn to_json(&self) -> Value {
        let names = vec!["n".to_string()];
        let linear: Vec<Value> = self
            .recurrence
            .linear
            .iter()
            .map(|t| {
                json!({
                    "coefficient": shifted(&t.coeff, self.base).display_with(&names),
                    "index_offset": t.shift + self.base as i64,
                })
            })
            .collect();
        let conv: Vec<Value> = self
            .recurrence
            .convolutions
            .iter()
            .map(|t| {
                json!({
                    "scalar": rat_text(&t.c),
                    "i": t.i,
                    "j": t.j,
                    "offset": self.base as i64 - t.p as i64,
                    "lower": t.lower,
                    "upper_trim": t.upper_trim,
                })
            })
            .collect();
        json!({
            "expr": self.expr.to_string(),
            "shift": self.shift,
            "recurrence": {
                "lhs_index_offset": self.lhs_offset(),
                "denominator_poly": shifted(&self.recurrence.denominator, self.base).display_with(&names),
                "linear_terms": linear,
                "convolution_terms": conv,
            },
            "initial_values": self.initial_values.iter().map(rat_text).collect::<Vec<_>>(),
            "valid_from": self.displayed_valid_from(),
            "proven_zero": self.proven_zero,
        })
    }
}

impl fmt::Display for SeriesRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.series_text())?;
        writeln!(f, "{}", self.recurrence_text())?;
        write!(f, "{}", self.initial_values_text())?;
        if self.proven_zero {
            write!(f, "\nproven zero")?;
        }
        Ok(())
    }
}
