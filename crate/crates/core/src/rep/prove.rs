use num_traits::Zero;

use super::{fps, SeriesRep};
use crate::expr::Expr;
use crate::field::Rat;
use crate::series::{series_of, TruncSeries, VALUATION_CAP};
use crate::tower::{Tower, DEFAULT_DEPTH_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `a - b` canonicalizes to zero over the differential tower.
    CanonicalZero,
    /// The normal form of `a - b` has only zero initial values, so every
    /// coefficient vanishes by induction from `valid_from`.
    ProvenZero { initial_values: usize, valid_from: usize },
    /// `a` and `b` have the same normal form.
    SameNormalForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal(Certificate),
    /// The coefficients of `z^exponent` differ.
    NotEqual { exponent: i64, left: Option<Rat>, right: Option<Rat> },
    Undecided(String),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal(_))
    }
}

/// First exponent through `z^t` where the two expansions differ.
fn first_difference(a: &TruncSeries, b: &TruncSeries, t: i64) -> Option<i64> {
    let lo = a.valuation().unwrap_or(t + 1).min(b.valuation().unwrap_or(t + 1));
    (lo..=t).find(|&e| a.coeff(e) != b.coeff(e))
}

fn witness(a: &Expr, b: &Expr, exponent: i64) -> Verdict {
    let at = |e: &Expr| series_of(e, exponent).ok().and_then(|s| s.coeff(exponent));
    Verdict::NotEqual { exponent, left: at(a), right: at(b) }
}

/// The first nonzero coefficient of a representation, searched up to `limit`.
fn first_nonzero(rep: &SeriesRep, limit: usize) -> Option<i64> {
    rep.coefficients(limit).iter().position(|c| !c.is_zero()).map(|i| i as i64 + rep.shift)
}

/// Decides `a = b` as functions near 0.
///
/// Tried in order: canonical zero test of `a - b`; comparison of the
/// expansions through `z^64`, which yields a witness for inequality; the
/// normal form of `a - b`; the normal forms of `a` and `b`.
pub fn prove(a: &Expr, b: &Expr) -> Verdict {
    let h = Expr::sub(a.clone(), b.clone());
    let params: Vec<String> = h.params().into_iter().collect();
    let mut tower = Tower::new(&params, DEFAULT_DEPTH_LIMIT);
    if let Ok(cf) = tower.absorb(&h) {
        if cf.is_zero() {
            return Verdict::Equal(Certificate::CanonicalZero);
        }
    }
    if !params.is_empty() {
        return Verdict::Undecided(format!("parameters ({}) are not supported", params.join(", ")));
    }

    let t = VALUATION_CAP;
    let mut notes: Vec<String> = Vec::new();
    match (series_of(a, t), series_of(b, t)) {
        (Ok(sa), Ok(sb)) => {
            if let Some(e) = first_difference(&sa, &sb, t) {
                return witness(a, b, e);
            }
        }
        (Err(e), _) | (_, Err(e)) => notes.push(format!("series: {}", e)),
    }

    match fps(&h) {
        Ok(rep) if rep.proven_zero => {
            return Verdict::Equal(Certificate::ProvenZero {
                initial_values: rep.initial_values.len(),
                valid_from: rep.recurrence.valid_from,
            });
        }
        Ok(rep) => {
            let limit = rep.initial_values.len().max(1);
            if let Some(e) = first_nonzero(&rep, limit) {
                return witness(a, b, e);
            }
        }
        Err(e) => notes.push(format!("difference: {}", e)),
    }

    match (fps(a), fps(b)) {
        (Ok(ra), Ok(rb)) => {
            if ra.same_normal_form(&rb) {
                return Verdict::Equal(Certificate::SameNormalForm);
            }
            let n = 2 * (ra.initial_values.len() + rb.initial_values.len()) + t as usize;
            let (sa, sb) = (ra.series(n as i64), rb.series(n as i64));
            if let Some(e) = first_difference(&sa, &sb, n as i64) {
                return witness(a, b, e);
            }
            notes.push("the normal forms differ but agree on every compared coefficient".into());
        }
        (Err(e), _) | (_, Err(e)) => notes.push(format!("normal form: {}", e)),
    }
    Verdict::Undecided(notes.join("; "))
}
