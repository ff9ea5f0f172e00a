//! Normal forms of power series: a solved quadratic recurrence with initial
//! values, truncated expansion by unrolling, and identity proving.

mod prove;
mod solve;
mod text;

pub use prove::{prove, Certificate, Verdict};
pub use solve::{solve_recurrence, PeeledConvolution, SolvedRecurrence};

use num_traits::Zero;
use thiserror::Error;

use crate::expr::Expr;
use crate::field::Rat;
use crate::qde::{default_max_index, find_qde, Qde, QdeError};
use crate::qre::{qde_to_qre, Qre, QreError};
use crate::series::{series_of, valuation, SeriesError, TruncSeries};

/// How far unrolling is compared with the series oracle when a
/// representation is built.
pub const CHECK_DEPTH: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RepError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Qde(#[from] QdeError),
    #[error(transparent)]
    Qre(#[from] QreError),
    #[error("parameters are not supported here ({0})")]
    Parametric(String),
    #[error("degenerate recurrence: {0}")]
    Degenerate(String),
    #[error("solving needs the first {0} series coefficients")]
    InsufficientPrefix(usize),
    #[error("internal check failed: {0}")]
    Validation(String),
    #[error("cannot rebase to {requested} initial values; at least {minimum} are required")]
    Rebase { requested: usize, minimum: usize },
}

/// `f = sum_{n>=0} a_n z^{n+shift}` with `a_{n+M}` given by a solved
/// recurrence from the initial values `a_0 .. a_{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRep {
    pub expr: Expr,
    pub shift: i64,
    pub qde: Qde,
    pub qre: Qre,
    pub recurrence: SolvedRecurrence,
    pub initial_values: Vec<Rat>,
    /// The displayed index variable is `n - base` of the solved one.
    pub base: usize,
    pub proven_zero: bool,
}

/// Normal form of `f` using the default index bound.
pub fn fps(f: &Expr) -> Result<SeriesRep, RepError> {
    fps_with(f, default_max_index())
}

pub fn fps_with(f: &Expr, max_index: usize) -> Result<SeriesRep, RepError> {
    if !f.is_parameter_free() {
        let ps: Vec<String> = f.params().into_iter().collect();
        return Err(RepError::Parametric(ps.join(", ")));
    }
    // Only poles are shifted out; a zero of f shows as leading zero values.
    let shift = match valuation(f) {
        Ok(v) => v.min(0),
        Err(SeriesError::PossiblyZero(_)) => 0,
        Err(e) => return Err(e.into()),
    };
    let g = if shift == 0 { f.clone() } else { Expr::mul(vec![Expr::powi(Expr::z(), -shift), f.clone()]) };
    let qde = find_qde(&g, max_index)?;
    let qre = qde_to_qre(&qde);

    let mut t = 24usize;
    let (recurrence, coeffs) = loop {
        let coeffs = series_of(&g, t as i64)?.coeffs_range(0, t as i64).expect("within precision");
        match solve_recurrence(&qre, &coeffs) {
            Ok(r) if r.initial_count() + CHECK_DEPTH <= t => break (r, coeffs),
            Ok(r) => t = r.initial_count() + CHECK_DEPTH,
            Err(RepError::InsufficientPrefix(k)) => t = k + CHECK_DEPTH,
            Err(e) => return Err(e),
        }
    };
    let m = recurrence.initial_count();
    let initial_values = coeffs[..m].to_vec();
    let proven_zero = initial_values.iter().all(|c| c.is_zero());
    let rep = SeriesRep { expr: f.clone(), shift, qde, qre, recurrence, initial_values, base: 0, proven_zero };

    for n in 0..rep.recurrence.valid_from {
        if !rep.qre.residual(&rep.initial_values, n)?.is_zero() {
            return Err(RepError::Validation(format!("initial values violate the recurrence at n = {}", n)));
        }
    }
    let depth = (m + CHECK_DEPTH).min(t + 1);
    if rep.coefficients(depth) != coeffs[..depth] {
        return Err(RepError::Validation("unrolled coefficients differ from the series expansion".into()));
    }
    Ok(rep)
}

impl SeriesRep {
    /// `a_0 .. a_{count-1}`.
    pub fn coefficients(&self, count: usize) -> Vec<Rat> {
        let mut out: Vec<Rat> = self.initial_values.iter().take(count).cloned().collect();
        let off = self.recurrence.offset;
        while out.len() < count {
            let n = (out.len() as i64 - off) as usize;
            let next = self.recurrence.step(&out, n);
            out.push(next);
        }
        out
    }

    /// The expansion through `z^t`.
    pub fn series(&self, t: i64) -> TruncSeries {
        let count = (t + 1 - self.shift).max(0) as usize;
        TruncSeries::new(self.shift, self.coefficients(count), t + 1)
    }

    /// The same representation stated with `count` initial values.
    pub fn rebased(&self, count: usize) -> Result<SeriesRep, RepError> {
        let minimum = self.recurrence.initial_count();
        if count < minimum {
            return Err(RepError::Rebase { requested: count, minimum });
        }
        let mut r = self.clone();
        r.initial_values = self.coefficients(count);
        r.base = (count as i64 - self.recurrence.offset) as usize;
        Ok(r)
    }

    /// Index variable offset of the displayed recurrence: it reads
    /// `a_{n + lhs_offset}` for `n >= displayed_valid_from`.
    pub fn lhs_offset(&self) -> i64 {
        self.recurrence.offset + self.base as i64
    }

    pub fn displayed_valid_from(&self) -> usize {
        self.recurrence.valid_from.saturating_sub(self.base)
    }

    /// Same function, as far as the normal form can tell.
    pub fn same_normal_form(&self, other: &SeriesRep) -> bool {
        let count = self.initial_values.len().max(other.initial_values.len());
        self.shift == other.shift
            && self.qde == other.qde
            && self.recurrence == other.recurrence
            && self.coefficients(count) == other.coefficients(count)
    }
}

/// Truncated expansion by unrolling the normal form, checked against the
/// series oracle.
pub fn qtaylor(f: &Expr, t: i64) -> Result<TruncSeries, RepError> {
    let s = fps(f)?.series(t);
    let oracle = series_of(f, t)?;
    if s != oracle {
        return Err(RepError::Validation("unrolled series differs from the oracle".into()));
    }
    Ok(s)
}
