use num_traits::{Signed, Zero};

use super::RepError;
use crate::field::{int, pochhammer_rat, pochhammer_shifted, MPoly, Rat};
use crate::qre::{LinearTerm, Qre};

/// A convolution with its top-index boundary summands removed:
/// `c * sum_{k=lower}^{n-p-upper_trim} (k+1)_i (n-p-k+1)_j a_{k+i} a_{n-p-k+j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeeledConvolution {
    pub c: Rat,
    pub i: usize,
    pub j: usize,
    pub p: usize,
    pub lower: usize,
    pub upper_trim: usize,
}

/// `a_{n+offset} = -(linear + convolutions) / denominator(n)` for
/// `n >= valid_from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedRecurrence {
    pub offset: i64,
    pub denominator: MPoly,
    pub linear: Vec<LinearTerm>,
    pub convolutions: Vec<PeeledConvolution>,
    pub valid_from: usize,
}

impl SolvedRecurrence {
    /// Number of initial values the formula needs: `a_0 .. a_{m-1}`.
    pub fn initial_count(&self) -> usize {
        (self.valid_from as i64 + self.offset) as usize
    }

    /// `a_{n+offset}` from the known prefix `coeffs[..n+offset]`.
    pub fn step(&self, coeffs: &[Rat], n: usize) -> Rat {
        let nr = int(n as i64);
        let get = |idx: i64| if idx < 0 { Rat::zero() } else { coeffs[idx as usize].clone() };
        let mut num = Rat::zero();
        for t in &self.linear {
            let w = t.coeff.eval(std::slice::from_ref(&nr));
            if !w.is_zero() {
                num += w * get(n as i64 + t.shift);
            }
        }
        for t in &self.convolutions {
            if n < t.p + t.upper_trim {
                continue;
            }
            let m = n - t.p;
            for k in t.lower..=m - t.upper_trim {
                let a = &coeffs[k + t.i];
                let b = &coeffs[m - k + t.j];
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                num += &t.c
                    * pochhammer_rat(&int(k as i64 + 1), t.i as u32)
                    * pochhammer_rat(&int((m - k) as i64 + 1), t.j as u32)
                    * a
                    * b;
            }
        }
        -num / self.denominator.eval(std::slice::from_ref(&nr))
    }
}

/// Largest non-negative integer root of a univariate polynomial in variable 0.
fn largest_natural_root(p: &MPoly) -> Result<Option<usize>, RepError> {
    let d = p.degree_in(0);
    if d == 0 {
        return Ok(None);
    }
    let lead = p.coeffs_in(0)[d as usize].constant_value().expect("univariate");
    let mut bound = Rat::zero();
    for c in p.coeffs_in(0).iter().take(d as usize) {
        let r = (c.constant_value().expect("univariate") / &lead).abs();
        if r > bound {
            bound = r;
        }
    }
    let bound = (bound + int(1)).floor().to_integer();
    let bound: usize = bound.try_into().map_err(|_| RepError::Degenerate("denominator roots too large".into()))?;
    if bound > 1_000_000 {
        return Err(RepError::Degenerate("denominator roots too large".into()));
    }
    Ok((0..=bound).rev().find(|&n| p.eval(&[int(n as i64)]).is_zero()))
}

/// Isolates the highest coefficient of a parameter-free QRE, peeling from
/// each convolution the boundary summands that contain it. The low-index
/// factors of those summands are read from `coeffs`.
pub fn solve_recurrence(r: &Qre, coeffs: &[Rat]) -> Result<SolvedRecurrence, RepError> {
    if !r.params().is_empty() {
        return Err(RepError::Parametric(r.params().join(", ")));
    }
    let m = r.max_offset();
    let mut denominator = MPoly::zero();
    let mut linear = Vec::new();
    for t in r.linear() {
        if t.shift == m {
            denominator = &denominator + &t.coeff;
        } else {
            linear.push(t.clone());
        }
    }
    let mut lower_bound: i64 = -m;
    let mut convolutions = Vec::new();
    for t in r.convolutions() {
        let c = t.c.constant_value().expect("parameter-free");
        if t.j as i64 - t.p as i64 != m {
            convolutions.push(PeeledConvolution { c, i: t.i, j: t.j, p: t.p, lower: 0, upper_trim: 0 });
            continue;
        }
        let fixed = coeffs.get(t.i).ok_or(RepError::InsufficientPrefix(t.i + 1))?;
        let both = t.i == t.j;
        let mult = if both { int(2) } else { int(1) };
        let weight = c.clone() * pochhammer_rat(&int(1), t.i as u32) * fixed * mult;
        let poch = pochhammer_shifted(0, 1 - t.p as i64, t.j as u32);
        denominator = &denominator + &poch.scale(&weight);
        lower_bound = lower_bound.max(t.p as i64 + both as i64);
        convolutions.push(PeeledConvolution { c, i: t.i, j: t.j, p: t.p, lower: 1, upper_trim: both as usize });
    }
    if denominator.is_zero() {
        return Err(RepError::Degenerate("the highest coefficient cancels from the recurrence".into()));
    }
    let mut valid_from = lower_bound.max(0) as usize;
    if let Some(root) = largest_natural_root(&denominator)? {
        valid_from = valid_from.max(root + 1);
    }
    Ok(SolvedRecurrence { offset: m, denominator, linear, convolutions, valid_from })
}
