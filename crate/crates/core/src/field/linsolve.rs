//! Fraction-free Gauss–Jordan elimination over polynomial rings.
//!
//! Every intermediate entry is a minor of the augmented matrix, so the
//! Bareiss division by the previous pivot is exact. At the end each pivot row
//! reads `det * x_col + (free columns) = rhs`, which gives a solution with a
//! single common denominator.

use super::gcd::lcm;
use super::mpoly::MPoly;
use super::ratfunc::RatFunc;

/// A solution `x_j = numerators[j] / denominator`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySolution {
    pub numerators: Vec<MPoly>,
    pub denominator: MPoly,
    pub rank: usize,
}

/// Solves `a * x = b` with polynomial entries. `a` is `m x n` (rows may be
/// empty). Free variables are set to zero. Returns `None` if inconsistent.
pub fn solve_poly_system(a: &[Vec<MPoly>], b: &[MPoly], n: usize) -> Option<PolySolution> {
    let m = a.len();
    assert_eq!(b.len(), m, "right-hand side length");
    let mut mat: Vec<Vec<MPoly>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n, "row length");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut prev = MPoly::one();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    let mut rank = 0;
    while rank < m {
        // Smallest total degree, ties by column then row.
        let mut best: Option<(u32, usize, usize)> = None;
        for (col, _) in used.iter().enumerate().filter(|(_, u)| !**u) {
            for (row, r) in mat.iter().enumerate().skip(rank) {
                let e = &r[col];
                if e.is_zero() {
                    continue;
                }
                let key = (e.total_degree(), col, row);
                if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
        }
        let Some((_, pc, pr)) = best else { break };
        mat.swap(rank, pr);
        used[pc] = true;
        pivot_cols.push(pc);
        let pivot_row = mat[rank].clone();
        let p = pivot_row[pc].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i == rank {
                continue;
            }
            let factor = row[pc].clone();
            for j in 0..=n {
                let val = if factor.is_zero() {
                    &p * &row[j]
                } else {
                    &(&p * &row[j]) - &(&factor * &pivot_row[j])
                };
                row[j] = val
                    .exact_div(&prev)
                    .expect("Bareiss division is exact");
            }
        }
        prev = p;
        rank += 1;
    }

    if mat.iter().skip(rank).any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut numerators = vec![MPoly::zero(); n];
    for (t, &col) in pivot_cols.iter().enumerate() {
        debug_assert_eq!(mat[t][col], prev);
        numerators[col] = mat[t][n].clone();
    }
    Some(PolySolution { numerators, denominator: prev, rank })
}

/// Solves `a * x = b` over the fraction field. Rows are cleared of
/// denominators before fraction-free elimination.
pub fn solve_linear(a: &[Vec<RatFunc>], b: &[RatFunc]) -> Option<Vec<RatFunc>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut pa = Vec::with_capacity(a.len());
    let mut pb = Vec::with_capacity(b.len());
    for (row, rhs) in a.iter().zip(b) {
        let mut l = MPoly::one();
        for e in row.iter().chain(std::iter::once(rhs)) {
            l = lcm(&l, e.den());
        }
        let clear = |e: &RatFunc| {
            &e.num().clone() * &l.exact_div(e.den()).expect("lcm divisible")
        };
        pa.push(row.iter().map(clear).collect::<Vec<_>>());
        pb.push(clear(rhs));
    }
    let sol = solve_poly_system(&pa, &pb, n)?;
    Some(
        sol.numerators
            .into_iter()
            .map(|num| RatFunc::new(num, sol.denominator.clone()))
            .collect(),
    )
}
