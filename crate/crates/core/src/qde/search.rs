use std::collections::BTreeMap;

use thiserror::Error;

use super::{nu, DiffMonomial, Qde};
use crate::expr::Expr;
use crate::field::{solve_poly_system, MPoly, Monomial};
use crate::tower::{CanonicalForm, Tower, TowerError, DEFAULT_DEPTH_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QdeError {
    #[error("no quadratic differential equation found up to δ₂ index {0} (this does not prove there is none)")]
    NotDetected(usize),
    #[error("the index bound must be at least 3, got {0}")]
    Bound(usize),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Lazily computed derivatives and δ₂ products of one function.
struct Search {
    tower: Tower,
    derivs: Vec<CanonicalForm>,
}

impl Search {
    fn new(f: &Expr) -> Result<Search, TowerError> {
        let params: Vec<String> = f.params().into_iter().collect();
        let mut tower = Tower::new(&params, DEFAULT_DEPTH_LIMIT);
        let cf = tower.absorb(f)?;
        Ok(Search { tower, derivs: vec![cf] })
    }

    fn params(&self) -> Vec<String> {
        self.tower.params().to_vec()
    }

    fn derivative(&mut self, m: usize) -> CanonicalForm {
        while self.derivs.len() <= m {
            let next = self.tower.deriv(self.derivs.last().expect("nonempty"));
            self.derivs.push(next);
        }
        self.derivs[m].clone()
    }

    fn delta(&mut self, k: usize) -> CanonicalForm {
        let (i, j) = nu(k);
        let mut factor = |m: usize| if m == 1 { CanonicalForm::one() } else { self.derivative(m - 2) };
        let a = factor(i);
        let b = factor(j);
        self.tower.mul(&a, &b)
    }

    /// Solves the ansatz `δ₂^{n+2} f + sum_{i<n} C_i δ₂^{i+2} f = 0` for
    /// rational `C_i` by matching kernel-monomial coefficients.
    fn level(&mut self, n: usize) -> Option<Qde> {
        let forms: Vec<CanonicalForm> = (2..=n + 2).map(|k| self.delta(k)).collect();
        let (nums, _) = self.tower.common_denominator(&forms);
        let first = self.tower.first_kernel();
        let mut rows: BTreeMap<Monomial, Vec<MPoly>> = BTreeMap::new();
        for (col, p) in nums.iter().enumerate() {
            for (mono, c) in p.split_at(first) {
                rows.entry(mono).or_insert_with(|| vec![MPoly::zero(); n + 1])[col] = c;
            }
        }
        let mut a = Vec::with_capacity(rows.len());
        let mut b = Vec::with_capacity(rows.len());
        for (_, mut row) in rows {
            b.push(-row.pop().expect("lead column"));
            a.push(row);
        }
        let sol = solve_poly_system(&a, &b, n)?;
        let mut terms: Vec<(DiffMonomial, MPoly)> = sol
            .numerators
            .into_iter()
            .enumerate()
            .filter_map(|(i, c)| DiffMonomial::from_index(i + 2).map(|m| (m, c)))
            .collect();
        terms.push((DiffMonomial::from_index(n + 2).expect("index >= 3"), sol.denominator));
        Some(Qde::new(self.params(), terms))
    }
}

/// The first ansatz level with a solution, searching leading δ₂ indices
/// `3..=max_index`.
pub fn find_qde(f: &Expr, max_index: usize) -> Result<Qde, QdeError> {
    if max_index < 3 {
        return Err(QdeError::Bound(max_index));
    }
    let mut s = Search::new(f)?;
    if s.derivs[0].is_zero() {
        return Ok(Qde::zero_function(s.params()));
    }
    for n in 1..=max_index - 2 {
        if let Some(q) = s.level(n) {
            return Ok(q);
        }
    }
    Err(QdeError::NotDetected(max_index))
}

/// Attempts only the ansatz whose leading δ₂ index is `index`.
pub fn solve_level(f: &Expr, index: usize) -> Result<Option<Qde>, QdeError> {
    if index < 3 {
        return Err(QdeError::Bound(index));
    }
    Ok(Search::new(f)?.level(index - 2))
}

/// Substitutes `f` into `q` and tests the canonical form for zero.
pub fn verify_qde(f: &Expr, q: &Qde) -> Result<bool, TowerError> {
    let mut tower = Tower::new(q.params(), DEFAULT_DEPTH_LIMIT);
    let mut derivs = vec![tower.absorb(f)?];
    for _ in 0..q.order() {
        let next = tower.deriv(derivs.last().expect("nonempty"));
        derivs.push(next);
    }
    let mut acc = CanonicalForm::zero();
    for (m, c) in q.terms() {
        let prod = match *m {
            DiffMonomial::Linear(j) => derivs[j].clone(),
            DiffMonomial::Quadratic(i, j) => tower.mul(&derivs[i], &derivs[j]),
        };
        acc = tower.add(&acc, &tower.mul(&CanonicalForm::poly(c.clone()), &prod));
    }
    Ok(acc.is_zero())
}
