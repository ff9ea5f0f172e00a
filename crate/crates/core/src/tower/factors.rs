//! Denominators as products of pairwise coprime primitive factors.

use num_traits::One;

use crate::field::gcd::gcd;
use crate::field::{MPoly, Rat};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factors {
    items: Vec<(MPoly, u32)>,
}

impl Factors {
    pub fn one() -> Self {
        Factors { items: Vec::new() }
    }

    pub fn is_one(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[(MPoly, u32)] {
        &self.items
    }

    pub fn expand(&self) -> MPoly {
        let mut acc = MPoly::one();
        for (f, e) in &self.items {
            acc = &acc * &f.pow(*e);
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Factors {
        if k == 0 {
            return Factors::one();
        }
        Factors { items: self.items.iter().map(|(f, e)| (f.clone(), e * k)).collect() }
    }

    /// Splits `p` into `scalar * monomial * primitive rest`, returning the
    /// scalar and the non-scalar part as factors.
    pub fn from_poly(p: &MPoly) -> (Rat, Factors) {
        assert!(!p.is_zero(), "zero denominator");
        let mono = p.monomial_content();
        let rest = p.exact_div(&MPoly::term(mono.clone(), Rat::one())).expect("monomial divides");
        let (scalar, prim) = rest.primitive();
        let mut raw: Vec<(MPoly, u32)> = Vec::new();
        for (v, &e) in mono.exponents().iter().enumerate() {
            if e > 0 {
                raw.push((MPoly::var(v), e));
            }
        }
        if !prim.is_constant() {
            raw.push((prim, 1));
        }
        let mut out = Factors::one();
        for (f, e) in raw {
            out = out.mul(&Factors { items: vec![(f, e)] });
        }
        (scalar, out)
    }

    fn polys(&self) -> impl Iterator<Item = &MPoly> {
        self.items.iter().map(|(f, _)| f)
    }

    /// Exponent vector of `self` over a coprime `base` that refines it.
    fn express(&self, base: &[MPoly]) -> Vec<u32> {
        let mut out = vec![0u32; base.len()];
        for (f, e) in &self.items {
            if let Some(i) = base.iter().position(|b| b == f) {
                out[i] += e;
                continue;
            }
            let mut rest = f.clone();
            for (i, b) in base.iter().enumerate() {
                while let Some(q) = exact_div_nonconst(&rest, b) {
                    rest = q;
                    out[i] += e;
                }
            }
            debug_assert!(rest.is_constant(), "base does not refine factor");
        }
        out
    }

    fn from_exponents(base: Vec<MPoly>, exps: &[u32]) -> Factors {
        Factors {
            items: base.into_iter().zip(exps).filter(|(_, &e)| e > 0).map(|(b, &e)| (b, e)).collect(),
        }
    }

    fn same_base(&self, other: &Factors) -> bool {
        other.polys().all(|p| self.polys().any(|q| q == p))
            || self.polys().all(|p| other.polys().any(|q| q == p))
    }

    fn joint_base(&self, other: &Factors) -> Vec<MPoly> {
        if self.same_base(other) {
            let mut base: Vec<MPoly> = self.polys().cloned().collect();
            for p in other.polys() {
                if !base.contains(p) {
                    base.push(p.clone());
                }
            }
            return base;
        }
        coprime_base(self.polys().chain(other.polys()).cloned())
    }

    pub fn mul(&self, other: &Factors) -> Factors {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let base = self.joint_base(other);
        let a = self.express(&base);
        let b = other.express(&base);
        let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        Factors::from_exponents(base, &sum)
    }

    /// Least common multiple with the cofactors `lcm / self` and `lcm / other`.
    pub fn lcm(&self, other: &Factors) -> (Factors, MPoly, MPoly) {
        if self == other {
            return (self.clone(), MPoly::one(), MPoly::one());
        }
        let base = self.joint_base(other);
        let a = self.express(&base);
        let b = other.express(&base);
        let mut ma = MPoly::one();
        let mut mb = MPoly::one();
        let mut top = Vec::with_capacity(base.len());
        for (i, g) in base.iter().enumerate() {
            let m = a[i].max(b[i]);
            top.push(m);
            if m > a[i] {
                ma = &ma * &g.pow(m - a[i]);
            }
            if m > b[i] {
                mb = &mb * &g.pow(m - b[i]);
            }
        }
        (Factors::from_exponents(base, &top), ma, mb)
    }

    /// Removes factors dividing `num` exactly; returns the reduced numerator.
    pub fn cancel(&mut self, num: MPoly) -> MPoly {
        let mut num = num;
        if num.is_zero() {
            self.items.clear();
            return num;
        }
        for (f, e) in self.items.iter_mut() {
            while *e > 0 {
                match exact_div_nonconst(&num, f) {
                    Some(q) => {
                        num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.items.retain(|(_, e)| *e > 0);
        num
    }

    /// Highest variable index used by any factor.
    pub fn max_var(&self) -> Option<usize> {
        self.polys().filter_map(|p| p.max_var()).max()
    }
}

fn exact_div_nonconst(p: &MPoly, d: &MPoly) -> Option<MPoly> {
    if d.is_constant() || p.is_zero() {
        return None;
    }
    p.exact_div(d)
}

/// Pairwise coprime primitive factors whose products generate every input.
fn coprime_base<I: IntoIterator<Item = MPoly>>(polys: I) -> Vec<MPoly> {
    let mut base: Vec<MPoly> = Vec::new();
    let mut work: Vec<MPoly> = polys.into_iter().collect();
    'outer: while let Some(p) = work.pop() {
        if p.is_constant() {
            continue;
        }
        let p = p.primitive().1;
        for i in 0..base.len() {
            if base[i] == p {
                continue 'outer;
            }
            let g = gcd(&base[i], &p);
            if !g.is_constant() {
                let b = base.swap_remove(i);
                let bq = b.exact_div(&g).expect("gcd divides");
                let pq = p.exact_div(&g).expect("gcd divides");
                work.push(bq);
                work.push(pq);
                work.push(g);
                continue 'outer;
            }
        }
        base.push(p);
    }
    base.sort_by(|a, b| a.terms().rev().cmp(b.terms().rev()));
    base
}
