use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::mpoly::MPoly;
use super::Rat;

/// A quotient of polynomials, kept reduced by gcd with the denominator's
/// leading coefficient (lexicographic, `z` first) equal to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFunc { num, den };
        r.normalize();
        r
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc { num: p, den: MPoly::one() }
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(MPoly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(MPoly::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc::from_poly(MPoly::constant(c))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn recip(&self) -> Option<RatFunc> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }

    /// Builds from an already coprime pair, only fixing the scalar.
    fn reduced(num: MPoly, den: MPoly) -> Self {
        let mut r = RatFunc { num, den };
        r.fix_scalar();
        r
    }

    fn fix_scalar(&mut self) {
        if self.num.is_zero() {
            self.den = MPoly::one();
            return;
        }
        let lc = self.den.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rat::one);
        if !lc.is_one() {
            let inv = lc.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = MPoly::one();
            return;
        }
        let g = gcd(&self.num, &self.den);
        if !g.is_one() {
            self.num = self.num.exact_div(&g).expect("gcd divides numerator");
            self.den = self.den.exact_div(&g).expect("gcd divides denominator");
        }
        self.fix_scalar();
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.display_with(names);
        }
        format!(
            "({})/({})",
            self.num.display_with(names),
            self.den.display_with(names)
        )
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let bg = self.den.exact_div(&g).expect("gcd divides");
        let dg = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &dg) + &(&rhs.num * &bg);
        let h = gcd(&num, &g);
        let num = num.exact_div(&h).expect("gcd divides");
        let den = &bg * &rhs.den.exact_div(&h).expect("gcd divides");
        RatFunc::reduced(num, den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let num = &self.num.exact_div(&g1).expect("gcd divides")
            * &rhs.num.exact_div(&g2).expect("gcd divides");
        let den = &self.den.exact_div(&g2).expect("gcd divides")
            * &rhs.den.exact_div(&g1).expect("gcd divides");
        RatFunc::reduced(num, den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}
