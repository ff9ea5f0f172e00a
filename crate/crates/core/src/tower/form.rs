use num_traits::{One, Zero};

use super::factors::Factors;
use crate::field::{MPoly, Rat};

/// `num / den` with `num` a polynomial in z, parameters and kernel variables,
/// reduced modulo the tower relations, and `den` a product of coprime factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub(crate) num: MPoly,
    pub(crate) den: Factors,
}

impl CanonicalForm {
    pub fn zero() -> Self {
        CanonicalForm { num: MPoly::zero(), den: Factors::one() }
    }

    pub fn one() -> Self {
        CanonicalForm::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        CanonicalForm { num: MPoly::constant(c), den: Factors::one() }
    }

    /// A polynomial known to be reduced.
    pub(crate) fn poly(p: MPoly) -> Self {
        CanonicalForm { num: p, den: Factors::one() }
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &Factors {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// True if no kernel variable (index `>= first_kernel`) occurs.
    pub fn is_rational_in(&self, first_kernel: usize) -> bool {
        self.num.only_vars_below(first_kernel)
            && self.den.items().iter().all(|(f, _)| f.only_vars_below(first_kernel))
    }

    pub fn neg(&self) -> Self {
        CanonicalForm { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return CanonicalForm::zero();
        }
        CanonicalForm { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn max_var(&self) -> Option<usize> {
        self.num.max_var().max(self.den.max_var())
    }
}
