use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, Rational, SparsePolynomial};

/// `coeff · mono`; a zero coefficient is the canonical zero term.
#[derive(Clone, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Rational,
    pub mono: Monomial,
}

impl Term {
    pub fn new(coeff: Rational, mono: Monomial) -> Self {
        if coeff.is_zero() {
            Term::zero()
        } else {
            Term { coeff, mono }
        }
    }

    pub fn zero() -> Self {
        Term {
            coeff: Rational::zero(),
            mono: Monomial::ONE,
        }
    }

    pub fn unit(mono: Monomial) -> Self {
        Term {
            coeff: Rational::one(),
            mono,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn scaled(&self, a: &Rational) -> Term {
        Term::new(&self.coeff * a, self.mono)
    }

    pub fn to_poly(&self) -> SparsePolynomial {
        SparsePolynomial::monomial(self.coeff.clone(), self.mono)
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => true,
            (false, false) => self.coeff == other.coeff && self.mono == other.mono,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "({}){}", self.coeff, self.mono)
        }
    }
}
