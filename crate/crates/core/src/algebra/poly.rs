use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Monomial, Rational};

/// Sparse bivariate polynomial with exact coefficients.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        SparsePolynomial::default()
    }

    pub fn monomial(coeff: Rational, z: Monomial) -> Self {
        let mut p = SparsePolynomial::zero();
        p.add_term(coeff, z);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = SparsePolynomial::zero();
        for (z, c) in terms {
            p.add_term(c, z);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, z: Monomial) -> Rational {
        self.terms.get(&z).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in graded monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, coeff: Rational, z: Monomial) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&z) {
            Some(c) => {
                let sum = &*c + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&z);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(z, coeff);
            }
        }
    }

    pub fn add(&self, other: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (z, c) in other.terms() {
            out.add_term(c.clone(), *z);
        }
        out
    }

    pub fn scale(&self, a: &Rational) -> SparsePolynomial {
        if a.is_zero() {
            return SparsePolynomial::zero();
        }
        SparsePolynomial {
            terms: self.terms.iter().map(|(z, c)| (*z, c * a)).collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|z| z.degree()).max()
    }
}

/// Exact product; exponents add and coefficients multiply and collect.
pub fn poly_mul(a: &SparsePolynomial, b: &SparsePolynomial) -> SparsePolynomial {
    let mut out = SparsePolynomial::zero();
    for (za, ca) in a.terms() {
        for (zb, cb) in b.terms() {
            out.add_term(ca * cb, za.mul(*zb));
        }
    }
    out
}

impl fmt::Debug for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (z, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){z}")?;
        }
        Ok(())
    }
}

/// Serialized as rows `[n, m, "p/q"]` in graded order.
impl Serialize for SparsePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<(u32, u32, &Rational)> =
            self.terms.iter().map(|(z, c)| (z.n, z.m, c)).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SparsePolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<(u32, u32, Rational)>::deserialize(deserializer)?;
        Ok(SparsePolynomial::from_terms(
            rows.into_iter().map(|(n, m, c)| (Monomial::new(n, m), c)),
        ))
    }
}
