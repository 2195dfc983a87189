use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Monomial, Rational};
use crate::error::{Error, Result};

use super::Term;

/// Finite operator table. Absent rows are zero.
///
/// `coverage = Some(d)`: rows are only known up to total degree `d`;
/// `None`: the table is total (every absent monomial maps to zero).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorTable {
    rows: BTreeMap<Monomial, Term>,
    pub coverage: Option<u32>,
}

impl OperatorTable {
    pub fn new(coverage: Option<u32>) -> Self {
        OperatorTable {
            rows: BTreeMap::new(),
            coverage,
        }
    }

    pub fn insert(&mut self, z: Monomial, t: Term) {
        if t.is_zero() {
            self.rows.remove(&z);
        } else {
            self.rows.insert(z, t);
        }
    }

    pub fn get(&self, z: Monomial) -> Result<Term> {
        if let Some(d) = self.coverage {
            if z.degree() > d {
                return Err(Error::Coverage {
                    needed: z.degree(),
                    covered: d,
                    at: z,
                });
            }
        }
        Ok(self.rows.get(&z).cloned().unwrap_or_else(Term::zero))
    }

    /// Nonzero rows in graded order.
    pub fn rows(&self) -> impl Iterator<Item = (&Monomial, &Term)> {
        self.rows.iter()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows with input degree at most `d`, marked as covering exactly `d`.
    pub fn truncate(&self, d: u32) -> OperatorTable {
        OperatorTable {
            rows: self
                .rows
                .iter()
                .filter(|(z, _)| z.degree() <= d)
                .map(|(z, t)| (*z, t.clone()))
                .collect(),
            coverage: Some(self.coverage.map_or(d, |c| c.min(d))),
        }
    }

    /// Coefficient view `z ↦ coeff` used by the relation checks.
    pub fn coefficients(&self) -> CoefficientTable {
        CoefficientTable {
            coeffs: self
                .rows
                .iter()
                .map(|(z, t)| (*z, t.coeff.clone()))
                .collect(),
            coverage: self.coverage,
        }
    }

    pub fn to_rows(&self) -> Vec<TableRow> {
        self.rows
            .iter()
            .map(|(z, t)| TableRow {
                input: *z,
                coeff: t.coeff.clone(),
                output: t.mono,
            })
            .collect()
    }

    pub fn from_rows(rows: Vec<TableRow>, coverage: Option<u32>) -> Result<Self> {
        let mut table = OperatorTable::new(coverage);
        for row in rows {
            if table.rows.contains_key(&row.input) {
                return Err(Error::invalid(format!(
                    "table lists {} twice; a monomial operator has one output term per input",
                    row.input
                )));
            }
            if let Some(d) = coverage {
                if row.input.degree() > d {
                    continue;
                }
            }
            table.insert(row.input, Term::new(row.coeff, row.output));
        }
        Ok(table)
    }
}

/// One serialized row `[n, m, "p/q", n', m']`: `x^n y^m ↦ (p/q) x^{n'} y^{m'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub input: Monomial,
    pub coeff: Rational,
    pub output: Monomial,
}

impl Serialize for TableRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (
            self.input.n,
            self.input.m,
            &self.coeff,
            self.output.n,
            self.output.m,
        )
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TableRow {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(deserializer)?;
        if v.len() != 5 {
            return Err(D::Error::custom("table row must have 5 entries"));
        }
        let nat = |x: &serde_json::Value| {
            x.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| D::Error::custom("exponent must be a natural number"))
        };
        let coeff: Rational = serde_json::from_value(v[2].clone()).map_err(D::Error::custom)?;
        Ok(TableRow {
            input: Monomial::new(nat(&v[0])?, nat(&v[1])?),
            coeff,
            output: Monomial::new(nat(&v[3])?, nat(&v[4])?),
        })
    }
}

/// Coefficients `α_{n,m}` indexed by input monomial, with optional coverage bound.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoefficientTable {
    pub coeffs: BTreeMap<Monomial, Rational>,
    pub coverage: Option<u32>,
}

impl CoefficientTable {
    pub fn new(coverage: Option<u32>) -> Self {
        CoefficientTable {
            coeffs: BTreeMap::new(),
            coverage,
        }
    }

    pub fn set(&mut self, z: Monomial, c: Rational) {
        if c.is_zero() {
            self.coeffs.remove(&z);
        } else {
            self.coeffs.insert(z, c);
        }
    }

    pub fn get(&self, z: Monomial) -> Result<Rational> {
        if let Some(d) = self.coverage {
            if z.degree() > d {
                return Err(Error::Coverage {
                    needed: z.degree(),
                    covered: d,
                    at: z,
                });
            }
        }
        Ok(self.coeffs.get(&z).cloned().unwrap_or_else(Rational::zero))
    }
}
