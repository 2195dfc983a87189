use serde::{Deserialize, Serialize};

use crate::algebra::{Rational, SparsePolynomial};

pub const MAX_WITNESSES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Scalar(Rational),
    Integer(i64),
    Poly(SparsePolynomial),
}

/// A failing identity instance: which identity, the input indices, and both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub identity: String,
    pub input: Vec<i64>,
    pub lhs: WitnessValue,
    pub rhs: WitnessValue,
}

/// Outcome of an exhaustive check. `passed` holds exactly when no witness was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    pub pairs_checked: u64,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    pub fn pass(pairs_checked: u64) -> Self {
        CheckReport {
            passed: true,
            pairs_checked,
            witnesses: Vec::new(),
        }
    }

    /// Merge per-instance outcomes that arrive in a fixed order; keeps the first witnesses.
    pub fn from_outcomes<I>(pairs_checked: u64, failures: I) -> Self
    where
        I: IntoIterator<Item = Witness>,
    {
        let witnesses: Vec<Witness> = failures.into_iter().take(MAX_WITNESSES).collect();
        CheckReport {
            passed: witnesses.is_empty(),
            pairs_checked,
            witnesses,
        }
    }
}
