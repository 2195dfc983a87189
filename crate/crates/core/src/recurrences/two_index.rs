use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::operator::{CheckReport, Witness, WitnessValue};

use super::{IndexSet, Sequence, SlotValues};

/// Parameters of the row-indexed system
/// `β^n_m β^s_t = β^n_m β^s_{m+t+d_n} + β^s_t β^n_{m+t+d_s}`, `m ≥ τ_n`, `t ≥ τ_s`, `n, s ≥ N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoIndexRecParams {
    /// First row index `N`.
    pub start: u64,
    /// `d_s` for `s ≥ N`, position 0 holding `d_N`.
    pub d_seq: Sequence<u64>,
    /// `τ_s` for `s ≥ N`, position 0 holding `τ_N`.
    pub tau_seq: Sequence<u64>,
    pub index_set: IndexSet,
    pub delta: u64,
    pub k: SlotValues<u64>,
    pub seeds: SlotValues<Rational>,
}

impl TwoIndexRecParams {
    pub fn d(&self, s: u64) -> Result<u64> {
        self.d_seq.at((s - self.start) as usize, "d", self.start as i64)
    }

    pub fn tau(&self, s: u64) -> Result<u64> {
        self.tau_seq.at((s - self.start) as usize, "tau", self.start as i64)
    }

    /// Check every row of `I` up to `upto`.
    pub fn validate(&self, upto: u64) -> Result<()> {
        self.index_set.validate(false)?;
        self.k.check_shape(&self.index_set, "k")?;
        self.seeds.check_shape(&self.index_set, "seeds")?;
        if self.delta == 0 {
            return Err(Error::invalid("delta must be positive"));
        }
        if !self.index_set.members_in(0, self.start as i64 - 1).is_empty() {
            return Err(Error::invalid("index set contains rows below the first row"));
        }
        for i in self.index_set.members_in(self.start as i64, upto as i64) {
            let i = i as u64;
            let slot = self.index_set.locate(i as i64).unwrap();
            let k = *self.k.get(slot);
            let (d, tau) = (self.d(i)?, self.tau(i)?);
            if self.seeds.get(slot).is_zero() {
                return Err(Error::invalid(format!("seed of row {i} must be nonzero")));
            }
            if k < tau || k - tau >= self.delta || self.delta > k + d {
                return Err(Error::invalid(format!(
                    "row {i}: need 0 <= k - tau < delta <= k + d (k = {k}, tau = {tau}, d = {d}, delta = {})",
                    self.delta
                )));
            }
            if (k + d) % self.delta != 0 {
                return Err(Error::invalid(format!(
                    "row {i}: delta = {} does not divide k + d = {}",
                    self.delta,
                    k + d
                )));
            }
        }
        Ok(())
    }
}

/// Dense values `β^s_t` for rows `N..=bound` and columns `0..=bound`; entries below `τ_s` are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoIndexTable {
    pub start: u64,
    pub bound: u64,
    pub rows: Vec<Vec<Rational>>,
}

impl TwoIndexTable {
    pub fn zeros(start: u64, bound: u64) -> Self {
        let width = (bound + 1) as usize;
        let height = (bound + 1).saturating_sub(start) as usize;
        TwoIndexTable {
            start,
            bound,
            rows: vec![vec![Rational::zero(); width]; height],
        }
    }

    pub fn get(&self, s: u64, t: u64) -> &Rational {
        &self.rows[(s - self.start) as usize][t as usize]
    }

    pub fn set(&mut self, s: u64, t: u64, v: Rational) {
        self.rows[(s - self.start) as usize][t as usize] = v;
    }
}

/// Closed-form solution on rows and columns up to `upto`.
pub fn closed_two_index(params: &TwoIndexRecParams, upto: u64) -> Result<TwoIndexTable> {
    params.validate(upto)?;
    let mut table = TwoIndexTable::zeros(params.start, upto);
    for s in params.index_set.members_in(params.start as i64, upto as i64) {
        let slot = params.index_set.locate(s).unwrap();
        let s = s as u64;
        let k = *params.k.get(slot);
        let d = params.d(s)?;
        let base = Rational::from_int((k + d) as i64) * params.seeds.get(slot);
        let mut t = k;
        while t <= upto {
            table.set(s, t, &base / &Rational::from_int((t + d) as i64));
            t += params.delta;
        }
    }
    Ok(table)
}

/// Check the system on every instance whose touched indices stay within `bound`.
pub fn verify_two_index(
    values: &TwoIndexTable,
    d_seq: &Sequence<u64>,
    tau_seq: &Sequence<u64>,
    bound: u64,
) -> Result<CheckReport> {
    if bound > values.bound {
        return Err(Error::IndexCoverage {
            index: format!("row/column {bound}"),
            bound: values.bound as i64,
        });
    }
    let n0 = values.start;
    let rows: Vec<u64> = (n0..=bound).collect();
    let d: Vec<u64> = rows
        .iter()
        .map(|&s| d_seq.at((s - n0) as usize, "d", n0 as i64))
        .collect::<Result<_>>()?;
    let tau: Vec<u64> = rows
        .iter()
        .map(|&s| tau_seq.at((s - n0) as usize, "tau", n0 as i64))
        .collect::<Result<_>>()?;
    // Instances with both factors zero are trivial; every other instance has a nonzero
    // factor, which the symmetric relation lets us put first.
    let nonzero: Vec<(u64, u64)> = rows
        .iter()
        .flat_map(|&n| {
            let lo = tau[(n - n0) as usize];
            (lo..=bound)
                .filter(move |&m| !values.get(n, m).is_zero())
                .map(move |m| (n, m))
        })
        .collect();
    let outcomes: Vec<(u64, Vec<Witness>)> = nonzero
        .par_iter()
        .map(|&(n, m)| {
            let a = values.get(n, m);
            let dn = d[(n - n0) as usize];
            let mut count = 0u64;
            let mut found = Vec::new();
            for &s in &rows {
                let ds = d[(s - n0) as usize];
                let mut t = tau[(s - n0) as usize];
                while m + t + dn.max(ds) <= bound {
                    count += 1;
                    let b = values.get(s, t);
                    let far = values.get(s, m + t + dn);
                    if b.is_zero() && far.is_zero() {
                        t += 1;
                        continue;
                    }
                    let lhs = a * b;
                    let rhs = a * far + b * values.get(n, m + t + ds);
                    if lhs != rhs {
                        found.push(Witness {
                            identity: "two-index".into(),
                            input: vec![n as i64, m as i64, s as i64, t as i64],
                            lhs: WitnessValue::Scalar(lhs),
                            rhs: WitnessValue::Scalar(rhs),
                        });
                    }
                    t += 1;
                }
            }
            (count, found)
        })
        .collect();
    let pairs = outcomes.iter().map(|(c, _)| c).sum();
    Ok(CheckReport::from_outcomes(
        pairs,
        outcomes.into_iter().flat_map(|(_, w)| w),
    ))
}
