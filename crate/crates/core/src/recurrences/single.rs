use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::operator::{CheckReport, Witness, WitnessValue};

/// Parameters of the nonzero solutions of `β_s β_t = (β_s + β_t) β_{s+t+d}`, `s, t ≥ τ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleRecParams {
    pub d: u64,
    pub tau: u64,
    pub k: u64,
    pub delta: u64,
    pub beta_k: Rational,
}

impl SingleRecParams {
    pub fn validate(&self) -> Result<()> {
        let SingleRecParams { d, tau, k, delta, .. } = *self;
        if d == 0 && tau == 0 {
            return Err(Error::invalid("d = tau = 0 admits only the zero sequence"));
        }
        if self.beta_k.is_zero() {
            return Err(Error::invalid("beta_k must be nonzero"));
        }
        if k < tau {
            return Err(Error::invalid(format!("k = {k} lies below tau = {tau}")));
        }
        if delta == 0 || k - tau >= delta || delta > k + d {
            return Err(Error::invalid(format!(
                "need 0 <= k - tau < delta <= k + d, got k = {k}, tau = {tau}, delta = {delta}, d = {d}"
            )));
        }
        if (k + d) % delta != 0 {
            return Err(Error::invalid(format!("delta = {delta} does not divide k + d = {}", k + d)));
        }
        Ok(())
    }
}

/// A finite stretch `β_start, …, β_{start+len-1}` of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedSeq {
    pub start: u64,
    pub values: Vec<Rational>,
}

impl IndexedSeq {
    pub fn end(&self) -> u64 {
        self.start + self.values.len() as u64 - 1
    }

    pub fn get(&self, i: u64) -> Option<&Rational> {
        i.checked_sub(self.start).and_then(|j| self.values.get(j as usize))
    }
}

/// `β_t = (k+d)β_k/(k+d+Δs)` for `t = k + Δs`, zero otherwise, for `t` in `τ..=upto`.
pub fn closed_single(params: &SingleRecParams, upto: u64) -> Result<IndexedSeq> {
    params.validate()?;
    let SingleRecParams { d, tau, k, delta, .. } = *params;
    let base = Rational::from_int((k + d) as i64) * &params.beta_k;
    let values = (tau..=upto.max(tau))
        .map(|t| {
            if t >= k && (t - k) % delta == 0 {
                &base / &Rational::from_int((t + d) as i64)
            } else {
                Rational::zero()
            }
        })
        .collect();
    Ok(IndexedSeq { start: tau, values })
}

/// Check the recurrence on every `τ ≤ s ≤ t` with `s + t + d` inside the sequence.
pub fn verify_single(seq: &IndexedSeq, d: u64, tau: u64) -> CheckReport {
    let end = seq.end();
    let mut pairs = 0u64;
    let mut failures = Vec::new();
    let lo = tau.max(seq.start);
    for s in lo..=end {
        for t in s..=end {
            if s + t + d > end {
                break;
            }
            pairs += 1;
            let (bs, bt) = (seq.get(s).unwrap(), seq.get(t).unwrap());
            if bs.is_zero() && bt.is_zero() {
                continue;
            }
            let lhs = bs * bt;
            let rhs = (bs + bt) * seq.get(s + t + d).unwrap();
            if lhs != rhs {
                failures.push(Witness {
                    identity: "single".into(),
                    input: vec![s as i64, t as i64],
                    lhs: WitnessValue::Scalar(lhs),
                    rhs: WitnessValue::Scalar(rhs),
                });
            }
        }
    }
    CheckReport::from_outcomes(pairs, failures)
}
