use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{CheckReport, Witness, WitnessValue};

use super::Sequence;

/// Parameters of `k_{s+t} = k_s + k_t + p − Δξ_{s,t}` with free data `k₀`, `k₁`, `ξ_{1,s}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KSeqAdditiveParams {
    pub p: u64,
    pub delta: u64,
    pub k0: u64,
    pub k1: u64,
    /// `ξ_{1,s}` for `s ≥ 1`; position 0 holds `ξ_{1,1}`.
    pub xi_1: Sequence<u64>,
}

/// Parameters of `k_{s+t+r} = k_s + k_t + p − Δξ_{s,t}` with free data `k₀`, `ξ_{0,s}`, `ξ_{1,s}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KSeqShiftedParams {
    pub r: u64,
    pub p: u64,
    pub delta: u64,
    pub k0: u64,
    /// `ξ_{0,s}` for `s ≥ 0`.
    pub xi_0: Sequence<u64>,
    /// `ξ_{1,s}` for `1 ≤ s ≤ r − 1`; position 0 holds `ξ_{1,1}`.
    pub xi_1: Vec<u64>,
}

/// `ξ_{s,t}` for all `s + t ≤ bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiTable {
    pub bound: u64,
    pub values: Vec<Vec<i64>>,
}

impl XiTable {
    fn new(bound: u64) -> Self {
        XiTable {
            bound,
            values: (0..=bound).map(|s| vec![0; (bound - s + 1) as usize]).collect(),
        }
    }

    pub fn get(&self, s: u64, t: u64) -> Result<i64> {
        if s + t > self.bound {
            return Err(Error::IndexCoverage {
                index: format!("xi[{s},{t}]"),
                bound: self.bound as i64,
            });
        }
        Ok(self.values[s as usize][t as usize])
    }

    fn set(&mut self, s: u64, t: u64, v: i64) {
        self.values[s as usize][t as usize] = v;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSolution {
    pub k: Vec<i64>,
    /// Shifted system only: `τ_j` for `0 ≤ j < r`.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub tau: Vec<i64>,
    pub xi: XiTable,
}

fn natural(v: i64, what: impl FnOnce() -> String) -> Result<()> {
    if v < 0 {
        Err(Error::invalid(format!("{} = {v} is not a natural number", what())))
    } else {
        Ok(())
    }
}

/// Closed form of the additive system: `k_n` for `n ≤ upto` and `ξ_{u,v}` for `u + v ≤ upto`.
pub fn k_closed_additive(params: &KSeqAdditiveParams, upto: u64) -> Result<KSolution> {
    let KSeqAdditiveParams { p, delta, k0, k1, .. } = *params;
    if p == 0 || delta == 0 {
        return Err(Error::invalid("p and delta must be positive"));
    }
    if (k0 + p) % delta != 0 {
        return Err(Error::invalid(format!(
            "delta = {delta} must divide k0 + p = {}",
            k0 + p
        )));
    }
    let xi_edge = ((k0 + p) / delta) as i64;
    // partial[n] = Σ_{s=1}^{n} ξ_{1,s}
    let mut partial = vec![0i64; upto.max(1) as usize + 1];
    for n in 1..partial.len() {
        if n as u64 > upto.saturating_sub(1) {
            break;
        }
        partial[n] = partial[n - 1] + params.xi_1.at(n - 1, "xi_1", 1)? as i64;
    }
    let (p, delta) = (p as i64, delta as i64);
    let mut k = vec![k0 as i64];
    for n in 1..=upto as i64 {
        let v = n * k1 as i64 + (n - 1) * p - delta * partial[(n - 1) as usize];
        natural(v, || format!("k_{n}"))?;
        k.push(v);
    }
    let mut xi = XiTable::new(upto);
    for u in 0..=upto {
        for v in 0..=(upto - u) {
            let val = if u == 0 || v == 0 {
                xi_edge
            } else {
                let (lo, hi) = (u.min(v), u.max(v));
                -partial[(lo - 1) as usize] + partial[(u + v - 1) as usize] - partial[(hi - 1) as usize]
            };
            natural(val, || format!("xi_{{{u},{v}}}"))?;
            xi.set(u, v, val);
        }
    }
    Ok(KSolution { k, tau: Vec::new(), xi })
}

/// `k_n = n k₁ + (n−1)p − Δ Σ_{s=1}^{n−1} ξ_{1,s}` for a single `n` (no range validation).
pub fn k_additive_at(params: &KSeqAdditiveParams, n: u64) -> Result<i64> {
    if n == 0 {
        return Ok(params.k0 as i64);
    }
    let mut partial = 0i64;
    for s in 1..n {
        partial += params.xi_1.at((s - 1) as usize, "xi_1", 1)? as i64;
    }
    let n = n as i64;
    Ok(n * params.k1 as i64 + (n - 1) * params.p as i64 - params.delta as i64 * partial)
}

/// Precomputed pieces of the shifted closed form shared by every index.
struct Shifted<'a> {
    params: &'a KSeqShiftedParams,
    /// `pd[n] = Σ_{s=1}^{n} (ξ_{0,s+1} − ξ_{1,s})` for `n < r`.
    pd: Vec<i64>,
    tau: Vec<i64>,
}

impl<'a> Shifted<'a> {
    fn new(params: &'a KSeqShiftedParams) -> Result<Self> {
        let KSeqShiftedParams { r, p, delta, .. } = *params;
        if r == 0 || p == 0 || delta == 0 {
            return Err(Error::invalid("r, p and delta must be positive"));
        }
        if params.xi_1.len() as u64 != r - 1 {
            return Err(Error::invalid(format!(
                "xi_1 must list exactly r - 1 = {} values",
                r - 1
            )));
        }
        let mut pd = vec![0i64; r as usize];
        for n in 1..r as usize {
            pd[n] = pd[n - 1] + params.xi_0.at(n + 1, "xi_0", 0)? as i64 - params.xi_1[n - 1] as i64;
        }
        let mut sh = Shifted { params, pd, tau: Vec::new() };
        let ri = r as i64;
        let xi00 = sh.x0(0)?;
        sh.tau = (0..ri)
            .map(|j| j * xi00 + j * sh.pd_at(ri - 1) - ri * sh.pd_at(j - 1))
            .collect();
        Ok(sh)
    }

    fn r(&self) -> i64 {
        self.params.r as i64
    }

    fn x0(&self, i: i64) -> Result<i64> {
        Ok(self.params.xi_0.at(i as usize, "xi_0", 0)? as i64)
    }

    fn pd_at(&self, n: i64) -> i64 {
        if n <= 0 { 0 } else { self.pd[n as usize] }
    }

    /// `Σ_{s=0}^{count−1} ξ_{0, s r + offset}`
    fn sum_x0(&self, count: i64, offset: i64) -> Result<i64> {
        let mut acc = 0;
        for s in 0..count.max(0) {
            acc += self.x0(s * self.r() + offset)?;
        }
        Ok(acc)
    }

    /// `τ_j + r Σ_{s=0}^{i−1} ξ_{0, s r + j}` at `n = i r + j`.
    fn correction(&self, n: i64) -> Result<i64> {
        let (i, j) = (n / self.r(), n % self.r());
        Ok(self.tau[j as usize] + self.r() * self.sum_x0(i, j)?)
    }

    /// `r k_n`, before the divisibility check.
    fn r_times_k(&self, n: i64) -> Result<i64> {
        let (r, p, delta, k0) = (
            self.r(),
            self.params.p as i64,
            self.params.delta as i64,
            self.params.k0 as i64,
        );
        Ok((n + r) * k0 + n * p - delta * self.correction(n)?)
    }

    fn k_at(&self, n: i64) -> Result<i64> {
        let num = self.r_times_k(n)?;
        if num % self.r() != 0 {
            return Err(Error::invalid(format!(
                "r k_{n} = {num} is not divisible by r = {}",
                self.r()
            )));
        }
        Ok(num / self.r())
    }

    fn xi(&self, u: i64, v: i64) -> Result<i64> {
        let r = self.r();
        let (a, b) = (u / r, u % r);
        let (c, d) = (v / r, v % r);
        let common = self.pd_at(b - 1) + self.pd_at(d - 1) - self.sum_x0(a, b)? - self.sum_x0(c, d)?;
        Ok(if b + d < r {
            common - self.pd_at(b + d - 1) + self.sum_x0(a + c + 1, b + d)?
        } else {
            common - self.pd_at(b + d - r - 1) + self.sum_x0(a + c + 2, b + d - r)?
                - self.x0(0)?
                - self.pd_at(r - 1)
        })
    }
}

/// Closed form of the shifted system: `k_n` for `n ≤ upto`, `τ_j`, and `ξ_{u,v}` for `u + v + r ≤ upto`.
pub fn k_closed_shifted(params: &KSeqShiftedParams, upto: u64) -> Result<KSolution> {
    let sh = Shifted::new(params)?;
    let mut k = Vec::with_capacity(upto as usize + 1);
    for n in 0..=upto as i64 {
        let v = sh.k_at(n)?;
        natural(v, || format!("k_{n}"))?;
        k.push(v);
    }
    let r = params.r;
    let xi_bound = upto.saturating_sub(r);
    let mut xi = XiTable::new(xi_bound);
    if upto >= r {
        for u in 0..=xi_bound {
            for v in 0..=(xi_bound - u) {
                let val = sh.xi(u as i64, v as i64)?;
                natural(val, || format!("xi_{{{u},{v}}}"))?;
                xi.set(u, v, val);
            }
        }
    }
    Ok(KSolution { k, tau: sh.tau, xi })
}

/// `k_n` of the shifted system for a single `n` (integrality checked, sign not).
pub fn k_shifted_at(params: &KSeqShiftedParams, n: u64) -> Result<i64> {
    Shifted::new(params)?.k_at(n as i64)
}

/// The bracketed correction `τ_j + r Σ_{s=0}^{i−1} ξ_{0,sr+j}` at `n = i r + j`, so that
/// `r k_n = (n + r) k₀ + n p − Δ · correction(n)`.
pub fn shifted_correction(params: &KSeqShiftedParams, n: u64) -> Result<i64> {
    Shifted::new(params)?.correction(n as i64)
}

/// Check `k_{s+t+r} = k_s + k_t + p − Δξ_{s,t}` for all `s + t + r ≤ bound` (`r = 0`: additive).
pub fn verify_k_recurrence(
    k: &[i64],
    xi: &XiTable,
    p: u64,
    delta: u64,
    r: u64,
    bound: u64,
) -> Result<CheckReport> {
    if (k.len() as u64) <= bound {
        return Err(Error::IndexCoverage {
            index: format!("k_{bound}"),
            bound: k.len() as i64 - 1,
        });
    }
    let (p, delta) = (p as i64, delta as i64);
    let mut pairs = 0;
    let mut failures = Vec::new();
    for s in 0..=bound.saturating_sub(r) {
        for t in 0..=(bound - r - s) {
            pairs += 1;
            let lhs = k[(s + t + r) as usize];
            let rhs = k[s as usize] + k[t as usize] + p - delta * xi.get(s, t)?;
            if lhs != rhs {
                failures.push(Witness {
                    identity: if r == 0 { "k-additive".into() } else { "k-shifted".into() },
                    input: vec![s as i64, t as i64],
                    lhs: WitnessValue::Integer(lhs),
                    rhs: WitnessValue::Integer(rhs),
                });
            }
        }
    }
    Ok(CheckReport::from_outcomes(pairs, failures))
}
