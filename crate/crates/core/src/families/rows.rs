//! Shared machinery for the row families (RB-II and RB-I).

use num_integer::Integer;

use crate::algebra::{AlgebraContext, Monomial, Rational};
use crate::error::{Error, Result};
use crate::operator::{Term, TermRule};
use crate::recurrences::Slot;

use super::params::{KRule, RowParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RowKind {
    /// Row `i` is `{xⁱyᵗ}`, shift `d_i = ri + c`.
    CaseII,
    /// Row `i` is `{x^{rl+i}yˡ}`, shift `d_i = c`.
    CaseI,
}

pub(crate) fn div_ceil_i(a: i64, b: i64) -> i64 {
    -Integer::div_floor(&(-a), &b)
}

/// Least height `l` with `x^{rl+i}yˡ` admissible, for `i < 0` and `r > 0`.
pub(crate) fn case_i_floor(r: u64, i: i64, ctx: AlgebraContext) -> i64 {
    let (r, nu0) = (r as i64, ctx.nu_i(0));
    div_ceil_i(-i, r).max(div_ceil_i(nu0 - i, r + 1)).max(0)
}

impl RowKind {
    /// Least admissible height in row `i`.
    pub(crate) fn row_min(self, r: u64, i: i64, ctx: AlgebraContext) -> Result<i64> {
        match self {
            RowKind::CaseII if i < 0 => Err(Error::invalid(format!("row index {i} is negative"))),
            RowKind::CaseII => Ok(ctx.nu_i(i)),
            RowKind::CaseI if i > 0 => Ok(0),
            RowKind::CaseI if i == 0 => Ok(ctx.nu_i(0)),
            RowKind::CaseI if r == 0 => Err(Error::invalid(format!(
                "row index {i} is negative but r = 0"
            ))),
            RowKind::CaseI => Ok(case_i_floor(r, i, ctx)),
        }
    }

    pub(crate) fn shift(self, r: u64, c: u64, i: i64) -> i64 {
        match self {
            RowKind::CaseII => r as i64 * i + c as i64,
            RowKind::CaseI => c as i64,
        }
    }

    /// Split an input monomial into (row, height).
    pub(crate) fn locate(self, r: u64, z: Monomial) -> (i64, i64) {
        match self {
            RowKind::CaseII => (z.n as i64, z.m as i64),
            RowKind::CaseI => (z.n as i64 - r as i64 * z.m as i64, z.m as i64),
        }
    }

    pub(crate) fn output(self, r: u64, c: u64, z: Monomial) -> Monomial {
        let (n, m, r, c) = (z.n, z.m, r as u32, c as u32);
        match self {
            RowKind::CaseII => Monomial::new(0, m + r * n + c),
            RowKind::CaseI => Monomial::new(r * (m + c), m + c),
        }
    }
}

pub(crate) fn row_k(
    p: &RowParams,
    kind: RowKind,
    slot: Slot,
    i: i64,
    ctx: AlgebraContext,
) -> Result<i64> {
    Ok(match *p.k.get(slot) {
        KRule::Fixed(k) => k as i64,
        KRule::AboveMin { above_min } => kind.row_min(p.r, i, ctx)? + above_min as i64,
    })
}

/// Window conditions of a single row: `0 ≤ k − min < Δ ≤ k + d` and `Δ | k + d`.
pub(crate) fn check_row(p: &RowParams, kind: RowKind, slot: Slot, i: i64, ctx: AlgebraContext) -> Result<()> {
    let min = kind.row_min(p.r, i, ctx)?;
    let k = row_k(p, kind, slot, i, ctx)?;
    let d = kind.shift(p.r, p.c, i);
    let delta = p.delta as i64;
    let fail = |what: &str| {
        Err(Error::invalid(format!(
            "row {i}: {what} (k = {k}, least admissible height {min}, shift {d}, delta {delta})"
        )))
    };
    if k < min {
        return fail("k below the least admissible height");
    }
    if k - min >= delta {
        return fail("k - min must be smaller than delta");
    }
    if delta > k + d {
        return fail("delta exceeds k + shift");
    }
    if (k + d) % delta != 0 {
        return fail("delta does not divide k + shift");
    }
    Ok(())
}

/// Number of progression terms after which the row conditions repeat.
pub(crate) fn progression_horizon(p: &RowParams, start: i64, step: i64, rule: KRule) -> u64 {
    let fixed = match rule {
        KRule::Fixed(k) => k as i64,
        KRule::AboveMin { .. } => 0,
    };
    let reach = (start.abs() + p.r as i64 * (fixed + 2) + 2) / step.abs();
    reach as u64 + (p.r + 1) * p.delta + 4
}

pub(crate) fn validate_rows(p: &RowParams, kind: RowKind, ctx: AlgebraContext) -> Result<()> {
    if p.delta == 0 {
        return Err(Error::invalid("delta must be positive"));
    }
    let degenerate = p.r == 0 && p.c == 0;
    if !degenerate && p.c < ctx.nu(0) {
        return Err(Error::invalid(format!(
            "c = {} is below nu(0) = {}",
            p.c,
            ctx.nu(0)
        )));
    }
    p.index_set.validate(kind == RowKind::CaseI && p.r > 0)?;
    p.k.check_shape(&p.index_set, "k")?;
    p.seeds.check_shape(&p.index_set, "seeds")?;
    if p.seeds.elements.iter().chain(&p.seeds.progressions).any(Rational::is_zero) {
        return Err(Error::invalid("seeds must be nonzero"));
    }
    for (pos, &i) in p.index_set.elements.iter().enumerate() {
        check_row(p, kind, Slot::Element(pos), i, ctx)?;
    }
    for (group, &(a, b)) in p.index_set.progressions.iter().enumerate() {
        let horizon = progression_horizon(p, a, b, p.k.progressions[group]);
        for position in 0..=horizon {
            let slot = Slot::Progression { group, position };
            check_row(p, kind, slot, a + b * position as i64, ctx)?;
        }
    }
    Ok(())
}

/// `α = (k + d)·seed / (h + d)` at height `h = k + Δs` of a listed row, zero elsewhere.
pub(crate) struct RowRule {
    pub(crate) params: RowParams,
    pub(crate) kind: RowKind,
    pub(crate) ctx: AlgebraContext,
}

impl TermRule for RowRule {
    fn eval(&self, z: Monomial) -> Result<Term> {
        let p = &self.params;
        let (i, h) = self.kind.locate(p.r, z);
        let Some(slot) = p.index_set.locate(i) else {
            return Ok(Term::zero());
        };
        let k = row_k(p, self.kind, slot, i, self.ctx)?;
        let delta = p.delta as i64;
        if h < k || (h - k) % delta != 0 {
            return Ok(Term::zero());
        }
        let d = self.kind.shift(p.r, p.c, i);
        if h + d == 0 {
            return Err(Error::DegenerateDenominator(z));
        }
        let coeff = Rational::from_int(k + d) * p.seeds.get(slot) / Rational::from_int(h + d);
        Ok(Term::new(coeff, self.kind.output(p.r, p.c, z)))
    }
}
