use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{admissible_monomials, poly_mul, AlgebraContext, Monomial, Rational, SparsePolynomial};
use crate::error::{Error, Result};

use super::{eval_term, CheckReport, CoefficientTable, MonomialOperator, Term, Witness, WitnessValue};

fn pair_input(a: Monomial, b: Monomial) -> Vec<i64> {
    vec![a.n as i64, a.m as i64, b.n as i64, b.m as i64]
}

/// `coeff · R(z)` as a polynomial, skipping the evaluation when `coeff` is zero.
fn scaled_image(
    op: &MonomialOperator,
    coeff: &Rational,
    z: Monomial,
    ctx: AlgebraContext,
) -> Result<SparsePolynomial> {
    if coeff.is_zero() {
        return Ok(SparsePolynomial::zero());
    }
    let t = eval_term(op, z, ctx)?;
    Ok(SparsePolynomial::monomial(t.coeff * coeff, t.mono))
}

/// Run `per_pair` over all unordered admissible pairs `a ≤ b` of degree at most `d`.
///
/// Work is split by the first index across the rayon pool; outcomes are merged in
/// canonical pair order so reports are deterministic.
fn sweep_pairs<F>(ctx: AlgebraContext, d: u32, per_pair: F) -> Result<CheckReport>
where
    F: Fn(usize, usize, &[Monomial]) -> Result<Vec<Witness>> + Sync,
{
    let monos = admissible_monomials(ctx, d);
    let n = monos.len();
    let per_row: Vec<Result<Vec<Witness>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut found = Vec::new();
            for j in i..n {
                found.extend(per_pair(i, j, &monos)?);
            }
            Ok(found)
        })
        .collect();
    let mut witnesses = Vec::new();
    for row in per_row {
        witnesses.extend(row?);
    }
    let pairs = (n as u64) * (n as u64 + 1) / 2;
    Ok(CheckReport::from_outcomes(pairs, witnesses))
}

fn precheck_coverage(op: &MonomialOperator, d: u32) -> Result<()> {
    if let Some(c) = op.coverage() {
        if c < d {
            return Err(Error::Coverage {
                needed: d,
                covered: c,
                at: Monomial::new(d, 0),
            });
        }
    }
    Ok(())
}

fn images(op: &MonomialOperator, ctx: AlgebraContext, d: u32) -> Result<Vec<Term>> {
    admissible_monomials(ctx, d)
        .into_par_iter()
        .map(|z| eval_term(op, z, ctx))
        .collect()
}

/// Exhaustive check of `R(a)R(b) = R(R(a)b + aR(b))` on admissible monomial pairs.
pub fn check_rb0(op: &MonomialOperator, ctx: AlgebraContext, max_degree: u32) -> Result<CheckReport> {
    precheck_coverage(op, max_degree)?;
    let img = images(op, ctx, max_degree)?;
    sweep_pairs(ctx, max_degree, |i, j, monos| {
        let (ra, rb) = (&img[i], &img[j]);
        if ra.is_zero() && rb.is_zero() {
            return Ok(Vec::new());
        }
        let (a, b) = (monos[i], monos[j]);
        let lhs = poly_mul(&ra.to_poly(), &rb.to_poly());
        let rhs = scaled_image(op, &ra.coeff, ra.mono.mul(b), ctx)?
            .add(&scaled_image(op, &rb.coeff, a.mul(rb.mono), ctx)?);
        if lhs == rhs {
            Ok(Vec::new())
        } else {
            Ok(vec![Witness {
                identity: "rb0".into(),
                input: pair_input(a, b),
                lhs: WitnessValue::Poly(lhs),
                rhs: WitnessValue::Poly(rhs),
            }])
        }
    })
}

/// Exhaustive check of `T(a)T(b) = T(T(a)b) = T(aT(b))` on admissible monomial pairs.
pub fn check_averaging(
    op: &MonomialOperator,
    ctx: AlgebraContext,
    max_degree: u32,
) -> Result<CheckReport> {
    precheck_coverage(op, max_degree)?;
    let img = images(op, ctx, max_degree)?;
    sweep_pairs(ctx, max_degree, |i, j, monos| {
        let (ta, tb) = (&img[i], &img[j]);
        if ta.is_zero() && tb.is_zero() {
            return Ok(Vec::new());
        }
        let (a, b) = (monos[i], monos[j]);
        let lhs = poly_mul(&ta.to_poly(), &tb.to_poly());
        let left = scaled_image(op, &ta.coeff, ta.mono.mul(b), ctx)?;
        let right = scaled_image(op, &tb.coeff, a.mul(tb.mono), ctx)?;
        let mut out = Vec::new();
        for (name, rhs) in [("avg-left", left), ("avg-right", right)] {
            if lhs != rhs {
                out.push(Witness {
                    identity: name.into(),
                    input: pair_input(a, b),
                    lhs: WitnessValue::Poly(lhs.clone()),
                    rhs: WitnessValue::Poly(rhs),
                });
            }
        }
        Ok(out)
    })
}

/// Coefficient-level restatements of the operator identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Relation {
    /// `α_{n,m}α_{s,t} = α_{n,m}α_{s,rn+m+t+c} + α_{s,t}α_{n,rs+m+t+c}`
    CaseIi { r: u32, c: u32 },
    /// `α_{u,v}α_{p,q} = α_{u,v}α_{r(v+c)+p,v+q+c} + α_{p,q}α_{r(q+c)+u,v+q+c}`
    CaseI { r: u32, c: u32 },
    /// `γ_{n,m}γ_{s,t} = (γ_{n,m} + γ_{s,t})γ_{n+s+p_x,m+t+p_y}`
    CaseIii { p_x: u32, p_y: u32 },
    /// `1/γ_{n+s+p_x,m+t+p_y} = 1/γ_{n,m} + 1/γ_{s,t}` where all three are nonzero
    Reciprocal { p_x: u32, p_y: u32 },
}

/// Table degree needed so that every index touched by pairs up to `max_index` is covered.
pub fn relation_coverage(relation: &Relation, max_index: u32) -> u32 {
    let d = max_index;
    match *relation {
        Relation::CaseIi { r, c } => d + d * r.max(1) + c,
        Relation::CaseI { r, c } => r * (d + c) + 2 * d + c,
        Relation::CaseIii { p_x, p_y } | Relation::Reciprocal { p_x, p_y } => 2 * d + p_x + p_y,
    }
}

/// Check one coefficient relation on all admissible index pairs of degree at most `max_index`.
pub fn check_coefficient_relation(
    table: &CoefficientTable,
    relation: &Relation,
    ctx: AlgebraContext,
    max_index: u32,
) -> Result<CheckReport> {
    if let Some(c) = table.coverage {
        if c < max_index {
            return Err(Error::Coverage {
                needed: max_index,
                covered: c,
                at: Monomial::new(max_index, 0),
            });
        }
    }
    let name = match relation {
        Relation::CaseIi { .. } => "case-ii",
        Relation::CaseI { .. } => "case-i",
        Relation::CaseIii { .. } => "case-iii",
        Relation::Reciprocal { .. } => "reciprocal",
    };
    let times = |k: &Rational, z: Monomial| -> Result<Rational> {
        if k.is_zero() {
            Ok(Rational::zero())
        } else {
            Ok(table.get(z)? * k)
        }
    };
    sweep_pairs(ctx, max_index, |i, j, monos| {
        let (a, b) = (monos[i], monos[j]);
        let (n, m, s, t) = (a.n, a.m, b.n, b.m);
        let ca = table.get(a)?;
        let cb = table.get(b)?;
        let (lhs, rhs) = match *relation {
            Relation::CaseIi { r, c } => {
                if ca.is_zero() && cb.is_zero() {
                    return Ok(Vec::new());
                }
                let rhs = times(&ca, Monomial::new(s, r * n + m + t + c))?
                    + times(&cb, Monomial::new(n, r * s + m + t + c))?;
                (&ca * &cb, rhs)
            }
            Relation::CaseI { r, c } => {
                if ca.is_zero() && cb.is_zero() {
                    return Ok(Vec::new());
                }
                let rhs = times(&ca, Monomial::new(r * (m + c) + s, m + t + c))?
                    + times(&cb, Monomial::new(r * (t + c) + n, m + t + c))?;
                (&ca * &cb, rhs)
            }
            Relation::CaseIii { p_x, p_y } => {
                let sum = &ca + &cb;
                let rhs = times(&sum, Monomial::new(n + s + p_x, m + t + p_y))?;
                (&ca * &cb, rhs)
            }
            Relation::Reciprocal { p_x, p_y } => {
                if ca.is_zero() || cb.is_zero() {
                    return Ok(Vec::new());
                }
                let g = table.get(Monomial::new(n + s + p_x, m + t + p_y))?;
                match g.recip() {
                    None => return Ok(Vec::new()),
                    Some(inv) => (inv, ca.recip().unwrap() + cb.recip().unwrap()),
                }
            }
        };
        if lhs == rhs {
            Ok(Vec::new())
        } else {
            Ok(vec![Witness {
                identity: name.into(),
                input: pair_input(a, b),
                lhs: WitnessValue::Scalar(lhs),
                rhs: WitnessValue::Scalar(rhs),
            }])
        }
    })
}
