//! Inverse problem: recover family parameters from a truncated operator table.

mod fit;
mod progression;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{admissible_monomials, AlgebraContext, Monomial};
use crate::error::{Error, Result};
use crate::families::{build, FamilySpec};
use crate::operator::{
    conjugate_swap, eval_term, CheckReport, MonomialOperator, OperatorTable, Term, Witness,
    WitnessValue,
};

pub use progression::{fit_progression, Progression};

use fit::{drafts, Point};

/// How far past the checked range extra support was pinned down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitQuality {
    /// Every parameter was read off the table and no other fit of the same family
    /// disagrees beyond the checked range.
    Exact,
    /// Some parameter was under-determined by the truncation.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub spec: FamilySpec,
    pub fit_quality: FitQuality,
    pub coverage_degree_checked: u32,
    /// The spec describes the table conjugated by the swap `x ↔ y`.
    pub mirrored: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub candidates: Vec<Candidate>,
    /// The table is zero on the range; it belongs to every Rota–Baxter family
    /// (and the zero map is also averaging), so no candidate is listed.
    pub vacuous: bool,
}

impl ClassificationResult {
    pub fn best_quality(&self) -> Option<FitQuality> {
        if self.candidates.iter().any(|c| c.fit_quality == FitQuality::Exact) {
            Some(FitQuality::Exact)
        } else {
            self.candidates.first().map(|c| c.fit_quality)
        }
    }
}

/// Degree beyond the checked range used to detect ambiguous fits.
const LOOKAHEAD: u32 = 5;

pub fn classify(
    table: &OperatorTable,
    ctx: AlgebraContext,
    coverage_degree: u32,
) -> Result<ClassificationResult> {
    if let Some(covered) = table.coverage {
        if covered < coverage_degree {
            return Err(Error::Coverage {
                needed: coverage_degree,
                covered,
                at: Monomial::new(coverage_degree, 0),
            });
        }
    }
    let table = table.truncate(coverage_degree);
    for (z, t) in table.rows() {
        if !ctx.is_admissible(*z) || !ctx.is_admissible(t.mono) {
            return Err(Error::invalid(format!(
                "table row {z} -> {} is outside the {} algebra",
                t.mono,
                ctx.name()
            )));
        }
    }
    if table.is_empty() {
        return Ok(ClassificationResult {
            candidates: Vec::new(),
            vacuous: true,
        });
    }
    let mut candidates = fit_side(&table, ctx, coverage_degree, false);
    candidates.extend(fit_side(&swap_table(&table), ctx, coverage_degree, true));
    if candidates.is_empty() {
        return Err(Error::Unclassifiable(format!(
            "no family reproduces the {} nonzero rows up to degree {coverage_degree}",
            table.len()
        )));
    }
    Ok(ClassificationResult {
        candidates,
        vacuous: false,
    })
}

fn swap_table(table: &OperatorTable) -> OperatorTable {
    let mut out = OperatorTable::new(table.coverage);
    for (z, t) in table.rows() {
        out.insert(z.swap(), Term::new(t.coeff.clone(), t.mono.swap()));
    }
    out
}

fn reproduces(op: &MonomialOperator, table: &OperatorTable, ctx: AlgebraContext, d: u32) -> bool {
    admissible_monomials(ctx, d).into_iter().all(|z| {
        matches!((eval_term(op, z, ctx), table.get(z)), (Ok(a), Ok(b)) if a == b)
    })
}

fn fit_side(table: &OperatorTable, ctx: AlgebraContext, d: u32, mirrored: bool) -> Vec<Candidate> {
    let points: Vec<Point> = table
        .rows()
        .map(|(z, t)| Point {
            z: *z,
            coeff: t.coeff.clone(),
            out: t.mono,
        })
        .collect();
    let mut seen = BTreeSet::new();
    let unique: Vec<_> = drafts(&points, ctx, d)
        .into_iter()
        .filter(|dr| seen.insert(serde_json::to_string(&dr.spec).unwrap_or_default()))
        .collect();
    let kept: Vec<(FamilySpec, bool, Option<OperatorTable>)> = unique
        .into_par_iter()
        .filter_map(|dr| {
            let op = build(&dr.spec).ok()?;
            if !reproduces(&op, table, ctx, d) {
                return None;
            }
            let ahead = op.tabulate(ctx, d + LOOKAHEAD).ok();
            Some((dr.spec, dr.determined, ahead))
        })
        .collect();
    kept.iter()
        .map(|(spec, determined, ahead)| {
            let tag = spec.tag();
            let agrees = ahead.is_some()
                && kept
                    .iter()
                    .filter(|(other, det, _)| *det && other.tag() == tag)
                    .all(|(_, _, other)| other == ahead);
            Candidate {
                spec: spec.clone(),
                fit_quality: if *determined && agrees {
                    FitQuality::Exact
                } else {
                    FitQuality::Partial
                },
                coverage_degree_checked: d,
                mirrored,
            }
        })
        .collect()
}

/// Build, truncate, classify, and report whether some candidate rebuilds the table.
pub fn round_trip(spec: &FamilySpec, coverage_degree: u32) -> CheckReport {
    round_trip_detailed(spec, coverage_degree).0
}

/// [`round_trip`] together with the classification it was based on.
pub fn round_trip_detailed(
    spec: &FamilySpec,
    coverage_degree: u32,
) -> (CheckReport, Option<ClassificationResult>) {
    let ctx = spec.ctx;
    let fail = |what: String| {
        CheckReport::from_outcomes(
            0,
            [Witness {
                identity: format!("round-trip: {what}"),
                input: Vec::new(),
                lhs: WitnessValue::Integer(0),
                rhs: WitnessValue::Integer(1),
            }],
        )
    };
    let table = match build(spec).and_then(|op| op.tabulate(ctx, coverage_degree)) {
        Ok(t) => t,
        Err(e) => return (fail(format!("spec does not tabulate ({e})")), None),
    };
    let result = match classify(&table, ctx, coverage_degree) {
        Ok(r) => r,
        Err(e) => return (fail(e.to_string()), None),
    };
    let checked = admissible_monomials(ctx, coverage_degree).len() as u64;
    let rebuilt = result.vacuous
        || result.candidates.iter().any(|c| {
            build(&c.spec)
                .map(|op| if c.mirrored { conjugate_swap(&op) } else { op })
                .is_ok_and(|op| reproduces(&op, &table, ctx, coverage_degree))
        });
    let report = if rebuilt {
        CheckReport::pass(checked * result.candidates.len().max(1) as u64)
    } else {
        fail("no candidate rebuilds the table".into())
    };
    (report, Some(result))
}
