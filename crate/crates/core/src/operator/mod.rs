//! Monomial operators, their evaluation, and exhaustive identity checks.

mod check;
mod report;
mod table;
mod term;

use std::fmt;
use std::sync::Arc;

use crate::algebra::{admissible_monomials, AlgebraContext, Monomial, Rational, SparsePolynomial};
use crate::error::{Error, Result};

pub use check::{
    check_averaging, check_coefficient_relation, check_rb0, relation_coverage, Relation,
};
pub use report::{CheckReport, Witness, WitnessValue, MAX_WITNESSES};
pub use table::{CoefficientTable, OperatorTable, TableRow};
pub use term::Term;

/// A closed-form rule assigning one term to every admissible monomial.
pub trait TermRule: Send + Sync {
    fn eval(&self, z: Monomial) -> Result<Term>;
}

struct FnRule<F>(F);

impl<F> TermRule for FnRule<F>
where
    F: Fn(Monomial) -> Term + Send + Sync,
{
    fn eval(&self, z: Monomial) -> Result<Term> {
        Ok((self.0)(z))
    }
}

#[derive(Clone)]
enum Source {
    Closed(Arc<dyn TermRule>),
    Table(Arc<OperatorTable>),
}

/// A linear operator sending each monomial to a scalar multiple of a monomial.
///
/// Scaling and conjugation by the `x ↔ y` swap are stored as a factor and a flag, so
/// `conjugate_swap` is an exact involution on the representation.
#[derive(Clone)]
pub struct MonomialOperator {
    source: Source,
    factor: Rational,
    swapped: bool,
}

impl fmt::Debug for MonomialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = match &self.source {
            Source::Closed(_) => "closed".to_string(),
            Source::Table(t) => format!("table({} rows, coverage {:?})", t.len(), t.coverage),
        };
        f.debug_struct("MonomialOperator")
            .field("source", &src)
            .field("factor", &self.factor)
            .field("swapped", &self.swapped)
            .finish()
    }
}

impl MonomialOperator {
    pub fn from_rule(rule: impl TermRule + 'static) -> Self {
        MonomialOperator {
            source: Source::Closed(Arc::new(rule)),
            factor: Rational::one(),
            swapped: false,
        }
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(Monomial) -> Term + Send + Sync + 'static,
    {
        MonomialOperator::from_rule(FnRule(f))
    }

    pub fn from_table(table: OperatorTable) -> Self {
        MonomialOperator {
            source: Source::Table(Arc::new(table)),
            factor: Rational::one(),
            swapped: false,
        }
    }

    pub fn zero() -> Self {
        MonomialOperator::from_table(OperatorTable::new(None))
    }

    pub fn identity() -> Self {
        MonomialOperator::from_fn(Term::unit)
    }

    /// Coverage degree of a table-backed operator, `None` when total.
    pub fn coverage(&self) -> Option<u32> {
        match &self.source {
            Source::Closed(_) => None,
            Source::Table(t) => t.coverage,
        }
    }

    fn eval_raw(&self, z: Monomial) -> Result<Term> {
        let z_src = if self.swapped { z.swap() } else { z };
        let t = match &self.source {
            Source::Closed(rule) => rule.eval(z_src)?,
            Source::Table(table) => table.get(z_src)?,
        };
        if t.is_zero() {
            return Ok(Term::zero());
        }
        let mono = if self.swapped { t.mono.swap() } else { t.mono };
        Ok(Term::new(t.coeff * &self.factor, mono))
    }

    /// Tabulate every admissible input of degree at most `d`.
    pub fn tabulate(&self, ctx: AlgebraContext, d: u32) -> Result<OperatorTable> {
        let mut table = OperatorTable::new(Some(d));
        for z in admissible_monomials(ctx, d) {
            table.insert(z, eval_term(self, z, ctx)?);
        }
        Ok(table)
    }
}

/// The term assigned to `z`; the zero term for kernel monomials.
pub fn eval_term(op: &MonomialOperator, z: Monomial, ctx: AlgebraContext) -> Result<Term> {
    if !ctx.is_admissible(z) {
        return Err(Error::invalid(format!("{z} is not admissible in the {} algebra", ctx.name())));
    }
    let t = op.eval_raw(z)?;
    if !t.is_zero() && !ctx.is_admissible(t.mono) {
        return Err(Error::invalid(format!(
            "operator sends {z} to a constant, which is outside the non-unital algebra"
        )));
    }
    Ok(t)
}

/// Linear extension of `op` to a polynomial.
pub fn apply(op: &MonomialOperator, p: &SparsePolynomial, ctx: AlgebraContext) -> Result<SparsePolynomial> {
    let mut out = SparsePolynomial::zero();
    for (z, c) in p.terms() {
        let t = eval_term(op, *z, ctx)?;
        out.add_term(t.coeff * c, t.mono);
    }
    Ok(out)
}

/// Multiply every output coefficient by the nonzero scalar `a`.
pub fn scale(op: &MonomialOperator, a: &Rational) -> Result<MonomialOperator> {
    if a.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let mut out = op.clone();
    out.factor = &out.factor * a;
    Ok(out)
}

/// `ψ ∘ op ∘ ψ` where `ψ` exchanges `x` and `y`.
pub fn conjugate_swap(op: &MonomialOperator) -> MonomialOperator {
    let mut out = op.clone();
    out.swapped = !out.swapped;
    out
}

/// Exact comparison of two operators on all admissible inputs up to degree `d`.
pub fn tables_equal(
    a: &MonomialOperator,
    b: &MonomialOperator,
    ctx: AlgebraContext,
    d: u32,
) -> Result<bool> {
    for z in admissible_monomials(ctx, d) {
        if eval_term(a, z, ctx)? != eval_term(b, z, ctx)? {
            return Ok(false);
        }
    }
    Ok(true)
}
