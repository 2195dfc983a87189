use crate::algebra::{admissible_monomials, AlgebraContext, Monomial, Rational};
use crate::error::{Error, Result};
use crate::operator::{eval_term, MonomialOperator, Term, TermRule};
use crate::recurrences::{k_additive_at, k_shifted_at, shifted_correction};

use super::params::{
    CaseIIIAParams, CaseIIIB0Params, CaseIIIBPlusParams, Family, FamilySpec, IdSuppParams,
};
use super::rows::{RowKind, RowRule};
use super::validate::{iiia_steps, iiib0_kseq, iiib_plus_kseq, validate_family_params};

/// Averaging operator of an `AVG-*` spec, with every support coefficient equal to 1.
pub fn build_averaging(spec: &FamilySpec) -> Result<MonomialOperator> {
    if spec.family.is_rota_baxter() {
        return Err(Error::invalid(format!("{} is not an averaging family", spec.tag())));
    }
    validate_family_params(spec)?;
    build_unchecked(spec)
}

/// Weight-zero Rota–Baxter operator of an `RB-*` spec.
///
/// A support point whose closed-form denominator vanishes surfaces as
/// `DegenerateDenominator` when that point is evaluated.
pub fn build_rb(spec: &FamilySpec) -> Result<MonomialOperator> {
    if !spec.family.is_rota_baxter() {
        return Err(Error::invalid(format!("{} is not a Rota-Baxter family", spec.tag())));
    }
    validate_family_params(spec)?;
    build_unchecked(spec)
}

/// Validate and build whichever kind of operator the spec describes.
pub fn build(spec: &FamilySpec) -> Result<MonomialOperator> {
    validate_family_params(spec)?;
    build_unchecked(spec)
}

/// The family's closed form without the classification constraints.
///
/// Only the checks needed to evaluate the formula are made, so parameter choices outside
/// the classified range can be tabulated and tested against the identities directly.
pub fn build_unchecked(spec: &FamilySpec) -> Result<MonomialOperator> {
    let ctx = spec.ctx;
    Ok(match &spec.family {
        Family::AvgI(f) => {
            let (r, c) = (f.r as u32, f.c as u32);
            MonomialOperator::from_fn(move |z| Term::unit(Monomial::new(r * (z.m + c), z.m + c)))
        }
        Family::AvgII(f) => {
            let (r, c) = (f.r as u32, f.c as u32);
            MonomialOperator::from_fn(move |z| Term::unit(Monomial::new(0, r * z.n + z.m + c)))
        }
        Family::AvgIII(s) => {
            let (px, py) = (s.p_x as u32, s.p_y as u32);
            MonomialOperator::from_fn(move |z| Term::unit(Monomial::new(z.n + px, z.m + py)))
        }
        Family::AvgIV(_) => MonomialOperator::from_fn(|_| Term::unit(Monomial::ONE)),
        Family::RbII(p) | Family::RbI(p) => {
            if p.delta == 0 {
                return Err(Error::invalid("delta must be positive"));
            }
            p.k.check_shape(&p.index_set, "k")?;
            p.seeds.check_shape(&p.index_set, "seeds")?;
            let kind = match spec.family {
                Family::RbII(_) => RowKind::CaseII,
                _ => RowKind::CaseI,
            };
            MonomialOperator::from_rule(RowRule { params: p.clone(), kind, ctx })
        }
        Family::RbIdSupp(p) => MonomialOperator::from_rule(IdSuppRule(p.clone())),
        Family::AvgIIIA(p) => MonomialOperator::from_rule(IIIARule::new(p, false)?),
        Family::RbIIIA(p) => MonomialOperator::from_rule(IIIARule::new(p, true)?),
        Family::AvgIIIB0(p) => MonomialOperator::from_rule(IIIB0Rule::new(p, false)?),
        Family::RbIIIB0(p) => MonomialOperator::from_rule(IIIB0Rule::new(p, true)?),
        Family::AvgIIIBPlus(p) => MonomialOperator::from_rule(IIIBPlusRule::new(p, false)?),
        Family::RbIIIBPlus(p) => MonomialOperator::from_rule(IIIBPlusRule::new(p, true)?),
    })
}

fn seed_pair(seeds: &Option<[Rational; 2]>, rb: bool) -> Result<Option<[Rational; 2]>> {
    match (rb, seeds) {
        (false, _) => Ok(None),
        (true, Some(s)) => Ok(Some(s.clone())),
        (true, None) => Err(Error::invalid("Rota-Baxter family needs two seeds")),
    }
}

/// `q` as a quotient `num / den` with `den > 0`, or `None` if not integral.
fn exact_quotient(num: i64, den: i64) -> Option<i64> {
    (num % den == 0).then(|| num / den)
}

struct IdSuppRule(IdSuppParams);

impl TermRule for IdSuppRule {
    fn eval(&self, z: Monomial) -> Result<Term> {
        let (s, t) = (z.n as i64, z.m as i64);
        match &self.0 {
            IdSuppParams::SingleRay { l, r, gamma } => {
                let (l, r) = (*l as i64, *r as i64);
                let a = if l > 0 { exact_quotient(s, l) } else if s == 0 && r > 0 { exact_quotient(t, r) } else { None };
                match a {
                    Some(a) if a > 0 && a * l == s && a * r == t => {
                        Ok(Term::new(gamma / &Rational::from_int(a), z))
                    }
                    _ => Ok(Term::zero()),
                }
            }
            IdSuppParams::TwoGenerator { k1, k2, alpha1, alpha2, a, b, d } => {
                let (k1, k2, a, b, d) = (*k1 as i64, *k2 as i64, *a as i64, *b as i64, *d as i64);
                if b == 0 || d == 0 {
                    return Err(Error::invalid("b and d must be positive"));
                }
                let on_support = (0..b).any(|l| {
                    (s - (k1 / b) * l).rem_euclid(k1) == 0 && (t - (k2 * a / d) * l).rem_euclid(k2) == 0
                });
                if !on_support {
                    return Ok(Term::zero());
                }
                let denom = Rational::new(t, k2) * alpha1 + Rational::new(s, k1) * alpha2;
                if denom.is_zero() {
                    return Err(Error::DegenerateDenominator(z));
                }
                Ok(Term::new(&(alpha1 * alpha2) / &denom, z))
            }
        }
    }
}

struct IIIARule {
    p: CaseIIIAParams,
    r: i64,
    step: i64,
    seed: Option<Rational>,
}

impl IIIARule {
    fn new(p: &CaseIIIAParams, rb: bool) -> Result<Self> {
        let (r, step) = iiia_steps(p)?;
        let seed = match (rb, &p.seed) {
            (false, _) => None,
            (true, Some(s)) => Some(s.clone()),
            (true, None) => return Err(Error::invalid("Rota-Baxter family needs a seed")),
        };
        Ok(IIIARule { p: p.clone(), r: r as i64, step: step as i64, seed })
    }
}

impl TermRule for IIIARule {
    fn eval(&self, z: Monomial) -> Result<Term> {
        let (n, m) = (z.n as i64, z.m as i64);
        let (k, c, delta) = (self.p.k as i64, self.p.c as i64, self.p.delta as i64);
        if m < c || (m - c) % delta != 0 {
            return Ok(Term::zero());
        }
        let s = (m - c) / delta;
        if n != k + self.step * s {
            return Ok(Term::zero());
        }
        let out = Monomial::new(z.n + self.p.p_x as u32, z.m + self.p.p_y as u32);
        let coeff = match &self.seed {
            None => Rational::one(),
            Some(g) => Rational::from_int(self.r) * g / Rational::from_int(self.r + s),
        };
        Ok(Term::new(coeff, out))
    }
}

struct IIIB0Rule {
    p: CaseIIIB0Params,
    seeds: Option<[Rational; 2]>,
}

impl IIIB0Rule {
    fn new(p: &CaseIIIB0Params, rb: bool) -> Result<Self> {
        if p.c == 0 || p.delta == 0 {
            return Err(Error::invalid("c and delta must be positive"));
        }
        if rb && (p.k0 + p.p_x) % p.delta != 0 {
            return Err(Error::invalid("delta must divide k0 + p_x"));
        }
        Ok(IIIB0Rule { p: p.clone(), seeds: seed_pair(&p.seeds, rb)? })
    }
}

impl TermRule for IIIB0Rule {
    fn eval(&self, z: Monomial) -> Result<Term> {
        let p = &self.p;
        let (n, m) = (z.n as i64, z.m as i64);
        if m % p.c as i64 != 0 {
            return Ok(Term::zero());
        }
        let v = m / p.c as i64;
        let k = k_additive_at(&iiib0_kseq(p), v as u64)?;
        let delta = p.delta as i64;
        if n < k || (n - k) % delta != 0 {
            return Ok(Term::zero());
        }
        let u = (n - k) / delta;
        let out = Monomial::new(z.n + p.p_x as u32, z.m);
        let Some([g0, g1]) = &self.seeds else {
            return Ok(Term::unit(out));
        };
        // σ₀ = r, then the listed σ_s.
        let r = (p.k0 + p.p_x) as i64 / delta;
        let mut sigma_sum = if v > 0 { r } else { 0 };
        for s in 1..v {
            sigma_sum += p.sigma.at((s - 1) as usize, "sigma", 1)? as i64;
        }
        let denom = Rational::from_int(r * v) * g0 + Rational::from_int(u + r - sigma_sum) * g1;
        if denom.is_zero() {
            return Err(Error::DegenerateDenominator(z));
        }
        let num = Rational::from_int(r) * g0 * g1;
        Ok(Term::new(num / denom, out))
    }
}

struct IIIBPlusRule {
    p: CaseIIIBPlusParams,
    seeds: Option<[Rational; 2]>,
}

impl IIIBPlusRule {
    fn new(p: &CaseIIIBPlusParams, rb: bool) -> Result<Self> {
        if p.delta_x == 0 || p.delta_y == 0 || p.r_y == 0 {
            return Err(Error::invalid("delta_x, delta_y and r_y must be positive"));
        }
        Ok(IIIBPlusRule { p: p.clone(), seeds: seed_pair(&p.seeds, rb)? })
    }
}

impl TermRule for IIIBPlusRule {
    fn eval(&self, z: Monomial) -> Result<Term> {
        let p = &self.p;
        let (n, m) = (z.n as i64, z.m as i64);
        let (cy, dx, dy) = (p.c_y as i64, p.delta_x as i64, p.delta_y as i64);
        if m < cy || (m - cy) % dy != 0 {
            return Ok(Term::zero());
        }
        let v = (m - cy) / dy;
        let kseq = iiib_plus_kseq(p);
        let k = k_shifted_at(&kseq, v as u64)?;
        if n < k || (n - k) % dx != 0 {
            return Ok(Term::zero());
        }
        let u = (n - k) / dx;
        let out = Monomial::new(z.n + p.p_x as u32, z.m + p.p_y as u32);
        let Some([g0, g1]) = &self.seeds else {
            return Ok(Term::unit(out));
        };
        let ry = p.r_y as i64;
        let h = shifted_correction(&kseq, v as u64)?;
        let denom = Rational::from_int(ry * u - h) / g1.clone()
            + Rational::from_int(h + v - ry * (u - 1)) / g0.clone();
        if denom.is_zero() {
            return Err(Error::DegenerateDenominator(z));
        }
        Ok(Term::new(Rational::from_int(ry) / denom, out))
    }
}

/// Exponent pairs with nonzero coefficient, `n ≤ x_max`, `m ≤ y_max`, in graded order.
pub fn support_lattice(spec: &FamilySpec, x_max: u32, y_max: u32) -> Result<Vec<Monomial>> {
    let op = build(spec)?;
    lattice_of(&op, spec.ctx, x_max, y_max)
}

pub(crate) fn lattice_of(
    op: &MonomialOperator,
    ctx: AlgebraContext,
    x_max: u32,
    y_max: u32,
) -> Result<Vec<Monomial>> {
    let mut out = Vec::new();
    for z in admissible_monomials(ctx, x_max + y_max) {
        if z.n <= x_max && z.m <= y_max && !eval_term(op, z, ctx)?.is_zero() {
            out.push(z);
        }
    }
    Ok(out)
}

/// `T(x^{a·period+b} yᵐ) = x^{a·period} y^{m+b}` for `0 ≤ b < period`: an averaging operator
/// whose exponents are not affine in the input exponents.
pub fn nonlinear_averaging_counterexample(period: u32) -> Result<MonomialOperator> {
    if period == 0 {
        return Err(Error::invalid("period must be positive"));
    }
    Ok(MonomialOperator::from_fn(move |z| {
        let b = z.n % period;
        Term::unit(Monomial::new(z.n - b, z.m + b))
    }))
}
