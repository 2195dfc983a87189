use num_integer::Integer;

use crate::algebra::{AlgebraContext, Rational};
use crate::error::{Error, Result};
use crate::recurrences::{
    k_closed_additive, k_closed_shifted, KSeqAdditiveParams, KSeqShiftedParams, Sequence,
};

use super::params::{
    CaseIIIAParams, CaseIIIB0Params, CaseIIIBPlusParams, Family, FamilySpec, FormParams,
    IdSuppParams,
};
use super::rows::{div_ceil_i, validate_rows, RowKind};

/// The row lower bound used in the Case (i) classification:
/// `−⌈min(i/r, (i − ν(0))/(r + 1))⌉` for `i < 0`, `ν(0)` at 0 and 0 above.
///
/// For non-integral minima this can sit one below the least admissible height; the
/// RB-I validator and builder use the exact admissible bound instead.
pub fn zeta(r: u64, i: i64, ctx: AlgebraContext) -> Result<u64> {
    if i > 0 {
        return Ok(0);
    }
    if i == 0 {
        return Ok(ctx.nu(0));
    }
    if r == 0 {
        return Err(Error::invalid(format!("zeta_0({i}) is undefined for negative i")));
    }
    let (r, nu0) = (r as i64, ctx.nu_i(0));
    let ceil_min = div_ceil_i(i, r).min(div_ceil_i(i - nu0, r + 1));
    Ok((-ceil_min) as u64)
}

pub fn validate_family_params(spec: &FamilySpec) -> Result<()> {
    let ctx = spec.ctx;
    match &spec.family {
        Family::AvgI(FormParams { c, .. }) => {
            if *c < ctx.nu(0) {
                return Err(Error::invalid(format!("c = {c} is below nu(0) = {}", ctx.nu(0))));
            }
            Ok(())
        }
        Family::AvgII(FormParams { r, c }) => {
            if !ctx.unital && r + c == 0 {
                return Err(Error::invalid(
                    "r = c = 0 sends x to the constant, which is not in the non-unital algebra",
                ));
            }
            Ok(())
        }
        Family::AvgIII(_) => Ok(()),
        Family::AvgIV(_) => {
            if !ctx.unital {
                return Err(Error::invalid(
                    "the constant form only exists on the unital algebra",
                ));
            }
            Ok(())
        }
        Family::AvgIIIA(p) => validate_iiia(p, ctx, false),
        Family::RbIIIA(p) => validate_iiia(p, ctx, true),
        Family::AvgIIIB0(p) => validate_iiib0(p, ctx, false),
        Family::RbIIIB0(p) => validate_iiib0(p, ctx, true),
        Family::AvgIIIBPlus(p) => validate_iiib_plus(p, ctx, false),
        Family::RbIIIBPlus(p) => validate_iiib_plus(p, ctx, true),
        Family::RbII(p) => validate_rows(p, RowKind::CaseII, ctx),
        Family::RbI(p) => validate_rows(p, RowKind::CaseI, ctx),
        Family::RbIdSupp(p) => validate_idsupp(p, ctx),
    }
}

fn nonzero(q: &Rational, name: &str) -> Result<()> {
    if q.is_zero() {
        Err(Error::invalid(format!("{name} must be nonzero")))
    } else {
        Ok(())
    }
}

fn require_seeds(seeds: &Option<[Rational; 2]>, rb: bool) -> Result<()> {
    if !rb {
        return Ok(());
    }
    match seeds {
        None => Err(Error::invalid("Rota-Baxter family needs two seeds")),
        Some([a, b]) => {
            nonzero(a, "first seed")?;
            nonzero(b, "second seed")
        }
    }
}

fn validate_idsupp(p: &IdSuppParams, ctx: AlgebraContext) -> Result<()> {
    if ctx.unital {
        return Err(Error::invalid(
            "only the zero operator has identity support on the unital algebra",
        ));
    }
    match p {
        IdSuppParams::SingleRay { l, r, gamma } => {
            if l + r == 0 {
                return Err(Error::invalid("ray direction (0, 0) is not allowed"));
            }
            nonzero(gamma, "gamma")
        }
        IdSuppParams::TwoGenerator { k1, k2, alpha1, alpha2, a, b, d } => {
            if *k1 == 0 || *k2 == 0 {
                return Err(Error::invalid("k1 and k2 must be positive"));
            }
            nonzero(alpha1, "alpha1")?;
            nonzero(alpha2, "alpha2")?;
            if *d != k1.gcd(k2) {
                return Err(Error::invalid(format!("d = {d} must equal gcd(k1, k2) = {}", k1.gcd(k2))));
            }
            if a >= d {
                return Err(Error::invalid(format!("a = {a} must be below d = {d}")));
            }
            if *b == 0 || d % b != 0 {
                return Err(Error::invalid(format!("b = {b} must divide d = {d}")));
            }
            if a.gcd(d) % (d / b) != 0 {
                return Err(Error::invalid(format!(
                    "d/b = {} must divide gcd(a, d) = {}",
                    d / b,
                    a.gcd(d)
                )));
            }
            Ok(())
        }
    }
}

/// `(r, x-step)` of Case (iii)a, checking only what evaluation needs.
pub(crate) fn iiia_steps(p: &CaseIIIAParams) -> Result<(u64, u64)> {
    if p.delta == 0 || (p.c + p.p_y) % p.delta != 0 || p.c + p.p_y == 0 {
        return Err(Error::invalid(format!(
            "delta = {} must be positive and divide c + p_y = {}",
            p.delta,
            p.c + p.p_y
        )));
    }
    let r = (p.c + p.p_y) / p.delta;
    if (p.k + p.p_x) % r != 0 {
        return Err(Error::invalid(format!(
            "x-step (k + p_x)/r = {}/{r} is not a natural number",
            p.k + p.p_x
        )));
    }
    Ok((r, (p.k + p.p_x) / r))
}

fn validate_iiia(p: &CaseIIIAParams, ctx: AlgebraContext, rb: bool) -> Result<()> {
    let nu0 = ctx.nu(0);
    if p.p_x == 0 {
        return Err(Error::invalid("p_x must be positive"));
    }
    if p.k < nu0 || p.c < nu0 {
        return Err(Error::invalid(format!("k and c must be at least nu(0) = {nu0}")));
    }
    if p.delta < p.c || p.delta > p.c + p.p_y {
        return Err(Error::invalid(format!(
            "delta = {} must satisfy c <= delta <= c + p_y ({} <= delta <= {})",
            p.delta,
            p.c,
            p.c + p.p_y
        )));
    }
    iiia_steps(p)?;
    if rb {
        match &p.seed {
            None => return Err(Error::invalid("Rota-Baxter family needs a seed")),
            Some(s) => nonzero(s, "seed")?,
        }
    }
    Ok(())
}

pub(crate) fn iiib0_kseq(p: &CaseIIIB0Params) -> KSeqAdditiveParams {
    KSeqAdditiveParams {
        p: p.p_x,
        delta: p.delta,
        k0: p.k0,
        k1: p.k1,
        xi_1: p.sigma.clone(),
    }
}

/// Indices after which an eventually-constant sequence no longer changes the derived data.
fn horizon<T>(seq: &Sequence<T>) -> u64 {
    match seq.tail {
        Some(_) => seq.prefix.len() as u64 + 3,
        None => seq.prefix.len() as u64 + 1,
    }
}

fn validate_iiib0(p: &CaseIIIB0Params, ctx: AlgebraContext, rb: bool) -> Result<()> {
    let nu0 = ctx.nu(0);
    if p.p_x == 0 || p.c == 0 || p.delta == 0 {
        return Err(Error::invalid("p_x, c and delta must be positive"));
    }
    if p.k0 < nu0 {
        return Err(Error::invalid(format!("k0 = {} is below nu(0) = {nu0}", p.k0)));
    }
    if p.k0 - nu0 >= p.delta || p.delta > p.k0 + p.p_x || (p.k0 + p.p_x) % p.delta != 0 {
        return Err(Error::invalid(format!(
            "need k0 - nu(0) < delta <= k0 + p_x and delta | k0 + p_x (k0 = {}, p_x = {}, delta = {})",
            p.k0, p.p_x, p.delta
        )));
    }
    if let Some(tail) = p.sigma.tail {
        let slope = (p.k1 + p.p_x) as i64 - (p.delta * tail) as i64;
        if slope != 0 {
            return Err(Error::invalid(format!(
                "k_n changes by {slope} per row eventually and leaves [0, delta)"
            )));
        }
    }
    let n = horizon(&p.sigma);
    let sol = k_closed_additive(&iiib0_kseq(p), n)?;
    for (row, &k) in sol.k.iter().enumerate().skip(1) {
        if k >= p.delta as i64 {
            return Err(Error::invalid(format!(
                "k_{row} = {k} must be below delta = {}",
                p.delta
            )));
        }
    }
    require_seeds(&p.seeds, rb)
}

pub(crate) fn iiib_plus_kseq(p: &CaseIIIBPlusParams) -> KSeqShiftedParams {
    KSeqShiftedParams {
        r: p.r_y,
        p: p.p_x,
        delta: p.delta_x,
        k0: p.k0,
        xi_0: p.sigma_0.clone(),
        xi_1: p.sigma_1.clone(),
    }
}

fn validate_iiib_plus(p: &CaseIIIBPlusParams, ctx: AlgebraContext, rb: bool) -> Result<()> {
    if p.p_x == 0 || p.p_y == 0 || p.delta_x == 0 || p.delta_y == 0 {
        return Err(Error::invalid("p_x, p_y, delta_x and delta_y must be positive"));
    }
    // With c_y > 0 the y⁰ row is empty, and x^n·T(b) lands in the support for b on row c_y.
    if p.c_y != 0 {
        return Err(Error::invalid(format!(
            "c_y = {} leaves the y^0 row empty; only c_y = 0 is consistent",
            p.c_y
        )));
    }
    if p.r_x * p.delta_x != p.c_x + p.p_x {
        return Err(Error::invalid(format!(
            "r_x * delta_x = {} must equal c_x + p_x = {}",
            p.r_x * p.delta_x,
            p.c_x + p.p_x
        )));
    }
    if p.r_y * p.delta_y != p.c_y + p.p_y {
        return Err(Error::invalid(format!(
            "r_y * delta_y = {} must equal c_y + p_y = {}",
            p.r_y * p.delta_y,
            p.c_y + p.p_y
        )));
    }
    if p.k0 < ctx.nu(p.c_y) {
        return Err(Error::invalid(format!("k0 = {} is below nu(c_y)", p.k0)));
    }
    if let Some(tail) = p.sigma_0.tail {
        let slope = (p.k0 + p.p_x) as i64 - (p.delta_x * tail) as i64;
        if slope != 0 {
            return Err(Error::invalid(format!(
                "k_l changes by {slope} every r_y rows eventually and leaves the window"
            )));
        }
    }
    let n = match p.sigma_0.tail {
        Some(_) => p.r_y * (p.sigma_0.prefix.len() as u64 + 4) + p.r_y,
        None => (p.sigma_0.prefix.len() as u64).saturating_sub(1),
    };
    let sol = k_closed_shifted(&iiib_plus_kseq(p), n)?;
    for (row, &k) in sol.k.iter().enumerate() {
        let low = ctx.nu(p.c_y + p.delta_y * row as u64) as i64;
        if k < low || k - low >= p.delta_x as i64 {
            return Err(Error::invalid(format!(
                "k_{row} = {k} must satisfy 0 <= k - {low} < delta_x = {}",
                p.delta_x
            )));
        }
    }
    require_seeds(&p.seeds, rb)
}
