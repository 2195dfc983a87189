use crate::algebra::{AlgebraContext, Rational};
use crate::error::{Error, Result};
use crate::recurrences::{IndexSet, Sequence, SlotValues};

use super::params::{
    CaseIIIB0Params, CaseIIIBPlusParams, Family, FamilySpec, IdSuppParams, KRule, RowParams,
};

pub const PRESET_NAMES: [&str; 5] = ["full-ii", "full-i", "full-idsupp", "full-iiib0", "full-iiib+"];

/// Every-coefficient-nonzero instance of a family on the unital algebra
/// (on the non-unital one for `full-idsupp`, the only place it exists).
pub fn discussion_presets(name: &str) -> Result<FamilySpec> {
    let ctx = if name == "full-idsupp" {
        AlgebraContext::NON_UNITAL
    } else {
        AlgebraContext::UNITAL
    };
    discussion_preset_in(name, ctx)
}

/// The named preset on a chosen algebra.
///
/// Free parameters are fixed to small values: `r = 2, c = 1` (full-ii), `r = c = 1`
/// (full-i), `p_x = 2` (full-iiib0), `p_x = 2, p_y = 3` (full-iiib+); seeds are `1` and
/// a smaller second seed (`1/2`, or `3/4` for full-iiib+). A larger second seed puts a
/// zero denominator on some support point of the two Case (iii)b presets.
pub fn discussion_preset_in(name: &str, ctx: AlgebraContext) -> Result<FamilySpec> {
    let nu0 = ctx.nu(0);
    let one = Rational::one;
    let family = match name {
        "full-ii" => Family::RbII(full_rows(2, 1, IndexSet {
            elements: Vec::new(),
            progressions: vec![(0, 1)],
        })),
        "full-i" => Family::RbI(full_rows(1, 1, IndexSet {
            elements: Vec::new(),
            progressions: vec![(0, 1), (-1, -1)],
        })),
        "full-idsupp" => Family::RbIdSupp(IdSuppParams::TwoGenerator {
            k1: 1,
            k2: 1,
            alpha1: one(),
            alpha2: Rational::new(1, 2),
            a: 0,
            b: 1,
            d: 1,
        }),
        "full-iiib0" => {
            let p_x = 2;
            Family::RbIIIB0(CaseIIIB0Params {
                p_x,
                c: 1,
                delta: 1,
                k0: nu0,
                k1: 0,
                sigma: Sequence::constant(p_x),
                seeds: Some([one(), Rational::new(1, 2)]),
            })
        }
        "full-iiib+" => {
            let (p_x, p_y) = (2, 3);
            Family::RbIIIBPlus(CaseIIIBPlusParams {
                p_x,
                p_y,
                c_x: 0,
                c_y: 0,
                r_x: p_x,
                r_y: p_y,
                delta_x: 1,
                delta_y: 1,
                k0: nu0,
                sigma_0: Sequence { prefix: vec![p_x + 2 * nu0], tail: Some(p_x + nu0) },
                sigma_1: vec![p_x; (p_y - 1) as usize],
                seeds: Some([one(), Rational::new(3, 4)]),
            })
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(FamilySpec::new(family, ctx))
}

fn full_rows(r: u64, c: u64, index_set: IndexSet) -> RowParams {
    RowParams {
        r,
        c,
        delta: 1,
        k: SlotValues::uniform(&index_set, KRule::AboveMin { above_min: 0 }),
        seeds: SlotValues::uniform(&index_set, Rational::one()),
        index_set,
    }
}
