//! Random parameter records shared by the integration tests.
#![allow(dead_code)]

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monorb::algebra::{AlgebraContext, Rational};
use monorb::families::{
    build, CaseIIIAParams, CaseIIIB0Params, CaseIIIBPlusParams, Family, FamilySpec, FormParams,
    IdSuppParams, KRule, NoParams, RowParams, ShiftParams,
};
use monorb::recurrences::{IndexSet, Sequence, SlotValues};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(1..=5) * if rng.gen_bool(0.3) { -1 } else { 1 };
    Rational::new(num, rng.gen_range(1..=4))
}

pub fn positive(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1..=5), rng.gen_range(1..=4))
}

pub fn context(rng: &mut ChaCha8Rng) -> AlgebraContext {
    if rng.gen_bool(0.5) {
        AlgebraContext::UNITAL
    } else {
        AlgebraContext::NON_UNITAL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    RbII,
    RbI,
    IdRay,
    IdTwo,
    RbIIIA,
    RbIIIB0,
    RbIIIBPlus,
    AvgI,
    AvgII,
    AvgIII,
    AvgIV,
    AvgIIIA,
    AvgIIIB0,
    AvgIIIBPlus,
}

pub const RB_KINDS: [Kind; 7] = [
    Kind::RbII,
    Kind::RbI,
    Kind::IdRay,
    Kind::IdTwo,
    Kind::RbIIIA,
    Kind::RbIIIB0,
    Kind::RbIIIBPlus,
];

pub const AVG_KINDS: [Kind; 7] = [
    Kind::AvgI,
    Kind::AvgII,
    Kind::AvgIII,
    Kind::AvgIV,
    Kind::AvgIIIA,
    Kind::AvgIIIB0,
    Kind::AvgIIIBPlus,
];

/// Draw until the record validates and tabulates without a pole up to `degree`.
pub fn draw(kind: Kind, rng: &mut ChaCha8Rng, degree: u32) -> FamilySpec {
    for _ in 0..100_000 {
        let Some(spec) = propose(kind, rng) else {
            continue;
        };
        if let Ok(op) = build(&spec) {
            if op.tabulate(spec.ctx, degree).is_ok() {
                return spec;
            }
        }
    }
    panic!("no valid {kind:?} record found");
}

fn propose(kind: Kind, rng: &mut ChaCha8Rng) -> Option<FamilySpec> {
    let ctx = match kind {
        Kind::IdRay | Kind::IdTwo => AlgebraContext::NON_UNITAL,
        Kind::AvgIV => AlgebraContext::UNITAL,
        _ => context(rng),
    };
    let nu0 = ctx.nu(0);
    let family = match kind {
        Kind::RbII => Family::RbII(rows(rng, ctx, false)?),
        Kind::RbI => Family::RbI(rows(rng, ctx, true)?),
        Kind::IdRay => {
            let (l, r) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            Family::RbIdSupp(IdSuppParams::SingleRay { l, r, gamma: rational(rng) })
        }
        Kind::IdTwo => {
            let (k1, k2) = (rng.gen_range(1..=4u64), rng.gen_range(1..=4u64));
            let d = k1.gcd(&k2);
            let triples: Vec<(u64, u64)> = (0..d)
                .flat_map(|a| (1..=d).map(move |b| (a, b)))
                .filter(|&(a, b)| d % b == 0 && a.gcd(&d) % (d / b) == 0)
                .collect();
            let &(a, b) = triples.choose(rng)?;
            Family::RbIdSupp(IdSuppParams::TwoGenerator {
                k1,
                k2,
                alpha1: rational(rng),
                alpha2: rational(rng),
                a,
                b,
                d,
            })
        }
        Kind::RbIIIA | Kind::AvgIIIA => {
            let (p_x, p_y) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
            let c = rng.gen_range(nu0..=3);
            let p = CaseIIIAParams {
                p_x,
                p_y,
                k: rng.gen_range(nu0..=4),
                c,
                delta: rng.gen_range(1..=(c + p_y).max(1)),
                seed: (kind == Kind::RbIIIA).then(|| rational(rng)),
            };
            if kind == Kind::RbIIIA {
                Family::RbIIIA(p)
            } else {
                Family::AvgIIIA(p)
            }
        }
        Kind::RbIIIB0 | Kind::AvgIIIB0 => {
            let p_x = rng.gen_range(1..=3);
            let delta = rng.gen_range(1..=3);
            let k1 = rng.gen_range(0..delta);
            let tail = ((k1 + p_x) % delta == 0).then(|| (k1 + p_x) / delta);
            let prefix = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..=3)).collect();
            let p = CaseIIIB0Params {
                p_x,
                c: rng.gen_range(1..=2),
                delta,
                k0: rng.gen_range(nu0..nu0 + delta),
                k1,
                sigma: Sequence { prefix, tail: Some(tail?) },
                seeds: (kind == Kind::RbIIIB0).then(|| [positive(rng), positive(rng)]),
            };
            if kind == Kind::RbIIIB0 {
                Family::RbIIIB0(p)
            } else {
                Family::AvgIIIB0(p)
            }
        }
        Kind::RbIIIBPlus | Kind::AvgIIIBPlus => {
            let (p_x, p_y) = (rng.gen_range(1..=3u64), rng.gen_range(1..=3u64));
            let (delta_x, delta_y) = (rng.gen_range(1..=2u64), rng.gen_range(1..=2u64));
            let c_y = rng.gen_range(0..=2u64);
            if (c_y + p_y) % delta_y != 0 {
                return None;
            }
            let r_y = (c_y + p_y) / delta_y;
            let r_x = p_x.div_ceil(delta_x);
            let low = ctx.nu(c_y);
            let k0 = rng.gen_range(low..low + delta_x);
            if (k0 + p_x) % delta_x != 0 {
                return None;
            }
            let tail = (k0 + p_x) / delta_x;
            let near = |rng: &mut ChaCha8Rng| (tail + rng.gen_range(0..=2)).saturating_sub(1);
            let prefix = (0..rng.gen_range(0..=2)).map(|_| near(rng)).collect();
            let p = CaseIIIBPlusParams {
                p_x,
                p_y,
                c_x: r_x * delta_x - p_x,
                c_y,
                r_x,
                r_y,
                delta_x,
                delta_y,
                k0,
                sigma_0: Sequence { prefix, tail: Some(tail) },
                sigma_1: (1..r_y).map(|_| near(rng)).collect(),
                seeds: (kind == Kind::RbIIIBPlus).then(|| {
                    let a = positive(rng);
                    let shrink = Rational::new(rng.gen_range(1..=4), 4);
                    let b = &a * &shrink;
                    [a, b]
                }),
            };
            if kind == Kind::RbIIIBPlus {
                Family::RbIIIBPlus(p)
            } else {
                Family::AvgIIIBPlus(p)
            }
        }
        Kind::AvgI => Family::AvgI(FormParams {
            r: rng.gen_range(0..=2),
            c: rng.gen_range(nu0..=2),
        }),
        Kind::AvgII => Family::AvgII(FormParams {
            r: rng.gen_range(0..=2),
            c: rng.gen_range(0..=2),
        }),
        Kind::AvgIII => Family::AvgIII(ShiftParams {
            p_x: rng.gen_range(0..=2),
            p_y: rng.gen_range(0..=2),
        }),
        Kind::AvgIV => Family::AvgIV(NoParams {}),
    };
    Some(FamilySpec::new(family, ctx))
}

fn rows(rng: &mut ChaCha8Rng, ctx: AlgebraContext, case_i: bool) -> Option<RowParams> {
    let negatives = case_i && rng.gen_bool(0.6);
    let r = if negatives { rng.gen_range(1..=2) } else { rng.gen_range(0..=2) };
    let c = rng.gen_range(ctx.nu(0)..=2);
    if r + c == 0 {
        return None;
    }
    let delta = rng.gen_range(1..=3);
    let mut index_set = IndexSet::default();
    let lo = if negatives { -4 } else { 0 };
    for _ in 0..rng.gen_range(0..=2) {
        let i = rng.gen_range(lo..=5);
        if !index_set.elements.contains(&i) {
            index_set.elements.push(i);
        }
    }
    if rng.gen_bool(0.7) {
        let b = rng.gen_range(1..=3);
        index_set.progressions.push((rng.gen_range(0..=3), b));
    }
    if negatives && rng.gen_bool(0.8) {
        index_set.progressions.push((-rng.gen_range(1..=2), -rng.gen_range(1..=2)));
    }
    if index_set.elements.is_empty() && index_set.progressions.is_empty() {
        return None;
    }
    let k_rule = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.7) {
            KRule::AboveMin { above_min: rng.gen_range(0..delta) }
        } else {
            KRule::Fixed(rng.gen_range(0..=3))
        }
    };
    let k = SlotValues {
        elements: index_set.elements.iter().map(|_| k_rule(rng)).collect(),
        progressions: index_set.progressions.iter().map(|_| k_rule(rng)).collect(),
    };
    let seeds = SlotValues {
        elements: index_set.elements.iter().map(|_| rational(rng)).collect(),
        progressions: index_set.progressions.iter().map(|_| rational(rng)).collect(),
    };
    Some(RowParams { r, c, delta, index_set, k, seeds })
}
