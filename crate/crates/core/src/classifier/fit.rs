//! Parameter fitting for each family. Fitters only propose; the caller keeps a draft
//! when its rebuilt table matches the input.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::algebra::{AlgebraContext, Monomial, Rational};
use crate::families::{
    CaseIIIAParams, CaseIIIB0Params, CaseIIIBPlusParams, Family, FamilySpec, FormParams,
    IdSuppParams, KRule, NoParams, RowKind, RowParams, ShiftParams,
};
use crate::recurrences::{IndexSet, Sequence, SlotValues};

use super::progression::{fit_progression, Progression};

/// One nonzero table row `z ↦ coeff·out`.
#[derive(Debug, Clone)]
pub(crate) struct Point {
    pub z: Monomial,
    pub coeff: Rational,
    pub out: Monomial,
}

/// A proposed spec; `determined` is false when some parameter was guessed.
#[derive(Debug, Clone)]
pub(crate) struct Draft {
    pub spec: FamilySpec,
    pub determined: bool,
}

pub(crate) fn drafts(points: &[Point], ctx: AlgebraContext, d: u32) -> Vec<Draft> {
    let mut out = averaging_forms(points, ctx, d);
    out.extend(rows(points, ctx, d, RowKind::CaseII));
    out.extend(rows(points, ctx, d, RowKind::CaseI));
    out.extend(idsupp(points, ctx));
    if let Some((p_x, p_y)) = common_shift(points) {
        if p_x > 0 {
            out.extend(iiia(points, ctx, p_x, p_y));
            if p_y == 0 {
                out.extend(iiib0(points, ctx, p_x));
            } else {
                out.extend(iiib_plus(points, ctx, d, p_x, p_y));
            }
        }
    }
    out
}

fn draft(family: Family, ctx: AlgebraContext, determined: bool) -> Draft {
    Draft {
        spec: FamilySpec::new(family, ctx),
        determined,
    }
}

fn all_unit(points: &[Point]) -> bool {
    points.iter().all(|p| p.coeff.is_one())
}

fn common_shift(points: &[Point]) -> Option<(u64, u64)> {
    let first = points.first()?;
    let dx = first.out.n as i64 - first.z.n as i64;
    let dy = first.out.m as i64 - first.z.m as i64;
    if dx < 0 || dy < 0 {
        return None;
    }
    points
        .iter()
        .all(|p| p.out.n as i64 - p.z.n as i64 == dx && p.out.m as i64 - p.z.m as i64 == dy)
        .then_some((dx as u64, dy as u64))
}

fn averaging_forms(points: &[Point], ctx: AlgebraContext, d: u32) -> Vec<Draft> {
    if !all_unit(points) {
        return Vec::new();
    }
    let mut out = Vec::new();
    if ctx.unital && points.iter().all(|p| p.out == Monomial::ONE) {
        out.push(draft(Family::AvgIV(NoParams {}), ctx, true));
    }
    for ((r, c), det) in row_shapes(points, RowKind::CaseII, d) {
        out.push(draft(Family::AvgII(FormParams { r, c }), ctx, det));
    }
    for ((r, c), det) in row_shapes(points, RowKind::CaseI, d) {
        out.push(draft(Family::AvgI(FormParams { r, c }), ctx, det));
    }
    if let Some((p_x, p_y)) = common_shift(points) {
        out.push(draft(Family::AvgIII(ShiftParams { p_x, p_y }), ctx, true));
    }
    out
}

/// Candidate `(r, c)` for the exponent map of a row family. Several candidates can
/// describe the same operator; real ambiguity is caught by the lookahead comparison.
fn row_shapes(points: &[Point], kind: RowKind, d: u32) -> Vec<((u64, u64), bool)> {
    match kind {
        RowKind::CaseII => {
            if points.iter().any(|p| p.out.n != 0) {
                return Vec::new();
            }
            let mut excess: BTreeMap<i64, i64> = BTreeMap::new();
            for p in points {
                let e = p.out.m as i64 - p.z.m as i64;
                if e < 0 || *excess.entry(p.z.n as i64).or_insert(e) != e {
                    return Vec::new();
                }
            }
            let pairs: Vec<(i64, i64)> = excess.into_iter().collect();
            match pairs.as_slice() {
                [] => Vec::new(),
                [(0, e)] => vec![((0, *e as u64), true)],
                [(n, e)] => (0..=e / n).map(|r| ((r as u64, (e - r * n) as u64), true)).collect(),
                [(n1, e1), (n2, e2), ..] => {
                    if (e2 - e1) % (n2 - n1) != 0 {
                        return Vec::new();
                    }
                    let r = (e2 - e1) / (n2 - n1);
                    let c = e1 - r * n1;
                    if r < 0 || c < 0 || pairs.iter().any(|&(n, e)| e != r * n + c) {
                        return Vec::new();
                    }
                    vec![((r as u64, c as u64), true)]
                }
            }
        }
        RowKind::CaseI => {
            let Some(first) = points.first() else {
                return Vec::new();
            };
            let c = first.out.m as i64 - first.z.m as i64;
            if c < 0 || points.iter().any(|p| p.out.m as i64 - p.z.m as i64 != c) {
                return Vec::new();
            }
            let ratio = points.iter().find(|p| p.out.m > 0).map(|p| {
                (p.out.n % p.out.m == 0).then_some((p.out.n / p.out.m) as u64)
            });
            let consistent = |r: u64| points.iter().all(|p| p.out.n as u64 == r * p.out.m as u64);
            match ratio {
                Some(None) => Vec::new(),
                Some(Some(r)) if consistent(r) => vec![((r, c as u64), true)],
                Some(Some(_)) => Vec::new(),
                None => (0..=d as u64)
                    .filter(|&r| consistent(r))
                    .map(|r| ((r, c as u64), true))
                    .collect(),
            }
        }
    }
}

struct RowFit {
    row: i64,
    k: i64,
    seed: Rational,
    shift: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum KeyKind {
    Fixed,
    AboveMin,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Grouping {
    /// Nonnegative rows ascend, negative rows descend.
    Split,
    Ascending,
    Descending,
}

fn rows(points: &[Point], ctx: AlgebraContext, d: u32, kind: RowKind) -> Vec<Draft> {
    let mut out = Vec::new();
    'shape: for ((r, c), shape_det) in row_shapes(points, kind, d) {
        let mut by_row: BTreeMap<i64, BTreeMap<i64, Rational>> = BTreeMap::new();
        for p in points {
            if kind.output(r, c, p.z) != p.out {
                continue 'shape;
            }
            let (i, h) = kind.locate(r, p.z);
            by_row.entry(i).or_default().insert(h, p.coeff.clone());
        }
        let mut fits = Vec::new();
        let mut gap = 0i64;
        for (&i, heights) in &by_row {
            let hs: Vec<i64> = heights.keys().copied().collect();
            let k = match fit_progression(&hs) {
                Ok(Progression::Singleton { value }) => value,
                Ok(Progression::Progression { offset, gap: g }) => {
                    gap = gap.gcd(&g);
                    offset
                }
                _ => continue 'shape,
            };
            let shift = kind.shift(r, c, i);
            fits.push(RowFit { row: i, k, seed: heights[&k].clone(), shift });
        }
        let deltas: Vec<(u64, bool)> = if gap > 0 {
            vec![(gap as u64, true)]
        } else {
            let bound = fits.iter().map(|f| f.k + f.shift).min().unwrap_or(0);
            (1..=bound)
                .filter(|&dl| fits.iter().all(|f| (f.k + f.shift) % dl == 0))
                .map(|dl| (dl as u64, false))
                .collect()
        };
        for (delta, delta_det) in deltas {
            for (index_set, k, seeds, extrapolates) in row_encodings(&fits, kind, r, ctx, d) {
                let params = RowParams { r, c, delta, index_set, k, seeds };
                let family = match kind {
                    RowKind::CaseII => Family::RbII(params),
                    RowKind::CaseI => Family::RbI(params),
                };
                out.push(draft(family, ctx, shape_det && delta_det && extrapolates));
            }
        }
    }
    out
}

type Encoding = (IndexSet, SlotValues<KRule>, SlotValues<Rational>, bool);

/// Index-set encodings of the fitted rows: rows sharing seed and k rule are merged into
/// progressions in several ways, plus the plain list of rows as a fallback.
fn row_encodings(
    fits: &[RowFit],
    kind: RowKind,
    r: u64,
    ctx: AlgebraContext,
    d: u32,
) -> Vec<Encoding> {
    // Whether row `i` under `key` would have shown a point in the table.
    let shows = |i: i64, key: KRule| -> bool {
        let Ok(min) = kind.row_min(r, i, ctx) else {
            return true;
        };
        let k = match key {
            KRule::Fixed(k) => k as i64,
            KRule::AboveMin { above_min } => min + above_min as i64,
        };
        let (n, m) = match kind {
            RowKind::CaseII => (i, k),
            RowKind::CaseI => (r as i64 * k + i, k),
        };
        k < min || n < 0 || n + m <= d as i64
    };
    let mut out = Vec::new();
    for key_kind in [KeyKind::Fixed, KeyKind::AboveMin] {
        let mut keys = Vec::new();
        for f in fits {
            let key = match key_kind {
                KeyKind::Fixed => KRule::Fixed(f.k as u64),
                KeyKind::AboveMin => match kind.row_min(r, f.row, ctx) {
                    Ok(min) if f.k >= min => KRule::AboveMin { above_min: (f.k - min) as u64 },
                    _ => break,
                },
            };
            keys.push(key);
        }
        if keys.len() != fits.len() {
            continue;
        }
        for grouping in [Grouping::Split, Grouping::Ascending, Grouping::Descending] {
            out.push(grouped(fits, &keys, grouping, &shows));
        }
    }
    // Among determined groupings only the most compact ones count as determined.
    let slots = |e: &Encoding| e.0.elements.len() + e.0.progressions.len();
    if let Some(fewest) = out.iter().filter(|e| e.3).map(slots).min() {
        for e in &mut out {
            e.3 = e.3 && slots(e) == fewest;
        }
    }
    let index_set = IndexSet {
        elements: fits.iter().map(|f| f.row).collect(),
        progressions: Vec::new(),
    };
    let k = SlotValues {
        elements: fits.iter().map(|f| KRule::Fixed(f.k as u64)).collect(),
        progressions: Vec::new(),
    };
    let seeds = SlotValues {
        elements: fits.iter().map(|f| f.seed.clone()).collect(),
        progressions: Vec::new(),
    };
    out.push((index_set, k, seeds, fits.len() <= 1));
    out
}

/// Rows sharing seed and k rule become one progression when they form one. The fit is
/// determined only if the row just before each progression start is visible (and absent).
fn grouped(
    fits: &[RowFit],
    keys: &[KRule],
    grouping: Grouping,
    shows: &dyn Fn(i64, KRule) -> bool,
) -> Encoding {
    let mut groups: Vec<(bool, Rational, KRule, Vec<i64>)> = Vec::new();
    for (f, key) in fits.iter().zip(keys) {
        let negative = grouping == Grouping::Split && f.row < 0;
        match groups
            .iter_mut()
            .find(|g| g.0 == negative && g.1 == f.seed && g.2 == *key)
        {
            Some(g) => g.3.push(f.row),
            None => groups.push((negative, f.seed.clone(), *key, vec![f.row])),
        }
    }
    let mut starts_seen = true;
    let mut index_set = IndexSet::default();
    let mut k = SlotValues { elements: Vec::new(), progressions: Vec::new() };
    let mut seeds = SlotValues { elements: Vec::new(), progressions: Vec::new() };
    for (negative, seed, key, members) in groups {
        let descending = negative || grouping == Grouping::Descending;
        match fit_progression(&members) {
            Ok(Progression::Progression { offset, gap }) => {
                let start = if descending { *members.iter().max().unwrap() } else { offset };
                let step = if descending { -gap } else { gap };
                starts_seen &= shows(start - step, key);
                index_set.progressions.push((start, step));
                k.progressions.push(key);
                seeds.progressions.push(seed);
            }
            _ => {
                for i in members {
                    index_set.elements.push(i);
                    k.elements.push(key);
                    seeds.elements.push(seed.clone());
                }
            }
        }
    }
    (index_set, k, seeds, starts_seen)
}

fn idsupp(points: &[Point], ctx: AlgebraContext) -> Vec<Draft> {
    if ctx.unital || points.iter().any(|p| p.out != p.z) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let base = &points[0];
    out.push(draft(
        Family::RbIdSupp(IdSuppParams::SingleRay {
            l: base.z.n as u64,
            r: base.z.m as u64,
            gamma: base.coeff.clone(),
        }),
        ctx,
        points.len() >= 2,
    ));
    let on_x = points.iter().filter(|p| p.z.m == 0).min_by_key(|p| p.z.n);
    let on_y = points.iter().filter(|p| p.z.n == 0).min_by_key(|p| p.z.m);
    if let (Some(px), Some(py)) = (on_x, on_y) {
        let (k1, k2) = (px.z.n as u64, py.z.m as u64);
        let d = k1.gcd(&k2);
        let triples: Vec<(u64, u64)> = (0..d)
            .flat_map(|a| (1..=d).map(move |b| (a, b)))
            .filter(|&(a, b)| d % b == 0 && a.gcd(&d) % (d / b) == 0)
            .collect();
        let unique = triples.len() == 1;
        for (a, b) in triples {
            out.push(draft(
                Family::RbIdSupp(IdSuppParams::TwoGenerator {
                    k1,
                    k2,
                    alpha1: px.coeff.clone(),
                    alpha2: py.coeff.clone(),
                    a,
                    b,
                    d,
                }),
                ctx,
                unique,
            ));
        }
    }
    out
}

fn iiia(points: &[Point], ctx: AlgebraContext, p_x: u64, p_y: u64) -> Vec<Draft> {
    let mut sorted: Vec<&Point> = points.iter().collect();
    sorted.sort_by_key(|p| (p.z.m, p.z.n));
    let first = sorted[0];
    let (k, c) = (first.z.n as u64, first.z.m as u64);
    let deltas: Vec<(u64, bool)> = match sorted.get(1) {
        Some(second) => vec![(second.z.m as u64 - c, true)],
        None => (c.max(1)..=c + p_y)
            .filter(|dl| (c + p_y) % dl == 0)
            .map(|dl| (dl, false))
            .collect(),
    };
    let mut out = Vec::new();
    for (delta, det) in deltas {
        let params = |seed| CaseIIIAParams { p_x, p_y, k, c, delta, seed };
        out.push(draft(Family::RbIIIA(params(Some(first.coeff.clone()))), ctx, det));
        if all_unit(points) {
            out.push(draft(Family::AvgIIIA(params(None)), ctx, det));
        }
    }
    out
}

/// Row `y`-exponents mapped to (least x-exponent, gcd of in-row gaps).
fn row_minima(points: &[Point]) -> Option<BTreeMap<u32, (u32, i64)>> {
    let mut rows: BTreeMap<u32, Vec<i64>> = BTreeMap::new();
    for p in points {
        rows.entry(p.z.m).or_default().push(p.z.n as i64);
    }
    let mut out = BTreeMap::new();
    for (m, xs) in rows {
        let (k, gap) = match fit_progression(&xs).ok()? {
            Progression::Singleton { value } => (value, 0),
            Progression::Progression { offset, gap } => (offset, gap),
            Progression::Empty => continue,
        };
        out.insert(m, (k as u32, gap));
    }
    Some(out)
}

fn coeff_at(points: &[Point], z: Monomial) -> Option<Rational> {
    points.iter().find(|p| p.z == z).map(|p| p.coeff.clone())
}

/// Drop trailing prefix entries that equal the tail.
fn canonical(mut seq: Sequence<u64>) -> Sequence<u64> {
    if let Some(t) = seq.tail {
        while seq.prefix.last() == Some(&t) {
            seq.prefix.pop();
        }
    }
    seq
}

fn natural_quotient(num: i64, den: u64) -> Option<u64> {
    (num >= 0 && num % den as i64 == 0).then(|| (num / den as i64) as u64)
}

fn iiib0(points: &[Point], ctx: AlgebraContext, p_x: u64) -> Vec<Draft> {
    let Some(rows) = row_minima(points) else {
        return Vec::new();
    };
    let Some(&(k0, _)) = rows.get(&0) else {
        return Vec::new();
    };
    let Some(&c) = rows.keys().find(|&&m| m > 0) else {
        return Vec::new();
    };
    if rows.keys().any(|m| m % c != 0) {
        return Vec::new();
    }
    let mut ks = Vec::new();
    while let Some(&(k, _)) = rows.get(&(c * ks.len() as u32)) {
        ks.push(k as i64);
    }
    if ks.len() != rows.len() {
        return Vec::new();
    }
    let gap = rows.values().fold(0i64, |g, &(_, r)| g.gcd(&r));
    let (k0, k1, c) = (k0 as u64, ks[1], c as u64);
    let deltas: Vec<(u64, bool)> = if gap > 0 {
        vec![(gap as u64, true)]
    } else {
        (1..=k0 + p_x)
            .filter(|dl| (k0 + p_x) % dl == 0)
            .map(|dl| (dl, false))
            .collect()
    };
    let seeds = coeff_at(points, Monomial::new(k0 as u32, 0))
        .zip(coeff_at(points, Monomial::new(k1 as u32, c as u32)))
        .map(|(a, b)| [a, b]);
    let mut out = Vec::new();
    'delta: for (delta, det) in deltas {
        let mut prefix = Vec::new();
        for v in 1..ks.len() - 1 {
            match natural_quotient(ks[v] + k1 + p_x as i64 - ks[v + 1], delta) {
                Some(s) => prefix.push(s),
                None => continue 'delta,
            }
        }
        let tail = natural_quotient(k1 + p_x as i64, delta);
        let params = |seeds| CaseIIIB0Params {
            p_x,
            c,
            delta,
            k0,
            k1: k1 as u64,
            sigma: canonical(Sequence { prefix: prefix.clone(), tail }),
            seeds,
        };
        if let Some(s) = &seeds {
            out.push(draft(Family::RbIIIB0(params(Some(s.clone()))), ctx, det));
        }
        if all_unit(points) {
            out.push(draft(Family::AvgIIIB0(params(None)), ctx, det));
        }
    }
    out
}

fn iiib_plus(points: &[Point], ctx: AlgebraContext, d: u32, p_x: u64, p_y: u64) -> Vec<Draft> {
    let Some(rows) = row_minima(points) else {
        return Vec::new();
    };
    let c_y = *rows.keys().next().unwrap();
    let delta_y = rows.keys().fold(0u32, |g, &m| g.gcd(&(m - c_y)));
    if delta_y == 0 || (c_y + p_y as u32) % delta_y != 0 {
        return Vec::new();
    }
    let r_y = ((c_y + p_y as u32) / delta_y) as usize;
    let mut ks = Vec::new();
    while let Some(&(k, _)) = rows.get(&(c_y + delta_y * ks.len() as u32)) {
        ks.push(k as i64);
    }
    if ks.len() != rows.len() {
        return Vec::new();
    }
    let k0 = ks[0];
    let gap = rows.values().fold(0i64, |g, &(_, r)| g.gcd(&r));
    let deltas: Vec<(u64, bool)> = if gap > 0 {
        vec![(gap as u64, true)]
    } else {
        (1..=d as u64 + 1).map(|dl| (dl, false)).collect()
    };
    let mut out = Vec::new();
    'delta: for (delta_x, delta_det) in deltas {
        let mut det = delta_det;
        let px = p_x as i64;
        let mut prefix = Vec::new();
        for s in 0..ks.len().saturating_sub(r_y) {
            match natural_quotient(k0 + ks[s] + px - ks[s + r_y], delta_x) {
                Some(v) => prefix.push(v),
                None => continue 'delta,
            }
        }
        let tail = natural_quotient(k0 + px, delta_x);
        let mut sigma_1 = Vec::new();
        for s in 1..r_y {
            let value = match (ks.get(1), ks.get(s + 1 + r_y)) {
                (Some(&k1), Some(&k_next)) => match natural_quotient(k1 + ks[s] + px - k_next, delta_x) {
                    Some(v) => v,
                    None => continue 'delta,
                },
                _ => {
                    det = false;
                    tail.unwrap_or(0)
                }
            };
            sigma_1.push(value);
        }
        let r_x = p_x.div_ceil(delta_x).max(1);
        let first = coeff_at(points, Monomial::new(k0 as u32, c_y));
        let second = coeff_at(points, Monomial::new(k0 as u32 + delta_x as u32, c_y));
        let params = |seeds| CaseIIIBPlusParams {
            p_x,
            p_y,
            c_x: r_x * delta_x - p_x,
            c_y: c_y as u64,
            r_x,
            r_y: r_y as u64,
            delta_x,
            delta_y: delta_y as u64,
            k0: k0 as u64,
            sigma_0: canonical(Sequence { prefix: prefix.clone(), tail }),
            sigma_1: sigma_1.clone(),
            seeds,
        };
        if let Some(a) = first {
            let (b, seed_det) = match second {
                Some(b) => (b, true),
                None => (a.clone(), false),
            };
            out.push(draft(Family::RbIIIBPlus(params(Some([a, b]))), ctx, det && seed_det));
        }
        if all_unit(points) {
            out.push(draft(Family::AvgIIIBPlus(params(None)), ctx, det));
        }
    }
    out
}
