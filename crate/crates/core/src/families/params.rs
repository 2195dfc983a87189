use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraContext, Rational};
use crate::recurrences::{IndexSet, Sequence, SlotValues};

/// One classified operator family with its parameters.
///
/// Serializes as `{"family": "RB-II", "ctx": {...}, "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub family: Family,
    pub ctx: AlgebraContext,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum Family {
    /// `T(xⁿyᵐ) = x^{r(m+c)} y^{m+c}`
    #[serde(rename = "AVG-I")]
    AvgI(FormParams),
    /// `T(xⁿyᵐ) = y^{rn+m+c}`
    #[serde(rename = "AVG-II")]
    AvgII(FormParams),
    /// `T(xⁿyᵐ) = x^{n+p_x} y^{m+p_y}` on every monomial.
    #[serde(rename = "AVG-III")]
    AvgIII(ShiftParams),
    /// `T(z) = 1`
    #[serde(rename = "AVG-IV")]
    AvgIV(NoParams),
    #[serde(rename = "AVG-IIIA")]
    AvgIIIA(CaseIIIAParams),
    #[serde(rename = "AVG-IIIB0")]
    AvgIIIB0(CaseIIIB0Params),
    #[serde(rename = "AVG-IIIB+")]
    AvgIIIBPlus(CaseIIIBPlusParams),
    #[serde(rename = "RB-II")]
    RbII(RowParams),
    #[serde(rename = "RB-I")]
    RbI(RowParams),
    #[serde(rename = "RB-IDSUPP")]
    RbIdSupp(IdSuppParams),
    #[serde(rename = "RB-IIIA")]
    RbIIIA(CaseIIIAParams),
    #[serde(rename = "RB-IIIB0")]
    RbIIIB0(CaseIIIB0Params),
    #[serde(rename = "RB-IIIB+")]
    RbIIIBPlus(CaseIIIBPlusParams),
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::AvgI(_) => "AVG-I",
            Family::AvgII(_) => "AVG-II",
            Family::AvgIII(_) => "AVG-III",
            Family::AvgIV(_) => "AVG-IV",
            Family::AvgIIIA(_) => "AVG-IIIA",
            Family::AvgIIIB0(_) => "AVG-IIIB0",
            Family::AvgIIIBPlus(_) => "AVG-IIIB+",
            Family::RbII(_) => "RB-II",
            Family::RbI(_) => "RB-I",
            Family::RbIdSupp(_) => "RB-IDSUPP",
            Family::RbIIIA(_) => "RB-IIIA",
            Family::RbIIIB0(_) => "RB-IIIB0",
            Family::RbIIIBPlus(_) => "RB-IIIB+",
        }
    }

    pub fn is_rota_baxter(&self) -> bool {
        self.tag().starts_with("RB-")
    }
}

impl FamilySpec {
    pub fn new(family: Family, ctx: AlgebraContext) -> Self {
        FamilySpec { family, ctx }
    }

    pub fn tag(&self) -> &'static str {
        self.family.tag()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoParams {}

/// Exponent data of averaging forms (i) and (ii).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormParams {
    pub r: u64,
    pub c: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftParams {
    pub p_x: u64,
    pub p_y: u64,
}

/// How the first support height `k_i` of a row is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KRule {
    Fixed(u64),
    /// The row's least admissible height plus an offset.
    AboveMin { above_min: u64 },
}

/// Row families: `R(xⁱyᵗ) = α y^{t+ri+c}` (RB-II) or `R(x^{rl+i}yˡ) = α x^{r(l+c)}y^{l+c}` (RB-I).
///
/// Row `i ∈ index_set` is supported on heights `k_i + Δs` with seed `α` at `k_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowParams {
    pub r: u64,
    pub c: u64,
    pub delta: u64,
    pub index_set: IndexSet,
    pub k: SlotValues<KRule>,
    pub seeds: SlotValues<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum IdSuppParams {
    /// `α_{al,ar} = γ/a` for `a > 0`.
    SingleRay { l: u64, r: u64, gamma: Rational },
    TwoGenerator {
        k1: u64,
        k2: u64,
        alpha1: Rational,
        alpha2: Rational,
        a: u64,
        b: u64,
        d: u64,
    },
}

/// Case (iii)a: support `(k + step·s, c + Δs)` with `r = (c + p_y)/Δ` and `step = (k + p_x)/r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseIIIAParams {
    pub p_x: u64,
    pub p_y: u64,
    pub k: u64,
    pub c: u64,
    pub delta: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<Rational>,
}

/// Case (iii)b with `p_y = 0`: rows `m = c v` supported on `n = k_v + Δu`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseIIIB0Params {
    pub p_x: u64,
    pub c: u64,
    pub delta: u64,
    pub k0: u64,
    pub k1: u64,
    /// `σ_s` for `s ≥ 1`; position 0 holds `σ_1`.
    pub sigma: Sequence<u64>,
    /// `γ_{k₀,0}` and `γ_{k₁,c}` (RB only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<[Rational; 2]>,
}

/// Case (iii)b with `p_y > 0`: rows `t = c_y + Δ_y v` supported on `s = k_v + Δ_x u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseIIIBPlusParams {
    pub p_x: u64,
    pub p_y: u64,
    pub c_x: u64,
    pub c_y: u64,
    pub r_x: u64,
    pub r_y: u64,
    pub delta_x: u64,
    pub delta_y: u64,
    pub k0: u64,
    /// `σ_{0,s}` for `s ≥ 0`.
    pub sigma_0: Sequence<u64>,
    /// `σ_{1,s}` for `1 ≤ s ≤ r_y − 1`.
    pub sigma_1: Vec<u64>,
    /// `γ_{k₀,c_y}` and `γ_{k₀+Δ_x,c_y}` (RB only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<[Rational; 2]>,
}
