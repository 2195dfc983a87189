//! Parameter records, validators and closed-form builders for every classified
//! averaging and Rota–Baxter family.

mod build;
mod params;
mod presets;
mod rows;
mod validate;

pub use build::{
    build, build_averaging, build_rb, build_unchecked, nonlinear_averaging_counterexample,
    support_lattice,
};
pub use params::{
    CaseIIIAParams, CaseIIIB0Params, CaseIIIBPlusParams, Family, FamilySpec, FormParams,
    IdSuppParams, KRule, NoParams, RowParams, ShiftParams,
};
pub use presets::{discussion_preset_in, discussion_presets, PRESET_NAMES};
pub use validate::{validate_family_params, zeta};

pub(crate) use rows::RowKind;
