use thiserror::Error;

use crate::algebra::Monomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table coverage exceeded: needed degree {needed} at {at}, table covers degree {covered}")]
    Coverage {
        needed: u32,
        covered: u32,
        at: Monomial,
    },
    #[error("index {index} not covered (bound {bound})")]
    IndexCoverage { index: String, bound: i64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("scale factor must be nonzero")]
    ZeroScalar,
    #[error("denominator vanishes at support point {0}")]
    DegenerateDenominator(Monomial),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("not an arithmetic progression: first violating element {0}")]
    NotAProgression(i64),
    #[error("no classified family matches: {0}")]
    Unclassifiable(String),
}

impl Error {
    pub fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidParams(reason.into())
    }

    pub fn is_coverage(&self) -> bool {
        matches!(self, Error::Coverage { .. } | Error::IndexCoverage { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
