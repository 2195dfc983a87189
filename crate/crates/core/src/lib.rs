//! Monomial Rota–Baxter operators of weight zero and monomial averaging operators on
//! `F[x,y]` and `F₀[x,y]`, with exact construction, verification and classification.

pub mod algebra;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod operator;
pub mod families;
pub mod recurrences;

pub use error::{Error, Result};
