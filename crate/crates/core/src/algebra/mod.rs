//! Exact arithmetic, bivariate monomials, sparse polynomials and the algebra context.

mod context;
mod monomial;
mod poly;
mod rational;

pub use context::{admissible_monomials, nu, AlgebraContext};
pub use monomial::Monomial;
pub use poly::{poly_mul, SparsePolynomial};
pub use rational::{cmp_int, ParseRationalError, Rational};
