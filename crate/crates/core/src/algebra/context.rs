use serde::{Deserialize, Serialize};

use super::Monomial;

/// Selects between `F[x,y]` (unital) and the ideal `F₀[x,y]` without constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraContext {
    pub unital: bool,
}

impl AlgebraContext {
    pub const UNITAL: AlgebraContext = AlgebraContext { unital: true };
    pub const NON_UNITAL: AlgebraContext = AlgebraContext { unital: false };

    pub fn nu(self, n: u64) -> u64 {
        nu(n, self)
    }

    /// Integer-indexed variant used by families whose row indices may be negative.
    pub fn nu_i(self, n: i64) -> i64 {
        if !self.unital && n == 0 {
            1
        } else {
            0
        }
    }

    pub fn is_admissible(self, z: Monomial) -> bool {
        self.unital || z.degree() > 0
    }

    pub fn name(self) -> &'static str {
        if self.unital {
            "unital"
        } else {
            "non-unital"
        }
    }
}

/// Degree floor: zero in the unital algebra; in the non-unital one, 1 at `n = 0`.
pub fn nu(n: u64, ctx: AlgebraContext) -> u64 {
    if !ctx.unital && n == 0 {
        1
    } else {
        0
    }
}

/// All admissible monomials of total degree at most `max_degree`, in graded order.
pub fn admissible_monomials(ctx: AlgebraContext, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(((max_degree as usize + 1) * (max_degree as usize + 2)) / 2);
    for deg in 0..=max_degree {
        for m in 0..=deg {
            let z = Monomial::new(deg - m, m);
            if ctx.is_admissible(z) {
                out.push(z);
            }
        }
    }
    out
}
