use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The monomial `x^n y^m`.
///
/// Ordering is graded lexicographic: total degree first, then larger `n` first.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub n: u32,
    pub m: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { n: 0, m: 0 };

    pub const fn new(n: u32, m: u32) -> Self {
        Monomial { n, m }
    }

    pub fn degree(self) -> u32 {
        self.n + self.m
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial::new(self.n + other.n, self.m + other.m)
    }

    /// Exchange the roles of `x` and `y`.
    pub fn swap(self) -> Monomial {
        Monomial::new(self.m, self.n)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.n.cmp(&self.n))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}y^{}", self.n, self.m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.n, self.m) {
            (0, 0) => write!(f, "1"),
            (n, 0) => write!(f, "x^{n}"),
            (0, m) => write!(f, "y^{m}"),
            (n, m) => write!(f, "x^{n}y^{m}"),
        }
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.n, self.m].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [n, m] = <[u32; 2]>::deserialize(deserializer)?;
        Ok(Monomial::new(n, m))
    }
}
