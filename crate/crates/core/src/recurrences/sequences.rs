use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An infinite parameter sequence given as an explicit prefix and an optional constant tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sequence<T> {
    pub prefix: Vec<T>,
    pub tail: Option<T>,
}

impl<T: Clone> Sequence<T> {
    pub fn constant(value: T) -> Self {
        Sequence {
            prefix: Vec::new(),
            tail: Some(value),
        }
    }

    pub fn finite(prefix: Vec<T>) -> Self {
        Sequence { prefix, tail: None }
    }

    /// Entry at position `i` counted from the start of the prefix.
    pub fn get(&self, i: usize) -> Option<T> {
        self.prefix.get(i).cloned().or_else(|| self.tail.clone())
    }

    /// Like `get`, but an undefined position becomes `InvalidParams` naming the sequence.
    pub fn at(&self, i: usize, name: &str, offset: i64) -> Result<T> {
        self.get(i).ok_or_else(|| {
            Error::invalid(format!(
                "sequence {name} is undefined at index {} (finite prefix, no tail)",
                i as i64 + offset
            ))
        })
    }
}

/// A finite union of explicit indices and arithmetic progressions `{a + b·j : j ≥ 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexSet {
    #[serde(default)]
    pub elements: Vec<i64>,
    #[serde(default)]
    pub progressions: Vec<(i64, i64)>,
}

/// Where an index sits inside an `IndexSet`: an explicit element or the `j`-th term of a progression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Element(usize),
    Progression { group: usize, position: u64 },
}

impl IndexSet {
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty() && self.progressions.is_empty()
    }

    /// Locate `i`; the first matching element or progression wins.
    pub fn locate(&self, i: i64) -> Option<Slot> {
        if let Some(pos) = self.elements.iter().position(|&e| e == i) {
            return Some(Slot::Element(pos));
        }
        for (g, &(a, b)) in self.progressions.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let diff = i - a;
            if diff % b == 0 && diff / b >= 0 {
                return Some(Slot::Progression {
                    group: g,
                    position: (diff / b) as u64,
                });
            }
        }
        None
    }

    pub fn contains(&self, i: i64) -> bool {
        self.locate(i).is_some()
    }

    /// All members within `[lo, hi]`, sorted and deduplicated.
    pub fn members_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .elements
            .iter()
            .copied()
            .filter(|&e| lo <= e && e <= hi)
            .collect();
        for &(a, b) in &self.progressions {
            if b == 0 {
                continue;
            }
            let mut v = a;
            // Walk forward while the progression can still reach the window.
            while (b > 0 && v <= hi) || (b < 0 && v >= lo) {
                if lo <= v && v <= hi {
                    out.push(v);
                }
                v += b;
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Structural checks: nonzero steps, no index listed twice, progressions pairwise disjoint.
    pub fn validate(&self, allow_negative: bool) -> Result<()> {
        for &(a, b) in &self.progressions {
            if b == 0 {
                return Err(Error::invalid(format!("progression [{a}, {b}] has zero step")));
            }
            if !allow_negative && (a < 0 || b < 0) {
                return Err(Error::invalid(format!(
                    "progression [{a}, {b}] leaves the natural numbers"
                )));
            }
        }
        for (idx, &e) in self.elements.iter().enumerate() {
            if !allow_negative && e < 0 {
                return Err(Error::invalid(format!("index {e} is negative")));
            }
            if self.elements[..idx].contains(&e) {
                return Err(Error::invalid(format!("index {e} listed twice")));
            }
            if self.progressions.iter().any(|&(a, b)| {
                let diff = e - a;
                diff % b == 0 && diff / b >= 0
            }) {
                return Err(Error::invalid(format!(
                    "index {e} listed both explicitly and in a progression"
                )));
            }
        }
        for (g, &(a, b)) in self.progressions.iter().enumerate() {
            for &(c, e) in &self.progressions[..g] {
                if let Some(x) = progression_intersection(a, b, c, e) {
                    return Err(Error::invalid(format!(
                        "progressions [{a}, {b}] and [{c}, {e}] share index {x}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Some common member of `{a + b·j}` and `{c + e·k}` (`j, k ≥ 0`), if one exists.
fn progression_intersection(a: i64, b: i64, c: i64, e: i64) -> Option<i64> {
    // Members congruent to both starts recur with period lcm(|b|, |e|); scanning a few
    // periods past the farther start decides the question.
    let l = num_integer::lcm(b.abs(), e.abs());
    let span = (a - c).abs() + 2 * l;
    let in_first = |x: i64| (x - a) % b == 0 && (x - a) / b >= 0;
    let in_second = |x: i64| (x - c) % e == 0 && (x - c) / e >= 0;
    let mut x = a;
    for _ in 0..=(span / b.abs() + 1) {
        if in_second(x) {
            return Some(x);
        }
        x += b;
    }
    let mut x = c;
    for _ in 0..=(span / e.abs() + 1) {
        if in_first(x) {
            return Some(x);
        }
        x += e;
    }
    None
}

/// Values attached to each element and each progression of an `IndexSet`, in the same order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotValues<T> {
    #[serde(default = "Vec::new")]
    pub elements: Vec<T>,
    #[serde(default = "Vec::new")]
    pub progressions: Vec<T>,
}

impl<T: Clone> SlotValues<T> {
    pub fn uniform(set: &IndexSet, value: T) -> Self {
        SlotValues {
            elements: vec![value.clone(); set.elements.len()],
            progressions: vec![value; set.progressions.len()],
        }
    }

    pub fn get(&self, slot: Slot) -> &T {
        match slot {
            Slot::Element(i) => &self.elements[i],
            Slot::Progression { group, .. } => &self.progressions[group],
        }
    }

    pub fn check_shape(&self, set: &IndexSet, name: &str) -> Result<()> {
        if self.elements.len() != set.elements.len() || self.progressions.len() != set.progressions.len() {
            return Err(Error::invalid(format!(
                "{name} must list one value per index-set element and per progression"
            )));
        }
        Ok(())
    }
}
