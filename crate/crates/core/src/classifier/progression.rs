use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of a finite support set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Progression {
    Empty,
    /// A single point; the gap is not determined.
    Singleton { value: i64 },
    Progression { offset: i64, gap: i64 },
}

/// Fit `{offset + gap·s}` to a finite set (duplicates ignored).
pub fn fit_progression(support: &[i64]) -> Result<Progression> {
    let mut v = support.to_vec();
    v.sort_unstable();
    v.dedup();
    match v.len() {
        0 => Ok(Progression::Empty),
        1 => Ok(Progression::Singleton { value: v[0] }),
        _ => {
            let gap = v[1] - v[0];
            for w in v.windows(2).skip(1) {
                if w[1] - w[0] != gap {
                    return Err(Error::NotAProgression(w[1]));
                }
            }
            Ok(Progression::Progression { offset: v[0], gap })
        }
    }
}
