use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Position of an element in a filtration, as far as a truncated computation
/// can tell.
///
/// `Finite(j)` is exact: the element lies in the `j`-th term but not the
/// next. `AtLeast(m)` means no deviation was visible below degree `m`.
/// `Infinite` is reserved for the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationDegree {
    Finite(usize),
    AtLeast(usize),
    Infinite,
}

/// Degree in the lower central series of a free group (or of a group
/// decomposed into free factors).
pub type GammaDegree = FiltrationDegree;

/// Degree in the Andreadakis filtration.
pub type AndreadakisDegree = FiltrationDegree;

impl FiltrationDegree {
    pub fn finite(self) -> Option<usize> {
        match self {
            FiltrationDegree::Finite(j) => Some(j),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FiltrationDegree::Finite(_))
    }

    /// Degree of the minimum of elements in the given filtration positions
    /// (the filtration degree of a tuple in a product decomposition).
    pub fn min(self, other: FiltrationDegree) -> FiltrationDegree {
        use FiltrationDegree::*;
        match (self, other) {
            (Infinite, x) | (x, Infinite) => x,
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (Finite(a), AtLeast(m)) | (AtLeast(m), Finite(a)) => {
                if a < m {
                    Finite(a)
                } else {
                    AtLeast(m)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }

    pub fn min_all<I: IntoIterator<Item = FiltrationDegree>>(it: I) -> FiltrationDegree {
        it.into_iter().fold(FiltrationDegree::Infinite, FiltrationDegree::min)
    }

    /// Subtracts a filtration shift from the degree, saturating at 0.
    pub fn shift_down(self, by: usize) -> FiltrationDegree {
        match self {
            FiltrationDegree::Finite(j) => FiltrationDegree::Finite(j.saturating_sub(by)),
            FiltrationDegree::AtLeast(m) => FiltrationDegree::AtLeast(m.saturating_sub(by)),
            FiltrationDegree::Infinite => FiltrationDegree::Infinite,
        }
    }

    /// Whether the degree is known to be `≥ k`: `Some(true/false)` when
    /// decided, `None` when the truncation hides the answer.
    pub fn at_least(self, k: usize) -> Option<bool> {
        match self {
            FiltrationDegree::Finite(j) => Some(j >= k),
            FiltrationDegree::AtLeast(m) if m >= k => Some(true),
            FiltrationDegree::AtLeast(_) => None,
            FiltrationDegree::Infinite => Some(true),
        }
    }

    /// Compares two degrees when both are exact.
    pub fn compare_exact(self, other: FiltrationDegree) -> Option<Ordering> {
        Some(self.finite()?.cmp(&other.finite()?))
    }
}

impl fmt::Display for FiltrationDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationDegree::Finite(j) => write!(f, "{j}"),
            FiltrationDegree::AtLeast(m) => write!(f, ">= {m}"),
            FiltrationDegree::Infinite => f.write_str("infinite"),
        }
    }
}
