//! Known values of `lim n^{-t} f^{(r)}(n; k(r-t)+t, k)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, factorial, ratio, render, serde_rational, Rational};
use crate::error::{Error, Result};

/// Where a table entry comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    /// Disjoint unions of loose trees with `k - 1` edges (`t = 1`).
    LooseTrees,
    /// Asymptotic Steiner systems (`k = 2`).
    AsymptoticSteinerSystems,
    /// The three-edge result for every `2 <= t < r`.
    ThreeEdgeConfigurations,
    /// The `(6,4)` limit 7/36.
    SixFourProblem,
    /// The four-edge result for `r >= 4`.
    FourEdgeConfigurations,
    /// Large-girth Steiner triple systems below, degree averaging above.
    GeneralBounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LimitValue {
    Exact {
        #[serde(with = "serde_rational")]
        value: Rational,
        provenance: Provenance,
    },
    Interval {
        #[serde(with = "serde_rational")]
        lower: Rational,
        #[serde(with = "serde_rational")]
        upper: Rational,
        provenance: Provenance,
    },
    Unknown,
}

impl LimitValue {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            LimitValue::Exact { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl fmt::Display for LimitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitValue::Exact { value, .. } => write!(f, "{}", render(value)),
            LimitValue::Interval { lower, upper, .. } => write!(f, "[{}, {}]", render(lower), render(upper)),
            LimitValue::Unknown => write!(f, "unknown"),
        }
    }
}

/// The limit for `(k(r-t)+t, k)`-free `r`-graphs, normalized by `n^t`.
pub fn limit_table(r: usize, t: usize, k: usize) -> Result<LimitValue> {
    if r < 2 || k < 2 || t == 0 || t >= r {
        return Err(Error::Param(format!(
            "need r >= 2, k >= 2 and 1 <= t < r, got r = {r}, t = {t}, k = {k}"
        )));
    }
    let (r64, t64, k64) = (r as u64, t as u64, k as u64);
    let exact = |value, provenance| Ok(LimitValue::Exact { value, provenance });
    if t == 1 {
        return exact(ratio(k64 - 1, (k64 - 1) * (r64 - 1) + 1), Provenance::LooseTrees);
    }
    match k {
        2 => exact(
            ratio(factorial(r64 - t64), factorial(r64)),
            Provenance::AsymptoticSteinerSystems,
        ),
        3 => exact(
            ratio(2u64, factorial(t64) * (2 * binomial(r64, t64) - 1)),
            Provenance::ThreeEdgeConfigurations,
        ),
        4 if (r, t) == (3, 2) => exact(ratio(7u64, 36u64), Provenance::SixFourProblem),
        4 => exact(
            ratio(1u64, factorial(t64) * binomial(r64, t64)),
            Provenance::FourEdgeConfigurations,
        ),
        _ if (r, t) == (3, 2) => Ok(LimitValue::Interval {
            lower: ratio(1u64, 6u64),
            upper: ratio(k64 - 1, 3 * k64),
            provenance: Provenance::GeneralBounds,
        }),
        _ => Ok(LimitValue::Unknown),
    }
}
