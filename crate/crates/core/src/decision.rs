//! Three-valued outcomes shared by every decider in the crate.
//!
//! Complete deciders only ever return [`Decision::Yes`] or [`Decision::No`].
//! Bounded semi-deciders may return [`Decision::Unknown`], carrying the bound
//! that was exhausted so callers can tell "no" from "not found yet".

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision<W> {
    Yes(W),
    No(Refutation),
    Unknown { bound: u64 },
}

/// Which argument justified a negative answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Refutation {
    /// The complete search space was examined.
    Exhaustive,
    /// An invariant of the orbit differs between the two inputs.
    InvariantMismatch { invariant: String },
    /// Every exponent modulo a proven period was tested.
    PeriodExhausted { period: u64 },
    /// No exponent satisfies the condition modulo `modulus`.
    ModularObstruction { modulus: u64 },
    /// Outside `|k| <= bound` the relevant linear recurrence is provably
    /// too large to vanish; all exponents inside were tested.
    GrowthBound { bound: u64 },
    /// The exponent set was computed exactly by solving a linear system.
    LinearSolve,
}

impl<W> Decision<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Decision::Unknown { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Decision::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Decision::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Decision<V> {
        match self {
            Decision::Yes(w) => Decision::Yes(f(w)),
            Decision::No(r) => Decision::No(r),
            Decision::Unknown { bound } => Decision::Unknown { bound },
        }
    }

    /// Lowercase verdict label: `yes`, `no` or `unknown`.
    pub fn verdict(&self) -> &'static str {
        match self {
            Decision::Yes(_) => "yes",
            Decision::No(_) => "no",
            Decision::Unknown { .. } => "unknown",
        }
    }
}
