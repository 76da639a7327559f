//! Exact decision procedures for orbit problems over free groups `F_n` and
//! free-abelian groups `Z^n`.
//!
//! * [`words`]: free-group arithmetic and the conjugacy problem.
//! * [`stallings`]: subgroups of `F_n` as folded graphs.
//! * [`whitehead`]: `Aut(F_n)`-orbits, primitivity, bounded subgroup-orbit
//!   searches and bounded cyclic orbit searches.
//! * [`zlattice`]: Hermite/Smith forms, lattice membership, the
//!   `GL_n(Z)` subgroup-orbit criterion and twisted conjugacy in `Z^n`.
//! * [`matrixorbit`]: does the orbit of `x` under `⟨A⟩` meet `u + L`?
//! * [`extension`]: conjugacy in `Z^n ⋊_A Z`.
//!
//! Every decider returns a [`Decision`]; `Yes` always carries a witness
//! that can be checked independently.

pub mod cli;
pub mod decision;
pub mod error;
pub mod extension;
pub mod json;
pub mod matrixorbit;
pub mod stallings;
pub mod whitehead;
pub mod words;
pub mod zlattice;

pub use decision::{Decision, Refutation};
pub use error::{Error, Result};
