//! Implication of inclusion and conditional independence atoms.
//!
//! The crate decides (within bounds) whether a set of dependency atoms implies
//! a goal atom. Proofs come from a chase over abstract rows and are returned
//! as derivations in a small deduction system that [`proof::check_derivation`]
//! verifies independently. Refutations are finite teams, either read off a
//! saturated chase graph or found by bounded search.

#![no_std]

extern crate alloc;

pub mod atoms;
pub mod chase;
pub mod decide;
pub mod extract;
pub mod proof;
pub mod refute;
pub mod team;
pub mod unionfind;

pub use atoms::{Atom, NormalProblem, Problem, Query, Variable};
pub use chase::{run_chase, ChaseBounds, ChaseGraph, ChaseOutcome, Witness};
pub use team::{satisfies_atom, satisfies_set, Team, Value};
pub use decide::{decide, DecideConfig, DecideError, DisproofSource, Verdict};
pub use extract::{extract_derivation, ExtractionFailure};
pub use proof::{check_derivation, check_step, Derivation, DerivationError, ProofStep, Rule};
pub use refute::{search_counterexample, SearchBudget};
