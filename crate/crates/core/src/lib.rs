//! Boolean functional synthesis for relational CNF specifications.
//!
//! Given a 2QBF specification `∃Y F(X,Y)`, the engine synthesises a Skolem
//! function vector `Ψ` such that `F(X, Ψ(X)) ≡ ∃Y F(X,Y)`. The pipeline runs
//! unate and definability preprocessing, samples satisfying assignments to
//! train multi-label decision trees as candidate functions, and repairs wrong
//! candidates in a counterexample-guided loop driven by (lexicographic)
//! MaxSAT.
//!
//! The crate is `no_std` (with `alloc`); all file formats, IO, and the
//! command line live in the companion `skolem-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cegar;
pub mod definability;
pub mod encode;
pub mod engine;
pub mod formula;
pub mod func;
pub mod learner;
pub mod maxsat;
pub mod oracle;
pub mod proof;
pub mod skolem;
pub mod solver;

pub use engine::{synthesize, Config, RunStats, RunStatus, SynthResult, TimeSource};
pub use formula::{Assignment, Clause, Lit, Spec, Var};
pub use func::{FuncId, FuncNode, FuncStore};
pub use skolem::{FuncStatus, SkolemVec};

use alloc::string::String;

/// Abnormal termination of a solver-backed operation.
///
/// `ConflictBudget` is the "unknown" outcome of a resource-limited solver
/// call; the engine treats it as failure of the whole run. `Internal` marks
/// violated invariants (interpolation bugs, dependency cycles) that must be
/// surfaced, never ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Abort {
    ConflictBudget,
    Timeout,
    Internal(String),
}

impl core::fmt::Display for Abort {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Abort::ConflictBudget => write!(f, "solver conflict budget exceeded"),
            Abort::Timeout => write!(f, "timeout"),
            Abort::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}
