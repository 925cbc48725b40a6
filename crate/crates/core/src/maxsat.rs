//! Exact partial MaxSAT and lexicographic partial MaxSAT over a hard CNF
//! plus unit soft constraints.
//!
//! `maxsat` is core-guided linear search (MSU3): softs start assumed, cores
//! move their selectors under a totalizer whose bound grows by one per
//! extracted core. `lexmaxsat` runs that search level by level from the
//! highest priority downwards, freezing each level's optimum as hard unit
//! constraints on totalizer outputs before descending.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::{Assignment, Lit, Spec, Var};
use crate::solver::{SolveOutcome, Solver};
use crate::Abort;

/// A unit soft constraint with a priority level (higher = satisfied first).
#[derive(Clone, Copy, Debug)]
pub struct SoftLit {
    pub lit: Lit,
    pub priority: u32,
}

#[derive(Clone, Debug)]
pub struct MaxSatResult {
    /// Indices of soft constraints violated by the optimal model.
    pub violated: BTreeSet<usize>,
    /// Witness: satisfies the hard part and exactly the non-violated softs.
    pub model: Assignment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaxSatError {
    /// The hard part is unsatisfiable (a bug upstream for repair queries).
    HardUnsat,
    Abort(Abort),
}

impl From<Abort> for MaxSatError {
    fn from(a: Abort) -> MaxSatError {
        MaxSatError::Abort(a)
    }
}

impl core::fmt::Display for MaxSatError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MaxSatError::HardUnsat => write!(f, "hard constraints are unsatisfiable"),
            MaxSatError::Abort(a) => write!(f, "{a}"),
        }
    }
}

/// Fresh-variable source shared between totalizer layers.
struct VarAlloc {
    next: u32,
}

impl VarAlloc {
    fn fresh(&mut self) -> Var {
        self.next += 1;
        Var::new(self.next)
    }
}

/// Totalizer counting layer: returns output literals `o_1..o_n` with clauses
/// enforcing "at least j inputs true implies o_j". Assuming or asserting
/// `¬o_{k+1}` bounds the true inputs by `k`.
fn totalizer(solver: &mut Solver, alloc: &mut VarAlloc, inputs: &[Lit]) -> Vec<Lit> {
    if inputs.len() == 1 {
        return vec![inputs[0]];
    }
    let mid = inputs.len() / 2;
    let left = totalizer(solver, alloc, &inputs[..mid]);
    let right = totalizer(solver, alloc, &inputs[mid..]);
    let n = left.len() + right.len();
    let outs: Vec<Lit> = (0..n).map(|_| Lit::positive(alloc.fresh())).collect();
    solver.ensure_vars(alloc.next);
    for i in 0..=left.len() {
        for j in 0..=right.len() {
            if i + j == 0 {
                continue;
            }
            let mut clause = vec![outs[i + j - 1]];
            if i > 0 {
                clause.push(!left[i - 1]);
            }
            if j > 0 {
                clause.push(!right[j - 1]);
            }
            solver.add_clause(&clause);
        }
    }
    outs
}

struct SoftState {
    selector: Lit,
    lit: Lit,
}

/// MSU3 search over one group of softs on an already-loaded solver. Earlier
/// hardened constraints live in the clause database. Returns the witness
/// model; the caller derives the violated set from it.
fn msu3(
    solver: &mut Solver,
    alloc: &mut VarAlloc,
    softs: &[SoftState],
    budget: u64,
) -> Result<Assignment, MaxSatError> {
    let mut active: BTreeSet<usize> = BTreeSet::new();
    let mut bound: usize = 0;
    loop {
        solver.set_conflict_budget(budget);
        let mut assumptions: Vec<Lit> = Vec::new();
        for (i, s) in softs.iter().enumerate() {
            if !active.contains(&i) {
                assumptions.push(!s.selector);
            }
        }
        let outs = if active.is_empty() {
            Vec::new()
        } else {
            let inputs: Vec<Lit> = active.iter().map(|&i| softs[i].selector).collect();
            totalizer(solver, alloc, &inputs)
        };
        if bound < outs.len() {
            assumptions.push(!outs[bound]);
        }
        match solver.solve(&assumptions) {
            SolveOutcome::Sat(m) => return Ok(m),
            SolveOutcome::Unknown => return Err(MaxSatError::Abort(Abort::ConflictBudget)),
            SolveOutcome::Unsat(core) => {
                if core.is_empty() {
                    return Err(MaxSatError::HardUnsat);
                }
                let mut grew = false;
                for (i, s) in softs.iter().enumerate() {
                    if !active.contains(&i) && core.contains(&!s.selector) {
                        active.insert(i);
                        grew = true;
                    }
                }
                let bound_hit = bound < outs.len() && core.contains(&!outs[bound]);
                if !grew && !bound_hit {
                    return Err(MaxSatError::Abort(Abort::Internal(String::from(
                        "maxsat core mentions no selector",
                    ))));
                }
                bound += 1;
                if bound > softs.len() {
                    return Err(MaxSatError::Abort(Abort::Internal(String::from(
                        "maxsat bound exceeded soft count",
                    ))));
                }
            }
        }
    }
}

fn load_softs(solver: &mut Solver, alloc: &mut VarAlloc, lits: &[Lit]) -> Vec<SoftState> {
    let mut softs = Vec::with_capacity(lits.len());
    for &lit in lits {
        let selector = Lit::positive(alloc.fresh());
        solver.ensure_vars(alloc.next);
        // violating the soft forces its selector
        solver.add_clause(&[lit, selector]);
        softs.push(SoftState { selector, lit });
    }
    softs
}

fn violated_by(model: &Assignment, lits: &[Lit]) -> BTreeSet<usize> {
    lits.iter()
        .enumerate()
        .filter(|(_, &l)| model.lit_value(l) == Some(false))
        .map(|(i, _)| i)
        .collect()
}

/// Exact partial MaxSAT: a model of `hard` minimizing the number of violated
/// softs; ties among optimal violated sets fall to deterministic solver
/// search order.
pub fn maxsat(hard: &Spec, softs: &[Lit], budget: u64) -> Result<MaxSatResult, MaxSatError> {
    let mut solver = Solver::from_spec(hard);
    let mut alloc = VarAlloc {
        next: hard.num_vars(),
    };
    let states = load_softs(&mut solver, &mut alloc, softs);
    let model = msu3(&mut solver, &mut alloc, &states, budget)?;
    let violated = violated_by(&model, softs);
    Ok(MaxSatResult { violated, model })
}

/// Exact lexicographic partial MaxSAT: processing priority levels from the
/// highest to the lowest, the number of violations at each level is minimal
/// given the optima already fixed above it.
pub fn lexmaxsat(hard: &Spec, softs: &[SoftLit], budget: u64) -> Result<MaxSatResult, MaxSatError> {
    let mut solver = Solver::from_spec(hard);
    let mut alloc = VarAlloc {
        next: hard.num_vars(),
    };
    let all_lits: Vec<Lit> = softs.iter().map(|s| s.lit).collect();
    let states = load_softs(&mut solver, &mut alloc, &all_lits);

    let mut levels: Vec<u32> = softs.iter().map(|s| s.priority).collect();
    levels.sort_unstable();
    levels.dedup();
    levels.reverse();

    for &level in &levels {
        let group: Vec<usize> = (0..softs.len())
            .filter(|&i| softs[i].priority == level)
            .collect();
        let group_states: Vec<SoftState> = group
            .iter()
            .map(|&i| SoftState {
                selector: states[i].selector,
                lit: states[i].lit,
            })
            .collect();
        let m = msu3(&mut solver, &mut alloc, &group_states, budget)?;
        let opt = group
            .iter()
            .filter(|&&i| m.lit_value(softs[i].lit) == Some(false))
            .count();
        // freeze this level's optimum: a fresh totalizer over the whole
        // group, hard-bounded by a unit constraint
        if opt < group.len() {
            let inputs: Vec<Lit> = group_states.iter().map(|s| s.selector).collect();
            let outs = totalizer(&mut solver, &mut alloc, &inputs);
            solver.add_clause(&[!outs[opt]]);
        }
    }
    // final witness satisfying every frozen level
    solver.set_conflict_budget(budget);
    let final_model = match solver.solve(&[]) {
        SolveOutcome::Sat(m) => m,
        SolveOutcome::Unsat(_) => return Err(MaxSatError::HardUnsat),
        SolveOutcome::Unknown => return Err(MaxSatError::Abort(Abort::ConflictBudget)),
    };
    let violated = violated_by(&final_model, &all_lits);
    Ok(MaxSatResult {
        violated,
        model: final_model,
    })
}
