//! Standalone vector verification: builds the error formula
//! `F(X,Y) ∧ ¬F(X,Y') ∧ (Y' ↔ Ψ(X))` from the specification and a grounded
//! vector read back from disk, and reports validity iff it is unsatisfiable.
//! Only the formula encoders and the SAT solver are involved, which keeps
//! this an oracle independent of the synthesis pipeline.

use std::collections::BTreeMap;

use skolem_core::encode::CnfBuilder;
use skolem_core::solver::{SolveOutcome, Solver};
use skolem_core::{FuncId, FuncStore, Lit, Spec};

/// `Ok(true)` when the functions (over inputs only, in output order) form a
/// Skolem vector for the specification.
pub fn verify_vector(
    spec: &Spec,
    store: &FuncStore,
    funcs: &[FuncId],
) -> Result<bool, String> {
    verify_vector_drat(spec, store, funcs, false).map(|(ok, _)| ok)
}

/// As [`verify_vector`], optionally returning the solver's learned-clause
/// dump in DRAT-style text form.
pub fn verify_vector_drat(
    spec: &Spec,
    store: &FuncStore,
    funcs: &[FuncId],
    drat: bool,
) -> Result<(bool, Option<String>), String> {
    if funcs.len() != spec.outputs().len() {
        return Err(format!(
            "vector has {} functions but the specification declares {} outputs",
            funcs.len(),
            spec.outputs().len()
        ));
    }
    let mut b = CnfBuilder::from_spec(spec);
    let primed: BTreeMap<_, _> = spec
        .outputs()
        .iter()
        .map(|&y| (y, b.fresh()))
        .collect();
    let neg = b.negate_clauses(spec.clauses(), &primed);
    b.add_unit(neg);
    for (&y, &f) in spec.outputs().iter().zip(funcs.iter()) {
        for v in store.support(f) {
            if !spec.is_input(v) {
                return Err(format!("function for output {y} depends on {v}"));
            }
        }
        let t = b.tseitin(store, f, &BTreeMap::new());
        b.add_iff(Lit::positive(primed[&y]), t);
    }
    let mut solver = Solver::from_clauses(b.num_vars(), b.clauses());
    if drat {
        solver.enable_drat();
    }
    let valid = match solver.solve(&[]) {
        SolveOutcome::Unsat(_) => true,
        SolveOutcome::Sat(_) => false,
        SolveOutcome::Unknown => return Err("verification exceeded the solver budget".into()),
    };
    let dump = solver.drat().map(|s| s.to_string());
    Ok((valid, dump))
}
