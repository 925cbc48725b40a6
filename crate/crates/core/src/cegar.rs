//! Counterexample-guided repair: the error formula whose unsatisfiability
//! certifies a candidate vector, MaxSAT-based repair-candidate selection,
//! core-based candidate repair, and the self-substitution fallback.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::encode::CnfBuilder;
use crate::formula::{Assignment, Lit, Spec, Var};
use crate::func::{FuncId, FuncStore};
use crate::maxsat::{self, MaxSatError, SoftLit};
use crate::skolem::{FuncStatus, SkolemVec};
use crate::solver::{SolveOutcome, Solver};
use crate::Abort;

/// A model of the error formula projected onto X ∪ Y ∪ Y'.
#[derive(Clone, Debug)]
pub struct Cex {
    values: Assignment,
    primed: BTreeMap<Var, Var>,
    x_len: usize,
}

impl Cex {
    /// Value of an original (input or output) variable.
    pub fn value(&self, v: Var) -> bool {
        self.values.value(v)
    }

    /// Value of the primed copy `y'` of an output.
    pub fn primed(&self, y: Var) -> bool {
        self.values.value(self.primed[&y])
    }

    /// |X ∪ Y ∪ Y'|.
    pub fn size(&self) -> usize {
        self.x_len + 2 * self.primed.len()
    }
}

/// The error encoding `E(X,Y,Y') = F(X,Y) ∧ ¬F(X,Y') ∧ (Y' ↔ Ψ)` with fresh
/// primed outputs. Candidates are evaluated on the primed copy, so the
/// primed block is a pure function image of X. The positive conjunct uses
/// the working formula (definitions retained), the negated one the original
/// relation.
pub struct ErrorEncoding {
    builder: CnfBuilder,
    primed: BTreeMap<Var, Var>,
}

impl ErrorEncoding {
    pub fn clauses(&self) -> &[crate::formula::Clause] {
        self.builder.clauses()
    }

    pub fn num_vars(&self) -> u32 {
        self.builder.num_vars()
    }

    pub fn primed(&self) -> &BTreeMap<Var, Var> {
        &self.primed
    }
}

pub fn build_error_formula(
    orig: &Spec,
    working: &Spec,
    store: &FuncStore,
    vec: &SkolemVec,
) -> ErrorEncoding {
    let mut b = CnfBuilder::from_spec(working);
    let primed: BTreeMap<Var, Var> = orig
        .outputs()
        .iter()
        .map(|&y| (y, b.fresh()))
        .collect();
    let neg = b.negate_clauses(orig.clauses(), &primed);
    b.add_unit(neg);
    for &y in orig.outputs() {
        let t = b.tseitin(store, vec.func(y), &primed);
        b.add_iff(Lit::positive(primed[&y]), t);
    }
    ErrorEncoding { builder: b, primed }
}

#[derive(Clone, Debug)]
pub enum VerifyOutcome {
    Valid,
    Counterexample(Cex),
}

/// Solves the error encoding: UNSAT certifies the vector.
pub fn verify(
    orig: &Spec,
    working: &Spec,
    store: &FuncStore,
    vec: &SkolemVec,
    budget: u64,
) -> Result<VerifyOutcome, Abort> {
    let enc = build_error_formula(orig, working, store, vec);
    let mut solver = Solver::from_clauses(enc.num_vars(), enc.clauses());
    solver.set_conflict_budget(budget);
    match solver.solve(&[]) {
        SolveOutcome::Unsat(_) => Ok(VerifyOutcome::Valid),
        SolveOutcome::Unknown => Err(Abort::ConflictBudget),
        SolveOutcome::Sat(m) => Ok(VerifyOutcome::Counterexample(Cex {
            values: m,
            primed: enc.primed,
            x_len: orig.inputs().len(),
        })),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RepairMode {
    Plain,
    Lex,
}

/// Selects repair candidates for a counterexample: hard constraints fix the
/// relation and σ[X]; every output contributes the soft `(y ↔ σ[y'])` with
/// its total-order position as priority. Violated softs become `ind`,
/// ordered by ascending position; determined entries are filtered out since
/// they are final by construction.
pub fn find_repair_candidates(
    working: &Spec,
    cex: &Cex,
    order: &[Var],
    mode: RepairMode,
    vec: &SkolemVec,
    budget: u64,
) -> Result<Vec<Var>, Abort> {
    let mut hard = working.clone();
    for &x in working.inputs() {
        hard.push_unit(Lit::new(x, cex.value(x)));
    }
    let pos: BTreeMap<Var, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let softs: Vec<SoftLit> = order
        .iter()
        .map(|&y| SoftLit {
            lit: Lit::new(y, cex.primed(y)),
            priority: pos[&y] as u32 + 1,
        })
        .collect();
    let result = match mode {
        RepairMode::Lex => maxsat::lexmaxsat(&hard, &softs, budget),
        RepairMode::Plain => {
            let lits: Vec<Lit> = softs.iter().map(|s| s.lit).collect();
            maxsat::maxsat(&hard, &lits, budget)
        }
    };
    let violated = match result {
        Ok(r) => r.violated,
        Err(MaxSatError::HardUnsat) => {
            return Err(Abort::Internal(alloc::string::String::from(
                "counterexample inputs do not extend to a model of the relation",
            )))
        }
        Err(MaxSatError::Abort(a)) => return Err(a),
    };
    let mut ind: Vec<Var> = violated
        .into_iter()
        .map(|i| order[i])
        .filter(|&y| !vec.is_final(y))
        .collect();
    ind.sort_by_key(|y| pos[y]);
    Ok(ind)
}

#[derive(Clone, Debug)]
pub enum RepairOutcome {
    /// The candidate changed (weakened or strengthened by β).
    Repaired,
    /// The repair query was satisfiable: the candidates of the outputs it
    /// was not allowed to constrain (those before `y` in the order) whose
    /// model value differs from σ[Y'] should be repaired instead.
    Followups(Vec<Var>),
}

/// One repair attempt for `y`: solve
/// `(y ↔ σ[y']) ∧ F ∧ (X ↔ σ[X]) ∧ (Ŷ ↔ σ[Ŷ'])` with every equality as an
/// assumption, where Ŷ holds the outputs after `y` in the order. On UNSAT,
/// β is the conjunction of the core's Ŷ literals as valued (falling back to
/// X literals when no Ŷ variable appears) and the candidate is weakened
/// (`ψ ∨ β`) when σ[y'] = 0, strengthened (`ψ ∧ ¬β`) when σ[y'] = 1.
pub fn repair_skf(
    working: &Spec,
    cex: &Cex,
    store: &mut FuncStore,
    vec: &mut SkolemVec,
    order: &[Var],
    y: Var,
    core_min_passes: u32,
    budget: u64,
) -> Result<RepairOutcome, Abort> {
    let pos = order.iter().position(|&v| v == y).expect("y in order");
    let yhat = &order[pos + 1..];
    let wrong = cex.primed(y);
    let mut assumptions = vec![Lit::new(y, wrong)];
    for &x in working.inputs() {
        assumptions.push(Lit::new(x, cex.value(x)));
    }
    for &v in yhat {
        assumptions.push(Lit::new(v, cex.primed(v)));
    }
    let mut solver = Solver::from_spec(working);
    solver.set_conflict_budget(budget);
    match solver.solve(&assumptions) {
        SolveOutcome::Unknown => Err(Abort::ConflictBudget),
        SolveOutcome::Sat(model) => {
            let followups: Vec<Var> = order[..pos]
                .iter()
                .copied()
                .filter(|&v| model.value(v) != cex.primed(v))
                .collect();
            Ok(RepairOutcome::Followups(followups))
        }
        SolveOutcome::Unsat(core) => {
            // deletion-minimize, trying input literals first so the surviving
            // repair region stays as general as possible
            let y_lit = Lit::new(y, wrong);
            let yhat_set: BTreeSet<Var> = yhat.iter().copied().collect();
            let mut ordered: Vec<Lit> = core
                .iter()
                .copied()
                .filter(|l| l.var() != y && !yhat_set.contains(&l.var()))
                .collect();
            ordered.extend(
                core.iter()
                    .copied()
                    .filter(|l| l.var() != y && yhat_set.contains(&l.var())),
            );
            let shrunk = crate::solver::shrink_core(&mut solver, &[y_lit], ordered, core_min_passes);
            let core_set: BTreeSet<Lit> = shrunk.into_iter().collect();
            let from_yhat: Vec<Lit> = yhat_set
                .iter()
                .filter_map(|&v| {
                    let l = Lit::new(v, cex.primed(v));
                    core_set.contains(&l).then_some(l)
                })
                .collect();
            let chosen: Vec<Lit> = if !from_yhat.is_empty() {
                from_yhat
            } else {
                working
                    .inputs()
                    .iter()
                    .filter_map(|&x| {
                        let l = Lit::new(x, cex.value(x));
                        core_set.contains(&l).then_some(l)
                    })
                    .collect()
            };
            #[cfg(debug_assertions)]
            {
                // β together with the input fixing must still block (y ↔ σ[y'])
                let mut check = Solver::from_spec(working);
                let mut lits = vec![Lit::new(y, wrong)];
                lits.extend(working.inputs().iter().map(|&x| Lit::new(x, cex.value(x))));
                lits.extend(chosen.iter().copied());
                debug_assert!(check.solve(&lits).is_unsat(), "repair formula does not block");
            }
            let parts: Vec<FuncId> = chosen.iter().map(|&l| store.literal(l)).collect();
            let beta = store.and_all(parts);
            let old = vec.func(y);
            let new = if !wrong {
                // candidate was 0, must become 1 here: weaken
                store.or(old, beta)
            } else {
                let nb = store.not(beta);
                store.and(old, nb)
            };
            vec.set(y, new, FuncStatus::Repaired);
            Ok(RepairOutcome::Repaired)
        }
    }
}

/// Self-substitution fallback for a candidate stuck in repair: the new
/// function is `F` cofactored with `y = 1`, outputs after `y` in the order
/// kept as features and every earlier output replaced by its current
/// candidate (occurrences of `y` inside those bodies resolve to 1).
pub fn self_substitute(
    orig: &Spec,
    store: &mut FuncStore,
    vec: &mut SkolemVec,
    order: &[Var],
    y: Var,
) -> FuncId {
    let pos = order.iter().position(|&v| v == y).expect("y in order");
    let cof = orig.cofactor(y, true);
    let f_func = store.cnf_func(cof.clauses());
    let tru = store.constant(true);
    let mut resolved: BTreeMap<Var, FuncId> = BTreeMap::from([(y, tru)]);
    for j in (0..pos).rev() {
        let earlier = order[j];
        let body = vec.func(earlier);
        let r = store.substitute(body, &resolved);
        resolved.insert(earlier, r);
    }
    let psi = store.substitute(f_func, &resolved);
    debug_assert!({
        let sup = store.support(psi);
        !sup.contains(&y) && order[..pos].iter().all(|v| !sup.contains(v))
    });
    vec.set(y, psi, FuncStatus::SelfSubstituted);
    psi
}

/// Evaluates whether σ still satisfies the error encoding after repairs:
/// the primed image is recomputed from the current candidates at σ[X] in
/// reverse order, and σ survives exactly when the relation rejects it.
pub fn still_counterexample(
    orig: &Spec,
    store: &FuncStore,
    vec: &SkolemVec,
    order: &[Var],
    cex: &Cex,
) -> bool {
    let mut a = Assignment::new(orig.num_vars());
    for &x in orig.inputs() {
        a.set(x, cex.value(x));
    }
    for &y in order.iter().rev() {
        let val = store.eval(vec.func(y), &a);
        a.set(y, val);
    }
    !orig.eval_total(&a)
}


#[cfg(test)]
mod extra_tests {
    use super::*;
    use crate::formula::Lit;

    fn v(n: u32) -> Var {
        Var::new(n)
    }

    #[test]
    fn repair_with_singleton_core_yields_constant() {
        // F = (y1): the core is the flipped output alone, β degenerates to
        // true and weakening makes the candidate constant 1.
        let f = Spec::new(1, vec![vec![Lit::from_dimacs(1)]], vec![], vec![v(1)]).unwrap();
        let mut store = FuncStore::new();
        let mut vecr = SkolemVec::empty(&[v(1)], &store);
        let fls = store.constant(false);
        vecr.set(v(1), fls, FuncStatus::Learned);
        let cex = match verify(&f, &f, &store, &vecr, u64::MAX).unwrap() {
            VerifyOutcome::Counterexample(c) => c,
            VerifyOutcome::Valid => panic!(),
        };
        assert!(!cex.primed(v(1)));
        match repair_skf(&f, &cex, &mut store, &mut vecr, &[v(1)], v(1), 1, u64::MAX).unwrap() {
            RepairOutcome::Repaired => {}
            other => panic!("{other:?}"),
        }
        assert_eq!(vecr.func(v(1)), store.constant(true));
    }

    #[test]
    fn weaken_grows_and_strengthen_shrinks_at_sigma() {
        let f = Spec::new(
            2,
            vec![vec![Lit::from_dimacs(-2), Lit::from_dimacs(1)]],
            vec![v(1)],
            vec![v(2)],
        )
        .unwrap();
        let mut store = FuncStore::new();
        let mut vecr = SkolemVec::empty(&[v(2)], &store);
        let t = store.constant(true);
        vecr.set(v(2), t, FuncStatus::Learned);
        let cex = match verify(&f, &f, &store, &vecr, u64::MAX).unwrap() {
            VerifyOutcome::Counterexample(c) => c,
            VerifyOutcome::Valid => panic!(),
        };
        let old = vecr.func(v(2));
        repair_skf(&f, &cex, &mut store, &mut vecr, &[v(2)], v(2), 1, u64::MAX).unwrap();
        let new = vecr.func(v(2));
        // candidate was 1 at σ and had to shrink; weakening never happens here
        let mut a = Assignment::new(2);
        a.set(v(1), cex.value(v(1)));
        a.set(v(2), cex.value(v(2)));
        let (before, after) = (store.eval(old, &a), store.eval(new, &a));
        assert!(before && !after, "strengthening must shrink the set at σ");
    }
}
