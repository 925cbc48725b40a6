//! Preprocessing: unate detection, Padoa-based definability checks with
//! core-minimized defining sets, interpolant extraction of definitions, and
//! the sequential unate/unique-function loop.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::encode::CnfBuilder;
use crate::engine::Ctrl;
use crate::formula::{Lit, Spec, Var};
use crate::func::{FuncId, FuncStore};
use crate::learner::DepGraph;
use crate::proof::{Part, ResolutionProof};
use crate::skolem::{FuncStatus, SkolemVec};
use crate::solver::{ProofOutcome, SolveOutcome, Solver};
use crate::Abort;

/// Solver-facing knobs for the preprocessing phase.
#[derive(Clone, Copy, Debug)]
pub struct DefParams {
    pub conflict_budget: u64,
    /// Deletion-minimization passes over the defining-set core.
    pub core_min_passes: u32,
    /// Resolution proofs larger than this degrade to "not extracted".
    pub proof_node_budget: usize,
}

impl Default for DefParams {
    fn default() -> DefParams {
        DefParams {
            conflict_budget: u64::MAX,
            core_min_passes: 1,
            proof_node_budget: 1 << 22,
        }
    }
}

fn solve_closed(num_vars: u32, builder: &CnfBuilder, budget: u64) -> Result<bool, Abort> {
    let _ = num_vars;
    let mut s = Solver::from_clauses(builder.num_vars(), builder.clauses());
    s.set_conflict_budget(budget);
    match s.solve(&[]) {
        SolveOutcome::Sat(_) => Ok(true),
        SolveOutcome::Unsat(_) => Ok(false),
        SolveOutcome::Unknown => Err(Abort::ConflictBudget),
    }
}

/// Whether `y` is positive (`constant = true`) or negative unate in `f`:
/// `F|y=b̄ ∧ ¬F|y=b` is unsatisfiable for the constant `b`. The negated
/// cofactor ranges over an independent copy of the still-open outputs, so
/// `y` is reported unate only when the constant works for every completion
/// of the candidates that are not functions yet; inputs and outputs already
/// fixed by earlier unate units stay shared between the two sides.
fn unate_check(
    f: &Spec,
    y: Var,
    positive: bool,
    fixed: &BTreeSet<Var>,
    budget: u64,
) -> Result<bool, Abort> {
    let (kept, negated) = if positive {
        (f.cofactor(y, false), f.cofactor(y, true))
    } else {
        (f.cofactor(y, true), f.cofactor(y, false))
    };
    let mut b = CnfBuilder::new(f.num_vars());
    b.add_clauses(kept.clauses());
    let mut rename = BTreeMap::new();
    for id in 1..=f.num_vars() {
        let v = Var::new(id);
        if v != y && !f.is_input(v) && !fixed.contains(&v) {
            rename.insert(v, b.fresh());
        }
    }
    let out = b.negate_clauses(negated.clauses(), &rename);
    b.add_unit(out);
    Ok(!solve_closed(f.num_vars(), &b, budget)?)
}

/// Single-pass unate detection over the outputs in declared order. Checks
/// are cumulative: each unate adds its unit clause to `f` before the next
/// check runs, and later checks treat it as fixed. Positive unates win
/// over negative ones.
pub fn find_unates(f: &mut Spec, budget: u64, ctrl: &Ctrl) -> Result<Vec<(Var, bool)>, Abort> {
    let outputs = f.outputs().to_vec();
    let mut found = Vec::new();
    let mut fixed = BTreeSet::new();
    for y in outputs {
        ctrl.check()?;
        if unate_check(f, y, true, &fixed, budget)? {
            found.push((y, true));
            fixed.insert(y);
            f.push_unit(Lit::positive(y));
        } else if unate_check(f, y, false, &fixed, budget)? {
            found.push((y, false));
            fixed.insert(y);
            f.push_unit(Lit::negative(y));
        }
    }
    Ok(found)
}

#[derive(Clone, Debug)]
pub struct DefinedCheck {
    pub defined: bool,
    /// When defined: the subset of `S` whose equality selectors appear in
    /// the assumption core. `f` still defines `y` over this subset.
    pub core: Vec<Var>,
}

/// Padoa's check: `y` is defined by `S` in `f` iff the two-copy formula
/// `F(W) ∧ F(W↦Z) ∧ ⋀_{w∈S}(w ↔ z_w) ∧ y ∧ ¬z_y` is unsatisfiable. The
/// equalities are switched by fresh selector literals assumed during the
/// solve, which yields the defining core on UNSAT.
pub fn check_defined(f: &Spec, y: Var, s: &[Var], budget: u64) -> Result<DefinedCheck, Abort> {
    debug_assert!(!s.contains(&y));
    let nv = f.num_vars();
    let z = |v: Var| Var::new(v.id() + nv);
    let mut b = CnfBuilder::new(2 * nv);
    b.add_clauses(f.clauses());
    let rename: BTreeMap<Var, Var> = (1..=nv).map(|i| (Var::new(i), z(Var::new(i)))).collect();
    b.add_clauses_renamed(f.clauses(), &rename);
    let mut selectors = Vec::with_capacity(s.len());
    for &w in s {
        let sel = Lit::positive(b.fresh());
        b.add(vec![!sel, Lit::negative(w), Lit::positive(z(w))]);
        b.add(vec![!sel, Lit::positive(w), Lit::negative(z(w))]);
        selectors.push(sel);
    }
    b.add_unit(Lit::positive(y));
    b.add_unit(Lit::negative(z(y)));
    let mut solver = Solver::from_clauses(b.num_vars(), b.clauses());
    solver.set_conflict_budget(budget);
    match solver.solve(&selectors) {
        SolveOutcome::Sat(_) => Ok(DefinedCheck {
            defined: false,
            core: Vec::new(),
        }),
        SolveOutcome::Unknown => Err(Abort::ConflictBudget),
        SolveOutcome::Unsat(core) => {
            let core_vars: Vec<Var> = s
                .iter()
                .zip(selectors.iter())
                .filter(|(_, sel)| core.contains(sel))
                .map(|(&w, _)| w)
                .collect();
            Ok(DefinedCheck {
                defined: true,
                core: core_vars,
            })
        }
    }
}

/// Deletion-based shrinking of a defining set: drop each member in turn and
/// keep the drop when `y` stays defined. `passes` bounds the sweeps.
pub fn minimize_defining_set(
    f: &Spec,
    y: Var,
    mut core: Vec<Var>,
    passes: u32,
    budget: u64,
) -> Result<Vec<Var>, Abort> {
    for _ in 0..passes {
        let mut changed = false;
        let snapshot = core.clone();
        for &w in &snapshot {
            if core.len() == 1 {
                break;
            }
            let trial: Vec<Var> = core.iter().copied().filter(|&v| v != w).collect();
            let chk = check_defined(f, y, &trial, budget)?;
            if chk.defined {
                core = chk.core;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(core)
}

/// McMillan's interpolation system over a refutation of an (A, B)
/// partition: A-leaves contribute the disjunction of their B-visible
/// literals, B-leaves contribute true; resolutions on A-local pivots take
/// the disjunction of the partial interpolants, on B-visible pivots the
/// conjunction.
pub fn interpolant(
    proof: &ResolutionProof,
    store: &mut FuncStore,
    in_b: &dyn Fn(Var) -> bool,
) -> FuncId {
    use crate::proof::ProofNode;
    let mut partial: Vec<FuncId> = Vec::with_capacity(proof.node_count());
    for node in proof.nodes() {
        let f = match node {
            ProofNode::Leaf { lits, part: Part::A } => {
                let shared: Vec<FuncId> = lits
                    .iter()
                    .filter(|l| in_b(l.var()))
                    .map(|&l| store.literal(l))
                    .collect();
                store.or_all(shared)
            }
            ProofNode::Leaf { part: Part::B, .. } => store.constant(true),
            ProofNode::Resolve {
                pivot, left, right, ..
            } => {
                let (il, ir) = (partial[*left as usize], partial[*right as usize]);
                if in_b(*pivot) {
                    store.and(il, ir)
                } else {
                    store.or(il, ir)
                }
            }
        };
        partial.push(f);
    }
    partial[proof.root() as usize]
}

/// Checks `F ⊨ (y ↔ h)` with two SAT calls: `F ∧ y ∧ ¬h` and `F ∧ ¬y ∧ h`
/// must both be unsatisfiable.
pub fn verify_definition(
    f: &Spec,
    y: Var,
    h: FuncId,
    store: &FuncStore,
    budget: u64,
) -> Result<bool, Abort> {
    for value in [true, false] {
        let mut b = CnfBuilder::from_spec(f);
        let t = b.tseitin(store, h, &BTreeMap::new());
        b.add_unit(Lit::new(y, value));
        b.add_unit(if value { !t } else { t });
        if solve_closed(f.num_vars(), &b, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub enum Extraction {
    Def(FuncId),
    /// Proof budget exhausted; the variable falls through to learning.
    TooLarge,
}

/// Extracts a definition of `y` over `s` as the Craig interpolant of
/// A = `F(W) ∧ y` against B = `F(W↦Z) ∧ equalities over s ∧ ¬z_y`, read off
/// the resolution refutation. The result is verified semantically; a
/// failing verification is an internal error, never ignored.
pub fn extract_definition(
    f: &Spec,
    y: Var,
    s: &[Var],
    store: &mut FuncStore,
    params: &DefParams,
) -> Result<Extraction, Abort> {
    let nv = f.num_vars();
    let z = |v: Var| Var::new(v.id() + nv);
    let mut solver = Solver::with_proof(2 * nv, params.proof_node_budget);
    solver.set_conflict_budget(params.conflict_budget);
    for c in f.clauses() {
        solver.add_clause_part(c.lits(), Part::A);
    }
    solver.add_clause_part(&[Lit::positive(y)], Part::A);
    for c in f.clauses() {
        let lits: Vec<Lit> = c
            .lits()
            .iter()
            .map(|l| Lit::new(z(l.var()), !l.is_negative()))
            .collect();
        solver.add_clause_part(&lits, Part::B);
    }
    for &w in s {
        solver.add_clause_part(&[Lit::negative(w), Lit::positive(z(w))], Part::B);
        solver.add_clause_part(&[Lit::positive(w), Lit::negative(z(w))], Part::B);
    }
    solver.add_clause_part(&[Lit::negative(z(y))], Part::B);
    let proof = match solver.solve_with_proof() {
        ProofOutcome::Unsat(p) => p,
        ProofOutcome::Unknown => {
            if solver.proof_exceeded() {
                return Ok(Extraction::TooLarge);
            }
            return Err(Abort::ConflictBudget);
        }
        ProofOutcome::Sat(_) => {
            return Err(Abort::Internal(format!(
                "interpolation query for {y} is satisfiable; defining set was not a definer"
            )))
        }
    };
    debug_assert!(proof.replay().is_ok());
    let s_set: BTreeSet<Var> = s.iter().copied().collect();
    let in_b = |v: Var| v.id() > nv || s_set.contains(&v);
    let h = interpolant(&proof, store, &in_b);
    let support = store.support(h);
    if !support.iter().all(|v| s_set.contains(v)) {
        return Err(Abort::Internal(format!(
            "interpolant for {y} mentions variables outside the defining set"
        )));
    }
    if !verify_definition(f, y, h, store, params.conflict_budget)? {
        return Err(Abort::Internal(format!(
            "extracted definition for {y} failed the entailment check"
        )));
    }
    Ok(Extraction::Def(h))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnumOutcome {
    Def(FuncId),
    /// `|S|` exceeds the enumeration limit.
    TooLarge,
    /// Some `S`-assignment extends to models with both values of `y`.
    NotDefined,
}

/// Independent definition construction by truth-table enumeration: one SAT
/// call per `S`-assignment, don't-care rows default to 0.
pub fn define_by_enumeration(
    f: &Spec,
    y: Var,
    s: &[Var],
    limit: u32,
    budget: u64,
    store: &mut FuncStore,
) -> Result<EnumOutcome, Abort> {
    if s.len() as u32 > limit {
        return Ok(EnumOutcome::TooLarge);
    }
    let mut solver = Solver::from_spec(f);
    solver.set_conflict_budget(budget);
    let mut minterms: Vec<FuncId> = Vec::new();
    for bits in 0..(1u64 << s.len()) {
        let mut assumptions: Vec<Lit> = s
            .iter()
            .enumerate()
            .map(|(i, &w)| Lit::new(w, bits >> i & 1 == 1))
            .collect();
        assumptions.push(Lit::positive(y));
        let pos = match solver.solve(&assumptions) {
            SolveOutcome::Sat(_) => true,
            SolveOutcome::Unsat(_) => false,
            SolveOutcome::Unknown => return Err(Abort::ConflictBudget),
        };
        if pos {
            // a care row valued 1 must not also admit y = 0
            *assumptions.last_mut().unwrap() = Lit::negative(y);
            match solver.solve(&assumptions) {
                SolveOutcome::Sat(_) => return Ok(EnumOutcome::NotDefined),
                SolveOutcome::Unsat(_) => {}
                SolveOutcome::Unknown => return Err(Abort::ConflictBudget),
            }
            let row: Vec<FuncId> = s
                .iter()
                .enumerate()
                .map(|(i, &w)| {
                    let lit = Lit::new(w, bits >> i & 1 == 1);
                    store.literal(lit)
                })
                .collect();
            let m = store.and_all(row);
            minterms.push(m);
        }
    }
    Ok(EnumOutcome::Def(store.or_all(minterms)))
}

/// Per-variable outcome of [`unidef`], also consumed by the `defx` report.
#[derive(Clone, Debug)]
pub struct DefxRow {
    pub var: Var,
    pub status: FuncStatus,
    /// Clauses the retained definition contributes to the working formula.
    pub def_clauses: usize,
    /// The variable was defined but its refutation outgrew the proof
    /// budget, so it falls through to learning.
    pub extraction_skipped: bool,
}

/// The sequential preprocessing loop: unates first, then for each remaining
/// output in declared order a definability check against the inputs plus
/// all earlier outputs. Extracted definitions are retained: the working
/// formula gains Tseitin clauses asserting `y ↔ ψ_y`, so later checks,
/// sampling, learning, and repair all see determined variables as features.
pub fn unidef(
    f: &mut Spec,
    store: &mut FuncStore,
    vec: &mut SkolemVec,
    deps: &mut DepGraph,
    params: &DefParams,
    ctrl: &Ctrl,
) -> Result<(Vec<Var>, Vec<DefxRow>), Abort> {
    let mut u: Vec<Var> = Vec::new();
    let mut rows: Vec<DefxRow> = Vec::new();
    let unates = find_unates(f, params.conflict_budget, ctrl)?;
    let unate_set: BTreeSet<Var> = unates.iter().map(|&(v, _)| v).collect();
    for &(y, c) in &unates {
        vec.set(
            y,
            store.constant(c),
            if c { FuncStatus::UnatePos } else { FuncStatus::UnateNeg },
        );
    }
    u.extend(unate_set.iter().copied());
    let outputs = f.outputs().to_vec();
    let inputs = f.inputs().to_vec();
    for (i, &y) in outputs.iter().enumerate() {
        if unate_set.contains(&y) {
            rows.push(DefxRow {
                var: y,
                status: vec.status(y),
                def_clauses: 1,
                extraction_skipped: false,
            });
            continue;
        }
        ctrl.check()?;
        let mut defining: Vec<Var> = inputs.clone();
        defining.extend(outputs[..i].iter().copied());
        let chk = check_defined(f, y, &defining, params.conflict_budget)?;
        if !chk.defined {
            rows.push(DefxRow {
                var: y,
                status: FuncStatus::Empty,
                def_clauses: 0,
                extraction_skipped: false,
            });
            continue;
        }
        let core = minimize_defining_set(f, y, chk.core, params.core_min_passes, params.conflict_budget)?;
        match extract_definition(f, y, &core, store, params)? {
            Extraction::TooLarge => {
                rows.push(DefxRow {
                    var: y,
                    status: FuncStatus::Empty,
                    def_clauses: 0,
                    extraction_skipped: true,
                });
                continue;
            }
            Extraction::Def(h) => {
                vec.set(y, h, FuncStatus::Unique);
                u.push(y);
                for v in store.support(h) {
                    if f.is_output(v) {
                        deps.add(y, v);
                    }
                }
                // retention: the working formula gains y ↔ ψ_y
                let mut b = CnfBuilder::new(f.num_vars());
                let t = b.tseitin(store, h, &BTreeMap::new());
                b.add_iff(Lit::positive(y), t);
                let (num_vars, clauses) = b.into_parts();
                let added = clauses.len();
                f.grow_vars(num_vars);
                for c in clauses {
                    f.push_clause(c.lits().to_vec());
                }
                rows.push(DefxRow {
                    var: y,
                    status: FuncStatus::Unique,
                    def_clauses: added,
                    extraction_skipped: false,
                });
            }
        }
    }
    let order: BTreeMap<Var, usize> = outputs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    u.sort_by_key(|v| order[v]);
    Ok((u, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Ctrl;
    use crate::formula::Assignment;

    fn lit(n: i32) -> Lit {
        Lit::from_dimacs(n)
    }

    fn v(n: u32) -> Var {
        Var::new(n)
    }

    fn example_spec() -> Spec {
        Spec::new(
            6,
            vec![
                vec![lit(1), lit(2), lit(3)],
                vec![lit(2), lit(-3), lit(4)],
                vec![lit(5), lit(6)],
                vec![lit(-5), lit(-6)],
            ],
            vec![v(1), v(2)],
            vec![v(3), v(4), v(5), v(6)],
        )
        .unwrap()
    }

    /// (y1∨y2)∧(¬y1∨¬y2) with X={x1}: vars x1=1, y1=2, y2=3.
    fn xor_pair_spec() -> Spec {
        Spec::new(
            3,
            vec![vec![lit(2), lit(3)], vec![lit(-2), lit(-3)]],
            vec![v(1)],
            vec![v(2), v(3)],
        )
        .unwrap()
    }

    #[test]
    fn positive_unate_clause() {
        let mut f = Spec::new(2, vec![vec![lit(1), lit(2)]], vec![v(1)], vec![v(2)]).unwrap();
        let u = find_unates(&mut f, u64::MAX, &Ctrl::unbounded()).unwrap();
        assert_eq!(u, vec![(v(2), true)]);
        // the unit joined the working formula
        assert!(f.clauses().iter().any(|c| c.lits() == [lit(2)]));
    }

    #[test]
    fn negative_unate() {
        let mut f = Spec::new(
            2,
            vec![vec![lit(-2), lit(1)], vec![lit(-2), lit(-1)]],
            vec![v(1)],
            vec![v(2)],
        )
        .unwrap();
        let u = find_unates(&mut f, u64::MAX, &Ctrl::unbounded()).unwrap();
        assert_eq!(u, vec![(v(2), false)]);
    }

    #[test]
    fn example_formula_has_no_unates() {
        let mut f = example_spec();
        let u = find_unates(&mut f, u64::MAX, &Ctrl::unbounded()).unwrap();
        assert!(u.is_empty());
    }

    #[test]
    fn y2_defined_by_y1() {
        let f = xor_pair_spec();
        let chk = check_defined(&f, v(3), &[v(2)], u64::MAX).unwrap();
        assert!(chk.defined);
        assert_eq!(chk.core, vec![v(2)]);
    }

    #[test]
    fn y1_not_defined_by_x1() {
        let f = xor_pair_spec();
        let chk = check_defined(&f, v(2), &[v(1)], u64::MAX).unwrap();
        assert!(!chk.defined);
    }

    #[test]
    fn y4_defined_with_core_y3() {
        let f = example_spec();
        let s = [v(1), v(2), v(3), v(4), v(5)];
        let chk = check_defined(&f, v(6), &s, u64::MAX).unwrap();
        assert!(chk.defined);
        let core = minimize_defining_set(&f, v(6), chk.core, 1, u64::MAX).unwrap();
        assert_eq!(core, vec![v(5)]);
    }

    #[test]
    fn extract_negation_definition() {
        let f = xor_pair_spec();
        let mut store = FuncStore::new();
        let h = match extract_definition(&f, v(3), &[v(2)], &mut store, &DefParams::default())
            .unwrap()
        {
            Extraction::Def(h) => h,
            Extraction::TooLarge => panic!("budget hit"),
        };
        // H ≡ ¬y1, checked semantically
        let mut a = Assignment::new(3);
        a.set(v(2), false);
        assert!(store.eval(h, &a));
        a.set(v(2), true);
        assert!(!store.eval(h, &a));
    }

    #[test]
    fn extract_from_explicit_definition_clauses() {
        // y1 ↔ x1 clausified: vars x1=1, y1=2
        let f = Spec::new(
            2,
            vec![vec![lit(-2), lit(1)], vec![lit(2), lit(-1)]],
            vec![v(1)],
            vec![v(2)],
        )
        .unwrap();
        let mut store = FuncStore::new();
        let h = match extract_definition(&f, v(2), &[v(1)], &mut store, &DefParams::default())
            .unwrap()
        {
            Extraction::Def(h) => h,
            _ => panic!(),
        };
        let mut a = Assignment::new(2);
        a.set(v(1), true);
        assert!(store.eval(h, &a));
        a.set(v(1), false);
        assert!(!store.eval(h, &a));
    }

    #[test]
    fn example_extraction_gives_not_y3() {
        let f = example_spec();
        let mut store = FuncStore::new();
        let h = match extract_definition(
            &f,
            v(6),
            &[v(1), v(2), v(3), v(4), v(5)],
            &mut store,
            &DefParams::default(),
        )
        .unwrap()
        {
            Extraction::Def(h) => h,
            _ => panic!(),
        };
        assert!(verify_definition(&f, v(6), h, &store, u64::MAX).unwrap());
    }

    #[test]
    fn enumeration_example_y4() {
        let f = example_spec();
        let mut store = FuncStore::new();
        match define_by_enumeration(&f, v(6), &[v(5)], 16, u64::MAX, &mut store).unwrap() {
            EnumOutcome::Def(h) => {
                let mut a = Assignment::new(6);
                a.set(v(5), false);
                assert!(store.eval(h, &a));
                a.set(v(5), true);
                assert!(!store.eval(h, &a));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn enumeration_detects_undefined() {
        let f = xor_pair_spec();
        let mut store = FuncStore::new();
        assert_eq!(
            define_by_enumeration(&f, v(2), &[v(1)], 16, u64::MAX, &mut store).unwrap(),
            EnumOutcome::NotDefined
        );
    }

    #[test]
    fn enumeration_entailed_constant() {
        // F ⊨ y with S = ∅ → Const(1)
        let f = Spec::new(1, vec![vec![lit(1)]], vec![], vec![v(1)]).unwrap();
        let mut store = FuncStore::new();
        match define_by_enumeration(&f, v(1), &[], 16, u64::MAX, &mut store).unwrap() {
            EnumOutcome::Def(h) => assert_eq!(h, store.constant(true)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn enumeration_size_limit() {
        let f = xor_pair_spec();
        let mut store = FuncStore::new();
        assert_eq!(
            define_by_enumeration(&f, v(2), &[v(1), v(3)], 1, u64::MAX, &mut store).unwrap(),
            EnumOutcome::TooLarge
        );
    }

    #[test]
    fn unidef_example_formula() {
        let mut f = example_spec();
        let mut store = FuncStore::new();
        let mut vecr = SkolemVec::empty(&f.outputs().to_vec(), &store);
        let mut deps = DepGraph::new();
        let (u, _rows) = unidef(
            &mut f,
            &mut store,
            &mut vecr,
            &mut deps,
            &DefParams::default(),
            &Ctrl::unbounded(),
        )
        .unwrap();
        assert_eq!(u, vec![v(6)]);
        assert_eq!(vecr.status(v(6)), FuncStatus::Unique);
        // ψ4 ≡ ¬y3
        let h = vecr.func(v(6));
        let mut a = Assignment::new(f.num_vars());
        a.set(v(5), false);
        assert!(store.eval(h, &a));
        a.set(v(5), true);
        assert!(!store.eval(h, &a));
        assert_eq!(deps.dependencies(v(6)), BTreeSet::from([v(5)]));
    }

    #[test]
    fn unidef_order_dependent_pair() {
        let mut f = xor_pair_spec();
        let mut store = FuncStore::new();
        let mut vecr = SkolemVec::empty(&f.outputs().to_vec(), &store);
        let mut deps = DepGraph::new();
        let (u, _) = unidef(
            &mut f,
            &mut store,
            &mut vecr,
            &mut deps,
            &DefParams::default(),
            &Ctrl::unbounded(),
        )
        .unwrap();
        // with Y ordered y1,y2 exactly y2 is determined, defined as ¬y1
        assert_eq!(u, vec![v(3)]);
        let h = vecr.func(v(3));
        let mut a = Assignment::new(f.num_vars());
        a.set(v(2), true);
        assert!(!store.eval(h, &a));
        a.set(v(2), false);
        assert!(store.eval(h, &a));
    }

    #[test]
    fn retention_preserves_model_set() {
        // adding y ↔ ψ clauses must not change models over original vars
        let original = example_spec();
        let mut f = example_spec();
        let mut store = FuncStore::new();
        let mut vecr = SkolemVec::empty(&f.outputs().to_vec(), &store);
        let mut deps = DepGraph::new();
        unidef(
            &mut f,
            &mut store,
            &mut vecr,
            &mut deps,
            &DefParams::default(),
            &Ctrl::unbounded(),
        )
        .unwrap();
        let n = original.num_vars();
        for bits in 0..(1u32 << n) {
            let mut a = Assignment::new(n);
            for i in 0..n {
                a.set(Var::new(i + 1), bits >> i & 1 == 1);
            }
            let before = original.eval_total(&a);
            // extend over aux vars by solving under the fixed assignment
            let mut s = Solver::from_spec(&f);
            let assumptions: Vec<Lit> =
                (1..=n).map(|i| Lit::new(Var::new(i), bits >> (i - 1) & 1 == 1)).collect();
            let after = s.solve(&assumptions).is_sat();
            assert_eq!(before, after, "model set changed at {bits:b}");
        }
    }
}
