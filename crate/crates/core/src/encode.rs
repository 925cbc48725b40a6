//! CNF encodings: clause building with fresh variables, Tseitin translation
//! of function DAGs, and equisatisfiability-preserving formula negation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::{Clause, Lit, Spec, Var};
use crate::func::{FuncId, FuncNode, FuncStore};

/// Accumulates clauses over a growing variable universe.
#[derive(Clone, Debug)]
pub struct CnfBuilder {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl CnfBuilder {
    pub fn new(num_vars: u32) -> CnfBuilder {
        CnfBuilder {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn from_spec(spec: &Spec) -> CnfBuilder {
        CnfBuilder {
            num_vars: spec.num_vars(),
            clauses: spec.clauses().to_vec(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn fresh(&mut self) -> Var {
        self.num_vars += 1;
        Var::new(self.num_vars)
    }

    /// Adds a clause; tautologies are dropped.
    pub fn add(&mut self, lits: Vec<Lit>) {
        debug_assert!(lits.iter().all(|l| l.var().id() <= self.num_vars));
        if let Some(c) = Clause::normalized(lits) {
            self.clauses.push(c);
        }
    }

    pub fn add_unit(&mut self, l: Lit) {
        self.add(vec![l]);
    }

    /// `a ↔ b` as two binary clauses.
    pub fn add_iff(&mut self, a: Lit, b: Lit) {
        self.add(vec![!a, b]);
        self.add(vec![a, !b]);
    }

    pub fn add_clauses(&mut self, clauses: &[Clause]) {
        for c in clauses {
            self.add(c.lits().to_vec());
        }
    }

    /// Adds `clauses` with variables renamed through `rename` (identity for
    /// unmapped variables).
    pub fn add_clauses_renamed(&mut self, clauses: &[Clause], rename: &BTreeMap<Var, Var>) {
        for c in clauses {
            let lits = c
                .lits()
                .iter()
                .map(|l| {
                    let v = rename.get(&l.var()).copied().unwrap_or(l.var());
                    Lit::new(v, !l.is_negative())
                })
                .collect();
            self.add(lits);
        }
    }

    /// Tseitin encoding of `¬(∧ clauses)`: per-clause definition variables
    /// `d_i ↔ ¬C_i` and an output literal forced to the negation's value on
    /// every total assignment of the original variables.
    pub fn negate_clauses(&mut self, clauses: &[Clause], rename: &BTreeMap<Var, Var>) -> Lit {
        let mut defs: Vec<Lit> = Vec::with_capacity(clauses.len());
        for c in clauses {
            let d = Lit::positive(self.fresh());
            let lits: Vec<Lit> = c
                .lits()
                .iter()
                .map(|l| {
                    let v = rename.get(&l.var()).copied().unwrap_or(l.var());
                    Lit::new(v, !l.is_negative())
                })
                .collect();
            // d → ¬l for every literal of the clause
            for &l in &lits {
                self.add(vec![!d, !l]);
            }
            // ¬d → C
            let mut long = lits;
            long.push(d);
            self.add(long);
            defs.push(d);
        }
        let out = Lit::positive(self.fresh());
        // out → ∨ d_i
        let mut c = vec![!out];
        c.extend(defs.iter().copied());
        self.add(c);
        // d_i → out
        for &d in &defs {
            self.add(vec![out, !d]);
        }
        out
    }

    /// Standard Tseitin translation of a function DAG. Output-variable
    /// leaves can be renamed through `rename`. Returns the literal that is
    /// forced to the function's value on every assignment of its support,
    /// plus the per-node definition map.
    pub fn tseitin_with_defs(
        &mut self,
        store: &FuncStore,
        f: FuncId,
        rename: &BTreeMap<Var, Var>,
    ) -> (Lit, BTreeMap<FuncId, Lit>) {
        let mut memo: BTreeMap<FuncId, Lit> = BTreeMap::new();
        let mut stack = vec![f];
        while let Some(&top) = stack.last() {
            if memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            let lit = match store.node(top) {
                FuncNode::Const(b) => {
                    let g = Lit::positive(self.fresh());
                    self.add_unit(if b { g } else { !g });
                    g
                }
                FuncNode::Leaf(v) => {
                    let w = rename.get(&v).copied().unwrap_or(v);
                    Lit::positive(w)
                }
                FuncNode::Not(g) => match memo.get(&g) {
                    Some(&lg) => !lg,
                    None => {
                        stack.push(g);
                        continue;
                    }
                },
                FuncNode::And(x, y) => match (memo.get(&x).copied(), memo.get(&y).copied()) {
                    (Some(lx), Some(ly)) => {
                        let g = Lit::positive(self.fresh());
                        self.add(vec![!g, lx]);
                        self.add(vec![!g, ly]);
                        self.add(vec![g, !lx, !ly]);
                        g
                    }
                    (mx, _) => {
                        if mx.is_none() {
                            stack.push(x);
                        }
                        if !memo.contains_key(&y) {
                            stack.push(y);
                        }
                        continue;
                    }
                },
            };
            memo.insert(top, lit);
            stack.pop();
        }
        (memo[&f], memo)
    }

    pub fn tseitin(&mut self, store: &FuncStore, f: FuncId, rename: &BTreeMap<Var, Var>) -> Lit {
        self.tseitin_with_defs(store, f, rename).0
    }

    pub fn into_parts(self) -> (u32, Vec<Clause>) {
        (self.num_vars, self.clauses)
    }
}

/// Negation of a specification as a standalone operation: the returned spec
/// holds only the encoding clauses over the original universe plus fresh
/// auxiliaries, and asserting the returned literal selects exactly the
/// falsifying assignments of the input (projected onto its variables).
pub fn negate_cnf(spec: &Spec) -> (Spec, Lit) {
    let mut b = CnfBuilder::new(spec.num_vars());
    let out = b.negate_clauses(spec.clauses(), &BTreeMap::new());
    let (num_vars, clauses) = b.into_parts();
    let mut neg = Spec::new(
        num_vars,
        Vec::new(),
        spec.inputs().to_vec(),
        spec.outputs().to_vec(),
    )
    .expect("negation universe is well-formed");
    for c in clauses {
        neg.push_clause(c.lits().to_vec());
    }
    (neg, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Assignment;
    use crate::solver::{SolveOutcome, Solver};

    fn lit(n: i32) -> Lit {
        Lit::from_dimacs(n)
    }

    /// Enumerates all assignments over vars 1..=n and collects the models of
    /// the builder's clauses projected onto those variables.
    fn projected_models(b: &CnfBuilder, n: u32) -> Vec<u32> {
        let mut out = Vec::new();
        for bits in 0..(1u32 << n) {
            let mut solver = Solver::from_clauses(b.num_vars(), b.clauses());
            let mut assumptions = Vec::new();
            for v in 1..=n {
                assumptions.push(Lit::new(Var::new(v), bits >> (v - 1) & 1 == 1));
            }
            if let SolveOutcome::Sat(_) = solver.solve(&assumptions) {
                out.push(bits);
            }
        }
        out
    }

    #[test]
    fn negate_unit_clause() {
        let f = Spec::new(1, vec![vec![lit(1)]], vec![Var::new(1)], vec![]).unwrap();
        let (neg, out) = negate_cnf(&f);
        let mut b = CnfBuilder::new(neg.num_vars());
        b.add_clauses(neg.clauses());
        b.add_unit(out);
        assert_eq!(projected_models(&b, 1), vec![0]);
    }

    #[test]
    fn negate_two_clause_formula() {
        // ¬((x1∨x2)∧(¬x1∨¬x2)) has models {00, 11}
        let f = Spec::new(
            2,
            vec![vec![lit(1), lit(2)], vec![lit(-1), lit(-2)]],
            vec![Var::new(1), Var::new(2)],
            vec![],
        )
        .unwrap();
        let (neg, out) = negate_cnf(&f);
        let mut b = CnfBuilder::new(neg.num_vars());
        b.add_clauses(neg.clauses());
        b.add_unit(out);
        assert_eq!(projected_models(&b, 2), vec![0b00, 0b11]);
    }

    #[test]
    fn negate_empty_formula_forces_false() {
        let f = Spec::new(1, vec![], vec![Var::new(1)], vec![]).unwrap();
        let (neg, out) = negate_cnf(&f);
        let mut b = CnfBuilder::new(neg.num_vars());
        b.add_clauses(neg.clauses());
        let mut solver = Solver::from_clauses(b.num_vars(), b.clauses());
        assert!(matches!(solver.solve(&[out]), SolveOutcome::Unsat(_)));
    }

    #[test]
    fn tseitin_var_is_identity() {
        let mut store = FuncStore::new();
        let x = store.var(Var::new(1));
        let mut b = CnfBuilder::new(1);
        let out = b.tseitin(&store, x, &BTreeMap::new());
        assert_eq!(out, lit(1));
        assert!(b.clauses().is_empty());
    }

    #[test]
    fn tseitin_or_projection() {
        // ¬x1 ∨ y1 asserted: projected models of (x1,y1) are {00,01,11}
        let mut store = FuncStore::new();
        let x1 = store.var(Var::new(1));
        let y1 = store.var(Var::new(2));
        let nx1 = store.not(x1);
        let f = store.or(nx1, y1);
        let mut b = CnfBuilder::new(2);
        let out = b.tseitin(&store, f, &BTreeMap::new());
        b.add_unit(out);
        assert_eq!(projected_models(&b, 2), vec![0b00, 0b10, 0b11]);
    }

    #[test]
    fn tseitin_const_true() {
        let store = FuncStore::new();
        let mut b = CnfBuilder::new(0);
        let out = b.tseitin(&store, store.constant(true), &BTreeMap::new());
        assert_eq!(out.var().id(), 1);
        assert_eq!(b.clauses().len(), 1);
        assert_eq!(b.clauses()[0].lits(), &[out]);
    }

    #[test]
    fn tseitin_agrees_with_eval() {
        let mut store = FuncStore::new();
        let x1 = store.var(Var::new(1));
        let x2 = store.var(Var::new(2));
        let x3 = store.var(Var::new(3));
        let a = store.xor(x1, x2);
        let f = store.iff(a, x3);
        let mut b = CnfBuilder::new(3);
        let out = b.tseitin(&store, f, &BTreeMap::new());
        b.add_unit(out);
        let models = projected_models(&b, 3);
        for bits in 0..8u32 {
            let mut asn = Assignment::new(3);
            for v in 1..=3 {
                asn.set(Var::new(v), bits >> (v - 1) & 1 == 1);
            }
            assert_eq!(models.contains(&bits), store.eval(f, &asn));
        }
    }
}
