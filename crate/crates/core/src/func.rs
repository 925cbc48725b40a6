//! Hash-consed Boolean function DAGs over AND/NOT/var/const.
//!
//! Structurally identical nodes share identity, AND children are ordered
//! canonically, and double negations plus constant/idempotence patterns fold
//! at construction. OR and XOR are lowered to AND/NOT, which keeps emission
//! to and-inverter form trivial.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::{Assignment, Clause, Lit, Var};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FuncId(u32);

impl FuncId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum FuncNode {
    Const(bool),
    Leaf(Var),
    Not(FuncId),
    And(FuncId, FuncId),
}

/// Append-only interned node table. Construction goes through `var`, `not`,
/// `and` and friends; reads are cheap copies of small nodes.
#[derive(Clone, Debug, Default)]
pub struct FuncStore {
    nodes: Vec<FuncNode>,
    interned: BTreeMap<FuncNode, FuncId>,
}

impl FuncStore {
    pub fn new() -> FuncStore {
        let mut s = FuncStore {
            nodes: Vec::new(),
            interned: BTreeMap::new(),
        };
        s.intern(FuncNode::Const(false));
        s.intern(FuncNode::Const(true));
        s
    }

    fn intern(&mut self, node: FuncNode) -> FuncId {
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        let id = FuncId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.interned.insert(node, id);
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, f: FuncId) -> FuncNode {
        self.nodes[f.index()]
    }

    pub fn constant(&self, b: bool) -> FuncId {
        FuncId(b as u32)
    }

    pub fn var(&mut self, v: Var) -> FuncId {
        self.intern(FuncNode::Leaf(v))
    }

    pub fn literal(&mut self, l: Lit) -> FuncId {
        let v = self.var(l.var());
        if l.is_negative() {
            self.not(v)
        } else {
            v
        }
    }

    pub fn not(&mut self, f: FuncId) -> FuncId {
        match self.node(f) {
            FuncNode::Const(b) => self.constant(!b),
            FuncNode::Not(g) => g,
            _ => self.intern(FuncNode::Not(f)),
        }
    }

    pub fn and(&mut self, a: FuncId, b: FuncId) -> FuncId {
        let fls = self.constant(false);
        let tru = self.constant(true);
        if a == fls || b == fls {
            return fls;
        }
        if a == tru {
            return b;
        }
        if b == tru {
            return a;
        }
        if a == b {
            return a;
        }
        // complement pair
        if self.node(a) == FuncNode::Not(b) || self.node(b) == FuncNode::Not(a) {
            return fls;
        }
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        self.intern(FuncNode::And(lo, hi))
    }

    pub fn or(&mut self, a: FuncId, b: FuncId) -> FuncId {
        let na = self.not(a);
        let nb = self.not(b);
        let n = self.and(na, nb);
        self.not(n)
    }

    pub fn xor(&mut self, a: FuncId, b: FuncId) -> FuncId {
        let nb = self.not(b);
        let na = self.not(a);
        let l = self.and(a, nb);
        let r = self.and(na, b);
        self.or(l, r)
    }

    pub fn iff(&mut self, a: FuncId, b: FuncId) -> FuncId {
        let x = self.xor(a, b);
        self.not(x)
    }

    pub fn and_all<I: IntoIterator<Item = FuncId>>(&mut self, items: I) -> FuncId {
        let mut acc = self.constant(true);
        for f in items {
            acc = self.and(acc, f);
        }
        acc
    }

    pub fn or_all<I: IntoIterator<Item = FuncId>>(&mut self, items: I) -> FuncId {
        let mut acc = self.constant(false);
        for f in items {
            acc = self.or(acc, f);
        }
        acc
    }

    /// The clause as a function; the empty clause is `false`.
    pub fn clause_func(&mut self, c: &Clause) -> FuncId {
        let lits: Vec<FuncId> = c.lits().iter().map(|&l| self.literal(l)).collect();
        self.or_all(lits)
    }

    /// Conjunction of clauses.
    pub fn cnf_func(&mut self, clauses: &[Clause]) -> FuncId {
        let cs: Vec<FuncId> = clauses.iter().map(|c| self.clause_func(c)).collect();
        self.and_all(cs)
    }

    /// Evaluates `f` under a total assignment of its support.
    pub fn eval(&self, f: FuncId, a: &Assignment) -> bool {
        let mut memo: BTreeMap<FuncId, bool> = BTreeMap::new();
        let mut stack = alloc::vec![f];
        while let Some(&top) = stack.last() {
            if memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            match self.node(top) {
                FuncNode::Const(b) => {
                    memo.insert(top, b);
                }
                FuncNode::Leaf(v) => {
                    memo.insert(top, a.value(v));
                }
                FuncNode::Not(g) => match memo.get(&g) {
                    Some(&b) => {
                        memo.insert(top, !b);
                    }
                    None => {
                        stack.push(g);
                        continue;
                    }
                },
                FuncNode::And(x, y) => match (memo.get(&x).copied(), memo.get(&y).copied()) {
                    (Some(bx), Some(by)) => {
                        memo.insert(top, bx && by);
                    }
                    (gx, _) => {
                        if gx.is_none() {
                            stack.push(x);
                        }
                        if !memo.contains_key(&y) {
                            stack.push(y);
                        }
                        continue;
                    }
                },
            }
            stack.pop();
        }
        memo[&f]
    }

    /// Variables reachable as leaves.
    pub fn support(&self, f: FuncId) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![f];
        while let Some(top) = stack.pop() {
            if !seen.insert(top) {
                continue;
            }
            match self.node(top) {
                FuncNode::Const(_) => {}
                FuncNode::Leaf(v) => {
                    out.insert(v);
                }
                FuncNode::Not(g) => stack.push(g),
                FuncNode::And(x, y) => {
                    stack.push(x);
                    stack.push(y);
                }
            }
        }
        out
    }

    /// Number of distinct nodes reachable from `f`.
    pub fn dag_size(&self, f: FuncId) -> usize {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![f];
        while let Some(top) = stack.pop() {
            if !seen.insert(top) {
                continue;
            }
            match self.node(top) {
                FuncNode::Not(g) => stack.push(g),
                FuncNode::And(x, y) => {
                    stack.push(x);
                    stack.push(y);
                }
                _ => {}
            }
        }
        seen.len()
    }

    /// Replaces mapped leaves in one pass. Leaves introduced by replacement
    /// bodies are not themselves rewritten; callers order substitutions so
    /// that bodies are already fully resolved.
    pub fn substitute(&mut self, f: FuncId, map: &BTreeMap<Var, FuncId>) -> FuncId {
        if map.is_empty() {
            return f;
        }
        let mut memo: BTreeMap<FuncId, FuncId> = BTreeMap::new();
        let mut stack = alloc::vec![f];
        while let Some(&top) = stack.last() {
            if memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            let res = match self.node(top) {
                FuncNode::Const(_) => top,
                FuncNode::Leaf(v) => map.get(&v).copied().unwrap_or(top),
                FuncNode::Not(g) => match memo.get(&g).copied() {
                    Some(rg) => self.not(rg),
                    None => {
                        stack.push(g);
                        continue;
                    }
                },
                FuncNode::And(x, y) => {
                    match (memo.get(&x).copied(), memo.get(&y).copied()) {
                        (Some(rx), Some(ry)) => self.and(rx, ry),
                        (gx, _) => {
                            if gx.is_none() {
                                stack.push(x);
                            }
                            if !memo.contains_key(&y) {
                                stack.push(y);
                            }
                            continue;
                        }
                    }
                }
            };
            memo.insert(top, res);
            stack.pop();
        }
        memo[&f]
    }

    /// Debug dump in prefix notation, e.g. `and(not(x1), y3)`. Deterministic
    /// for a given DAG; `namer` renders variables.
    pub fn to_prefix(&self, f: FuncId, namer: &dyn Fn(Var) -> String) -> String {
        enum Step {
            Visit(FuncId),
            Emit(&'static str),
        }
        let mut out = String::new();
        let mut stack = alloc::vec![Step::Visit(f)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Emit(s) => out.push_str(s),
                Step::Visit(g) => match self.node(g) {
                    FuncNode::Const(b) => out.push_str(if b { "1" } else { "0" }),
                    FuncNode::Leaf(v) => out.push_str(&namer(v)),
                    FuncNode::Not(c) => {
                        out.push_str("not(");
                        stack.push(Step::Emit(")"));
                        stack.push(Step::Visit(c));
                    }
                    FuncNode::And(x, y) => {
                        out.push_str("and(");
                        stack.push(Step::Emit(")"));
                        stack.push(Step::Visit(y));
                        stack.push(Step::Emit(", "));
                        stack.push(Step::Visit(x));
                    }
                },
            }
        }
        out
    }
}
