//! CNF specifications: variables, literals, clauses, and assignments.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

/// A propositional variable, 1-based as in DIMACS.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u32);

impl Var {
    pub fn new(id: u32) -> Var {
        assert!(id > 0, "variable ids are 1-based");
        Var(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// 0-based index for dense arrays.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn from_index(idx: usize) -> Var {
        Var(idx as u32 + 1)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal: a variable or its negation. Encoded as `var << 1 | sign`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Lit(u32);

impl Lit {
    /// Positive literal when `positive` is true.
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 << 1 | (!positive) as u32)
    }

    pub fn positive(var: Var) -> Lit {
        Lit::new(var, true)
    }

    pub fn negative(var: Var) -> Lit {
        Lit::new(var, false)
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }

    /// Dense index usable for watch lists (two slots per variable).
    pub fn code(self) -> usize {
        (self.0 - 2) as usize
    }

    pub fn from_dimacs(n: i32) -> Lit {
        assert!(n != 0);
        Lit::new(Var::new(n.unsigned_abs()), n > 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().id() as i32;
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Value of the literal when its variable is assigned `value`.
    pub fn eval(self, value: bool) -> bool {
        value != self.is_negative()
    }
}

impl core::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals, kept sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Sorts and deduplicates `lits`; returns `None` for tautologies.
    /// The empty clause is representable (it marks unsatisfiability).
    pub fn normalized(mut lits: Vec<Lit>) -> Option<Clause> {
        lits.sort_unstable();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].var() == w[1].var() {
                return None;
            }
        }
        Some(Clause { lits })
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.lits.iter().any(|l| l.var() == v)
    }

    /// Three-valued evaluation under a partial assignment.
    pub fn eval(&self, a: &Assignment) -> Option<bool> {
        let mut undecided = false;
        for &l in &self.lits {
            match a.get(l.var()) {
                Some(v) if l.eval(v) => return Some(true),
                Some(_) => {}
                None => undecided = true,
            }
        }
        if undecided {
            None
        } else {
            Some(false)
        }
    }

    pub fn eval_total(&self, a: &Assignment) -> bool {
        self.eval(a).expect("clause variable unassigned")
    }
}

/// A total or partial assignment of truth values to variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new(num_vars: u32) -> Assignment {
        Assignment {
            values: alloc::vec![None; num_vars as usize],
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn set(&mut self, v: Var, value: bool) {
        self.values[v.index()] = Some(value);
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.values.get(v.index()).copied().flatten()
    }

    pub fn value(&self, v: Var) -> bool {
        self.get(v).expect("variable unassigned")
    }

    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        self.get(l.var()).map(|v| l.eval(v))
    }

    /// The literal of `v` as currently valued.
    pub fn lit_of(&self, v: Var) -> Option<Lit> {
        self.get(v).map(|b| Lit::new(v, b))
    }

    pub fn assigned_vars(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| (Var::from_index(i), b)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecError {
    /// A variable is declared both input and output.
    OverlappingSets(Var),
    /// A clause uses a variable beyond the declared count.
    VarOutOfRange(Var),
    /// The input contains an empty clause (trivially unsatisfiable).
    EmptyClause,
    DuplicateDeclaration(Var),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::OverlappingSets(v) => {
                write!(f, "variable {v} declared both input and output")
            }
            SpecError::VarOutOfRange(v) => write!(f, "variable {v} exceeds declared count"),
            SpecError::EmptyClause => write!(f, "empty clause: formula is unsatisfiable"),
            SpecError::DuplicateDeclaration(v) => write!(f, "variable {v} declared twice"),
        }
    }
}

/// A relational CNF specification `∃Y F(X,Y)` with ordered input set `X`
/// and output set `Y`. Variables above the declared sets are auxiliary
/// (Tseitin definitions added by the engine).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spec {
    num_vars: u32,
    clauses: Vec<Clause>,
    inputs: Vec<Var>,
    outputs: Vec<Var>,
    output_set: BTreeSet<Var>,
    input_set: BTreeSet<Var>,
}

impl Spec {
    /// Builds a specification, normalizing clauses: literals sorted and
    /// deduplicated, tautologies dropped. Empty clauses are rejected.
    pub fn new(
        num_vars: u32,
        clause_lits: Vec<Vec<Lit>>,
        inputs: Vec<Var>,
        outputs: Vec<Var>,
    ) -> Result<Spec, SpecError> {
        let input_set: BTreeSet<Var> = inputs.iter().copied().collect();
        let output_set: BTreeSet<Var> = outputs.iter().copied().collect();
        if input_set.len() != inputs.len() {
            let dup = inputs
                .iter()
                .copied()
                .find(|v| inputs.iter().filter(|w| *w == v).count() > 1)
                .unwrap();
            return Err(SpecError::DuplicateDeclaration(dup));
        }
        if output_set.len() != outputs.len() {
            let dup = outputs
                .iter()
                .copied()
                .find(|v| outputs.iter().filter(|w| *w == v).count() > 1)
                .unwrap();
            return Err(SpecError::DuplicateDeclaration(dup));
        }
        if let Some(&v) = input_set.intersection(&output_set).next() {
            return Err(SpecError::OverlappingSets(v));
        }
        for &v in inputs.iter().chain(outputs.iter()) {
            if v.id() > num_vars {
                return Err(SpecError::VarOutOfRange(v));
            }
        }
        let mut clauses = Vec::with_capacity(clause_lits.len());
        for lits in clause_lits {
            if lits.is_empty() {
                return Err(SpecError::EmptyClause);
            }
            for &l in &lits {
                if l.var().id() > num_vars {
                    return Err(SpecError::VarOutOfRange(l.var()));
                }
            }
            if let Some(c) = Clause::normalized(lits) {
                clauses.push(c);
            }
        }
        Ok(Spec {
            num_vars,
            clauses,
            inputs,
            outputs,
            output_set,
            input_set,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn inputs(&self) -> &[Var] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Var] {
        &self.outputs
    }

    pub fn is_input(&self, v: Var) -> bool {
        self.input_set.contains(&v)
    }

    pub fn is_output(&self, v: Var) -> bool {
        self.output_set.contains(&v)
    }

    /// Variables occurring in clauses.
    pub fn clause_vars(&self) -> BTreeSet<Var> {
        self.clauses
            .iter()
            .flat_map(|c| c.lits().iter().map(|l| l.var()))
            .collect()
    }

    /// Allocates a fresh auxiliary variable.
    pub fn fresh_var(&mut self) -> Var {
        self.num_vars += 1;
        Var::new(self.num_vars)
    }

    pub(crate) fn grow_vars(&mut self, num_vars: u32) {
        assert!(num_vars >= self.num_vars);
        self.num_vars = num_vars;
    }

    /// Appends a clause (normalized; tautologies silently dropped).
    pub fn push_clause(&mut self, lits: Vec<Lit>) {
        for &l in &lits {
            assert!(l.var().id() <= self.num_vars, "literal out of range");
        }
        if let Some(c) = Clause::normalized(lits) {
            self.clauses.push(c);
        }
    }

    pub fn push_unit(&mut self, l: Lit) {
        self.push_clause(alloc::vec![l]);
    }

    /// Substitutes `b` for `v`: clauses with the satisfied literal are
    /// removed, the falsified literal is deleted from the rest. An empty
    /// clause is retained as a marker of unsatisfiability.
    pub fn cofactor(&self, v: Var, b: bool) -> Spec {
        let sat = Lit::new(v, b);
        let mut clauses = Vec::with_capacity(self.clauses.len());
        for c in &self.clauses {
            if c.lits().contains(&sat) {
                continue;
            }
            let lits: Vec<Lit> = c.lits().iter().copied().filter(|l| l.var() != v).collect();
            clauses.push(Clause { lits });
        }
        Spec {
            num_vars: self.num_vars,
            clauses,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            output_set: self.output_set.clone(),
            input_set: self.input_set.clone(),
        }
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    /// Three-valued evaluation of the conjunction of clauses.
    pub fn eval(&self, a: &Assignment) -> Option<bool> {
        let mut undecided = false;
        for c in &self.clauses {
            match c.eval(a) {
                Some(false) => return Some(false),
                Some(true) => {}
                None => undecided = true,
            }
        }
        if undecided {
            None
        } else {
            Some(true)
        }
    }

    pub fn eval_total(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.eval_total(a))
    }
}
