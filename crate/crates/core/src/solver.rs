//! CDCL SAT solver with incremental solving under assumptions,
//! assumption-based unsatisfiable cores, optional resolution-proof logging,
//! and randomized-phase model sampling.
//!
//! The design is the usual two-watched-literal scheme with 1UIP learning,
//! VSIDS-style activities and Luby restarts. Learned clauses are never
//! deleted; at the formula sizes this engine handles, database reduction
//! buys nothing and keeping every clause keeps proof logging simple.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::{Assignment, Clause, Lit, Spec, Var};
use crate::proof::{Part, ProofBuilder, ProofId, ResolutionProof};

pub type ClauseRef = u32;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum LBool {
    True,
    False,
    Undef,
}

/// Result of a solve call. `Unsat` carries the assumption core: a subset of
/// the passed assumptions that already forces unsatisfiability (empty when
/// the clause database itself is unsatisfiable).
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Sat(Assignment),
    Unsat(Vec<Lit>),
    Unknown,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveOutcome::Unsat(_))
    }
}

/// Result of a proof-logging solve.
#[derive(Clone, Debug)]
pub enum ProofOutcome {
    Sat(Assignment),
    Unsat(ResolutionProof),
    /// Conflict or proof-node budget exhausted; see [`Solver::proof_exceeded`].
    Unknown,
}

struct ClauseData {
    lits: Vec<Lit>,
    proof: ProofId,
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: ClauseRef,
    blocker: Lit,
}

const NO_PROOF: ProofId = u32::MAX;

/// Indexed max-heap over variable activities (MiniSat's order heap).
struct VarHeap {
    heap: Vec<Var>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl VarHeap {
    fn new() -> VarHeap {
        VarHeap {
            heap: Vec::new(),
            pos: Vec::new(),
        }
    }

    fn grow(&mut self, n: usize) {
        self.pos.resize(n, ABSENT);
    }

    fn in_heap(&self, v: Var) -> bool {
        self.pos[v.index()] != ABSENT
    }

    fn before(act: &[f64], a: Var, b: Var) -> bool {
        let (aa, ab) = (act[a.index()], act[b.index()]);
        aa > ab || (aa == ab && a.id() < b.id())
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let p = (i - 1) / 2;
            if Self::before(act, v, self.heap[p]) {
                self.heap[i] = self.heap[p];
                self.pos[self.heap[i].index()] = i;
                i = p;
            } else {
                break;
            }
        }
        self.heap[i] = v;
        self.pos[v.index()] = i;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let c = if r < n && Self::before(act, self.heap[r], self.heap[l]) {
                r
            } else {
                l
            };
            if Self::before(act, self.heap[c], v) {
                self.heap[i] = self.heap[c];
                self.pos[self.heap[i].index()] = i;
                i = c;
            } else {
                break;
            }
        }
        self.heap[i] = v;
        self.pos[v.index()] = i;
    }

    fn insert(&mut self, v: Var, act: &[f64]) {
        if self.in_heap(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v.index()] = i;
        self.sift_up(i, act);
    }

    fn update(&mut self, v: Var, act: &[f64]) {
        if self.in_heap(v) {
            self.sift_up(self.pos[v.index()], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<Var> {
        let top = *self.heap.first()?;
        self.pos[top.index()] = ABSENT;
        let last = self.heap.pop().unwrap();
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last.index()] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn rebuild(&mut self, n: usize, act: &[f64]) {
        self.heap.clear();
        self.pos.clear();
        self.pos.resize(n, ABSENT);
        for i in 0..n {
            self.heap.push(Var::from_index(i));
            self.pos[i] = i;
        }
        if n > 1 {
            for i in (0..n / 2).rev() {
                self.sift_down(i, act);
            }
        }
    }
}

/// Luby restart sequence 1,1,2,1,1,2,4,... (`i` is 0-based).
fn luby(mut i: u64) -> u64 {
    loop {
        let mut k = 1u32;
        while (1u64 << k) - 1 < i + 1 {
            k += 1;
        }
        if (1u64 << k) - 1 == i + 1 {
            return 1u64 << (k - 1);
        }
        i = i + 1 - (1u64 << (k - 1));
    }
}

pub struct Solver {
    ok: bool,
    num_vars: usize,
    clauses: Vec<ClauseData>,
    watches: Vec<Vec<Watcher>>,
    assign: Vec<LBool>,
    phase: Vec<bool>,
    level: Vec<u32>,
    reason: Vec<Option<ClauseRef>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    seen: Vec<bool>,
    save_phases: bool,
    conflict_budget: u64,
    conflicts_total: u64,
    restart_base: u64,
    pending: Vec<ClauseRef>,
    pending_done: usize,
    proof: Option<ProofBuilder>,
    unit_proof: Vec<Option<ProofId>>,
    root_proof: Option<ProofId>,
    drat: Option<String>,
}

impl Solver {
    pub fn new(num_vars: u32) -> Solver {
        let mut s = Solver {
            ok: true,
            num_vars: 0,
            clauses: Vec::new(),
            watches: Vec::new(),
            assign: Vec::new(),
            phase: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            heap: VarHeap::new(),
            seen: Vec::new(),
            save_phases: true,
            conflict_budget: u64::MAX,
            conflicts_total: 0,
            restart_base: 100,
            pending: Vec::new(),
            pending_done: 0,
            proof: None,
            unit_proof: Vec::new(),
            root_proof: None,
            drat: None,
        };
        s.ensure_vars(num_vars);
        s
    }

    /// A solver that logs full resolution chains, capped at `node_budget`
    /// proof nodes. Proof solving is assumption-free.
    pub fn with_proof(num_vars: u32, node_budget: usize) -> Solver {
        let mut s = Solver::new(num_vars);
        s.proof = Some(ProofBuilder::new(node_budget));
        s
    }

    pub fn from_spec(spec: &Spec) -> Solver {
        Solver::from_clauses(spec.num_vars(), spec.clauses())
    }

    pub fn from_clauses(num_vars: u32, clauses: &[Clause]) -> Solver {
        let mut s = Solver::new(num_vars);
        for c in clauses {
            s.add_clause(c.lits());
        }
        s
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars as u32
    }

    pub fn ensure_vars(&mut self, n: u32) {
        let n = n as usize;
        if n <= self.num_vars {
            return;
        }
        self.num_vars = n;
        self.watches.resize(2 * n, Vec::new());
        self.assign.resize(n, LBool::Undef);
        self.phase.resize(n, false);
        self.level.resize(n, 0);
        self.reason.resize(n, None);
        self.activity.resize(n, 0.0);
        self.seen.resize(n, false);
        self.unit_proof.resize(n, None);
        self.heap.grow(n);
        for i in 0..n {
            let v = Var::from_index(i);
            if self.value_var(v) == LBool::Undef {
                self.heap.insert(v, &self.activity);
            }
        }
    }

    pub fn set_conflict_budget(&mut self, budget: u64) {
        self.conflict_budget = budget;
    }

    pub fn set_restart_base(&mut self, base: u64) {
        self.restart_base = base;
    }

    pub fn conflicts(&self) -> u64 {
        self.conflicts_total
    }

    pub fn enable_drat(&mut self) {
        self.drat = Some(String::new());
    }

    pub fn drat(&self) -> Option<&str> {
        self.drat.as_deref()
    }

    /// True when the proof-node budget was exhausted.
    pub fn proof_exceeded(&self) -> bool {
        self.proof.as_ref().is_some_and(|p| p.exceeded())
    }

    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        self.add_clause_part(lits, Part::A)
    }

    /// Adds a clause tagged with its interpolation partition. Tautologies
    /// are dropped. Unit and empty clauses are queued and enqueued at the
    /// start of the next solve, which keeps proof logging exact.
    pub fn add_clause_part(&mut self, lits: &[Lit], part: Part) -> bool {
        let c = match Clause::normalized(lits.to_vec()) {
            Some(c) => c,
            None => return true,
        };
        if let Some(&max) = c.lits().iter().map(|l| l.var()).max().as_ref() {
            self.ensure_vars(max.id());
        }
        let proof = match &mut self.proof {
            Some(p) => p.add_leaf(c.lits().to_vec(), part),
            None => NO_PROOF,
        };
        let cref = self.clauses.len() as ClauseRef;
        let len = c.len();
        self.clauses.push(ClauseData {
            lits: c.lits().to_vec(),
            proof,
        });
        if len >= 2 {
            self.attach(cref);
        } else {
            self.pending.push(cref);
        }
        true
    }

    fn attach(&mut self, cref: ClauseRef) {
        let (l0, l1) = {
            let c = &self.clauses[cref as usize];
            (c.lits[0], c.lits[1])
        };
        self.watches[(!l0).code()].push(Watcher { cref, blocker: l1 });
        self.watches[(!l1).code()].push(Watcher { cref, blocker: l0 });
    }

    fn value_var(&self, v: Var) -> LBool {
        self.assign[v.index()]
    }

    fn value_lit(&self, l: Lit) -> LBool {
        match self.assign[l.var().index()] {
            LBool::Undef => LBool::Undef,
            LBool::True => {
                if l.is_negative() {
                    LBool::False
                } else {
                    LBool::True
                }
            }
            LBool::False => {
                if l.is_negative() {
                    LBool::True
                } else {
                    LBool::False
                }
            }
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn new_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    fn enqueue(&mut self, l: Lit, reason: Option<ClauseRef>) {
        debug_assert_eq!(self.value_lit(l), LBool::Undef);
        let v = l.var();
        self.assign[v.index()] = if l.is_negative() {
            LBool::False
        } else {
            LBool::True
        };
        self.level[v.index()] = self.decision_level() as u32;
        self.reason[v.index()] = reason;
        self.trail.push(l);
    }

    fn backtrack_to(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let bound = self.trail_lim[level];
        for i in (bound..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var();
            if self.save_phases {
                self.phase[v.index()] = !l.is_negative();
            }
            self.assign[v.index()] = LBool::Undef;
            self.reason[v.index()] = None;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(bound);
        self.trail_lim.truncate(level);
        self.qhead = self.trail.len();
    }

    fn propagate(&mut self) -> Option<ClauseRef> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let mut ws = core::mem::take(&mut self.watches[p.code()]);
            let mut kept = 0;
            let mut i = 0;
            let mut conflict = None;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value_lit(w.blocker) == LBool::True {
                    ws[kept] = w;
                    kept += 1;
                    continue;
                }
                let cref = w.cref;
                let false_lit = !p;
                // normalize: the false watched literal sits at position 1
                {
                    let c = &mut self.clauses[cref as usize];
                    if c.lits[0] == false_lit {
                        c.lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref as usize].lits[0];
                if first != w.blocker && self.value_lit(first) == LBool::True {
                    ws[kept] = Watcher {
                        cref,
                        blocker: first,
                    };
                    kept += 1;
                    continue;
                }
                // look for a new literal to watch
                let len = self.clauses[cref as usize].lits.len();
                for k in 2..len {
                    let lk = self.clauses[cref as usize].lits[k];
                    if self.value_lit(lk) != LBool::False {
                        self.clauses[cref as usize].lits.swap(1, k);
                        self.watches[(!lk).code()].push(Watcher {
                            cref,
                            blocker: first,
                        });
                        continue 'watchers;
                    }
                }
                // unit or conflict
                ws[kept] = Watcher {
                    cref,
                    blocker: first,
                };
                kept += 1;
                if self.value_lit(first) == LBool::False {
                    while i < ws.len() {
                        ws[kept] = ws[i];
                        kept += 1;
                        i += 1;
                    }
                    conflict = Some(cref);
                } else {
                    self.enqueue(first, Some(cref));
                }
            }
            ws.truncate(kept);
            self.watches[p.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: Var) {
        self.activity[v.index()] += self.var_inc;
        if self.activity[v.index()] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.update(v, &self.activity);
    }

    fn decay(&mut self) {
        self.var_inc /= 0.95;
    }

    /// Proof of the level-0 unit fact for `v` (the singleton clause of its
    /// assigned literal), derived by resolving its reason chain.
    fn unit_proof_of(&mut self, v: Var) -> ProofId {
        if let Some(id) = self.unit_proof[v.index()] {
            return id;
        }
        debug_assert_eq!(self.level[v.index()], 0);
        let cref = self.reason[v.index()].expect("level-0 assignment without reason");
        let (lits, base) = {
            let c = &self.clauses[cref as usize];
            (c.lits.clone(), c.proof)
        };
        let mut chain: Vec<(Var, ProofId)> = Vec::new();
        for l in lits {
            if l.var() != v {
                let p = self.unit_proof_of(l.var());
                chain.push((l.var(), p));
            }
        }
        let id = if chain.is_empty() {
            base
        } else {
            self.proof.as_mut().unwrap().derive(base, &chain)
        };
        self.unit_proof[v.index()] = Some(id);
        id
    }

    /// Resolves every literal of a level-0 conflicting clause away with unit
    /// proofs, producing the empty clause.
    fn level0_refutation(&mut self, confl: ClauseRef) -> ProofId {
        let (lits, base) = {
            let c = &self.clauses[confl as usize];
            (c.lits.clone(), c.proof)
        };
        let mut chain: Vec<(Var, ProofId)> = Vec::new();
        for l in lits {
            let p = self.unit_proof_of(l.var());
            chain.push((l.var(), p));
        }
        self.proof.as_mut().unwrap().derive(base, &chain)
    }

    /// Enqueues clauses added as units (or detects an empty/contradicting
    /// clause). Returns false on a root-level conflict.
    fn flush_pending(&mut self) -> bool {
        while self.pending_done < self.pending.len() {
            let cref = self.pending[self.pending_done];
            self.pending_done += 1;
            let (lit0, proof, empty) = {
                let c = &self.clauses[cref as usize];
                (c.lits.first().copied(), c.proof, c.lits.is_empty())
            };
            if empty {
                if self.proof.is_some() {
                    self.root_proof = Some(proof);
                }
                self.ok = false;
                return false;
            }
            let l = lit0.unwrap();
            match self.value_lit(l) {
                LBool::True => {}
                LBool::Undef => self.enqueue(l, Some(cref)),
                LBool::False => {
                    if self.proof.is_some() {
                        let v = l.var();
                        let up = self.unit_proof_of(v);
                        let root = self.proof.as_mut().unwrap().derive(proof, &[(v, up)]);
                        self.root_proof = Some(root);
                    }
                    self.ok = false;
                    return false;
                }
            }
        }
        true
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first), the backjump level, and the clause's proof id.
    fn analyze(&mut self, confl: ClauseRef) -> (Vec<Lit>, usize, ProofId) {
        let mut learnt: Vec<Lit> = Vec::new();
        let mut counter = 0usize;
        let mut idx = self.trail.len();
        let mut cref = confl;
        let mut skip_first = false;
        let current = self.decision_level() as u32;
        let mut chain: Vec<(Var, ProofId)> = Vec::new();
        let mut zero_vars: BTreeSet<Var> = BTreeSet::new();
        let start_proof = self.clauses[confl as usize].proof;
        let asserting;
        loop {
            let lits = self.clauses[cref as usize].lits.clone();
            for &q in lits.iter().skip(skip_first as usize) {
                let v = q.var();
                if self.seen[v.index()] {
                    continue;
                }
                let lvl = self.level[v.index()];
                if lvl == 0 {
                    if self.proof.is_some() {
                        zero_vars.insert(v);
                    }
                    continue;
                }
                self.seen[v.index()] = true;
                self.bump(v);
                if lvl >= current {
                    counter += 1;
                } else {
                    learnt.push(q);
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var().index()] {
                    break;
                }
            }
            let p = self.trail[idx];
            let v = p.var();
            self.seen[v.index()] = false;
            counter -= 1;
            if counter == 0 {
                asserting = !p;
                break;
            }
            cref = self.reason[v.index()].expect("implied literal has a reason");
            if self.proof.is_some() {
                chain.push((v, self.clauses[cref as usize].proof));
            }
            skip_first = true;
            debug_assert_eq!(self.clauses[cref as usize].lits[0], p);
        }
        let mut out = vec![asserting];
        out.extend(learnt.iter().copied());
        for &l in &learnt {
            self.seen[l.var().index()] = false;
        }
        // backjump to the second-highest level; put that literal at slot 1
        let bt = if out.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..out.len() {
                if self.level[out[i].var().index()] > self.level[out[max_i].var().index()] {
                    max_i = i;
                }
            }
            out.swap(1, max_i);
            self.level[out[1].var().index()] as usize
        };
        let proof_id = if self.proof.is_some() {
            for v in zero_vars {
                let p = self.unit_proof_of(v);
                chain.push((v, p));
            }
            let id = self.proof.as_mut().unwrap().derive(start_proof, &chain);
            debug_assert_eq!(
                {
                    let mut a = self.proof.as_ref().unwrap().lits(id).to_vec();
                    a.sort_unstable();
                    a
                },
                {
                    let mut b = out.clone();
                    b.sort_unstable();
                    b
                }
            );
            id
        } else {
            NO_PROOF
        };
        (out, bt, proof_id)
    }

    /// Assumption core extraction: the subset of assumptions responsible for
    /// falsifying assumption `p` (which is included).
    fn analyze_final(&mut self, p: Lit) -> Vec<Lit> {
        let mut core = vec![p];
        if self.decision_level() == 0 {
            return core;
        }
        self.seen[p.var().index()] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let x = self.trail[i];
            let v = x.var();
            if !self.seen[v.index()] {
                continue;
            }
            match self.reason[v.index()] {
                None => {
                    // an assumption decision
                    if x != p {
                        core.push(x);
                    }
                }
                Some(cref) => {
                    let lits = self.clauses[cref as usize].lits.clone();
                    for &q in lits.iter().skip(1) {
                        if self.level[q.var().index()] > 0 {
                            self.seen[q.var().index()] = true;
                        }
                    }
                }
            }
            self.seen[v.index()] = false;
        }
        self.seen[p.var().index()] = false;
        core
    }

    fn install_learnt(&mut self, out: Vec<Lit>, proof: ProofId) {
        if let Some(d) = &mut self.drat {
            use core::fmt::Write;
            for &l in &out {
                let _ = write!(d, "{} ", l.to_dimacs());
            }
            d.push_str("0\n");
        }
        let cref = self.clauses.len() as ClauseRef;
        let first = out[0];
        let unit = out.len() == 1;
        self.clauses.push(ClauseData { lits: out, proof });
        if !unit {
            // learned units land at level 0 and stay assigned for good
            self.attach(cref);
        }
        self.enqueue(first, Some(cref));
    }

    fn pick_branch(&mut self) -> Option<Var> {
        loop {
            let v = self.heap.pop(&self.activity)?;
            if self.value_var(v) == LBool::Undef {
                return Some(v);
            }
        }
    }

    /// Total assignment after a SAT answer.
    pub fn model(&self) -> Assignment {
        let mut a = Assignment::new(self.num_vars as u32);
        for i in 0..self.num_vars {
            let v = Var::from_index(i);
            match self.assign[i] {
                LBool::True => a.set(v, true),
                LBool::False => a.set(v, false),
                LBool::Undef => {}
            }
        }
        a
    }

    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveOutcome {
        for l in assumptions {
            self.ensure_vars(l.var().id());
        }
        self.search(assumptions, None)
    }

    /// Refutation-producing solve over the current (partitioned) clause
    /// database. Requires [`Solver::with_proof`]; assumptions are not
    /// supported in this mode.
    pub fn solve_with_proof(&mut self) -> ProofOutcome {
        assert!(self.proof.is_some(), "enable proof logging first");
        match self.search(&[], None) {
            SolveOutcome::Sat(m) => ProofOutcome::Sat(m),
            SolveOutcome::Unknown => ProofOutcome::Unknown,
            SolveOutcome::Unsat(_) => {
                if self.proof_exceeded() {
                    return ProofOutcome::Unknown;
                }
                let root = self.root_proof.expect("root refutation recorded");
                let proof = self.proof.clone().unwrap().finish(root);
                ProofOutcome::Unsat(proof)
            }
        }
    }

    /// One model drawn with decision phases sampled from `bias` (probability
    /// of assigning a variable true), a randomized variable order, and
    /// frequent restarts that redraw all phases. Phase saving is off in this
    /// mode. Deterministic for a fixed `rng` state.
    pub fn sample_model(&mut self, bias: &[f64], rng: &mut ChaCha8Rng) -> SolveOutcome {
        assert!(bias.len() >= self.num_vars);
        self.save_phases = false;
        for i in 0..self.num_vars {
            self.activity[i] = rng.gen::<f64>();
            self.phase[i] = rng.gen_bool(bias[i]);
        }
        self.var_inc = 1.0;
        self.backtrack_to(0);
        self.heap.rebuild(self.num_vars, &self.activity);
        let saved_base = self.restart_base;
        self.restart_base = 16;
        let out = self.search(&[], Some((bias, rng)));
        self.restart_base = saved_base;
        self.save_phases = true;
        out
    }

    fn search(
        &mut self,
        assumptions: &[Lit],
        mut sampling: Option<(&[f64], &mut ChaCha8Rng)>,
    ) -> SolveOutcome {
        if !self.ok {
            return SolveOutcome::Unsat(Vec::new());
        }
        self.backtrack_to(0);
        self.qhead = 0;
        if !self.flush_pending() {
            return SolveOutcome::Unsat(Vec::new());
        }
        let budget_end = self.conflicts_total.saturating_add(self.conflict_budget);
        let mut since_restart: u64 = 0;
        let mut restart_num: u64 = 0;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts_total += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    if self.proof.is_some() {
                        self.root_proof = Some(self.level0_refutation(confl));
                    }
                    self.ok = false;
                    return SolveOutcome::Unsat(Vec::new());
                }
                let (out, bt, proof) = self.analyze(confl);
                self.backtrack_to(bt);
                self.install_learnt(out, proof);
                self.decay();
                if self.proof_exceeded() {
                    return SolveOutcome::Unknown;
                }
            } else {
                if self.conflicts_total >= budget_end {
                    return SolveOutcome::Unknown;
                }
                if since_restart >= luby(restart_num) * self.restart_base {
                    restart_num += 1;
                    since_restart = 0;
                    self.backtrack_to(0);
                    if let Some((bias, rng)) = &mut sampling {
                        for i in 0..self.num_vars {
                            self.phase[i] = rng.gen_bool(bias[i]);
                        }
                    }
                    continue;
                }
                if self.decision_level() < assumptions.len() {
                    let p = assumptions[self.decision_level()];
                    match self.value_lit(p) {
                        LBool::True => {
                            self.new_level();
                        }
                        LBool::False => {
                            let core = self.analyze_final(p);
                            return SolveOutcome::Unsat(core);
                        }
                        LBool::Undef => {
                            self.new_level();
                            self.enqueue(p, None);
                        }
                    }
                    continue;
                }
                match self.pick_branch() {
                    None => return SolveOutcome::Sat(self.model()),
                    Some(v) => {
                        self.new_level();
                        let ph = self.phase[v.index()];
                        self.enqueue(Lit::new(v, ph), None);
                    }
                }
            }
        }
    }
}

/// Draws `n` models of `f` with per-variable phase bias; every returned
/// assignment satisfies `f`. Deterministic for a fixed seed; no uniformity
/// is guaranteed.
pub fn sample(
    f: &Spec,
    bias: &dyn Fn(Var) -> f64,
    n: usize,
    seed: u64,
) -> Result<Vec<Assignment>, crate::Abort> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut solver = Solver::from_spec(f);
    let biases: Vec<f64> = (0..f.num_vars())
        .map(|i| bias(Var::from_index(i as usize)))
        .collect();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        match solver.sample_model(&biases, &mut rng) {
            SolveOutcome::Sat(m) => out.push(m),
            SolveOutcome::Unsat(_) => {
                return Err(crate::Abort::Internal(String::from(
                    "sampling an unsatisfiable formula",
                )))
            }
            SolveOutcome::Unknown => return Err(crate::Abort::ConflictBudget),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::Part;

    fn lit(n: i32) -> Lit {
        Lit::from_dimacs(n)
    }

    fn example_clauses() -> Vec<Vec<Lit>> {
        vec![
            vec![lit(1), lit(2), lit(3)],
            vec![lit(2), lit(-3), lit(4)],
            vec![lit(5), lit(6)],
            vec![lit(-5), lit(-6)],
        ]
    }

    #[test]
    fn unit_conflict_core() {
        let mut s = Solver::new(1);
        s.add_clause(&[lit(1)]);
        match s.solve(&[lit(-1)]) {
            SolveOutcome::Unsat(core) => assert_eq!(core, vec![lit(-1)]),
            _ => panic!("expected unsat"),
        }
    }

    #[test]
    fn example_formula_model() {
        let mut s = Solver::new(6);
        for c in example_clauses() {
            s.add_clause(&c);
        }
        match s.solve(&[]) {
            SolveOutcome::Sat(m) => {
                for c in example_clauses() {
                    assert!(c.iter().any(|l| m.lit_value(*l) == Some(true)));
                }
            }
            _ => panic!("expected sat"),
        }
    }

    #[test]
    fn two_literal_core() {
        let mut s = Solver::new(2);
        s.add_clause(&[lit(1), lit(2)]);
        s.add_clause(&[lit(-1), lit(-2)]);
        match s.solve(&[lit(1), lit(2)]) {
            SolveOutcome::Unsat(core) => {
                assert_eq!(core.len(), 2);
                assert!(core.contains(&lit(1)) && core.contains(&lit(2)));
            }
            _ => panic!("expected unsat"),
        }
    }

    #[test]
    fn proof_single_resolution() {
        let mut s = Solver::with_proof(1, 1 << 20);
        s.add_clause_part(&[lit(1)], Part::A);
        s.add_clause_part(&[lit(-1)], Part::B);
        match s.solve_with_proof() {
            ProofOutcome::Unsat(p) => {
                p.replay().unwrap();
                assert_eq!(p.node_count(), 3);
            }
            _ => panic!("expected unsat"),
        }
    }

    #[test]
    fn proof_on_satisfiable_partition() {
        let mut s = Solver::with_proof(2, 1 << 20);
        s.add_clause_part(&[lit(1), lit(2)], Part::A);
        s.add_clause_part(&[lit(1), lit(2)], Part::B);
        assert!(matches!(s.solve_with_proof(), ProofOutcome::Sat(_)));
    }

    #[test]
    fn proof_replays_on_nontrivial_refutation() {
        // Padoa-style formula for y2 in (y1∨y2)∧(¬y1∨¬y2) with S={y1}:
        // A = F(1,2) ∧ (2), B = F(3,4) ∧ (1↔3) ∧ (¬4).
        let mut s = Solver::with_proof(4, 1 << 20);
        s.add_clause_part(&[lit(1), lit(2)], Part::A);
        s.add_clause_part(&[lit(-1), lit(-2)], Part::A);
        s.add_clause_part(&[lit(2)], Part::A);
        s.add_clause_part(&[lit(3), lit(4)], Part::B);
        s.add_clause_part(&[lit(-3), lit(-4)], Part::B);
        s.add_clause_part(&[lit(-1), lit(3)], Part::B);
        s.add_clause_part(&[lit(1), lit(-3)], Part::B);
        s.add_clause_part(&[lit(-4)], Part::B);
        match s.solve_with_proof() {
            ProofOutcome::Unsat(p) => p.replay().unwrap(),
            _ => panic!("expected unsat"),
        }
    }

    #[test]
    fn sample_respects_forced_literal() {
        let f = Spec::new(1, vec![vec![lit(1)]], vec![], vec![Var::new(1)]).unwrap();
        let models = sample(&f, &|_| 0.1, 10, 7).unwrap();
        assert_eq!(models.len(), 10);
        for m in models {
            assert_eq!(m.get(Var::new(1)), Some(true));
        }
    }

    #[test]
    fn sample_models_satisfy_formula() {
        let f = Spec::new(
            2,
            vec![vec![lit(1), lit(2)]],
            vec![Var::new(1)],
            vec![Var::new(2)],
        )
        .unwrap();
        for m in sample(&f, &|_| 0.5, 100, 3).unwrap() {
            assert!(f.eval_total(&m));
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let f = Spec::new(
            3,
            vec![vec![lit(1), lit(2)], vec![lit(-2), lit(3)]],
            vec![Var::new(1)],
            vec![Var::new(2), Var::new(3)],
        )
        .unwrap();
        let a = sample(&f, &|_| 0.5, 50, 11).unwrap();
        let b = sample(&f, &|_| 0.5, 50, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn luby_sequence_prefix() {
        let expect = [1u64, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(luby(i as u64), e, "luby({i})");
        }
    }
}

/// Deletion-based core shrinking on an already-loaded solver: each
/// droppable literal is removed when the remainder still solves UNSAT,
/// for up to `passes` sweeps. `fixed` assumptions are always kept and
/// never reported. Best effort: a budget hit just stops the shrinking.
pub fn shrink_core(solver: &mut Solver, fixed: &[Lit], core: Vec<Lit>, passes: u32) -> Vec<Lit> {
    let mut core = core;
    for _ in 0..passes {
        let mut changed = false;
        let snapshot = core.clone();
        for &cand in &snapshot {
            if core.len() <= 1 || !core.contains(&cand) {
                continue;
            }
            let mut assumptions = fixed.to_vec();
            assumptions.extend(core.iter().copied().filter(|&l| l != cand));
            match solver.solve(&assumptions) {
                SolveOutcome::Unsat(sub) => {
                    // keep only the literals the sub-core still needs
                    core.retain(|l| sub.contains(l));
                    changed = true;
                }
                SolveOutcome::Sat(_) => {}
                SolveOutcome::Unknown => return core,
            }
        }
        if !changed {
            break;
        }
    }
    core
}
