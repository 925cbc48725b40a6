//! The synthesis pipeline: preprocessing, sampling, clustering, candidate
//! learning, ordering, and the verify/repair loop, plus configuration,
//! statistics, and cooperative timeout control.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cegar::{
    self, find_repair_candidates, repair_skf, self_substitute, still_counterexample, Cex,
    RepairMode, RepairOutcome, VerifyOutcome,
};
use crate::definability::{self, DefParams, DefxRow};
use crate::formula::{Spec, Var};
use crate::func::FuncStore;
use crate::learner::{
    self, candidate_skf, cluster_y, random_chunks, DecisionTree, DepGraph, SampleMatrix,
    SampleParams,
};
use crate::skolem::{self, FuncStatus, SkolemVec};
use crate::solver::Solver;
use crate::Abort;

/// Wall-clock source injected by the host; the core never reads a clock
/// itself. With no source, phase times are zero and timeouts never fire.
pub trait TimeSource {
    fn elapsed_ms(&self) -> u64;
}

/// The zero clock.
pub struct NoTime;

impl TimeSource for NoTime {
    fn elapsed_ms(&self) -> u64 {
        0
    }
}

/// Cooperative deadline checked at phase boundaries and loop iterations.
pub struct Ctrl<'a> {
    time: &'a dyn TimeSource,
    deadline_ms: Option<u64>,
}

impl<'a> Ctrl<'a> {
    pub fn new(time: &'a dyn TimeSource, timeout_ms: Option<u64>) -> Ctrl<'a> {
        Ctrl {
            time,
            deadline_ms: timeout_ms,
        }
    }

    pub fn unbounded() -> Ctrl<'static> {
        Ctrl {
            time: &NoTime,
            deadline_ms: None,
        }
    }

    pub fn elapsed_ms(&self) -> u64 {
        self.time.elapsed_ms()
    }

    pub fn check(&self) -> Result<(), Abort> {
        match self.deadline_ms {
            Some(d) if self.time.elapsed_ms() >= d => Err(Abort::Timeout),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Clustering {
    Graph,
    Random,
}

/// Engine configuration; the defaults are the best-performing setup
/// (k = 3, s = 5, lexicographic repair on).
#[derive(Clone, Debug)]
pub struct Config {
    /// Maximum edge distance when clustering outputs.
    pub k: u32,
    /// Maximum chunk size learned by one tree.
    pub s: usize,
    pub samples_per_var: usize,
    pub sample_min: usize,
    pub sample_max: usize,
    /// Rows drawn before the output bias adapts.
    pub adaptive_prefix: usize,
    pub impurity_threshold: f64,
    /// Repairs of one candidate before self-substitution takes over.
    pub self_sub_threshold: u32,
    /// Followup growth (times the initial candidate count) that triggers
    /// the switch to lexicographic selection.
    pub lex_ratio: u32,
    pub lex: bool,
    pub clustering: Clustering,
    pub seed: u64,
    pub timeout_ms: Option<u64>,
    /// Per-solver-call conflict budget; exceeding it makes the run unknown.
    pub conflict_budget: u64,
    pub core_min_passes: u32,
    pub proof_node_budget: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            k: 3,
            s: 5,
            samples_per_var: 50,
            sample_min: 1000,
            sample_max: 10000,
            adaptive_prefix: 500,
            impurity_threshold: 0.005,
            self_sub_threshold: 10,
            lex_ratio: 50,
            lex: true,
            clustering: Clustering::Graph,
            seed: 0,
            timeout_ms: None,
            conflict_budget: 50_000_000,
            core_min_passes: 1,
            proof_node_budget: 1 << 22,
        }
    }
}

impl Config {
    fn def_params(&self) -> DefParams {
        DefParams {
            conflict_budget: self.conflict_budget,
            core_min_passes: self.core_min_passes,
            proof_node_budget: self.proof_node_budget,
        }
    }

    fn sample_params(&self) -> SampleParams {
        SampleParams {
            per_var: self.samples_per_var,
            min: self.sample_min,
            max: self.sample_max,
            adaptive_prefix: self.adaptive_prefix,
            conflict_budget: self.conflict_budget,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RunStatus {
    SolvedPrerepair,
    SolvedRepair,
    SolvedSelfsub,
    Timeout,
    Unknown,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::SolvedPrerepair => "solved-prerepair",
            RunStatus::SolvedRepair => "solved-repair",
            RunStatus::SolvedSelfsub => "solved-selfsub",
            RunStatus::Timeout => "timeout",
            RunStatus::Unknown => "unknown",
        }
    }

    pub fn solved(self) -> bool {
        matches!(
            self,
            RunStatus::SolvedPrerepair | RunStatus::SolvedRepair | RunStatus::SolvedSelfsub
        )
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PhaseTimes {
    pub preprocess_ms: u64,
    pub sampling_ms: u64,
    pub learning_ms: u64,
    pub repair_ms: u64,
    pub ground_ms: u64,
    pub total_ms: u64,
}

/// Per-run accounting. The five per-variable counts partition the outputs
/// of a solved satisfiable instance.
#[derive(Clone, Debug)]
pub struct RunStats {
    pub status: RunStatus,
    pub input_unsat: bool,
    pub unates: u32,
    pub unique: u32,
    pub learned: u32,
    pub repaired: u32,
    pub self_substituted: u32,
    pub repair_rounds: u64,
    pub repairs_performed: u64,
    pub self_sub_events: u64,
    pub followup_additions: u64,
    pub lex_escalations: u64,
    pub extraction_skipped: u32,
    pub samples_drawn: usize,
    pub chunk_count: usize,
    pub phase: PhaseTimes,
}

impl RunStats {
    fn new() -> RunStats {
        RunStats {
            status: RunStatus::Unknown,
            input_unsat: false,
            unates: 0,
            unique: 0,
            learned: 0,
            repaired: 0,
            self_substituted: 0,
            repair_rounds: 0,
            repairs_performed: 0,
            self_sub_events: 0,
            followup_additions: 0,
            lex_escalations: 0,
            extraction_skipped: 0,
            samples_drawn: 0,
            chunk_count: 0,
            phase: PhaseTimes::default(),
        }
    }
}

/// One repair round, for the per-iteration trace.
#[derive(Clone, Debug)]
pub struct TraceEvent {
    pub round: u64,
    pub cex_size: usize,
    pub ind_len: usize,
    pub lex_mode: bool,
    pub repaired: Vec<Var>,
    pub self_substituted: Vec<Var>,
}

#[derive(Clone, Debug)]
pub struct SynthResult {
    /// Grounded vector (inputs-only functions) for solved runs; the raw
    /// vector otherwise.
    pub vector: SkolemVec,
    /// The vector as synthesized, before grounding.
    pub raw: SkolemVec,
    pub store: FuncStore,
    pub order: Vec<Var>,
    pub stats: RunStats,
    pub determined: Vec<Var>,
    pub defx: Vec<DefxRow>,
    pub chunks: Vec<Vec<Var>>,
    pub samples: Option<SampleMatrix>,
    pub trees: Vec<DecisionTree>,
    pub trace: Vec<TraceEvent>,
}

struct Engine<'a> {
    orig: &'a Spec,
    cfg: &'a Config,
    ctrl: Ctrl<'a>,
    working: Spec,
    store: FuncStore,
    vec: SkolemVec,
    deps: DepGraph,
    order: Vec<Var>,
    rng: ChaCha8Rng,
    per_var: BTreeMap<Var, u32>,
    mode: RepairMode,
    stats: RunStats,
    determined: Vec<Var>,
    defx: Vec<DefxRow>,
    chunks: Vec<Vec<Var>>,
    samples: Option<SampleMatrix>,
    trees: Vec<DecisionTree>,
    trace: Vec<TraceEvent>,
}

/// Runs the full pipeline on a parsed specification. Timeout and solver
/// budget exhaustion come back as `Ok` with the corresponding status and
/// partial statistics; `Err` is reserved for violated internal invariants.
pub fn synthesize(
    spec: &Spec,
    cfg: &Config,
    time: &dyn TimeSource,
) -> Result<SynthResult, Abort> {
    let store = FuncStore::new();
    let vec = SkolemVec::empty(spec.outputs(), &store);
    let mut eng = Engine {
        orig: spec,
        cfg,
        ctrl: Ctrl::new(time, cfg.timeout_ms),
        working: spec.clone(),
        store,
        vec,
        deps: DepGraph::new(),
        order: Vec::new(),
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        per_var: BTreeMap::new(),
        mode: RepairMode::Plain,
        stats: RunStats::new(),
        determined: Vec::new(),
        defx: Vec::new(),
        chunks: Vec::new(),
        samples: None,
        trees: Vec::new(),
        trace: Vec::new(),
    };
    match eng.run() {
        Ok(()) => {}
        Err(Abort::Timeout) => eng.stats.status = RunStatus::Timeout,
        Err(Abort::ConflictBudget) => eng.stats.status = RunStatus::Unknown,
        Err(e @ Abort::Internal(_)) => return Err(e),
    }
    eng.stats.phase.total_ms = eng.ctrl.elapsed_ms();
    eng.finish()
}

impl<'a> Engine<'a> {
    fn run(&mut self) -> Result<(), Abort> {
        let t0 = self.ctrl.elapsed_ms();
        self.ctrl.check()?;
        // a specification with no model admits any vector
        let mut sat0 = Solver::from_spec(self.orig);
        sat0.set_conflict_budget(self.cfg.conflict_budget);
        match sat0.solve(&[]) {
            crate::solver::SolveOutcome::Sat(_) => {}
            crate::solver::SolveOutcome::Unsat(_) => {
                self.stats.input_unsat = true;
                self.stats.status = RunStatus::SolvedPrerepair;
                self.order = self.orig.outputs().to_vec();
                return Ok(());
            }
            crate::solver::SolveOutcome::Unknown => return Err(Abort::ConflictBudget),
        }

        let (u, defx) = definability::unidef(
            &mut self.working,
            &mut self.store,
            &mut self.vec,
            &mut self.deps,
            &self.cfg.def_params(),
            &self.ctrl,
        )?;
        self.defx = defx;
        self.stats.extraction_skipped =
            self.defx.iter().filter(|r| r.extraction_skipped).count() as u32;
        self.determined = u.clone();
        self.stats.phase.preprocess_ms = self.ctrl.elapsed_ms() - t0;

        let u_set: BTreeSet<Var> = u.iter().copied().collect();
        if u_set.len() == self.orig.outputs().len() {
            // every output is unate or uniquely defined
            self.order = self.deps.find_order(self.orig.outputs())?;
            self.stats.status = RunStatus::SolvedPrerepair;
            return Ok(());
        }

        let t1 = self.ctrl.elapsed_ms();
        let samples = learner::get_samples(
            &self.working,
            &u_set,
            &self.cfg.sample_params(),
            &mut self.rng,
            &self.ctrl,
        )?;
        self.stats.samples_drawn = samples.len();
        self.stats.phase.sampling_ms = self.ctrl.elapsed_ms() - t1;

        let t2 = self.ctrl.elapsed_ms();
        self.chunks = match self.cfg.clustering {
            Clustering::Graph => cluster_y(&self.working, self.cfg.k, self.cfg.s, &u_set),
            Clustering::Random => {
                random_chunks(&self.working, self.cfg.s, &u_set, &mut self.rng)
            }
        };
        self.stats.chunk_count = self.chunks.len();
        for chunk in self.chunks.clone() {
            self.ctrl.check()?;
            let tree = candidate_skf(
                &samples,
                &self.working,
                &chunk,
                &mut self.store,
                &mut self.vec,
                &mut self.deps,
                self.cfg.impurity_threshold,
            );
            self.trees.push(tree);
        }
        self.samples = Some(samples);
        self.order = self.deps.find_order(self.orig.outputs())?;
        self.stats.phase.learning_ms = self.ctrl.elapsed_ms() - t2;

        let t3 = self.ctrl.elapsed_ms();
        self.repair_loop()?;
        self.stats.phase.repair_ms = self.ctrl.elapsed_ms() - t3;

        self.stats.status = if self.stats.self_sub_events > 0 {
            RunStatus::SolvedSelfsub
        } else if self.stats.repair_rounds > 0 {
            RunStatus::SolvedRepair
        } else {
            RunStatus::SolvedPrerepair
        };
        Ok(())
    }

    fn repair_loop(&mut self) -> Result<(), Abort> {
        if !self.cfg.lex {
            self.mode = RepairMode::Plain;
        }
        loop {
            self.ctrl.check()?;
            let cex = match cegar::verify(
                self.orig,
                &self.working,
                &self.store,
                &self.vec,
                self.cfg.conflict_budget,
            )? {
                VerifyOutcome::Valid => return Ok(()),
                VerifyOutcome::Counterexample(c) => c,
            };
            self.stats.repair_rounds += 1;
            let before: Vec<crate::func::FuncId> =
                self.vec.entries().iter().map(|e| e.func).collect();
            self.process_counterexample(&cex)?;
            if self.survives(&cex) && self.mode == RepairMode::Plain && self.cfg.lex {
                self.mode = RepairMode::Lex;
                self.stats.lex_escalations += 1;
                self.process_counterexample(&cex)?;
            }
            if self.survives(&cex) {
                // the counterexample resisted a full repair pass. The
                // order-first open output always admits a core repair: with
                // every later output fixed and the determined ones forced by
                // their retained definitions, its query re-evaluates the
                // falsifying primed assignment.
                if let Some(y0) = self
                    .order
                    .iter()
                    .copied()
                    .find(|v| !self.vec.is_final(*v))
                {
                    if self.per_var.get(&y0).copied().unwrap_or(0) > self.cfg.self_sub_threshold
                    {
                        self.self_sub(y0);
                    } else if let RepairOutcome::Repaired = repair_skf(
                        &self.working,
                        &cex,
                        &mut self.store,
                        &mut self.vec,
                        &self.order,
                        y0,
                        self.cfg.core_min_passes,
                        self.cfg.conflict_budget,
                    )? {
                        *self.per_var.entry(y0).or_insert(0) += 1;
                        self.stats.repairs_performed += 1;
                    }
                }
            }
            if self.survives(&cex) {
                // still alive: self-substitute its repair candidates once,
                // then hand control back to verification
                let ind = self.find_ind(&cex)?;
                if ind.is_empty() {
                    return Err(Abort::Internal(String::from(
                        "stalled counterexample with no repairable candidate",
                    )));
                }
                for y in ind {
                    self.self_sub(y);
                    if !self.survives(&cex) {
                        break;
                    }
                }
            }
            let after: Vec<crate::func::FuncId> =
                self.vec.entries().iter().map(|e| e.func).collect();
            if before == after {
                // deterministic state, unchanged vector: this round will
                // repeat forever
                return Err(Abort::Internal(String::from(
                    "repair round left the candidate vector unchanged",
                )));
            }
        }
    }

    fn survives(&self, cex: &Cex) -> bool {
        still_counterexample(self.orig, &self.store, &self.vec, &self.order, cex)
    }

    fn find_ind(&self, cex: &Cex) -> Result<Vec<Var>, Abort> {
        find_repair_candidates(
            &self.working,
            cex,
            &self.order,
            self.mode,
            &self.vec,
            self.cfg.conflict_budget,
        )
    }

    fn self_sub(&mut self, y: Var) {
        self_substitute(self.orig, &mut self.store, &mut self.vec, &self.order, y);
        self.per_var.insert(y, 0);
        self.stats.self_sub_events += 1;
        if let Some(ev) = self.trace.last_mut() {
            ev.self_substituted.push(y);
        }
    }

    fn process_counterexample(&mut self, cex: &Cex) -> Result<(), Abort> {
        let ind = self.find_ind(cex)?;
        self.trace.push(TraceEvent {
            round: self.stats.repair_rounds,
            cex_size: cex.size(),
            ind_len: ind.len(),
            lex_mode: self.mode == RepairMode::Lex,
            repaired: Vec::new(),
            self_substituted: Vec::new(),
        });
        if ind.is_empty() {
            return Err(Abort::Internal(String::from(
                "counterexample with no repairable candidate",
            )));
        }
        let initial_len = ind.len();
        let mut additions = 0usize;
        let mut queue: VecDeque<Var> = ind.into();
        let mut recomputed = false;
        while let Some(y) = queue.pop_front() {
            self.ctrl.check()?;
            if self.per_var.get(&y).copied().unwrap_or(0) > self.cfg.self_sub_threshold {
                self.self_sub(y);
                continue;
            }
            match repair_skf(
                &self.working,
                cex,
                &mut self.store,
                &mut self.vec,
                &self.order,
                y,
                self.cfg.core_min_passes,
                self.cfg.conflict_budget,
            )? {
                RepairOutcome::Repaired => {
                    *self.per_var.entry(y).or_insert(0) += 1;
                    self.stats.repairs_performed += 1;
                    if let Some(ev) = self.trace.last_mut() {
                        ev.repaired.push(y);
                    }
                }
                RepairOutcome::Followups(fs) => {
                    let fresh: Vec<Var> = fs
                        .iter()
                        .copied()
                        .filter(|v| !self.vec.is_final(*v) && !queue.contains(v))
                        .collect();
                    if fs.is_empty() {
                        // the true dead end: a satisfiable repair query with
                        // no candidate to blame instead
                        if self.mode == RepairMode::Plain && self.cfg.lex && !recomputed {
                            self.mode = RepairMode::Lex;
                            self.stats.lex_escalations += 1;
                            queue = VecDeque::from(self.find_ind(cex)?);
                            additions = 0;
                            recomputed = true;
                        } else {
                            self.self_sub(y);
                        }
                    } else if !fresh.is_empty() {
                        // followups already pending need no re-queueing
                        additions += fresh.len();
                        self.stats.followup_additions += fresh.len() as u64;
                        queue.extend(fresh);
                        if self.mode == RepairMode::Plain
                            && self.cfg.lex
                            && additions > self.cfg.lex_ratio as usize * initial_len
                        {
                            self.mode = RepairMode::Lex;
                            self.stats.lex_escalations += 1;
                            queue = VecDeque::from(self.find_ind(cex)?);
                            additions = 0;
                            recomputed = true;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Result<SynthResult, Abort> {
        for e in self.vec.entries() {
            match e.status {
                FuncStatus::UnatePos | FuncStatus::UnateNeg => self.stats.unates += 1,
                FuncStatus::Unique => self.stats.unique += 1,
                FuncStatus::Learned => self.stats.learned += 1,
                FuncStatus::Repaired => self.stats.repaired += 1,
                FuncStatus::SelfSubstituted => self.stats.self_substituted += 1,
                FuncStatus::Empty => {}
            }
        }
        let raw = self.vec.clone();
        let vector = if self.stats.status.solved() && !self.stats.input_unsat {
            let tg = self.ctrl.elapsed_ms();
            let g = skolem::ground(&mut self.store, &self.vec, &self.order)
                .map_err(|e| Abort::Internal(alloc::format!("{e}")))?;
            self.stats.phase.ground_ms = self.ctrl.elapsed_ms() - tg;
            g
        } else {
            raw.clone()
        };
        Ok(SynthResult {
            vector,
            raw,
            store: self.store,
            order: self.order,
            stats: self.stats,
            determined: self.determined,
            defx: self.defx,
            chunks: self.chunks,
            samples: self.samples,
            trees: self.trees,
            trace: self.trace,
        })
    }
}


#[cfg(test)]
mod timeout_tests {
    use super::*;
    use crate::formula::Lit;
    use alloc::vec;

    struct FrozenClock(u64);

    impl TimeSource for FrozenClock {
        fn elapsed_ms(&self) -> u64 {
            self.0
        }
    }

    #[test]
    fn expired_deadline_reports_timeout() {
        let f = Spec::new(
            2,
            vec![vec![Lit::from_dimacs(1), Lit::from_dimacs(2)]],
            vec![Var::new(1)],
            vec![Var::new(2)],
        )
        .unwrap();
        let cfg = Config {
            timeout_ms: Some(5),
            ..Config::default()
        };
        let r = synthesize(&f, &cfg, &FrozenClock(10)).unwrap();
        assert_eq!(r.stats.status, RunStatus::Timeout);
        assert!(!r.stats.status.solved());
    }
}

#[cfg(test)]
mod budget_tests {
    use super::*;
    use crate::formula::Lit;
    use alloc::vec;

    #[test]
    fn tiny_proof_budget_degrades_to_learning() {
        // y1 ↔ x1 is uniquely defined, but a one-node proof budget blocks
        // the extraction; the variable is learned instead and the run still
        // succeeds
        let f = Spec::new(
            2,
            vec![
                vec![Lit::from_dimacs(-2), Lit::from_dimacs(1)],
                vec![Lit::from_dimacs(2), Lit::from_dimacs(-1)],
            ],
            vec![Var::new(1)],
            vec![Var::new(2)],
        )
        .unwrap();
        let cfg = Config {
            proof_node_budget: 1,
            ..Config::default()
        };
        let r = synthesize(&f, &cfg, &NoTime).unwrap();
        assert!(r.stats.status.solved());
        assert_eq!(r.stats.unique, 0);
        assert!(r.stats.extraction_skipped >= 1);
        assert!(crate::oracle::vector_realizes(&f, &r.store, &r.vector));
    }
}
