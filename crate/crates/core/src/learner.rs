//! Candidate learning: sampling orchestration with an adaptive output bias,
//! primal-graph clustering of outputs, multi-label CART decision trees with
//! Gini impurity, candidate extraction from tree paths, and the dependency
//! bookkeeping that yields the total order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engine::Ctrl;
use crate::formula::{Spec, Var};
use crate::func::{FuncId, FuncStore};
use crate::skolem::{FuncStatus, SkolemVec};
use crate::solver::{SolveOutcome, Solver};
use crate::Abort;

/// Satisfying assignments restricted to X ∪ Y, one column per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleMatrix {
    cols: Vec<Var>,
    col_of: BTreeMap<Var, usize>,
    rows: Vec<Vec<bool>>,
}

impl SampleMatrix {
    pub fn new(cols: Vec<Var>) -> SampleMatrix {
        let col_of = cols.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        SampleMatrix {
            cols,
            col_of,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> &[Var] {
        &self.cols
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push_row(&mut self, row: Vec<bool>) {
        assert_eq!(row.len(), self.cols.len());
        self.rows.push(row);
    }

    pub fn col_index(&self, v: Var) -> usize {
        self.col_of[&v]
    }

    pub fn value(&self, row: usize, v: Var) -> bool {
        self.rows[row][self.col_of[&v]]
    }

    /// Fraction of ones in a column.
    pub fn ones_ratio(&self, v: Var) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        let c = self.col_of[&v];
        let ones = self.rows.iter().filter(|r| r[c]).count();
        ones as f64 / self.rows.len() as f64
    }
}

/// Sampling knobs; see the engine configuration for the defaults.
#[derive(Clone, Copy, Debug)]
pub struct SampleParams {
    pub per_var: usize,
    pub min: usize,
    pub max: usize,
    /// Rows drawn at bias 0.5 before the per-output bias adapts.
    pub adaptive_prefix: usize,
    pub conflict_budget: u64,
}

/// Draws models of the working formula: inputs at phase bias 0.5 throughout;
/// outputs start at 0.5 and, after the adaptive prefix, move to 0.9 or 0.1
/// when their observed ones-ratio is ≥ 0.8 or ≤ 0.2.
pub fn get_samples(
    f: &Spec,
    u: &BTreeSet<Var>,
    params: &SampleParams,
    rng: &mut ChaCha8Rng,
    ctrl: &Ctrl,
) -> Result<SampleMatrix, Abort> {
    let learn_vars = f.outputs().iter().filter(|v| !u.contains(v)).count();
    let n = (params.per_var * learn_vars).clamp(params.min, params.max);
    let mut cols: Vec<Var> = f.inputs().to_vec();
    cols.extend(f.outputs().iter().copied());
    let mut matrix = SampleMatrix::new(cols.clone());
    let mut solver = Solver::from_spec(f);
    solver.set_conflict_budget(params.conflict_budget);
    let mut bias = vec![0.5f64; f.num_vars() as usize];
    let prefix = params.adaptive_prefix.min(n);
    for i in 0..n {
        ctrl.check()?;
        if i == prefix && prefix < n {
            for &y in f.outputs() {
                let q = matrix.ones_ratio(y);
                bias[y.index()] = if q >= 0.8 {
                    0.9
                } else if q <= 0.2 {
                    0.1
                } else {
                    0.5
                };
            }
        }
        match solver.sample_model(&bias, rng) {
            SolveOutcome::Sat(m) => {
                let row: Vec<bool> = cols.iter().map(|&v| m.value(v)).collect();
                matrix.push_row(row);
            }
            SolveOutcome::Unsat(_) => {
                return Err(Abort::Internal(String::from(
                    "sampling an unsatisfiable working formula",
                )))
            }
            SolveOutcome::Unknown => return Err(Abort::ConflictBudget),
        }
    }
    Ok(matrix)
}

/// Partitions the non-determined outputs into chunks of size ≤ `s` by
/// k-hop neighborhoods in the primal graph (outputs co-occurring in a
/// clause are adjacent; determined variables are not vertices). For each
/// unassigned output in declared order the hop radius shrinks until the
/// neighborhood fits, then the chunk's vertices leave the graph.
pub fn cluster_y(f: &Spec, k: u32, s: usize, u: &BTreeSet<Var>) -> Vec<Vec<Var>> {
    assert!(s >= 1);
    let verts: Vec<Var> = f.outputs().iter().copied().filter(|v| !u.contains(v)).collect();
    let vert_set: BTreeSet<Var> = verts.iter().copied().collect();
    let mut adj: BTreeMap<Var, BTreeSet<Var>> = verts.iter().map(|&v| (v, BTreeSet::new())).collect();
    for c in f.clauses() {
        let in_clause: Vec<Var> = c
            .lits()
            .iter()
            .map(|l| l.var())
            .filter(|v| vert_set.contains(v))
            .collect();
        for i in 0..in_clause.len() {
            for j in i + 1..in_clause.len() {
                if in_clause[i] != in_clause[j] {
                    adj.get_mut(&in_clause[i]).unwrap().insert(in_clause[j]);
                    adj.get_mut(&in_clause[j]).unwrap().insert(in_clause[i]);
                }
            }
        }
    }
    let order: BTreeMap<Var, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut alive: BTreeSet<Var> = vert_set;
    let mut chunks: Vec<Vec<Var>> = Vec::new();
    // the hop radius only ever shrinks; it is not reset between chunks
    let mut radius = k;
    for &y in &verts {
        if !alive.contains(&y) {
            continue;
        }
        let chunk = loop {
            let nb = k_hop(&adj, &alive, y, radius);
            if nb.len() <= s {
                break nb;
            }
            debug_assert!(radius > 0, "0-hop neighborhood is the vertex itself");
            radius -= 1;
        };
        let mut members: Vec<Var> = chunk.iter().copied().collect();
        members.sort_by_key(|v| order[v]);
        for &m in &members {
            alive.remove(&m);
        }
        chunks.push(members);
    }
    chunks
}

/// Closed ≤`k`-hop neighborhood of `y` among `alive` vertices.
fn k_hop(adj: &BTreeMap<Var, BTreeSet<Var>>, alive: &BTreeSet<Var>, y: Var, k: u32) -> BTreeSet<Var> {
    let mut seen = BTreeSet::from([y]);
    let mut frontier = vec![y];
    for _ in 0..k {
        let mut next = Vec::new();
        for v in frontier {
            for &w in &adj[&v] {
                if alive.contains(&w) && seen.insert(w) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// Random chunking baseline: a seeded shuffle of the non-determined outputs
/// split into consecutive groups of size ≤ `s`.
pub fn random_chunks(f: &Spec, s: usize, u: &BTreeSet<Var>, rng: &mut ChaCha8Rng) -> Vec<Vec<Var>> {
    let mut verts: Vec<Var> = f.outputs().iter().copied().filter(|v| !u.contains(v)).collect();
    // Fisher-Yates
    for i in (1..verts.len()).rev() {
        let j = rng.gen_range(0..=i);
        verts.swap(i, j);
    }
    verts.chunks(s).map(|c| c.to_vec()).collect()
}

#[derive(Clone, Debug)]
pub enum TreeNode {
    Leaf { class: Vec<bool> },
    Split { var: Var, lo: u32, hi: u32 },
}

/// A binary decision tree over variable-valued features with bit-vector
/// class labels (one bit per chunk variable).
#[derive(Clone, Debug)]
pub struct DecisionTree {
    nodes: Vec<TreeNode>,
    root: u32,
    labels: Vec<Var>,
}

impl DecisionTree {
    pub fn labels(&self) -> &[Var] {
        &self.labels
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn classify(&self, value_of: &dyn Fn(Var) -> bool) -> &[bool] {
        let mut cur = self.root;
        loop {
            match &self.nodes[cur as usize] {
                TreeNode::Leaf { class } => return class,
                TreeNode::Split { var, lo, hi } => {
                    cur = if value_of(*var) { *hi } else { *lo };
                }
            }
        }
    }

    /// Root-to-leaf paths as (tested literal values, class) pairs.
    pub fn paths(&self) -> Vec<(Vec<(Var, bool)>, Vec<bool>)> {
        let mut out = Vec::new();
        let mut stack = vec![(self.root, Vec::new())];
        while let Some((n, path)) = stack.pop() {
            match &self.nodes[n as usize] {
                TreeNode::Leaf { class } => out.push((path, class.clone())),
                TreeNode::Split { var, lo, hi } => {
                    let mut left = path.clone();
                    left.push((*var, false));
                    let mut right = path;
                    right.push((*var, true));
                    stack.push((*lo, left));
                    stack.push((*hi, right));
                }
            }
        }
        out
    }

    /// Graphviz dump for debugging.
    pub fn to_dot(&self, namer: &dyn Fn(Var) -> String) -> String {
        use core::fmt::Write;
        let mut s = String::from("digraph dt {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            match n {
                TreeNode::Leaf { class } => {
                    let bits: String = class.iter().map(|&b| if b { '1' } else { '0' }).collect();
                    let _ = writeln!(s, "  n{i} [shape=box,label=\"{bits}\"];");
                }
                TreeNode::Split { var, lo, hi } => {
                    let _ = writeln!(s, "  n{i} [label=\"{}\"];", namer(*var));
                    let _ = writeln!(s, "  n{i} -> n{lo} [label=\"0\"];");
                    let _ = writeln!(s, "  n{i} -> n{hi} [label=\"1\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

fn gini(counts: &BTreeMap<&[bool], usize>, total: usize) -> f64 {
    let mut g = 1.0;
    for &c in counts.values() {
        let p = c as f64 / total as f64;
        g -= p * p;
    }
    g
}

struct TreeBuilder<'a> {
    samples: &'a SampleMatrix,
    feat_cols: Vec<(Var, usize)>,
    label_cols: Vec<usize>,
    threshold: f64,
    nodes: Vec<TreeNode>,
}

impl<'a> TreeBuilder<'a> {
    fn class_of(&self, row: usize) -> Vec<bool> {
        self.label_cols
            .iter()
            .map(|&c| self.samples.rows()[row][c])
            .collect()
    }

    fn build(&mut self, rows: &[usize], used: &BTreeSet<Var>) -> u32 {
        let classes: Vec<Vec<bool>> = rows.iter().map(|&r| self.class_of(r)).collect();
        let mut counts: BTreeMap<&[bool], usize> = BTreeMap::new();
        for c in &classes {
            *counts.entry(c.as_slice()).or_insert(0) += 1;
        }
        let total = rows.len();
        let g0 = gini(&counts, total);
        let mut best: Option<(f64, Var, usize)> = None;
        if counts.len() > 1 {
            for &(var, col) in &self.feat_cols {
                if used.contains(&var) {
                    continue;
                }
                let mut lo_counts: BTreeMap<&[bool], usize> = BTreeMap::new();
                let mut hi_counts: BTreeMap<&[bool], usize> = BTreeMap::new();
                let mut lo_n = 0usize;
                for (i, &r) in rows.iter().enumerate() {
                    if self.samples.rows()[r][col] {
                        *hi_counts.entry(classes[i].as_slice()).or_insert(0) += 1;
                    } else {
                        *lo_counts.entry(classes[i].as_slice()).or_insert(0) += 1;
                        lo_n += 1;
                    }
                }
                let hi_n = total - lo_n;
                if lo_n == 0 || hi_n == 0 {
                    continue;
                }
                let weighted = (lo_n as f64 * gini(&lo_counts, lo_n)
                    + hi_n as f64 * gini(&hi_counts, hi_n))
                    / total as f64;
                let decrease = g0 - weighted;
                // strict improvement keeps the lowest variable id on ties
                if best.map_or(true, |(d, _, _)| decrease > d) {
                    best = Some((decrease, var, col));
                }
            }
        }
        match best {
            Some((decrease, var, col)) if decrease >= self.threshold => {
                let (lo_rows, hi_rows): (Vec<usize>, Vec<usize>) =
                    rows.iter().partition(|&&r| !self.samples.rows()[r][col]);
                let mut used2 = used.clone();
                used2.insert(var);
                let lo = self.build(&lo_rows, &used2);
                let hi = self.build(&hi_rows, &used2);
                let id = self.nodes.len() as u32;
                self.nodes.push(TreeNode::Split { var, lo, hi });
                id
            }
            _ => {
                // majority class; ties go to the lexicographically smallest
                let mut best_class: Option<(&[bool], usize)> = None;
                for (&class, &n) in &counts {
                    if best_class.map_or(true, |(_, bn)| n > bn) {
                        best_class = Some((class, n));
                    }
                }
                let class = best_class.map(|(c, _)| c.to_vec()).unwrap_or_default();
                let id = self.nodes.len() as u32;
                self.nodes.push(TreeNode::Leaf { class });
                id
            }
        }
    }
}

/// CART-style top-down induction: classes are the distinct label
/// bit-vectors, splits maximize Gini impurity decrease (ties to the lowest
/// variable id), recursion stops on pure nodes or when the best decrease
/// falls below `threshold`.
pub fn create_decision_tree(
    samples: &SampleMatrix,
    featset: &[Var],
    chunk: &[Var],
    threshold: f64,
) -> DecisionTree {
    assert!(!samples.is_empty(), "need at least one sample");
    assert!(!featset.is_empty(), "need at least one feature");
    let mut builder = TreeBuilder {
        samples,
        feat_cols: featset.iter().map(|&v| (v, samples.col_index(v))).collect(),
        label_cols: chunk.iter().map(|&v| samples.col_index(v)).collect(),
        threshold,
        nodes: Vec::new(),
    };
    let rows: Vec<usize> = (0..samples.len()).collect();
    let root = builder.build(&rows, &BTreeSet::new());
    DecisionTree {
        nodes: builder.nodes,
        root,
        labels: chunk.to_vec(),
    }
}

/// The `≺_d` bookkeeping: `dependson[y]` holds the output variables the
/// candidate for `y` mentions.
#[derive(Clone, Debug, Default)]
pub struct DepGraph {
    map: BTreeMap<Var, BTreeSet<Var>>,
}

impl DepGraph {
    pub fn new() -> DepGraph {
        DepGraph::default()
    }

    pub fn add(&mut self, from: Var, to: Var) {
        assert_ne!(from, to, "self-dependency");
        self.map.entry(from).or_default().insert(to);
    }

    pub fn dependencies(&self, v: Var) -> BTreeSet<Var> {
        self.map.get(&v).cloned().unwrap_or_default()
    }

    /// Transitive closure of `dependson[v]`.
    pub fn reaches(&self, v: Var) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<Var> = self.map.get(&v).map(|s| s.iter().copied().collect()).unwrap_or_default();
        while let Some(w) = stack.pop() {
            if out.insert(w) {
                if let Some(next) = self.map.get(&w) {
                    stack.extend(next.iter().copied());
                }
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.map.keys().all(|&v| !self.reaches(v).contains(&v))
    }

    /// A topological extension of `≺_d`: `y` precedes everything its
    /// candidate depends on; ties break towards reverse declared order.
    pub fn find_order(&self, outputs: &[Var]) -> Result<Vec<Var>, Abort> {
        let pos: BTreeMap<Var, usize> = outputs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut indeg: BTreeMap<Var, usize> = outputs.iter().map(|&v| (v, 0)).collect();
        for (&from, tos) in &self.map {
            if !pos.contains_key(&from) {
                continue;
            }
            for to in tos {
                if let Some(d) = indeg.get_mut(to) {
                    *d += 1;
                }
            }
        }
        // max-declared-position available vertex first
        let mut avail: BTreeSet<usize> = indeg
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(v, _)| pos[v])
            .collect();
        let mut order = Vec::with_capacity(outputs.len());
        while let Some(&p) = avail.iter().next_back() {
            avail.remove(&p);
            let v = outputs[p];
            order.push(v);
            if let Some(tos) = self.map.get(&v) {
                for to in tos {
                    if let Some(d) = indeg.get_mut(to) {
                        *d -= 1;
                        if *d == 0 {
                            avail.insert(pos[to]);
                        }
                    }
                }
            }
        }
        if order.len() != outputs.len() {
            return Err(Abort::Internal(format!(
                "dependency cycle among outputs ({} of {} ordered)",
                order.len(),
                outputs.len()
            )));
        }
        Ok(order)
    }
}

/// Learns candidates for every variable of `chunk` from one multi-label
/// tree. The feature set is X plus every output outside the chunk from
/// which no chunk variable is reachable in the dependency closure; using
/// the closure (not just direct dependents) keeps `≺_d` acyclic.
pub fn candidate_skf(
    samples: &SampleMatrix,
    f: &Spec,
    chunk: &[Var],
    store: &mut FuncStore,
    vec: &mut SkolemVec,
    deps: &mut DepGraph,
    threshold: f64,
) -> DecisionTree {
    let chunk_set: BTreeSet<Var> = chunk.iter().copied().collect();
    let mut featset: Vec<Var> = f.inputs().to_vec();
    for &yj in f.outputs() {
        if chunk_set.contains(&yj) {
            continue;
        }
        let reach = deps.reaches(yj);
        if reach.intersection(&chunk_set).next().is_none() {
            featset.push(yj);
        }
    }
    let tree = create_decision_tree(samples, &featset, chunk, threshold);
    let paths = tree.paths();
    for (bit, &yi) in chunk.iter().enumerate() {
        let one_paths: Vec<&(Vec<(Var, bool)>, Vec<bool>)> =
            paths.iter().filter(|(_, class)| class[bit]).collect();
        let psi = if one_paths.is_empty() {
            store.constant(false)
        } else if one_paths.len() == paths.len() {
            store.constant(true)
        } else {
            let mut disj = Vec::with_capacity(one_paths.len());
            for (path, _) in one_paths {
                let conj: Vec<FuncId> = path
                    .iter()
                    .map(|&(v, val)| {
                        let leaf = store.var(v);
                        if val {
                            leaf
                        } else {
                            store.not(leaf)
                        }
                    })
                    .collect();
                disj.push(store.and_all(conj));
            }
            store.or_all(disj)
        };
        vec.set(yi, psi, FuncStatus::Learned);
        for v in store.support(psi) {
            if f.is_output(v) {
                deps.add(yi, v);
            }
        }
    }
    debug_assert!(deps.is_acyclic());
    tree
}
