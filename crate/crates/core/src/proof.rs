//! Resolution proofs logged by the solver: leaves are input clauses tagged
//! with their partition, internal nodes are binary resolutions. Proofs feed
//! Craig interpolation and can be replayed for validation.

use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::{Lit, Var};

/// Partition tag for interpolation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Part {
    A,
    B,
}

pub type ProofId = u32;

#[derive(Clone, Debug)]
pub enum ProofNode {
    Leaf {
        lits: Vec<Lit>,
        part: Part,
    },
    Resolve {
        pivot: Var,
        left: ProofId,
        right: ProofId,
        lits: Vec<Lit>,
    },
}

impl ProofNode {
    pub fn lits(&self) -> &[Lit] {
        match self {
            ProofNode::Leaf { lits, .. } => lits,
            ProofNode::Resolve { lits, .. } => lits,
        }
    }
}

/// Resolvent of two sorted clauses on `pivot`; the complementary pivot
/// literals are removed, everything else is merged.
pub fn resolve(a: &[Lit], b: &[Lit], pivot: Var) -> Vec<Lit> {
    debug_assert!(a.iter().any(|l| l.var() == pivot));
    debug_assert!(b.iter().any(|l| l.var() == pivot));
    debug_assert!({
        let la = a.iter().find(|l| l.var() == pivot).unwrap();
        let lb = b.iter().find(|l| l.var() == pivot).unwrap();
        *la == !*lb
    });
    let mut out: Vec<Lit> = Vec::with_capacity(a.len() + b.len());
    out.extend(a.iter().copied().filter(|l| l.var() != pivot));
    out.extend(b.iter().copied().filter(|l| l.var() != pivot));
    out.sort_unstable();
    out.dedup();
    out
}

/// A refutation: node ids are topologically ordered (children precede
/// parents) and the root derives the empty clause.
#[derive(Clone, Debug)]
pub struct ResolutionProof {
    nodes: Vec<ProofNode>,
    root: ProofId,
}

impl ResolutionProof {
    pub fn nodes(&self) -> &[ProofNode] {
        &self.nodes
    }

    pub fn root(&self) -> ProofId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Recomputes every resolution bottom-up and checks that the stored
    /// clauses match and the root is empty.
    pub fn replay(&self) -> Result<(), String> {
        for (i, n) in self.nodes.iter().enumerate() {
            if let ProofNode::Resolve {
                pivot,
                left,
                right,
                lits,
            } = n
            {
                if *left as usize >= i || *right as usize >= i {
                    return Err(alloc::format!("node {i} references a later node"));
                }
                let l = self.nodes[*left as usize].lits();
                let r = self.nodes[*right as usize].lits();
                let lp = l.iter().find(|x| x.var() == *pivot);
                let rp = r.iter().find(|x| x.var() == *pivot);
                match (lp, rp) {
                    (Some(&a), Some(&b)) if a == !b => {}
                    _ => return Err(alloc::format!("node {i}: pivot {pivot} not complementary")),
                }
                let expect = resolve(l, r, *pivot);
                if expect != *lits {
                    return Err(alloc::format!("node {i}: stored resolvent mismatch"));
                }
            }
        }
        if !self.nodes[self.root as usize].lits().is_empty() {
            return Err(String::from("root clause is not empty"));
        }
        Ok(())
    }
}

/// Incremental proof construction used inside the solver.
#[derive(Clone, Debug)]
pub(crate) struct ProofBuilder {
    nodes: Vec<ProofNode>,
    budget: usize,
    exceeded: bool,
}

impl ProofBuilder {
    pub fn new(budget: usize) -> ProofBuilder {
        ProofBuilder {
            nodes: Vec::new(),
            budget,
            exceeded: false,
        }
    }

    pub fn exceeded(&self) -> bool {
        self.exceeded
    }

    pub fn lits(&self, id: ProofId) -> &[Lit] {
        self.nodes[id as usize].lits()
    }

    fn push(&mut self, node: ProofNode) -> ProofId {
        if self.nodes.len() >= self.budget {
            self.exceeded = true;
        }
        let id = self.nodes.len() as ProofId;
        self.nodes.push(node);
        id
    }

    pub fn add_leaf(&mut self, lits: Vec<Lit>, part: Part) -> ProofId {
        self.push(ProofNode::Leaf { lits, part })
    }

    /// Chain resolution: folds `resolve` over `chain` starting from `start`.
    pub fn derive(&mut self, start: ProofId, chain: &[(Var, ProofId)]) -> ProofId {
        let mut cur = start;
        for &(pivot, other) in chain {
            let lits = resolve(self.lits(cur), self.lits(other), pivot);
            cur = self.push(ProofNode::Resolve {
                pivot,
                left: cur,
                right: other,
                lits,
            });
        }
        cur
    }

    pub fn finish(self, root: ProofId) -> ResolutionProof {
        ResolutionProof {
            nodes: self.nodes,
            root,
        }
    }
}
