//! Skolem function vectors: per-output candidates with their provenance
//! status, and grounding to input-only functions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::formula::Var;
use crate::func::{FuncId, FuncStore};

/// How an output's function was obtained. Unate and unique entries are final
/// and never repaired; the rest may change during the repair loop.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FuncStatus {
    Empty,
    UnatePos,
    UnateNeg,
    Unique,
    Learned,
    Repaired,
    SelfSubstituted,
}

impl FuncStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FuncStatus::Empty => "empty",
            FuncStatus::UnatePos => "unate-pos",
            FuncStatus::UnateNeg => "unate-neg",
            FuncStatus::Unique => "unique",
            FuncStatus::Learned => "learned",
            FuncStatus::Repaired => "repaired",
            FuncStatus::SelfSubstituted => "self-substituted",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SkolemEntry {
    pub var: Var,
    pub func: FuncId,
    pub status: FuncStatus,
}

/// Candidate or final functions for every output variable, in declared
/// output order.
#[derive(Clone, Debug)]
pub struct SkolemVec {
    entries: Vec<SkolemEntry>,
    index: BTreeMap<Var, usize>,
}

impl SkolemVec {
    pub fn empty(outputs: &[Var], store: &FuncStore) -> SkolemVec {
        let entries: Vec<SkolemEntry> = outputs
            .iter()
            .map(|&var| SkolemEntry {
                var,
                func: store.constant(false),
                status: FuncStatus::Empty,
            })
            .collect();
        let index = outputs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        SkolemVec { entries, index }
    }

    pub fn entries(&self) -> &[SkolemEntry] {
        &self.entries
    }

    pub fn set(&mut self, v: Var, func: FuncId, status: FuncStatus) {
        let i = self.index[&v];
        self.entries[i].func = func;
        self.entries[i].status = status;
    }

    pub fn func(&self, v: Var) -> FuncId {
        self.entries[self.index[&v]].func
    }

    pub fn status(&self, v: Var) -> FuncStatus {
        self.entries[self.index[&v]].status
    }

    /// Final entries (unate or uniquely defined) are never repaired.
    pub fn is_final(&self, v: Var) -> bool {
        matches!(
            self.status(v),
            FuncStatus::UnatePos | FuncStatus::UnateNeg | FuncStatus::Unique
        )
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.entries.iter().map(|e| e.var)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundError {
    /// An output leaf survived substitution: the dependency relation was
    /// cyclic or incompatible with the order. Carries the offending pair
    /// (function variable, leftover leaf).
    Cycle(Var, Var),
}

impl core::fmt::Display for GroundError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GroundError::Cycle(y, leaf) => write!(
                f,
                "grounding {y}: leaf {leaf} not eliminated (dependency cycle or order violation)"
            ),
        }
    }
}

/// Substitutes output leaves by their functions in reverse order position,
/// so every returned function depends on inputs only. Statuses carry over.
pub fn ground(
    store: &mut FuncStore,
    vec: &SkolemVec,
    order: &[Var],
) -> Result<SkolemVec, GroundError> {
    let mut grounded: BTreeMap<Var, FuncId> = BTreeMap::new();
    for &y in order.iter().rev() {
        let g = store.substitute(vec.func(y), &grounded);
        if let Some(&leaf) = store.support(g).iter().find(|v| vec.index.contains_key(v)) {
            return Err(GroundError::Cycle(y, leaf));
        }
        grounded.insert(y, g);
    }
    let mut out = vec.clone();
    for e in vec.entries() {
        out.set(e.var, grounded[&e.var], e.status);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Assignment;

    fn v(n: u32) -> Var {
        Var::new(n)
    }

    /// Example vector ψ4=¬y3, ψ3=x2, ψ2=¬x1∨y1, ψ1=x1∨(¬x1∧¬x2) over
    /// X={1,2}, Y={3,4,5,6}; grounding with order {y4,y3,y2,y1} must agree
    /// with a truth table over x1,x2.
    #[test]
    fn ground_example_vector() {
        let mut s = FuncStore::new();
        let x1 = s.var(v(1));
        let x2 = s.var(v(2));
        let y1 = s.var(v(3));
        let y3 = s.var(v(5));
        let outputs = [v(3), v(4), v(5), v(6)];
        let mut vecr = SkolemVec::empty(&outputs, &s);
        let nx1 = s.not(x1);
        let nx2 = s.not(x2);
        let both0 = s.and(nx1, nx2);
        let psi1 = s.or(x1, both0);
        let psi2 = s.or(nx1, y1);
        let psi4 = s.not(y3);
        vecr.set(v(3), psi1, FuncStatus::Learned);
        vecr.set(v(4), psi2, FuncStatus::Repaired);
        vecr.set(v(5), x2, FuncStatus::Learned);
        vecr.set(v(6), psi4, FuncStatus::Unique);

        let order = [v(6), v(5), v(4), v(3)];
        let g = ground(&mut s, &vecr, &order).unwrap();
        for e in g.entries() {
            assert!(s.support(e.func).iter().all(|w| w.id() <= 2));
        }
        for bits in 0..4u32 {
            let mut a = Assignment::new(6);
            a.set(v(1), bits & 1 != 0);
            a.set(v(2), bits & 2 != 0);
            // ψ4 grounds to ¬x2, ψ2 grounds to ¬x1 ∨ ψ1 ≡ 1
            assert_eq!(s.eval(g.func(v(6)), &a), bits & 2 == 0);
            assert!(s.eval(g.func(v(4)), &a));
        }
    }

    #[test]
    fn ground_all_constants_unchanged() {
        let mut s = FuncStore::new();
        let outputs = [v(1), v(2)];
        let mut vecr = SkolemVec::empty(&outputs, &s);
        let t = s.constant(true);
        vecr.set(v(1), t, FuncStatus::UnatePos);
        let g = ground(&mut s, &vecr, &[v(1), v(2)]).unwrap();
        assert_eq!(g.func(v(1)), t);
        assert_eq!(g.func(v(2)), s.constant(false));
    }

    #[test]
    fn ground_single_substitution() {
        // ψ1=y2, ψ2=x1, order {y1,y2} → ψ1 grounds to x1
        let mut s = FuncStore::new();
        let x1 = s.var(v(1));
        let y2 = s.var(v(3));
        let outputs = [v(2), v(3)];
        let mut vecr = SkolemVec::empty(&outputs, &s);
        vecr.set(v(2), y2, FuncStatus::Learned);
        vecr.set(v(3), x1, FuncStatus::Learned);
        let g = ground(&mut s, &vecr, &[v(2), v(3)]).unwrap();
        assert_eq!(g.func(v(2)), x1);
    }

    #[test]
    fn ground_detects_order_violation() {
        // ψ1 references y2 but y2 comes first in the order.
        let mut s = FuncStore::new();
        let y2 = s.var(v(2));
        let y1leaf = s.var(v(1));
        let outputs = [v(1), v(2)];
        let mut vecr = SkolemVec::empty(&outputs, &s);
        vecr.set(v(1), y2, FuncStatus::Learned);
        vecr.set(v(2), y1leaf, FuncStatus::Learned);
        assert!(matches!(
            ground(&mut s, &vecr, &[v(2), v(1)]),
            Err(GroundError::Cycle(_, _))
        ));
    }
}
