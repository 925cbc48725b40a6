//! ASCII AIGER (`aag` version 1) emission and reading for grounded Skolem
//! vectors: inputs are the specification's X in declared order, outputs the
//! vector's functions in Y order, AND gates structurally hashed via the
//! function store.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use skolem_core::{FuncId, FuncNode, FuncStore, SkolemVec, Spec, Var};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AigError {
    #[error("function for {0} depends on non-input variable {1}")]
    NotGrounded(Var, Var),
    #[error("line {0}: {1}")]
    Malformed(usize, String),
    #[error("header mismatch: {0}")]
    Header(String),
    #[error("undefined literal {0}")]
    UndefinedLiteral(u64),
}

/// Writes the vector in `aag` form. Every function must depend on inputs
/// only (see grounding).
pub fn write_aag(spec: &Spec, store: &FuncStore, vec: &SkolemVec) -> Result<String, AigError> {
    let inputs = spec.inputs();
    let input_lit: BTreeMap<Var, u64> = inputs
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, 2 * (i as u64 + 1)))
        .collect();
    for e in vec.entries() {
        for v in store.support(e.func) {
            if !input_lit.contains_key(&v) {
                return Err(AigError::NotGrounded(e.var, v));
            }
        }
    }
    let mut gate_lit: BTreeMap<FuncId, u64> = BTreeMap::new();
    let mut gates: Vec<(u64, u64, u64)> = Vec::new();
    let mut next_var = inputs.len() as u64;
    // literal of a node, emitting AND gates in dependency order
    fn lit_of(
        store: &FuncStore,
        f: FuncId,
        input_lit: &BTreeMap<Var, u64>,
        gate_lit: &mut BTreeMap<FuncId, u64>,
        gates: &mut Vec<(u64, u64, u64)>,
        next_var: &mut u64,
    ) -> u64 {
        if let Some(&l) = gate_lit.get(&f) {
            return l;
        }
        let l = match store.node(f) {
            FuncNode::Const(b) => b as u64,
            FuncNode::Leaf(v) => input_lit[&v],
            FuncNode::Not(g) => lit_of(store, g, input_lit, gate_lit, gates, next_var) ^ 1,
            FuncNode::And(a, b) => {
                let la = lit_of(store, a, input_lit, gate_lit, gates, next_var);
                let lb = lit_of(store, b, input_lit, gate_lit, gates, next_var);
                *next_var += 1;
                let lhs = 2 * *next_var;
                gates.push((lhs, la.max(lb), la.min(lb)));
                lhs
            }
        };
        gate_lit.insert(f, l);
        l
    }
    let out_lits: Vec<u64> = vec
        .entries()
        .iter()
        .map(|e| lit_of(store, e.func, &input_lit, &mut gate_lit, &mut gates, &mut next_var))
        .collect();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "aag {} {} 0 {} {}",
        next_var,
        inputs.len(),
        out_lits.len(),
        gates.len()
    );
    for i in 0..inputs.len() {
        let _ = writeln!(s, "{}", 2 * (i + 1));
    }
    for l in &out_lits {
        let _ = writeln!(s, "{l}");
    }
    for (lhs, a, b) in &gates {
        let _ = writeln!(s, "{lhs} {a} {b}");
    }
    for i in 0..inputs.len() {
        let _ = writeln!(s, "i{i} x{}", i + 1);
    }
    for i in 0..vec.entries().len() {
        let _ = writeln!(s, "o{i} y{}", i + 1);
    }
    Ok(s)
}

/// Reads an `aag` file back into functions over the given input variables
/// (positionally: the i-th declared AIGER input is `inputs[i]`).
pub fn read_aag(text: &str, store: &mut FuncStore, inputs: &[Var]) -> Result<Vec<FuncId>, AigError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| AigError::Header("empty file".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 6 || toks[0] != "aag" {
        return Err(AigError::Header(format!("bad header `{header}`")));
    }
    let nums: Vec<u64> = toks[1..]
        .iter()
        .map(|t| t.parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| AigError::Header(format!("bad header `{header}`")))?;
    let (_m, i, l, o, a) = (nums[0], nums[1] as usize, nums[2], nums[3] as usize, nums[4] as usize);
    if l != 0 {
        return Err(AigError::Header("latches are not supported".into()));
    }
    if i != inputs.len() {
        return Err(AigError::Header(format!(
            "{} inputs declared, but the specification has {}",
            i,
            inputs.len()
        )));
    }
    let mut base: BTreeMap<u64, FuncId> = BTreeMap::new();
    base.insert(0, store.constant(false));
    base.insert(1, store.constant(true));
    fn next_line<'a>(
        lines: &mut impl Iterator<Item = (usize, &'a str)>,
        what: &str,
    ) -> Result<(usize, &'a str), AigError> {
        lines
            .next()
            .ok_or_else(|| AigError::Header(format!("missing {what} line")))
    }
    for k in 0..i {
        let (ln, line) = next_line(&mut lines, "input")?;
        let lit: u64 = line
            .trim()
            .parse()
            .map_err(|_| AigError::Malformed(ln + 1, format!("bad input literal `{line}`")))?;
        if lit == 0 || lit & 1 == 1 {
            return Err(AigError::Malformed(ln + 1, "input literal must be positive and even".into()));
        }
        let f = store.var(inputs[k]);
        base.insert(lit, f);
        let nf = store.not(f);
        base.insert(lit ^ 1, nf);
    }
    let mut out_lits = Vec::with_capacity(o);
    for _ in 0..o {
        let (ln, line) = next_line(&mut lines, "output")?;
        let lit: u64 = line
            .trim()
            .parse()
            .map_err(|_| AigError::Malformed(ln + 1, format!("bad output literal `{line}`")))?;
        out_lits.push(lit);
    }
    let mut gate_defs: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for _ in 0..a {
        let (ln, line) = next_line(&mut lines, "and gate")?;
        let parts: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| AigError::Malformed(ln + 1, format!("bad gate line `{line}`")))?;
        if parts.len() != 3 || parts[0] & 1 == 1 {
            return Err(AigError::Malformed(ln + 1, format!("bad gate line `{line}`")));
        }
        gate_defs.insert(parts[0], (parts[1], parts[2]));
    }
    // symbol table and comments are ignored
    fn resolve(
        lit: u64,
        base: &mut BTreeMap<u64, FuncId>,
        gate_defs: &BTreeMap<u64, (u64, u64)>,
        store: &mut FuncStore,
        depth: usize,
    ) -> Result<FuncId, AigError> {
        if let Some(&f) = base.get(&lit) {
            return Ok(f);
        }
        if depth > gate_defs.len() + 1 {
            return Err(AigError::UndefinedLiteral(lit));
        }
        let f = if lit & 1 == 1 {
            let g = resolve(lit ^ 1, base, gate_defs, store, depth + 1)?;
            store.not(g)
        } else {
            let &(a, b) = gate_defs.get(&lit).ok_or(AigError::UndefinedLiteral(lit))?;
            let fa = resolve(a, base, gate_defs, store, depth + 1)?;
            let fb = resolve(b, base, gate_defs, store, depth + 1)?;
            store.and(fa, fb)
        };
        base.insert(lit, f);
        Ok(f)
    }
    out_lits
        .into_iter()
        .map(|l| resolve(l, &mut base, &gate_defs, store, 0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use skolem_core::skolem::FuncStatus;
    use skolem_core::{Assignment, Lit};

    fn v(n: u32) -> Var {
        Var::new(n)
    }

    fn spec_x1_y1() -> Spec {
        Spec::new(
            2,
            vec![vec![Lit::from_dimacs(1), Lit::from_dimacs(2)]],
            vec![v(1)],
            vec![v(2)],
        )
        .unwrap()
    }

    #[test]
    fn constant_output_header() {
        let spec = spec_x1_y1();
        let store = FuncStore::new();
        let mut vec = SkolemVec::empty(&[v(2)], &store);
        let t = store.constant(true);
        vec.set(v(2), t, FuncStatus::UnatePos);
        let text = write_aag(&spec, &store, &vec).unwrap();
        assert!(text.starts_with("aag 1 1 0 1 0\n"));
        assert_eq!(text.lines().nth(2).unwrap(), "1");
    }

    #[test]
    fn negated_input_output_literal() {
        let spec = spec_x1_y1();
        let mut store = FuncStore::new();
        let mut vec = SkolemVec::empty(&[v(2)], &store);
        let x = store.var(v(1));
        let nx = store.not(x);
        vec.set(v(2), nx, FuncStatus::Learned);
        let text = write_aag(&spec, &store, &vec).unwrap();
        assert_eq!(text.lines().nth(2).unwrap(), "3");
    }

    #[test]
    fn roundtrip_preserves_semantics() {
        let spec = Spec::new(
            3,
            vec![vec![Lit::from_dimacs(3), Lit::from_dimacs(1)]],
            vec![v(1), v(2)],
            vec![v(3)],
        )
        .unwrap();
        let mut store = FuncStore::new();
        let x1 = store.var(v(1));
        let x2 = store.var(v(2));
        let f = store.xor(x1, x2);
        let mut vec = SkolemVec::empty(&[v(3)], &store);
        vec.set(v(3), f, FuncStatus::Learned);
        let text = write_aag(&spec, &store, &vec).unwrap();
        let back = read_aag(&text, &mut store, &[v(1), v(2)]).unwrap();
        assert_eq!(back.len(), 1);
        for bits in 0..4u32 {
            let mut a = Assignment::new(3);
            a.set(v(1), bits & 1 != 0);
            a.set(v(2), bits & 2 != 0);
            assert_eq!(store.eval(back[0], &a), store.eval(f, &a));
        }
    }

    #[test]
    fn rejects_ungrounded_vector() {
        let spec = spec_x1_y1();
        let mut store = FuncStore::new();
        let mut vec = SkolemVec::empty(&[v(2)], &store);
        let y = store.var(v(2));
        vec.set(v(2), y, FuncStatus::Learned);
        assert!(matches!(
            write_aag(&spec, &store, &vec),
            Err(AigError::NotGrounded(_, _))
        ));
    }
}
