//! Brute-force reference implementations used as independent oracles in the
//! test suites. Everything here enumerates assignments and evaluates
//! clauses directly; nothing goes through the solver, the MaxSAT layer, or
//! the interpolation machinery it is used to check.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::formula::{Assignment, Lit, Spec, Var};
use crate::func::FuncStore;
use crate::skolem::SkolemVec;

/// All assignments over `vars`, as total maps in enumeration order.
pub fn assignments(vars: &[Var], num_vars: u32) -> impl Iterator<Item = Assignment> + '_ {
    let n = vars.len();
    assert!(n < 26, "enumeration blow-up");
    (0..(1u64 << n)).map(move |bits| {
        let mut a = Assignment::new(num_vars);
        for (i, &v) in vars.iter().enumerate() {
            a.set(v, bits >> i & 1 == 1);
        }
        a
    })
}

/// Models of the clause set over exactly `vars`.
pub fn models(spec: &Spec, vars: &[Var]) -> Vec<Assignment> {
    assignments(vars, spec.num_vars())
        .filter(|a| spec.eval_total(a))
        .collect()
}

pub fn is_satisfiable(spec: &Spec, vars: &[Var]) -> bool {
    assignments(vars, spec.num_vars()).any(|a| spec.eval_total(&a))
}

/// Minimum number of violated softs over all models of `hard` (`None` when
/// `hard` has no model).
pub fn min_violations(hard: &Spec, vars: &[Var], softs: &[Lit]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for a in assignments(vars, hard.num_vars()) {
        if !hard.eval_total(&a) {
            continue;
        }
        let v = softs
            .iter()
            .filter(|l| a.lit_value(**l) == Some(false))
            .count();
        best = Some(best.map_or(v, |b| b.min(v)));
        if best == Some(0) {
            break;
        }
    }
    best
}

/// Lexicographically optimal violation vector: one count per priority level
/// in descending level order, minimized level by level.
pub fn lex_min_violations(
    hard: &Spec,
    vars: &[Var],
    softs: &[(Lit, u32)],
) -> Option<Vec<usize>> {
    let mut levels: Vec<u32> = softs.iter().map(|&(_, p)| p).collect();
    levels.sort_unstable();
    levels.dedup();
    levels.reverse();
    let mut best: Option<Vec<usize>> = None;
    for a in assignments(vars, hard.num_vars()) {
        if !hard.eval_total(&a) {
            continue;
        }
        let vec: Vec<usize> = levels
            .iter()
            .map(|&lvl| {
                softs
                    .iter()
                    .filter(|&&(l, p)| p == lvl && a.lit_value(l) == Some(false))
                    .count()
            })
            .collect();
        if best.as_ref().is_none_or(|b| vec < *b) {
            best = Some(vec);
        }
    }
    best
}

/// Whether `f` defines `y` in terms of `s`: every assignment of `s` that
/// extends to a model fixes the value of `y`.
pub fn is_defined(f: &Spec, y: Var, s: &[Var], all_vars: &[Var]) -> bool {
    let rest: Vec<Var> = all_vars
        .iter()
        .copied()
        .filter(|v| *v != y && !s.contains(v))
        .collect();
    for sa in assignments(s, f.num_vars()) {
        let mut seen = [false, false];
        for ra in assignments(&rest, f.num_vars()) {
            for yval in [false, true] {
                let mut a = sa.clone();
                for (v, b) in ra.assigned_vars() {
                    a.set(v, b);
                }
                a.set(y, yval);
                if f.eval_total(&a) {
                    seen[yval as usize] = true;
                }
            }
        }
        if seen[0] && seen[1] {
            return false;
        }
    }
    true
}

/// Unate oracle matching the engine's check: `y` counts as positive unate
/// when, for every shared assignment of the inputs and `fixed` variables,
/// some completion satisfying `F|y=0` implies every completion satisfies
/// `F|y=1` (symmetrically for negative). Returns the constant, or `None`.
pub fn unate_constant(f: &Spec, y: Var, fixed: &BTreeSet<Var>) -> Option<bool> {
    let shared: Vec<Var> = (1..=f.num_vars())
        .map(Var::new)
        .filter(|&v| v != y && (f.is_input(v) || fixed.contains(&v)))
        .collect();
    let open: Vec<Var> = (1..=f.num_vars())
        .map(Var::new)
        .filter(|&v| v != y && !f.is_input(v) && !fixed.contains(&v))
        .collect();
    let f0 = f.cofactor(y, false);
    let f1 = f.cofactor(y, true);
    let implies = |from: &Spec, to: &Spec| {
        for sa in assignments(&shared, f.num_vars()) {
            let mut any_from = false;
            let mut all_to = true;
            for oa in assignments(&open, f.num_vars()) {
                let mut a = sa.clone();
                for (v, b) in oa.assigned_vars() {
                    a.set(v, b);
                }
                if from.eval_total(&a) {
                    any_from = true;
                }
                if !to.eval_total(&a) {
                    all_to = false;
                }
            }
            if any_from && !all_to {
                return false;
            }
        }
        true
    };
    if implies(&f0, &f1) {
        Some(true)
    } else if implies(&f1, &f0) {
        Some(false)
    } else {
        None
    }
}

/// The synthesis contract, checked exhaustively: for every input assignment
/// under which the specification is realizable, the grounded vector's
/// outputs satisfy it.
pub fn vector_realizes(spec: &Spec, store: &FuncStore, vec: &SkolemVec) -> bool {
    let inputs = spec.inputs().to_vec();
    let outputs = spec.outputs().to_vec();
    for xa in assignments(&inputs, spec.num_vars()) {
        let mut exists = false;
        for ya in assignments(&outputs, spec.num_vars()) {
            let mut a = xa.clone();
            for (v, b) in ya.assigned_vars() {
                a.set(v, b);
            }
            if spec.eval_total(&a) {
                exists = true;
                break;
            }
        }
        if !exists {
            continue;
        }
        let mut a = xa.clone();
        for &y in &outputs {
            let val = store.eval(vec.func(y), &a);
            a.set(y, val);
        }
        if !spec.eval_total(&a) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lit(n: i32) -> Lit {
        Lit::from_dimacs(n)
    }

    fn v(n: u32) -> Var {
        Var::new(n)
    }

    #[test]
    fn example_formula_unate_oracle_finds_none() {
        let f = Spec::new(
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
        .unwrap();
        for &y in f.outputs() {
            assert_eq!(unate_constant(&f, y, &BTreeSet::new()), None, "{y}");
        }
    }

    #[test]
    fn unate_oracle_simple_cases() {
        let f = Spec::new(2, vec![vec![lit(1), lit(2)]], vec![v(1)], vec![v(2)]).unwrap();
        assert_eq!(unate_constant(&f, v(2), &BTreeSet::new()), Some(true));
        let g = Spec::new(
            2,
            vec![vec![lit(-2), lit(1)], vec![lit(-2), lit(-1)]],
            vec![v(1)],
            vec![v(2)],
        )
        .unwrap();
        assert_eq!(unate_constant(&g, v(2), &BTreeSet::new()), Some(false));
    }

    #[test]
    fn definability_oracle_pair() {
        let f = Spec::new(
            3,
            vec![vec![lit(2), lit(3)], vec![lit(-2), lit(-3)]],
            vec![v(1)],
            vec![v(2), v(3)],
        )
        .unwrap();
        let all = [v(1), v(2), v(3)];
        assert!(is_defined(&f, v(3), &[v(2)], &all));
        assert!(!is_defined(&f, v(2), &[v(1)], &all));
    }

    #[test]
    fn min_violations_counts() {
        let hard = Spec::new(
            2,
            vec![vec![lit(1), lit(2)], vec![lit(-1), lit(-2)]],
            vec![v(1), v(2)],
            vec![],
        )
        .unwrap();
        assert_eq!(min_violations(&hard, &[v(1), v(2)], &[lit(1), lit(2)]), Some(1));
    }
}
