//! Definability checks against brute-force enumeration, and agreement of
//! interpolant extraction with the enumeration-based construction.

mod common;

use common::{random_2qbf, rng};
use rand::Rng;
use skolem_core::definability::{
    check_defined, define_by_enumeration, extract_definition, verify_definition, DefParams,
    EnumOutcome, Extraction,
};
use skolem_core::oracle;
use skolem_core::{FuncStore, Var};

#[test]
fn check_defined_agrees_with_enumeration() {
    let mut r = rng(0xdef);
    let mut defined_seen = 0;
    for i in 0..250 {
        let f = random_2qbf(&mut r, 4, 5, 14);
        let all: Vec<Var> = (1..=f.num_vars()).map(Var::new).collect();
        if !oracle::is_satisfiable(&f, &all) {
            continue;
        }
        let ny = f.outputs().len();
        let yi = r.gen_range(0..ny);
        let y = f.outputs()[yi];
        // defining set: inputs plus earlier outputs, the engine's shape
        let mut s: Vec<Var> = f.inputs().to_vec();
        s.extend(f.outputs()[..yi].iter().copied());
        let chk = check_defined(&f, y, &s, u64::MAX).unwrap();
        let expect = oracle::is_defined(&f, y, &s, &all);
        assert_eq!(chk.defined, expect, "instance {i}: definability mismatch");
        if !chk.defined {
            continue;
        }
        defined_seen += 1;
        // the core keeps y defined
        assert!(oracle::is_defined(&f, y, &chk.core, &all), "instance {i}: core");
        let mut store = FuncStore::new();
        let h = match extract_definition(&f, y, &chk.core, &mut store, &DefParams::default())
            .unwrap()
        {
            Extraction::Def(h) => h,
            Extraction::TooLarge => panic!("instance {i}: budget"),
        };
        assert!(verify_definition(&f, y, h, &store, u64::MAX).unwrap());
        // enumeration builds a semantically equivalent function on care rows
        match define_by_enumeration(&f, y, &chk.core, 16, u64::MAX, &mut store).unwrap() {
            EnumOutcome::Def(g) => {
                assert!(verify_definition(&f, y, g, &store, u64::MAX).unwrap());
            }
            other => panic!("instance {i}: {other:?}"),
        }
    }
    assert!(defined_seen > 15, "corpus too easy: {defined_seen} defined");
}

#[test]
fn unate_check_agrees_with_oracle() {
    use skolem_core::definability::find_unates;
    use skolem_core::engine::Ctrl;
    use std::collections::BTreeSet;

    let mut r = rng(0x0a1);
    for i in 0..200 {
        let f = random_2qbf(&mut r, 3, 4, 10);
        let all: Vec<Var> = (1..=f.num_vars()).map(Var::new).collect();
        if !oracle::is_satisfiable(&f, &all) {
            continue;
        }
        let mut work = f.clone();
        let found = find_unates(&mut work, u64::MAX, &Ctrl::unbounded()).unwrap();
        // replay the sequential discipline against the oracle
        let mut fixed = BTreeSet::new();
        let mut cur = f.clone();
        let mut expect = Vec::new();
        for &y in f.outputs() {
            match oracle::unate_constant(&cur, y, &fixed) {
                Some(c) => {
                    expect.push((y, c));
                    fixed.insert(y);
                    cur.push_unit(skolem_core::Lit::new(y, c));
                }
                None => {}
            }
        }
        assert_eq!(found, expect, "instance {i}");
    }
}

/// Retained definitions must not change the model set over the original
/// variables (each model extends uniquely to the Tseitin auxiliaries).
#[test]
fn retention_preserves_models_on_random_instances() {
    use skolem_core::engine::Ctrl;
    use skolem_core::learner::DepGraph;
    use skolem_core::skolem::SkolemVec;
    use skolem_core::solver::{SolveOutcome, Solver};
    use skolem_core::{FuncStore, Lit};
    use skolem_core::Spec;

    let mut r = rng(0x9e7);
    let mut with_defs = 0;
    for _ in 0..40 {
        // random base plus an explicit XOR definition for the last output,
        // which makes a unique (non-unate) extraction likely
        let base = random_2qbf(&mut r, 3, 4, 8);
        let nv0 = base.num_vars();
        let y_def = Var::new(nv0 + 1);
        let a = Var::new(r.gen_range(1..=nv0));
        let b = Var::new(r.gen_range(1..=nv0));
        let mut clauses: Vec<Vec<Lit>> = base
            .clauses()
            .iter()
            .map(|c| c.lits().to_vec())
            .collect();
        if a != b {
            // y_def ↔ a ⊕ b
            clauses.push(vec![Lit::negative(y_def), Lit::positive(a), Lit::positive(b)]);
            clauses.push(vec![Lit::negative(y_def), Lit::negative(a), Lit::negative(b)]);
            clauses.push(vec![Lit::positive(y_def), Lit::positive(a), Lit::negative(b)]);
            clauses.push(vec![Lit::positive(y_def), Lit::negative(a), Lit::positive(b)]);
        }
        let mut outputs = base.outputs().to_vec();
        outputs.push(y_def);
        let f = Spec::new(nv0 + 1, clauses, base.inputs().to_vec(), outputs).unwrap();
        let nv = f.num_vars();
        let all: Vec<Var> = (1..=nv).map(Var::new).collect();
        if !oracle::is_satisfiable(&f, &all) {
            continue;
        }
        let mut work = f.clone();
        let mut store = FuncStore::new();
        let mut vec = SkolemVec::empty(&f.outputs().to_vec(), &store);
        let mut deps = DepGraph::new();
        let (u, _) = skolem_core::definability::unidef(
            &mut work,
            &mut store,
            &mut vec,
            &mut deps,
            &DefParams::default(),
            &Ctrl::unbounded(),
        )
        .unwrap();
        // unate units legitimately restrict models; the baseline is the
        // original formula plus those units, and the definitions on top of
        // it must not restrict anything further
        let mut baseline = f.clone();
        for &y in &u {
            match vec.status(y) {
                skolem_core::FuncStatus::UnatePos => baseline.push_unit(Lit::positive(y)),
                skolem_core::FuncStatus::UnateNeg => baseline.push_unit(Lit::negative(y)),
                _ => {}
            }
        }
        if work.num_vars() > nv {
            with_defs += 1;
        }
        for bits in 0..(1u64 << nv) {
            let mut a = skolem_core::Assignment::new(nv);
            for i in 0..nv {
                a.set(Var::new(i + 1), bits >> i & 1 == 1);
            }
            let before = baseline.eval_total(&a);
            let mut s = Solver::from_spec(&work);
            let assumptions: Vec<Lit> = (1..=nv)
                .map(|i| Lit::new(Var::new(i), bits >> (i - 1) & 1 == 1))
                .collect();
            let after = matches!(s.solve(&assumptions), SolveOutcome::Sat(_));
            assert_eq!(before, after, "model set changed at {bits:b}");
        }
    }
    assert!(with_defs >= 3, "corpus produced only {with_defs} definition runs");
}
