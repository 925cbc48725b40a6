//! Shared fuzz-instance generation for the integration suites.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skolem_core::{Lit, Spec, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random CNF over `1..=num_vars` with every variable an input.
pub fn random_cnf(rng: &mut ChaCha8Rng, max_vars: u32, max_clauses: usize) -> Spec {
    let nv = rng.gen_range(1..=max_vars);
    let nc = rng.gen_range(0..=max_clauses);
    let clauses = random_clauses(rng, nv, nc);
    let vars: Vec<Var> = (1..=nv).map(Var::new).collect();
    Spec::new(nv, clauses, vars, vec![]).unwrap()
}

/// A random 2QBF instance: inputs 1..=nx, outputs nx+1..=nx+ny.
pub fn random_2qbf(
    rng: &mut ChaCha8Rng,
    max_x: u32,
    max_y: u32,
    max_clauses: usize,
) -> Spec {
    let nx = rng.gen_range(1..=max_x);
    let ny = rng.gen_range(1..=max_y);
    let nv = nx + ny;
    let nc = rng.gen_range(1..=max_clauses);
    let clauses = random_clauses(rng, nv, nc);
    let x: Vec<Var> = (1..=nx).map(Var::new).collect();
    let y: Vec<Var> = (nx + 1..=nv).map(Var::new).collect();
    Spec::new(nv, clauses, x, y).unwrap()
}

fn random_clauses(rng: &mut ChaCha8Rng, nv: u32, nc: usize) -> Vec<Vec<Lit>> {
    (0..nc)
        .map(|_| {
            let len = rng.gen_range(1..=4usize);
            (0..len)
                .map(|_| {
                    let v = Var::new(rng.gen_range(1..=nv));
                    Lit::new(v, rng.gen_bool(0.5))
                })
                .collect()
        })
        .collect()
}

pub fn all_vars(spec: &Spec) -> Vec<Var> {
    (1..=spec.num_vars()).map(Var::new).collect()
}
