//! Deterministic fixtures shared by the benchmark targets.

use kinv::oracle::SplitMix64;
use kinv::{FunctionSystem, KFunction, KValue};

/// A seeded random m-member system over E_k^n.
pub fn random_system(k: u32, n: u32, m: usize, seed: u64) -> FunctionSystem {
    let mut rng = SplitMix64::new(seed);
    let len = (k as usize).pow(n);
    let tables: Vec<Vec<KValue>> = (0..m)
        .map(|_| (0..len).map(|_| rng.below(k as u64) as KValue).collect())
        .collect();
    FunctionSystem::from_tables(k, n, tables).expect("valid tables")
}

/// The single-function system {k-1-x}, the worst unary case.
pub fn lukasiewicz_system(k: u32) -> FunctionSystem {
    FunctionSystem::single(KFunction::lukasiewicz_negation(k).expect("valid k")).unwrap()
}
