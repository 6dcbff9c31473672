#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::test_runner::{Config, RngSeed};
use rand::rngs::StdRng;
use rand::SeedableRng;
use varietylab::enumerator::enumerate_with_jobs;
use varietylab::{FiniteAlgebra, Identity, Mode};

const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Seed for randomized tests; override with `VARIETYLAB_SEED`.
pub fn seed() -> u64 {
    std::env::var("VARIETYLAB_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(salt: u64) -> StdRng {
    StdRng::seed_from_u64(seed() ^ salt)
}

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed()),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn is_id(text: &str) -> Identity {
    Identity::parse(text, Mode::IS).unwrap()
}

pub fn iz_id(text: &str) -> Identity {
    Identity::parse(text, Mode::IZ).unwrap()
}

/// Enumerated IS algebras of orders 1..=4.
pub fn small_is_algebras() -> &'static [FiniteAlgebra] {
    static CACHE: OnceLock<Vec<FiniteAlgebra>> = OnceLock::new();
    CACHE.get_or_init(|| {
        (1..=4)
            .flat_map(|n| enumerate_with_jobs(n, Mode::IS, 4).unwrap().algebras)
            .collect()
    })
}

/// Enumerated IZ algebras of orders 1..=3.
pub fn small_iz_algebras() -> &'static [FiniteAlgebra] {
    static CACHE: OnceLock<Vec<FiniteAlgebra>> = OnceLock::new();
    CACHE.get_or_init(|| {
        (1..=3)
            .flat_map(|n| enumerate_with_jobs(n, Mode::IZ, 4).unwrap().algebras)
            .collect()
    })
}

/// All assignments of `letters` variables over `0..n`, odometer order.
pub fn assignments(n: usize, letters: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..letters {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}
