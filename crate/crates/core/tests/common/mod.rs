#![allow(dead_code)]

use kcoreset::Dataset64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` points in the plane with coordinates on a grid of `0..side`, so that
/// distance ties show up regularly.
pub fn grid_points(n: std::ops::RangeInclusive<usize>, side: i32) -> impl Strategy<Value = Dataset64> {
    prop::collection::vec((0..side, 0..side), n).prop_map(|v| {
        let rows: Vec<[f64; 2]> = v.into_iter().map(|(a, b)| [a as f64, b as f64]).collect();
        Dataset64::from_rows(&rows).unwrap()
    })
}

/// `n` points uniform in `[0, 100)^dim`.
pub fn uniform_points(n: std::ops::RangeInclusive<usize>, dim: usize) -> impl Strategy<Value = Dataset64> {
    prop::collection::vec(prop::collection::vec(0.0..100.0f64, dim), n)
        .prop_map(|rows| Dataset64::from_rows(&rows).unwrap())
}

pub fn random_dataset(n: usize, dim: usize, seed: u64) -> Dataset64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..n * dim).map(|_| rng.random_range(0.0..1.0)).collect();
    Dataset64::from_flat(dim, data).unwrap()
}

pub fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}
