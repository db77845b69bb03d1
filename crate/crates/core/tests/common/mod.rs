#![allow(dead_code)]

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pqml::corpus::{random_formula, FormulaShape};
use pqml::{Formula, KripkeFrame, WorldSet};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A frame on `1..=max` worlds given by a random adjacency matrix.
pub fn frame(max: usize) -> impl Strategy<Value = KripkeFrame> {
    (1..=max, any::<u64>()).prop_map(|(n, bits)| {
        KripkeFrame::from_fn(n, |a, b| bits >> ((a * n + b) % 64) & 1 == 1).unwrap()
    })
}

/// A frame built from blocks of cliques, anti-cliques, identities and
/// empty pieces, so duplicate classes are larger than usual.
pub fn blocky_frame(max: usize) -> impl Strategy<Value = KripkeFrame> {
    (1..=max, any::<u64>()).prop_map(|(n, seed)| {
        pqml::corpus::random_structured_frame(&mut seeded(seed), n)
    })
}

pub fn subset(f: &KripkeFrame, bits: u64) -> WorldSet {
    WorldSet(bits).intersect(f.universe())
}

pub fn formula(nvars: u32, size: usize, md: usize, qd: usize) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |seed| {
        random_formula(&mut seeded(seed), &FormulaShape::new(nvars, size, md, qd))
    })
}
