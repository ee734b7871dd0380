//! Deterministic instance families for tests and benchmarks.
//!
//! Randomized families draw from a ChaCha8 stream seeded explicitly, so a
//! `(family, params, seed)` triple always renders byte-identical text. The
//! draw order is part of the contract: valuation rows first (row-major),
//! then edges in lexicographic pair order.

use fairdiv_core::instance::{Edge, Instance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Star,
    Cliques,
    Gnp,
    RegularWeighted,
}

/// The tight lower-bound family: goods `1..=n` valued 1, a zero-valued
/// center good `n+1`, and a conflict edge from every valued good to the
/// center. Every EF1 allocation violates at least one of the n edges.
pub fn star(n: usize) -> Instance {
    let mut row = vec![1u64; n];
    row.push(0);
    let edges = (0..n).map(|i| Edge { u: i, v: n, w: 1 }).collect();
    Instance::new(n, vec![row; n], edges).expect("star instance is valid")
}

/// Disjoint complete components with the given sizes, identical all-ones
/// valuations.
pub fn cliques(n: usize, sizes: &[usize]) -> Instance {
    let m: usize = sizes.iter().sum();
    let mut edges = Vec::new();
    let mut base = 0;
    for &c in sizes {
        for u in 0..c {
            for v in (u + 1)..c {
                edges.push(Edge {
                    u: base + u,
                    v: base + v,
                    w: 1,
                });
            }
        }
        base += c;
    }
    Instance::new(n, vec![vec![1; m]; n], edges).expect("clique union is valid")
}

#[derive(Debug, Clone)]
pub struct GnpParams {
    pub n: usize,
    pub m: usize,
    /// Edge probability as an exact fraction (numerator, power-of-ten
    /// denominator).
    pub p_num: u32,
    pub p_den: u32,
    pub seed: u64,
    pub identical: bool,
    pub weighted: bool,
    pub max_value: u64,
    pub max_weight: u64,
}

impl Default for GnpParams {
    fn default() -> Self {
        GnpParams {
            n: 3,
            m: 10,
            p_num: 1,
            p_den: 10,
            seed: 0,
            identical: false,
            weighted: false,
            max_value: 100,
            max_weight: 10,
        }
    }
}

fn random_valuations(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    identical: bool,
    max_value: u64,
) -> Vec<Vec<u64>> {
    if identical {
        let row: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=max_value)).collect();
        vec![row; n]
    } else {
        (0..n)
            .map(|_| (0..m).map(|_| rng.gen_range(0..=max_value)).collect())
            .collect()
    }
}

/// Erdős–Rényi conflict graph: each unordered pair independently with
/// probability `p_num / p_den`.
pub fn gnp(params: &GnpParams) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let valuations = random_valuations(
        &mut rng,
        params.n,
        params.m,
        params.identical,
        params.max_value,
    );
    let mut edges = Vec::new();
    for u in 0..params.m {
        for v in (u + 1)..params.m {
            if rng.gen_ratio(params.p_num, params.p_den) {
                let w = if params.weighted {
                    rng.gen_range(1..=params.max_weight)
                } else {
                    1
                };
                edges.push(Edge { u, v, w });
            }
        }
    }
    Instance::new(params.n, valuations, edges).expect("gnp instance is valid")
}

#[derive(Debug, Clone)]
pub struct RegularParams {
    pub n: usize,
    pub m: usize,
    /// Target degree: the union of this many random perfect matchings.
    pub deg: usize,
    pub seed: u64,
    pub identical: bool,
    pub max_value: u64,
    pub max_weight: u64,
}

impl Default for RegularParams {
    fn default() -> Self {
        RegularParams {
            n: 3,
            m: 10,
            deg: 4,
            seed: 0,
            identical: false,
            max_value: 100,
            max_weight: 10,
        }
    }
}

/// Near-regular weighted conflict graph: the union of `deg` random
/// perfect matchings (collisions dropped), weights uniform in
/// `1..=max_weight`.
pub fn regular_weighted(params: &RegularParams) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let valuations = random_valuations(
        &mut rng,
        params.n,
        params.m,
        params.identical,
        params.max_value,
    );
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut ids: Vec<usize> = (0..params.m).collect();
    for _ in 0..params.deg {
        ids.shuffle(&mut rng);
        for pair in ids.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if seen.insert((u, v)) {
                let w = rng.gen_range(1..=params.max_weight);
                edges.push(Edge { u, v, w });
            }
        }
    }
    edges.sort_by_key(|e| (e.u, e.v));
    Instance::new(params.n, valuations, edges).expect("regular instance is valid")
}
