//! Instance families shared by the benchmarks.

use klsparse::{generate, GenKind, GenSpec, Graph};

/// Vertex counts used by the scaling benchmarks.
pub const SIZES: [usize; 4] = [500, 1000, 2000, 4000];

/// A tight `(2, 3)` graph on `n` vertices.
pub fn laman(n: usize, seed: u64) -> Graph {
    generate(&GenSpec::new(GenKind::TightHenneberg, n, 2, 3, seed)).expect("valid spec")
}

/// A random graph with exactly `m` edges legal for `(k, l)`.
pub fn random(n: usize, m: usize, k: usize, l: usize, seed: u64) -> Graph {
    generate(&GenSpec::new(GenKind::RandomEdges, n, k, l, seed).with_edges(m)).expect("valid spec")
}
