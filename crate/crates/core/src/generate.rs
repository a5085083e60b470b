//! Seeded instance generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, SparsityParams, SparsityRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    /// Uniform random edges legal for the range, `m` uniform in `0..=kn`.
    RandomEdges,
    /// Laman graph grown by degree-2 vertex additions; only `(2, 3)`.
    TightHenneberg,
    /// A sparse base graph plus extra edges inside a random subset until
    /// that subset violates its bound.
    PlantedViolation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub seed: u64,
    /// Exact edge count for [`GenKind::RandomEdges`].
    pub edges: Option<usize>,
    /// Size of the planted subset for [`GenKind::PlantedViolation`].
    pub planted_size: Option<usize>,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize, k: usize, l: usize, seed: u64) -> Self {
        GenSpec {
            kind,
            n,
            k,
            l,
            seed,
            edges: None,
            planted_size: None,
        }
    }

    pub fn with_edges(mut self, m: usize) -> Self {
        self.edges = Some(m);
        self
    }

    pub fn with_planted_size(mut self, size: usize) -> Self {
        self.planted_size = Some(size);
        self
    }
}

/// Generates a graph; the same spec always yields the same edge list.
pub fn generate(spec: &GenSpec) -> Result<Graph> {
    let p = SparsityParams::new(spec.k, spec.l).map_err(|e| Error::Generator(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        GenKind::RandomEdges => random_edges(spec, p, &mut rng),
        GenKind::TightHenneberg => henneberg(spec, &mut rng),
        GenKind::PlantedViolation => planted(spec, p, &mut rng),
    }
}

fn random_edges(spec: &GenSpec, p: SparsityParams, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let n = spec.n;
    let smallest = match p.range() {
        SparsityRange::Low => 1,
        _ => 2,
    };
    let m = match spec.edges {
        Some(m) => m,
        None if n < smallest => 0,
        None => rng.gen_range(0..=spec.k * n),
    };
    let edges = match p.range() {
        SparsityRange::Low => {
            if m > 0 && n == 0 {
                return Err(Error::Generator("no vertices to place edges on".into()));
            }
            (0..m)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect()
        }
        SparsityRange::Mid => {
            if m > 0 && n < 2 {
                return Err(Error::Generator("loop-free edges need two vertices".into()));
            }
            (0..m).map(|_| distinct_pair(n, rng)).collect()
        }
        SparsityRange::High => {
            let max = n * n.saturating_sub(1) / 2;
            let m = match spec.edges {
                Some(m) if m > max => {
                    return Err(Error::Generator(format!(
                        "{m} edges do not fit in a simple graph on {n} vertices"
                    )))
                }
                _ => m.min(max),
            };
            simple_edges(n, m, rng)
        }
    };
    Graph::new(n, edges)
}

fn distinct_pair(n: usize, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let u = rng.gen_range(0..n);
    let v = (u + rng.gen_range(1..n)) % n;
    (u, v)
}

fn simple_edges(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let max = n * n.saturating_sub(1) / 2;
    if 4 * m >= max {
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        all.shuffle(rng);
        all.truncate(m);
        return all;
    }
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let (u, v) = distinct_pair(n, rng);
        if seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        }
    }
    edges
}

fn henneberg(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if (spec.k, spec.l) != (2, 3) {
        return Err(Error::Generator(
            "tight-henneberg is only defined for (k, l) = (2, 3)".into(),
        ));
    }
    let n = spec.n;
    if n < 2 {
        return Err(Error::Generator("tight-henneberg needs n >= 2".into()));
    }
    let mut edges = Vec::with_capacity(2 * n - 3);
    edges.push((0, 1));
    for v in 2..n {
        let a = rng.gen_range(0..v);
        let b = (a + rng.gen_range(1..v)) % v;
        edges.push((a, v));
        edges.push((b, v));
    }
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let edges = edges
        .into_iter()
        .map(|(u, v)| (label[u], label[v]))
        .collect();
    Graph::new(n, edges)
}

/// Smallest subset size on which the range's edge rules allow a violation.
fn smallest_violable(p: SparsityParams) -> usize {
    match p.range() {
        SparsityRange::Low => 1,
        SparsityRange::Mid => 2,
        SparsityRange::High => (3..)
            .find(|&s: &usize| s * (s - 1) / 2 > p.k() * s - p.l())
            .expect("complete graphs eventually exceed k|X| - l"),
    }
}

fn planted(spec: &GenSpec, p: SparsityParams, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let n = spec.n;
    let smin = smallest_violable(p);
    let size = match spec.planted_size {
        Some(s) if s < smin || s > n => {
            return Err(Error::Generator(format!(
                "planted size {s} outside {smin}..={n} for {p}"
            )))
        }
        Some(s) => s,
        None if smin > n => {
            return Err(Error::Generator(format!(
                "{p} needs at least {smin} vertices for a planted violation"
            )))
        }
        None => rng.gen_range(smin..=n.min(smin + 2)),
    };

    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut edges = Vec::new();
    if p.l() == 3 * p.k() - 1 {
        // a forest may put two edges on three vertices; a matching cannot
        for v in (1..n).step_by(2) {
            if rng.gen_bool(0.7) {
                edges.push((label[v - 1], label[v]));
            }
        }
    } else {
        for v in 1..n {
            if rng.gen_bool(0.8) {
                edges.push((label[rng.gen_range(0..v)], label[v]));
            }
        }
    }

    let subset: Vec<usize> = label.choose_multiple(rng, size).copied().collect();
    let mut member = vec![false; n];
    for &v in &subset {
        member[v] = true;
    }
    let bound = p.bound(size).expect("size respects the range");
    let mut present: HashSet<(usize, usize)> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let mut induced = edges
        .iter()
        .filter(|&&(u, v)| member[u] && member[v])
        .count();
    while induced <= bound {
        let (u, v) = match p.range() {
            SparsityRange::Low => (*subset.choose(rng).unwrap(), *subset.choose(rng).unwrap()),
            SparsityRange::Mid => {
                let (i, j) = distinct_pair(size, rng);
                (subset[i], subset[j])
            }
            SparsityRange::High => {
                let (i, j) = distinct_pair(size, rng);
                let (u, v) = (subset[i], subset[j]);
                if !present.insert((u.min(v), u.max(v))) {
                    continue;
                }
                (u, v)
            }
        };
        edges.push((u, v));
        induced += 1;
    }
    edges.shuffle(rng);
    Graph::new(n, edges)
}
