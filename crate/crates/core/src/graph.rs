//! Undirected multigraphs, sparsity parameters and violating-set certificates.
//!
//! Vertices are `0..n`, edges are `(u, v)` pairs addressed by their position in
//! the edge list. A loop `(v, v)` is allowed; it is induced by any set that
//! contains `v` and counts once.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
        }
        Ok(Graph { n, edges })
    }

    /// Graph on `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// Appends an edge and returns its id.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        self.edges.push((u, v));
        Ok(self.edges.len() - 1)
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        self.edges
            .iter()
            .any(|&(u, v)| !seen.insert((u.min(v), u.max(v))))
    }

    /// Degree of every vertex; a loop adds 2.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Edge ids incident to each vertex. A loop is listed once.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(id);
            if u != v {
                inc[v].push(id);
            }
        }
        inc
    }

    /// Subgraph spanned by the edge ids `ids`, on the same vertex set.
    pub fn edge_subgraph(&self, ids: impl IntoIterator<Item = usize>) -> Graph {
        Graph {
            n: self.n,
            edges: ids.into_iter().map(|id| self.edges[id]).collect(),
        }
    }

    /// Parses the edge-list text format: a header line `n m`, then `m` lines
    /// `u v`. Lines starting with `#` and blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing header line \"n m\"".into(),
        })?;
        let (n, m) = parse_pair(header_line, header)?;

        let mut edges = Vec::with_capacity(m.min(1 << 20));
        for (line, body) in lines {
            if edges.len() == m {
                return Err(Error::Parse {
                    line,
                    message: format!("more than the declared {m} edges"),
                });
            }
            let (u, v) = parse_pair(line, body)?;
            for w in [u, v] {
                if w >= n {
                    return Err(Error::Parse {
                        line,
                        message: format!("vertex {w} out of range for n={n}"),
                    });
                }
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: text.lines().count(),
                message: format!("expected {m} edges, found {}", edges.len()),
            });
        }
        Ok(Graph { n, edges })
    }

    /// Inverse of [`Graph::parse_edge_list`] for comment-free input.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + 12 * self.edges.len());
        out.push_str(&format!("{} {}\n", self.n, self.edges.len()));
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_pair(line: usize, body: &str) -> Result<(usize, usize)> {
    let mut it = body.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line,
            message: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid {what} {tok:?}"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            message: "trailing fields".into(),
        });
    }
    Ok((a, b))
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::parse_edge_list(s)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Which of the three parameter ranges `(k, l)` falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SparsityRange {
    /// `0 <= l <= k`
    Low,
    /// `k < l < 2k`
    Mid,
    /// `2k <= l < 3k`; only sets of at least three vertices are constrained.
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SparsityParams {
    k: usize,
    l: usize,
}

impl SparsityParams {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k == 0 || l >= 3 * k {
            return Err(Error::InvalidParams { k, l });
        }
        Ok(SparsityParams { k, l })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn range(&self) -> SparsityRange {
        if self.l <= self.k {
            SparsityRange::Low
        } else if self.l < 2 * self.k {
            SparsityRange::Mid
        } else {
            SparsityRange::High
        }
    }

    /// Range index `t` with `t*k <= l <= (t+1)*k`.
    pub fn t(&self) -> usize {
        match self.range() {
            SparsityRange::Low => 0,
            SparsityRange::Mid => 1,
            SparsityRange::High => 2,
        }
    }

    /// Largest number of edges a set of `size` vertices may induce, or `None`
    /// if sets of that size are unconstrained.
    pub fn bound(&self, size: usize) -> Option<usize> {
        let raw = self.k * size;
        match self.range() {
            SparsityRange::High if size < 3 => None,
            SparsityRange::High => Some(raw - self.l),
            _ => Some(raw.saturating_sub(self.l)),
        }
    }
}

impl fmt::Display for SparsityParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k, self.l)
    }
}

/// Why a graph is not a legal input for a parameter range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rejection {
    LoopInMidRange,
    NotSimple,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::LoopInMidRange => f.write_str("loops forbidden for k<l<2k"),
            Rejection::NotSimple => f.write_str("graph must be simple for 2k<=l<3k"),
        }
    }
}

/// Structural input rules: anything goes for `l <= k`, no loops for
/// `k < l < 2k`, simple graphs for `l >= 2k`. Edge count is not checked.
pub fn validate_input(g: &Graph, p: SparsityParams) -> std::result::Result<(), Rejection> {
    match p.range() {
        SparsityRange::Low => Ok(()),
        SparsityRange::Mid if g.has_loop() => Err(Rejection::LoopInMidRange),
        SparsityRange::Mid => Ok(()),
        SparsityRange::High if g.has_loop() || g.has_parallel_edges() => Err(Rejection::NotSimple),
        SparsityRange::High => Ok(()),
    }
}

/// Number of edges with both endpoints in `x`. Duplicate ids in `x` are harmless.
pub fn induced_edge_count(g: &Graph, x: &[usize]) -> Result<usize> {
    let mut member = vec![false; g.num_vertices()];
    for &v in x {
        if v >= g.num_vertices() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: g.num_vertices(),
            });
        }
        member[v] = true;
    }
    Ok(count_induced(g.edges().iter().copied(), &member))
}

pub(crate) fn count_induced(
    edges: impl IntoIterator<Item = (usize, usize)>,
    member: &[bool],
) -> usize {
    edges
        .into_iter()
        .filter(|&(u, v)| member[u] && member[v])
        .count()
}

/// A vertex set that induces more edges than its sparsity bound allows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Certificate {
    /// Sorted, duplicate-free vertex ids.
    pub vertices: Vec<usize>,
    pub induced_edges: usize,
    pub bound: usize,
}

impl Certificate {
    /// Certificate for `(k, l)`-sparsity on `g`. The vertex list is sorted and
    /// deduplicated. Returns `None` if the set is not actually violating.
    pub fn for_params(g: &Graph, p: SparsityParams, vertices: Vec<usize>) -> Option<Self> {
        let vertices = normalize(vertices);
        let bound = p.bound(vertices.len())?;
        let induced_edges = induced_edge_count(g, &vertices).ok()?;
        (induced_edges > bound).then_some(Certificate {
            vertices,
            induced_edges,
            bound,
        })
    }

    /// Certificate against an explicit affine bound `k|X| - offset`, as used by
    /// the subroutines (`(k,0)`, `(k,k)` and `(k,tk)` violations).
    pub(crate) fn with_offset(
        edges: impl IntoIterator<Item = (usize, usize)>,
        n: usize,
        k: usize,
        offset: usize,
        vertices: Vec<usize>,
    ) -> Self {
        let vertices = normalize(vertices);
        let mut member = vec![false; n];
        for &v in &vertices {
            member[v] = true;
        }
        let induced_edges = count_induced(edges, &member);
        let bound = (k * vertices.len()).saturating_sub(offset);
        debug_assert!(
            induced_edges > bound,
            "not a violation: {induced_edges} <= {bound} on {vertices:?}"
        );
        Certificate {
            vertices,
            induced_edges,
            bound,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

pub(crate) fn normalize(mut vertices: Vec<usize>) -> Vec<usize> {
    vertices.sort_unstable();
    vertices.dedup();
    vertices
}

/// Checks `c` from scratch: recounts the induced edges (ignoring
/// `c.induced_edges`) and compares against the range's bound.
pub fn verify_certificate(g: &Graph, p: SparsityParams, c: &Certificate) -> bool {
    let vertices = normalize(c.vertices.clone());
    let Some(bound) = p.bound(vertices.len()) else {
        return false;
    };
    match induced_edge_count(g, &vertices) {
        Ok(induced) => induced > bound,
        Err(_) => false,
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Graph;

    pub fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, edges).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|v| (v - 1, v)).collect()).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)).collect()).unwrap()
    }

    /// The 8-vertex worked example: a K4 on {0,1,2,3} with vertex 2 playing
    /// the source role, plus a pendant path 0-6-7-1 and a triangle 3-4-5.
    pub fn worked_example() -> Graph {
        // A=0 B=1 C(u)=2 D=3 E=4 F=5 G=6 H=7
        Graph::new(
            8,
            vec![
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (0, 6),
                (6, 7),
                (1, 7),
                (3, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap()
    }
}
