//! Orientations with bounded indegree.
//!
//! An [`Orientation`] assigns a direction to every edge of an underlying
//! multigraph. Edge ids are stable across reversals, so the underlying edge
//! multiset never changes. A loop is an arc `v -> v`; it always contributes 1
//! to the indegree of `v` and reversing it is a no-op.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::flow::{feasible_circulation, Circulation, CirculationNetwork};
use crate::forests::ForestDecomposition;
use crate::graph::{Certificate, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    n: usize,
    /// `(tail, head)` per edge id.
    arcs: Vec<(usize, usize)>,
    indeg: Vec<usize>,
    /// Edge ids touching each vertex; loops listed once.
    incident: Vec<Vec<usize>>,
}

impl Orientation {
    pub fn empty(n: usize) -> Self {
        Orientation {
            n,
            arcs: Vec::new(),
            indeg: vec![0; n],
            incident: vec![Vec::new(); n],
        }
    }

    /// Orients every edge `(u, v)` of `g` as `u -> v`.
    pub fn from_graph(g: &Graph) -> Self {
        let mut d = Orientation::empty(g.num_vertices());
        for &(u, v) in g.edges() {
            d.push_arc(u, v);
        }
        d
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut d = Orientation::empty(n);
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            d.push_arc(u, v);
        }
        Ok(d)
    }

    /// Adds the arc `tail -> head` and returns its edge id.
    pub fn push_arc(&mut self, tail: usize, head: usize) -> usize {
        let id = self.arcs.len();
        self.arcs.push((tail, head));
        self.indeg[head] += 1;
        self.incident[tail].push(id);
        if tail != head {
            self.incident[head].push(id);
        }
        id
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc(&self, id: usize) -> (usize, usize) {
        self.arcs[id]
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.indeg[v]
    }

    pub fn indegrees(&self) -> &[usize] {
        &self.indeg
    }

    pub fn reverse(&mut self, id: usize) {
        let (t, h) = self.arcs[id];
        if t != h {
            self.arcs[id] = (h, t);
            self.indeg[h] -= 1;
            self.indeg[t] += 1;
        }
    }

    /// Non-loop arcs leaving `v`, as `(edge id, head)`.
    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.incident[v].iter().filter_map(move |&e| {
            let (t, h) = self.arcs[e];
            (t == v && h != v).then_some((e, h))
        })
    }

    /// Non-loop arcs entering `v`, as `(edge id, tail)`.
    pub fn in_arcs(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.incident[v].iter().filter_map(move |&e| {
            let (t, h) = self.arcs[e];
            (h == v && t != v).then_some((e, t))
        })
    }

    pub fn is_bounded(&self, k: usize) -> bool {
        self.indeg.iter().all(|&d| d <= k)
    }

    pub fn is_source(&self, u0: &[usize]) -> bool {
        u0.iter().all(|&u| self.indeg[u] == 0)
    }

    /// Underlying undirected graph; edge ids are preserved.
    pub fn underlying_graph(&self) -> Graph {
        Graph::new(self.n, self.arcs.clone()).expect("arcs stay in range")
    }

    /// Sub-orientation induced by the sorted vertex list `vertices`; local
    /// vertex `i` is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Orientation {
        let mut scratch = vec![usize::MAX; self.n];
        self.induced_with(vertices, &mut scratch)
    }

    /// Like [`Orientation::induced`], using `scratch` (all `usize::MAX`, at
    /// least `self.n` long) as the position map. `scratch` is restored before
    /// returning. Runs in time proportional to the arcs touching `vertices`.
    pub(crate) fn induced_with(&self, vertices: &[usize], scratch: &mut [usize]) -> Orientation {
        for (i, &v) in vertices.iter().enumerate() {
            scratch[v] = i;
        }
        let mut sub = Orientation::empty(vertices.len());
        for &v in vertices {
            for &e in &self.incident[v] {
                let (t, h) = self.arcs[e];
                if h == v && scratch[t] != usize::MAX {
                    sub.push_arc(scratch[t], scratch[h]);
                }
            }
        }
        for &v in vertices {
            scratch[v] = usize::MAX;
        }
        sub
    }
}

/// Finds an orientation of `g` with every indegree at most `kappa`, or a set
/// `X` with `i_G(X) > kappa * |X|` proving that none exists.
///
/// Starts from `u -> v` for each edge `(u, v)` and encodes "reverse this arc"
/// as a 0/1 circulation: every non-loop arc gets bounds `[0, 1]`, and an
/// auxiliary node `r` absorbs the net number of reversals at each vertex,
/// which must lie in `[indeg(u) - kappa, deg(u)]`. A Hoffman-violating set of
/// that network is exactly a `(kappa, 0)`-violation of `g`.
pub fn bounded_orientation(
    g: &Graph,
    kappa: usize,
) -> std::result::Result<Orientation, Certificate> {
    let n = g.num_vertices();
    let mut d = Orientation::from_graph(g);

    let mut loops = vec![0usize; n];
    let mut plain_deg = vec![0u64; n];
    for &(u, v) in g.edges() {
        if u == v {
            loops[u] += 1;
        } else {
            plain_deg[u] += 1;
            plain_deg[v] += 1;
        }
    }
    if let Some(v) = (0..n).find(|&v| loops[v] > kappa) {
        return Err(Certificate::with_offset(
            g.edges().iter().copied(),
            n,
            kappa,
            0,
            vec![v],
        ));
    }

    let r = n;
    let mut net = CirculationNetwork::new(n + 1);
    let mut arc_of_edge = vec![None; g.num_edges()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if u != v {
            arc_of_edge[e] = Some(net.add_arc(u, v, 0, 1).expect("in range"));
        }
    }
    for u in 0..n {
        let surplus = d.indegree(u) as i64 - kappa as i64;
        // net reversals at u must lie in [surplus, deg(u)]; a negative lower
        // bound becomes a return arc r -> u
        net.add_arc(u, r, surplus.max(0) as u64, plain_deg[u])
            .expect("loops <= kappa keeps surplus below the degree");
        if surplus < 0 {
            net.add_arc(r, u, 0, (-surplus) as u64).expect("in range");
        }
    }

    match feasible_circulation(&net) {
        Circulation::Feasible(x) => {
            for (e, arc) in arc_of_edge.iter().enumerate() {
                if let Some(a) = *arc {
                    if x[a] == 1 {
                        d.reverse(e);
                    }
                }
            }
            debug_assert!(d.is_bounded(kappa));
            Ok(d)
        }
        Circulation::Infeasible(set) => {
            debug_assert!(!set.contains(&r));
            let set = set.into_iter().filter(|&v| v != r).collect();
            Err(Certificate::with_offset(
                g.edges().iter().copied(),
                n,
                kappa,
                0,
                set,
            ))
        }
    }
}

/// Result of [`reorient_to_source`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reorientation {
    /// The orientation is now `u0`-source; `paths` arcs paths were reversed.
    Source { paths: usize },
    /// No `k`-bounded `u0`-source reorientation exists: the set strictly
    /// contains `u0` and induces more than `k|T| - k|u0|` edges.
    Violated(Certificate),
}

/// Reverses augmenting paths in `d` until every vertex of `u0` has indegree 0.
///
/// Each round searches breadth-first from all vertices outside `u0` with
/// spare capacity (indegree below `k`) and reverses the first path that hits
/// `u0`. If no such path exists while some `u0` vertex still has an entering
/// arc, the vertices that can reach `u0` form the certificate.
///
/// `d` must be `k`-bounded and `u0` an independent set; otherwise
/// [`Error::Contract`] is returned and `d` is untouched.
pub fn reorient_to_source(d: &mut Orientation, k: usize, u0: &[usize]) -> Result<Reorientation> {
    let n = d.num_vertices();
    let mut in_u0 = vec![false; n];
    for &u in u0 {
        if u >= n {
            return Err(Error::VertexOutOfRange { vertex: u, n });
        }
        if in_u0[u] {
            return Err(Error::Contract(format!("vertex {u} repeated in u0")));
        }
        in_u0[u] = true;
    }
    if let Some(v) = (0..n).find(|&v| d.indegree(v) > k) {
        return Err(Error::Contract(format!(
            "vertex {v} has indegree {} > {k}",
            d.indegree(v)
        )));
    }
    for &u in u0 {
        for &e in &d.incident[u] {
            let (t, h) = d.arcs[e];
            if in_u0[t] && in_u0[h] {
                return Err(Error::Contract(format!(
                    "u0 is not independent: edge {e} joins {t} and {h}"
                )));
            }
        }
    }

    let mut paths = 0;
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    while !d.is_source(u0) {
        seen.iter_mut().for_each(|s| *s = false);
        queue.clear();
        for v in 0..n {
            if !in_u0[v] && d.indegree(v) < k {
                seen[v] = true;
                parent[v] = usize::MAX;
                queue.push_back(v);
            }
        }
        let mut hit = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for (e, w) in d.out_arcs(v) {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = e;
                if in_u0[w] {
                    hit = Some(w);
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        let Some(mut w) = hit else {
            let reach = reaching(d, u0);
            return Ok(Reorientation::Violated(Certificate::with_offset(
                d.arcs.iter().copied(),
                n,
                k,
                k * u0.len(),
                reach,
            )));
        };
        while parent[w] != usize::MAX {
            let e = parent[w];
            let tail = d.arcs[e].0;
            d.reverse(e);
            w = tail;
        }
        paths += 1;
    }
    Ok(Reorientation::Source { paths })
}

/// Vertices from which some target is reachable (targets included), sorted.
fn reaching(d: &Orientation, targets: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; d.n];
    let mut stack = Vec::with_capacity(targets.len());
    for &t in targets {
        if !seen[t] {
            seen[t] = true;
            stack.push(t);
        }
    }
    while let Some(v) = stack.pop() {
        for (_, t) in d.in_arcs(v) {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    (0..d.n).filter(|&v| seen[v]).collect()
}

/// Pebble-style gathering: reverses paths from vertices outside `targets`
/// with indegree below `k` into `targets` until the total indegree of
/// `targets` is at most `max_total`. Returns the number of reversals, or the
/// closed set of vertices reaching `targets` when the budget cannot be met.
/// In that set every non-target vertex has indegree exactly `k` and no arc
/// enters from outside.
pub fn gather_pebbles(
    d: &mut Orientation,
    k: usize,
    targets: &[usize],
    max_total: usize,
) -> std::result::Result<usize, Vec<usize>> {
    let n = d.n;
    let mut is_target = vec![false; n];
    for &t in targets {
        is_target[t] = true;
    }
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut reversals = 0;
    loop {
        let total: usize = targets.iter().map(|&t| d.indeg[t]).sum();
        if total <= max_total {
            return Ok(reversals);
        }
        seen.iter_mut().for_each(|s| *s = false);
        queue.clear();
        for &t in targets {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
        let mut found = None;
        'bfs: while let Some(y) = queue.pop_front() {
            for (e, x) in d.in_arcs(y) {
                if seen[x] {
                    continue;
                }
                seen[x] = true;
                parent[x] = e;
                if !is_target[x] && d.indeg[x] < k {
                    found = Some(x);
                    break 'bfs;
                }
                queue.push_back(x);
            }
        }
        let Some(mut x) = found else {
            return Err((0..n).filter(|&v| seen[v]).collect());
        };
        while !is_target[x] {
            let e = parent[x];
            let head = d.arcs[e].1;
            d.reverse(e);
            x = head;
        }
        reversals += 1;
    }
}

/// Orients each tree of each forest away from its root (its lowest vertex),
/// giving indegree at most 1 per forest. Only edges assigned to a forest get
/// an arc; arcs follow increasing edge id, so for a complete decomposition
/// arc `i` is edge `i`.
pub fn orient_from_forests(fd: &ForestDecomposition) -> Orientation {
    let n = fd.num_vertices();
    let edges = fd.edges();
    let mut arc_dir: Vec<Option<(usize, usize)>> = vec![None; edges.len()];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for class in fd.classes() {
        for &e in &class {
            let (u, v) = edges[e];
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        for root in 0..n {
            if seen[root] || adj[root].is_empty() {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(p) = queue.pop_front() {
                for &(c, e) in &adj[p] {
                    if !seen[c] {
                        seen[c] = true;
                        arc_dir[e] = Some((p, c));
                        queue.push_back(c);
                    }
                }
            }
        }
        for &e in &class {
            let (u, v) = edges[e];
            adj[u].clear();
            adj[v].clear();
            seen[u] = false;
            seen[v] = false;
        }
    }
    let mut d = Orientation::empty(n);
    for (t, h) in arc_dir.into_iter().flatten() {
        d.push_arc(t, h);
    }
    d
}
