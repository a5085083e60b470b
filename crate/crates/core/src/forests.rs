//! Partitioning edges into `kappa` forests by incremental matroid-union
//! insertion, with a `(kappa, kappa)`-violating set when that is impossible.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Certificate, Graph};
use crate::orient::{gather_pebbles, orient_from_forests};

/// Assignment of edge ids to forest classes `0..kappa`. Edges may be left
/// unassigned in a partial decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestDecomposition {
    n: usize,
    kappa: usize,
    edges: Vec<(usize, usize)>,
    assignment: Vec<Option<usize>>,
}

/// One tree of a forest class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestComponent {
    /// Sorted vertex ids.
    pub vertices: Vec<usize>,
    /// Edge ids of the tree.
    pub edges: Vec<usize>,
}

impl ForestDecomposition {
    /// Builds a decomposition from an explicit assignment, checking that every
    /// class is acyclic.
    pub fn from_assignment(
        g: &Graph,
        kappa: usize,
        assignment: Vec<Option<usize>>,
    ) -> Result<Self> {
        if assignment.len() != g.num_edges() {
            return Err(Error::Contract(format!(
                "assignment covers {} edges, graph has {}",
                assignment.len(),
                g.num_edges()
            )));
        }
        let fd = ForestDecomposition {
            n: g.num_vertices(),
            kappa,
            edges: g.edges().to_vec(),
            assignment,
        };
        if let Some(bad) = fd.assignment.iter().flatten().find(|&&i| i >= kappa) {
            return Err(Error::Contract(format!("forest index {bad} >= {kappa}")));
        }
        if !fd.is_acyclic() {
            return Err(Error::Contract("a forest class contains a cycle".into()));
        }
        Ok(fd)
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Endpoints of every edge of the underlying graph, assigned or not.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn forest_of(&self, edge: usize) -> Option<usize> {
        self.assignment[edge]
    }

    pub fn is_complete(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    /// Edge ids of each class, increasing.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.kappa];
        for (e, a) in self.assignment.iter().enumerate() {
            if let Some(i) = *a {
                classes[i].push(e);
            }
        }
        classes
    }

    /// Replays every class through a union-find and reports whether all of
    /// them are acyclic.
    pub fn is_acyclic(&self) -> bool {
        self.classes().iter().all(|class| {
            let mut dsu = DisjointSets::new(self.n);
            class.iter().all(|&e| {
                let (u, v) = self.edges[e];
                dsu.union(u, v)
            })
        })
    }

    /// Trees of class `i` with at least one edge, ordered by lowest vertex.
    pub fn components(&self, i: usize) -> Vec<ForestComponent> {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n];
        for (e, a) in self.assignment.iter().enumerate() {
            if *a == Some(i) {
                let (u, v) = self.edges[e];
                adj[u].push((v, e));
                adj[v].push((u, e));
            }
        }
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for root in 0..self.n {
            if seen[root] || adj[root].is_empty() {
                continue;
            }
            seen[root] = true;
            stack.push(root);
            let mut comp = ForestComponent {
                vertices: vec![root],
                edges: Vec::new(),
            };
            while let Some(v) = stack.pop() {
                for &(w, e) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.vertices.push(w);
                        comp.edges.push(e);
                        stack.push(w);
                    }
                }
            }
            comp.vertices.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Outcome of [`forest_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    Forests(ForestDecomposition),
    /// A set with `i_G(X) > kappa|X| - kappa`.
    Violated(Certificate),
}

impl Decomposition {
    pub fn forests(self) -> Option<ForestDecomposition> {
        match self {
            Decomposition::Forests(fd) => Some(fd),
            Decomposition::Violated(_) => None,
        }
    }

    pub fn certificate(self) -> Option<Certificate> {
        match self {
            Decomposition::Forests(_) => None,
            Decomposition::Violated(c) => Some(c),
        }
    }
}

/// Partitions the edges of the loop-free graph `g` into `kappa` forests.
///
/// Edges are inserted in id order. An edge that closes a cycle in every class
/// triggers a breadth-first exchange search: an edge `f` may enter class `i`
/// by displacing any edge on the `i`-path between its endpoints, and the
/// search succeeds once some labelled edge can enter a class without
/// displacement. If the search dies out, the edge is dependent on the edges
/// accepted so far and a violating set is extracted from them.
pub fn forest_decomposition(g: &Graph, kappa: usize) -> Result<Decomposition> {
    if kappa == 0 {
        return Err(Error::Contract("kappa must be positive".into()));
    }
    if g.has_loop() {
        return Err(Error::Contract(
            "forest decomposition needs a loop-free graph".into(),
        ));
    }
    let mut builder = Builder::new(g, kappa);
    for e in 0..g.num_edges() {
        if !builder.insert(e) {
            log::debug!("edge {e} rejected after {} accepted", e);
            let partial = builder.finish();
            let cert = violating_set_from_failed_decomposition(g, &partial, e, kappa)?;
            return Ok(Decomposition::Violated(cert));
        }
    }
    let fd = builder.finish();
    debug_assert!(fd.is_acyclic() && fd.is_complete());
    Ok(Decomposition::Forests(fd))
}

/// Turns a rejected edge into a `(kappa, kappa)`-violating set.
///
/// `partial` must hold a maximum-size `(kappa, kappa)`-sparse subset of the
/// edges in `kappa` forests and `rejected_edge` must not fit. The forests are
/// oriented root-outwards (indegree at most `kappa`) and one pebble-game
/// insertion attempt for the rejected edge is run; it has to fail, and the
/// vertices that can reach its endpoints form the certificate.
pub fn violating_set_from_failed_decomposition(
    g: &Graph,
    partial: &ForestDecomposition,
    rejected_edge: usize,
    kappa: usize,
) -> Result<Certificate> {
    let (u, v) = g.edge(rejected_edge);
    if u == v {
        return Err(Error::Contract("rejected edge is a loop".into()));
    }
    let mut d = orient_from_forests(partial);
    match gather_pebbles(&mut d, kappa, &[u, v], kappa - 1) {
        Ok(_) => Err(Error::Contract(format!(
            "edge {rejected_edge} can still be inserted"
        ))),
        Err(set) => Ok(Certificate::with_offset(
            g.edges().iter().copied(),
            g.num_vertices(),
            kappa,
            kappa,
            set,
        )),
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false if `u` and `v` were already joined.
    fn union(&mut self, u: usize, v: usize) -> bool {
        let (a, b) = (self.find(u), self.find(v));
        if a == b {
            return false;
        }
        self.parent[a] = b;
        true
    }
}

const UNLABELLED: usize = usize::MAX;
const ROOT: usize = usize::MAX - 1;

struct Builder<'g> {
    g: &'g Graph,
    kappa: usize,
    assignment: Vec<Option<usize>>,
    /// Per class, per vertex: `(neighbour, edge id)`.
    adj: Vec<Vec<Vec<(usize, usize)>>>,
    dsu: Vec<DisjointSets>,
    stale: Vec<bool>,
    /// Per edge: the edge that displaces it and the class, or ROOT.
    label: Vec<(usize, usize)>,
    labelled: Vec<usize>,
    path_parent: Vec<(usize, usize)>,
    path_touched: Vec<usize>,
}

impl<'g> Builder<'g> {
    fn new(g: &'g Graph, kappa: usize) -> Self {
        let n = g.num_vertices();
        Builder {
            g,
            kappa,
            assignment: vec![None; g.num_edges()],
            adj: (0..kappa).map(|_| vec![Vec::new(); n]).collect(),
            dsu: (0..kappa).map(|_| DisjointSets::new(n)).collect(),
            stale: vec![false; kappa],
            label: vec![(UNLABELLED, 0); g.num_edges()],
            labelled: Vec::new(),
            path_parent: vec![(usize::MAX, usize::MAX); n],
            path_touched: Vec::new(),
        }
    }

    fn connected(&mut self, i: usize, u: usize, v: usize) -> bool {
        if self.stale[i] {
            self.dsu[i].reset();
            for (e, a) in self.assignment.iter().enumerate() {
                if *a == Some(i) {
                    let (x, y) = self.g.edge(e);
                    self.dsu[i].union(x, y);
                }
            }
            self.stale[i] = false;
        }
        self.dsu[i].find(u) == self.dsu[i].find(v)
    }

    fn place(&mut self, e: usize, i: usize) {
        let (u, v) = self.g.edge(e);
        self.adj[i][u].push((v, e));
        self.adj[i][v].push((u, e));
        self.assignment[e] = Some(i);
        if !self.stale[i] {
            self.dsu[i].union(u, v);
        }
    }

    fn unplace(&mut self, e: usize) {
        let Some(i) = self.assignment[e].take() else {
            return;
        };
        let (u, v) = self.g.edge(e);
        for w in [u, v] {
            let list = &mut self.adj[i][w];
            let pos = list.iter().position(|&(_, f)| f == e).expect("edge listed");
            list.swap_remove(pos);
        }
        self.stale[i] = true;
    }

    /// Edge ids on the class-`i` tree path between `x` and `y` (which must be
    /// connected in that class), listed from `y` back to `x`.
    fn tree_path(&mut self, i: usize, x: usize, y: usize) -> Vec<usize> {
        let mut queue = VecDeque::from([x]);
        self.path_parent[x] = (x, usize::MAX);
        self.path_touched.push(x);
        'bfs: while let Some(v) = queue.pop_front() {
            for &(w, e) in &self.adj[i][v] {
                if self.path_parent[w].0 == usize::MAX {
                    self.path_parent[w] = (v, e);
                    self.path_touched.push(w);
                    if w == y {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        let mut path = Vec::new();
        let mut w = y;
        while w != x {
            let (p, e) = self.path_parent[w];
            path.push(e);
            w = p;
        }
        for v in self.path_touched.drain(..) {
            self.path_parent[v] = (usize::MAX, usize::MAX);
        }
        path
    }

    fn insert(&mut self, e: usize) -> bool {
        let (u, v) = self.g.edge(e);
        for i in 0..self.kappa {
            if !self.connected(i, u, v) {
                self.place(e, i);
                return true;
            }
        }

        let mut queue = VecDeque::from([e]);
        self.label[e] = (ROOT, 0);
        self.labelled.push(e);
        let mut found = None;
        'search: while let Some(f) = queue.pop_front() {
            let (x, y) = self.g.edge(f);
            for i in 0..self.kappa {
                if self.assignment[f] == Some(i) {
                    continue;
                }
                if !self.connected(i, x, y) {
                    found = Some((f, i));
                    break 'search;
                }
                for h in self.tree_path(i, x, y) {
                    if self.label[h].0 == UNLABELLED {
                        self.label[h] = (f, i);
                        self.labelled.push(h);
                        queue.push_back(h);
                    }
                }
            }
        }

        if let Some((mut cur, mut target)) = found {
            loop {
                self.unplace(cur);
                self.place(cur, target);
                let (by, class) = self.label[cur];
                if by == ROOT {
                    break;
                }
                cur = by;
                target = class;
            }
        }
        for f in self.labelled.drain(..) {
            self.label[f] = (UNLABELLED, 0);
        }
        found.is_some()
    }

    fn finish(self) -> ForestDecomposition {
        ForestDecomposition {
            n: self.g.num_vertices(),
            kappa: self.kappa,
            edges: self.g.edges().to_vec(),
            assignment: self.assignment,
        }
    }
}
