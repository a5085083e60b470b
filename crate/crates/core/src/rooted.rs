//! Rooted arc-connectivity: does every nonempty set avoiding the root have at
//! least `eta` entering arcs?

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Digraph with a distinguished root. Parallel arcs are stored once with a
/// multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedDigraph {
    nodes: usize,
    root: usize,
    /// `(tail, head, multiplicity)`
    arcs: Vec<(usize, usize, usize)>,
}

impl RootedDigraph {
    pub fn new(nodes: usize, root: usize) -> Result<Self> {
        if root >= nodes {
            return Err(Error::VertexOutOfRange {
                vertex: root,
                n: nodes,
            });
        }
        Ok(RootedDigraph {
            nodes,
            root,
            arcs: Vec::new(),
        })
    }

    pub fn add_arc(&mut self, tail: usize, head: usize) -> Result<()> {
        self.add_arcs(tail, head, 1)
    }

    /// Adds `multiplicity` parallel copies of `tail -> head`.
    pub fn add_arcs(&mut self, tail: usize, head: usize, multiplicity: usize) -> Result<()> {
        for v in [tail, head] {
            if v >= self.nodes {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.nodes,
                });
            }
        }
        if multiplicity > 0 {
            self.arcs.push((tail, head, multiplicity));
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn arcs(&self) -> &[(usize, usize, usize)] {
        &self.arcs
    }

    /// Number of arcs (with multiplicity) entering the node set `member`.
    pub fn in_degree_of(&self, member: &[bool]) -> usize {
        self.arcs
            .iter()
            .filter(|&&(t, h, _)| !member[t] && member[h])
            .map(|&(_, _, m)| m)
            .sum()
    }
}

/// Returns a nonempty node set `X` not containing the root with fewer than
/// `eta` entering arcs, or `None` if the digraph is rooted
/// `eta`-arc-connected.
///
/// `eta = 0` never fails. Unreachable nodes are reported first (their
/// complement-of-reach has in-degree 0). For `eta >= 2`, each sink in
/// increasing id order gets up to `eta` unit augmentations from the root; the
/// first sink that falls short yields the residual-unreachable side.
pub fn rooted_violation(d: &RootedDigraph, eta: usize) -> Option<Vec<usize>> {
    if eta == 0 || d.nodes <= 1 {
        return None;
    }
    let reach = reachable_from_root(d);
    if reach.iter().any(|&r| !r) {
        return Some((0..d.nodes).filter(|&v| !reach[v]).collect());
    }
    if eta == 1 {
        return None;
    }

    let mut direct = vec![0usize; d.nodes];
    for &(t, h, m) in &d.arcs {
        if t == d.root {
            direct[h] += m;
        }
    }
    let mut res = UnitResidual::new(d);
    for sink in 0..d.nodes {
        if sink == d.root || direct[sink] >= eta {
            continue;
        }
        res.reset();
        let mut flow = 0;
        while flow < eta && res.augment(d.root, sink) {
            flow += 1;
        }
        if flow < eta {
            let side = res.reached();
            debug_assert!(!side[sink]);
            return Some((0..d.nodes).filter(|&v| !side[v]).collect());
        }
    }
    None
}

fn reachable_from_root(d: &RootedDigraph) -> Vec<bool> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); d.nodes];
    for &(t, h, _) in &d.arcs {
        out[t].push(h);
    }
    let mut seen = vec![false; d.nodes];
    seen[d.root] = true;
    let mut stack = vec![d.root];
    while let Some(v) = stack.pop() {
        for &w in &out[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Residual network with capacities equal to arc multiplicities. Edge `2i`
/// is arc `i`, edge `2i + 1` its reverse.
struct UnitResidual {
    head: Vec<usize>,
    initial: Vec<usize>,
    cap: Vec<usize>,
    adj: Vec<Vec<usize>>,
    parent: Vec<usize>,
    seen: Vec<bool>,
    queue: VecDeque<usize>,
}

impl UnitResidual {
    fn new(d: &RootedDigraph) -> Self {
        let mut head = Vec::with_capacity(2 * d.arcs.len());
        let mut initial = Vec::with_capacity(2 * d.arcs.len());
        let mut adj = vec![Vec::new(); d.nodes];
        for (i, &(t, h, m)) in d.arcs.iter().enumerate() {
            head.extend([h, t]);
            initial.extend([m, 0]);
            adj[t].push(2 * i);
            adj[h].push(2 * i + 1);
        }
        UnitResidual {
            head,
            cap: initial.clone(),
            initial,
            adj,
            parent: vec![usize::MAX; d.nodes],
            seen: vec![false; d.nodes],
            queue: VecDeque::new(),
        }
    }

    fn reset(&mut self) {
        self.cap.copy_from_slice(&self.initial);
    }

    /// Breadth-first search for one residual path; pushes one unit along it.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        self.seen.iter_mut().for_each(|x| *x = false);
        self.queue.clear();
        self.seen[s] = true;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            for &e in &self.adj[v] {
                let w = self.head[e];
                if self.cap[e] == 0 || self.seen[w] {
                    continue;
                }
                self.seen[w] = true;
                self.parent[w] = e;
                if w == t {
                    let mut x = t;
                    while x != s {
                        let e = self.parent[x];
                        self.cap[e] -= 1;
                        self.cap[e ^ 1] += 1;
                        x = self.head[e ^ 1];
                    }
                    return true;
                }
                self.queue.push_back(w);
            }
        }
        false
    }

    /// Nodes reached by the last (failed) search.
    fn reached(&self) -> Vec<bool> {
        self.seen.clone()
    }
}
