//! The recognizer: one entry point, [`check_sparsity`], dispatching to a
//! driver per parameter range.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forests::{forest_decomposition, Decomposition};
use crate::graph::{validate_input, Certificate, Graph, SparsityParams, SparsityRange};
use crate::orient::{
    bounded_orientation, orient_from_forests, reorient_to_source, Orientation, Reorientation,
};
use crate::rooted::{rooted_violation, RootedDigraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognitionResult {
    pub sparse: bool,
    /// Present iff the graph is not sparse.
    pub certificate: Option<Certificate>,
}

impl RecognitionResult {
    pub fn sparse() -> Self {
        RecognitionResult {
            sparse: true,
            certificate: None,
        }
    }

    pub fn violated(c: Certificate) -> Self {
        RecognitionResult {
            sparse: false,
            certificate: Some(c),
        }
    }

    fn from_option(c: Option<Certificate>) -> Self {
        c.map_or_else(Self::sparse, Self::violated)
    }

    /// Machine-readable form of the certificate, if any.
    pub fn report(&self, p: SparsityParams) -> Option<CertificateReport> {
        self.certificate.as_ref().map(|c| CertificateReport {
            k: p.k(),
            l: p.l(),
            sparse: false,
            violating_set: c.vertices.clone(),
            induced_edges: c.induced_edges,
            bound: c.bound,
        })
    }
}

/// JSON shape of a negative answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub k: usize,
    pub l: usize,
    pub sparse: bool,
    pub violating_set: Vec<usize>,
    pub induced_edges: usize,
    pub bound: usize,
}

/// Decides `(k, l)`-sparsity of `g`.
///
/// Graphs with more than `kn` edges are rejected outright with `X = V`.
pub fn check_sparsity(g: &Graph, k: usize, l: usize) -> Result<RecognitionResult> {
    let p = SparsityParams::new(k, l)?;
    validate_input(g, p).map_err(Error::Rejected)?;
    let n = g.num_vertices();
    if g.num_edges() > k * n {
        if p.range() == SparsityRange::High && n < 3 {
            return Ok(RecognitionResult::sparse());
        }
        log::debug!("{} edges exceed k*n = {}", g.num_edges(), k * n);
        let c = Certificate::for_params(g, p, (0..n).collect())
            .expect("more than kn edges violate every bound");
        return Ok(RecognitionResult::violated(c));
    }
    log::debug!("checking {p}-sparsity, n={n} m={}", g.num_edges());
    match p.range() {
        SparsityRange::Low => check_sparsity_low(g, p),
        SparsityRange::Mid => check_sparsity_mid(g, p),
        SparsityRange::High => check_sparsity_high(g, p),
    }
}

fn expect_range(g: &Graph, p: SparsityParams, range: SparsityRange) -> Result<()> {
    if p.range() != range {
        return Err(Error::Contract(format!(
            "{p} is not in the {range:?} range"
        )));
    }
    validate_input(g, p).map_err(Error::Rejected)
}

/// Range `l <= k`: a `k`-bounded orientation, then a rooted
/// `l`-arc-connectivity test of the orientation extended by a root.
pub fn check_sparsity_low(g: &Graph, p: SparsityParams) -> Result<RecognitionResult> {
    expect_range(g, p, SparsityRange::Low)?;
    let (k, l) = (p.k(), p.l());
    let n = g.num_vertices();
    let d = match bounded_orientation(g, k) {
        Ok(d) => d,
        Err(c) => {
            log::debug!("no {k}-bounded orientation, {} vertices", c.len());
            return Ok(RecognitionResult::violated(reframe(g, k, l, c.vertices)));
        }
    };
    let found = superset_violation(&d, &[], k, l)?;
    Ok(RecognitionResult::from_option(found.map(|x| {
        Certificate::with_offset(g.edges().iter().copied(), n, k, l, x)
    })))
}

/// Range `k < l < 2k`: decompose into `k` forests, orient them, and search
/// each tree of the first `l - k` forests for a violating set it saturates.
pub fn check_sparsity_mid(g: &Graph, p: SparsityParams) -> Result<RecognitionResult> {
    expect_range(g, p, SparsityRange::Mid)?;
    let (k, l) = (p.k(), p.l());
    let fd = match forest_decomposition(g, k)? {
        Decomposition::Forests(fd) => fd,
        Decomposition::Violated(c) => {
            log::debug!("not {k} forests, {} vertices", c.len());
            return Ok(RecognitionResult::violated(reframe(g, k, l, c.vertices)));
        }
    };
    let d = orient_from_forests(&fd);
    let mut scratch = vec![usize::MAX; g.num_vertices()];
    for i in 0..l - k {
        for comp in fd.components(i) {
            let sub = d.induced_with(&comp.vertices, &mut scratch);
            let tree = local_tree(
                &comp.vertices,
                comp.edges.iter().map(|&e| g.edge(e)),
                &mut scratch,
            );
            if let Some(x) = saturated_local(sub, &tree, k, l)? {
                let x = x.into_iter().map(|v| comp.vertices[v]).collect();
                log::debug!("forest {i} saturates a violating set");
                return Ok(RecognitionResult::violated(reframe(g, k, l, x)));
            }
        }
    }
    Ok(RecognitionResult::sparse())
}

/// Range `2k <= l < 3k`: insert edges one at a time, keeping a `k`-bounded
/// orientation of the accepted subgraph `H`. Edge `uv` is accepted unless some
/// set containing `u` and `v` violates `(k, l + 1)`-sparsity in `H`.
pub fn check_sparsity_high(g: &Graph, p: SparsityParams) -> Result<RecognitionResult> {
    expect_range(g, p, SparsityRange::High)?;
    let (k, l) = (p.k(), p.l());
    let n = g.num_vertices();
    let mut d = Orientation::empty(n);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match reorient_to_source(&mut d, k, &[u, v])? {
            Reorientation::Source { .. } => {}
            Reorientation::Violated(c) => {
                return Err(Error::Contract(format!(
                    "accepted edges are not ({k}, {})-sparse around {:?}",
                    2 * k,
                    c.vertices
                )))
            }
        }
        if let Some(x) = superset_violation(&d, &[u, v], k, l + 1)? {
            log::debug!("edge {e} rejected after {e} accepted");
            return Ok(RecognitionResult::violated(Certificate::with_offset(
                g.edges().iter().copied(),
                n,
                k,
                l,
                x,
            )));
        }
        d.push_arc(u, v);
    }
    Ok(RecognitionResult::sparse())
}

/// Looks for a strict superset of `u0` violating `(k, l)`-sparsity in the
/// underlying graph of `d0`.
///
/// `d0` must be `k`-bounded with every vertex of `u0` a source, and
/// `t k <= l <= (t + 1) k` for `t = |u0|`. `l` is taken raw so that callers
/// may ask about `l = 3k`. Each vertex outside `u0` receives `k - indeg`
/// arcs from a new root, and a set `Y` entering fewer than `l - t k` of the
/// resulting arcs gives the violator `Y + u0`.
pub fn check_superset_sparsity(
    d0: &Orientation,
    u0: &[usize],
    k: usize,
    l: usize,
) -> Result<Option<Certificate>> {
    Ok(superset_violation(d0, u0, k, l)?
        .map(|x| Certificate::with_offset(d0.arcs().iter().copied(), d0.num_vertices(), k, l, x)))
}

fn superset_violation(
    d0: &Orientation,
    u0: &[usize],
    k: usize,
    l: usize,
) -> Result<Option<Vec<usize>>> {
    let n = d0.num_vertices();
    let t = u0.len();
    if k == 0 || l < t * k || l > (t + 1) * k {
        return Err(Error::Contract(format!(
            "l = {l} outside [{}, {}] for |u0| = {t}",
            t * k,
            (t + 1) * k
        )));
    }
    let mut local = vec![usize::MAX; n];
    for &u in u0 {
        if u >= n {
            return Err(Error::VertexOutOfRange { vertex: u, n });
        }
        if local[u] == 0 {
            return Err(Error::Contract(format!("vertex {u} repeated in u0")));
        }
        if d0.indegree(u) != 0 {
            return Err(Error::Contract(format!(
                "u0 vertex {u} has an entering arc"
            )));
        }
        local[u] = 0;
    }
    if let Some(v) = (0..n).find(|&v| d0.indegree(v) > k) {
        return Err(Error::Contract(format!(
            "vertex {v} has indegree above {k}"
        )));
    }

    let mut global = Vec::with_capacity(n - t);
    for v in 0..n {
        if local[v] == usize::MAX {
            local[v] = global.len();
            global.push(v);
        }
    }
    let in_u0 = |v: usize| u0.contains(&v);
    let root = global.len();
    let mut rooted = RootedDigraph::new(root + 1, root)?;
    for &(a, b) in d0.arcs() {
        if a != b && !in_u0(a) {
            rooted.add_arc(local[a], local[b])?;
        }
    }
    for (i, &v) in global.iter().enumerate() {
        rooted.add_arcs(root, i, k - d0.indegree(v))?;
    }
    Ok(rooted_violation(&rooted, l - t * k).map(|y| {
        let mut x: Vec<usize> = y.into_iter().map(|i| global[i]).collect();
        x.extend_from_slice(u0);
        x
    }))
}

/// Finds a set violating `(k, l)`-sparsity in the underlying graph of `d`,
/// guaranteed to succeed when some violating set is saturated by `tree` (its
/// tree edges inside `X` connect `X`). `d` must be `k`-bounded and `tree` a
/// spanning tree of the vertex set; `p` must lie in the range `k < l < 2k`.
///
/// Splits at the lowest-id centroid `c`: sets through `c` are handled by
/// making `c` a source and checking supersets of `{c}`, the rest by
/// recursion into the components of `tree - c`.
pub fn saturated_violation(
    d: &Orientation,
    tree: &[(usize, usize)],
    p: SparsityParams,
) -> Result<Option<Certificate>> {
    if p.range() != SparsityRange::Mid {
        return Err(Error::Contract(format!("{p} is not in the Mid range")));
    }
    let n = d.num_vertices();
    if tree.len() + 1 != n.max(1) {
        return Err(Error::Contract(format!(
            "{} tree edges cannot span {n} vertices",
            tree.len()
        )));
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in tree {
        if u >= n || v >= n {
            return Err(Error::VertexOutOfRange {
                vertex: u.max(v),
                n,
            });
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    while let Some(v) = stack.pop().filter(|_| n > 0) {
        if !std::mem::replace(&mut seen[v], true) {
            stack.extend(&adj[v]);
        }
    }
    if seen.contains(&false) {
        return Err(Error::Contract("tree is not connected".into()));
    }
    let (k, l) = (p.k(), p.l());
    Ok(saturated_local(d.clone(), &adj, k, l)?
        .map(|x| Certificate::with_offset(d.arcs().iter().copied(), n, k, l, x)))
}

fn saturated_local(
    mut d: Orientation,
    tree: &[Vec<usize>],
    k: usize,
    l: usize,
) -> Result<Option<Vec<usize>>> {
    let n = d.num_vertices();
    if n <= 1 {
        return Ok(None);
    }
    let c = centroid(tree);
    match reorient_to_source(&mut d, k, &[c])? {
        Reorientation::Violated(cert) => return Ok(Some(cert.vertices)),
        Reorientation::Source { .. } => {}
    }
    if let Some(x) = superset_violation(&d, &[c], k, l)? {
        return Ok(Some(x));
    }
    let mut scratch = vec![usize::MAX; n];
    for &start in &tree[c] {
        let mut part = component(tree, start, c);
        part.sort_unstable();
        let sub = d.induced_with(&part, &mut scratch);
        let edges = part.iter().flat_map(|&v| {
            tree[v]
                .iter()
                .filter(move |&&w| v < w)
                .map(move |&w| (v, w))
        });
        let sub_tree = local_tree(&part, edges, &mut scratch);
        if let Some(x) = saturated_local(sub, &sub_tree, k, l)? {
            return Ok(Some(x.into_iter().map(|v| part[v]).collect()));
        }
    }
    Ok(None)
}

/// Adjacency lists of the tree edges with both ends in `vertices`,
/// re-indexed by position in `vertices`. `scratch` is left all `usize::MAX`.
fn local_tree(
    vertices: &[usize],
    edges: impl IntoIterator<Item = (usize, usize)>,
    scratch: &mut [usize],
) -> Vec<Vec<usize>> {
    for (i, &v) in vertices.iter().enumerate() {
        scratch[v] = i;
    }
    let mut adj = vec![Vec::new(); vertices.len()];
    for (u, v) in edges {
        let (a, b) = (scratch[u], scratch[v]);
        if a != usize::MAX && b != usize::MAX {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for &v in vertices {
        scratch[v] = usize::MAX;
    }
    adj
}

/// Vertices reachable from `start` in `tree` without passing `blocked`.
fn component(tree: &[Vec<usize>], start: usize, blocked: usize) -> Vec<usize> {
    let mut out = vec![start];
    let mut stack = vec![(start, blocked)];
    while let Some((v, from)) = stack.pop() {
        for &w in &tree[v] {
            if w != from && w != blocked {
                out.push(w);
                stack.push((w, v));
            }
        }
    }
    out
}

/// Lowest-id vertex whose removal leaves no component with more than half
/// of the tree's vertices.
pub(crate) fn centroid(tree: &[Vec<usize>]) -> usize {
    let n = tree.len();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in &tree[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    let mut heaviest = vec![0usize; n];
    for &v in order.iter().rev() {
        if v != 0 {
            let p = parent[v];
            size[p] += size[v];
            heaviest[p] = heaviest[p].max(size[v]);
        }
    }
    (0..n)
        .find(|&v| 2 * heaviest[v].max(n - size[v]) <= n)
        .expect("every tree has a centroid")
}

/// `(k, l)` certificate for a set known to violate a stronger bound.
fn reframe(g: &Graph, k: usize, l: usize, x: Vec<usize>) -> Certificate {
    Certificate::with_offset(g.edges().iter().copied(), g.num_vertices(), k, l, x)
}
