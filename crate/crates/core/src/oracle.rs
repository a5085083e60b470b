//! Reference checkers used to cross-examine the main recognizer. Neither one
//! touches the flow, orientation or rooted-connectivity code.

use crate::error::{Error, Result};
use crate::graph::{validate_input, Certificate, Graph, SparsityParams, SparsityRange};

/// Largest vertex count accepted by [`brute_force_check`].
pub const BRUTE_FORCE_MAX_N: usize = 24;

/// Enumerates vertex subsets in lexicographic order and returns the first
/// one that violates `p` (subsets of size at least three in the high range).
pub fn brute_force_check(g: &Graph, p: SparsityParams) -> Result<Option<Certificate>> {
    let n = g.num_vertices();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let mut between = vec![vec![0usize; n]; n];
    for &(u, v) in g.edges() {
        between[u.max(v)][u.min(v)] += 1;
    }
    let mut chosen = Vec::with_capacity(n);
    Ok(
        extend(&between, p, &mut chosen, 0, 0).map(|vertices| Certificate {
            induced_edges: induced(&between, &vertices),
            bound: p
                .bound(vertices.len())
                .expect("violating size is constrained"),
            vertices,
        }),
    )
}

fn induced(between: &[Vec<usize>], x: &[usize]) -> usize {
    x.iter()
        .enumerate()
        .map(|(i, &v)| x[..=i].iter().map(|&u| between[v][u]).sum::<usize>())
        .sum()
}

fn extend(
    between: &[Vec<usize>],
    p: SparsityParams,
    chosen: &mut Vec<usize>,
    from: usize,
    count: usize,
) -> Option<Vec<usize>> {
    for v in from..between.len() {
        let added: usize = chosen.iter().map(|&u| between[v][u]).sum::<usize>() + between[v][v];
        chosen.push(v);
        let count = count + added;
        if p.bound(chosen.len()).is_some_and(|b| count > b) {
            return Some(chosen.clone());
        }
        if let Some(x) = extend(between, p, chosen, v + 1, count) {
            return Some(x);
        }
        chosen.pop();
    }
    None
}

/// Orientation state of the pebble game: each vertex holds `k - indeg` free
/// pebbles, and an arc `a -> b` is covered by one of `b`'s pebbles.
struct Pebbles {
    k: usize,
    arcs: Vec<(usize, usize)>,
    into: Vec<Vec<usize>>,
    indeg: Vec<usize>,
    mark: Vec<u64>,
    stamp: u64,
}

impl Pebbles {
    fn new(n: usize, k: usize) -> Self {
        Pebbles {
            k,
            arcs: Vec::new(),
            into: vec![Vec::new(); n],
            indeg: vec![0; n],
            mark: vec![0; n],
            stamp: 0,
        }
    }

    fn insert(&mut self, tail: usize, head: usize) {
        let id = self.arcs.len();
        self.arcs.push((tail, head));
        self.into[head].push(id);
        self.indeg[head] += 1;
    }

    fn next_stamp(&mut self) -> u64 {
        self.stamp += 1;
        self.stamp
    }

    /// Depth-first search backwards from `goal` for a vertex not in `blocked`
    /// with a free pebble; reverses the path found. Vertices stamped with
    /// `stamp` are skipped and remain stamped afterwards.
    fn fetch(&mut self, goal: usize, stamp: u64, blocked: &[usize]) -> bool {
        let mut stack: Vec<(usize, usize)> = vec![(goal, 0)];
        let mut via: Vec<usize> = Vec::new();
        self.mark[goal] = stamp;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next == self.into[v].len() {
                stack.pop();
                via.pop();
                continue;
            }
            let a = self.into[v][*next];
            *next += 1;
            let x = self.arcs[a].0;
            if self.mark[x] == stamp || x == v {
                continue;
            }
            self.mark[x] = stamp;
            via.push(a);
            if self.indeg[x] < self.k && !blocked.contains(&x) {
                for &a in &via {
                    self.flip(a);
                }
                return true;
            }
            stack.push((x, 0));
        }
        false
    }

    fn flip(&mut self, a: usize) {
        let (t, h) = self.arcs[a];
        let pos = self.into[h]
            .iter()
            .position(|&b| b == a)
            .expect("arc listed");
        self.into[h].swap_remove(pos);
        self.into[t].push(a);
        self.indeg[h] -= 1;
        self.indeg[t] += 1;
        self.arcs[a] = (h, t);
    }

    /// Collects pebbles on `targets` until their indegrees sum to at most
    /// `budget`. On failure returns every vertex the last search touched.
    fn gather(
        &mut self,
        targets: &[usize],
        budget: usize,
        blocked: &[usize],
    ) -> std::result::Result<(), Vec<usize>> {
        loop {
            let total: usize = targets.iter().map(|&t| self.indeg[t]).sum();
            if total <= budget {
                return Ok(());
            }
            let stamp = self.next_stamp();
            for &t in targets.iter().chain(blocked) {
                self.mark[t] = stamp;
            }
            let mut moved = false;
            for &t in targets {
                if self.indeg[t] > 0 && self.fetch(t, stamp, blocked) {
                    moved = true;
                    break;
                }
            }
            if !moved {
                return Err((0..self.indeg.len())
                    .filter(|&v| self.mark[v] == stamp)
                    .collect());
            }
        }
    }
}

/// Greedy pebble-game recognizer. Edges are inserted in input order; an edge
/// is accepted when enough pebbles can be gathered on its endpoints, and the
/// first rejected edge yields a certificate.
///
/// For `l < 2k` an edge `uv` needs `l + 1` pebbles on `{u, v}`. For `l >= 2k`
/// all `2k` pebbles of `u` and `v` are gathered and then every third vertex
/// `w` must be able to collect `l + 1 - 2k` pebbles without touching `u` or
/// `v`, which costs a full scan over `w` per edge.
pub fn pebble_game_check(g: &Graph, p: SparsityParams) -> Result<Option<Certificate>> {
    validate_input(g, p).map_err(Error::Rejected)?;
    let (k, l) = (p.k(), p.l());
    let n = g.num_vertices();
    let mut game = Pebbles::new(n, k);
    for &(u, v) in g.edges() {
        let failed = if p.range() == SparsityRange::High {
            high_step(&mut game, u, v, 3 * k - l - 1)?
        } else if u == v {
            if l >= k {
                Some(vec![u])
            } else {
                game.gather(&[u], k - l - 1, &[]).err()
            }
        } else {
            game.gather(&[u, v], 2 * k - l - 1, &[]).err()
        };
        if let Some(set) = failed {
            return Certificate::for_params(g, p, set)
                .map(Some)
                .ok_or_else(|| Error::Contract("pebble game produced a non-violating set".into()));
        }
        if game.indeg[v] < k {
            game.insert(u, v);
        } else {
            game.insert(v, u);
        }
    }
    Ok(None)
}

fn high_step(game: &mut Pebbles, u: usize, v: usize, budget: usize) -> Result<Option<Vec<usize>>> {
    if game.gather(&[u, v], 0, &[]).is_err() {
        return Err(Error::Contract(format!(
            "cannot free both endpoints of edge ({u}, {v})"
        )));
    }
    for w in 0..game.indeg.len() {
        if w == u || w == v {
            continue;
        }
        if let Err(mut set) = game.gather(&[w], budget, &[u, v]) {
            set.sort_unstable();
            set.dedup();
            return Ok(Some(set));
        }
    }
    Ok(None)
}
