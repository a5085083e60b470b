//! Integer maximum flow (layered blocking flows) with min-cut extraction, and
//! feasible circulations with lower bounds that either produce a circulation
//! or a set violating Hoffman's condition.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowArc {
    pub tail: usize,
    pub head: usize,
    pub capacity: u64,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    nodes: usize,
    source: usize,
    sink: usize,
    arcs: Vec<FlowArc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: u64,
    /// Flow on each arc, indexed like [`FlowNetwork::arcs`].
    pub flow: Vec<u64>,
    /// Source side of a minimum cut, sorted.
    pub cut: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Result<Self> {
        for v in [source, sink] {
            if v >= nodes {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: nodes,
                });
            }
        }
        if source == sink {
            return Err(Error::Contract("source and sink must differ".into()));
        }
        Ok(FlowNetwork {
            nodes,
            source,
            sink,
            arcs: Vec::new(),
        })
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, capacity: u64) -> Result<usize> {
        for v in [tail, head] {
            if v >= self.nodes {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.nodes,
                });
            }
        }
        self.arcs.push(FlowArc {
            tail,
            head,
            capacity,
        });
        Ok(self.arcs.len() - 1)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    /// Total capacity of arcs leaving `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> u64 {
        self.arcs
            .iter()
            .filter(|a| side[a.tail] && !side[a.head])
            .map(|a| a.capacity)
            .sum()
    }
}

/// Residual graph: arc `i` of the network becomes edges `2i` (forward) and
/// `2i + 1` (backward).
struct Residual {
    head: Vec<usize>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(net: &FlowNetwork) -> Self {
        let mut head = Vec::with_capacity(2 * net.arcs.len());
        let mut cap = Vec::with_capacity(2 * net.arcs.len());
        let mut adj = vec![Vec::new(); net.nodes];
        for (i, a) in net.arcs.iter().enumerate() {
            head.push(a.head);
            cap.push(a.capacity);
            head.push(a.tail);
            cap.push(0);
            adj[a.tail].push(2 * i);
            adj[a.head].push(2 * i + 1);
        }
        Residual { head, cap, adj }
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let w = self.head[e];
                if self.cap[e] > 0 && level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        level
    }

    /// One blocking flow on the layered network, found with an explicit
    /// path stack and per-node current-arc pointers.
    fn blocking_flow(&mut self, s: usize, t: usize, level: &[usize]) -> u64 {
        let mut next = vec![0usize; self.adj.len()];
        let mut total = 0;
        let mut path: Vec<usize> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                let push = path.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
                for &e in &path {
                    self.cap[e] -= push;
                    self.cap[e ^ 1] += push;
                }
                total += push;
                // retreat to the tail of the first saturated edge
                let cut = path.iter().position(|&e| self.cap[e] == 0).unwrap_or(0);
                path.truncate(cut);
                v = path.last().map_or(s, |&e| self.head[e]);
                continue;
            }
            let mut advanced = false;
            while next[v] < self.adj[v].len() {
                let e = self.adj[v][next[v]];
                let w = self.head[e];
                if self.cap[e] > 0 && level[w] == level[v] + 1 {
                    path.push(e);
                    v = w;
                    advanced = true;
                    break;
                }
                next[v] += 1;
            }
            if !advanced {
                if v == s {
                    break;
                }
                // dead end: drop the edge that led here
                let e = path.pop().expect("non-source node has an entry edge");
                let u = self.head[e ^ 1];
                next[u] += 1;
                v = u;
            }
        }
        total
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v] {
                let w = self.head[e];
                if self.cap[e] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Maximum `source`-`sink` flow together with a minimum cut (the nodes
/// reachable from the source in the final residual network).
pub fn max_flow(net: &FlowNetwork) -> MaxFlow {
    let (s, t) = (net.source, net.sink);
    let mut res = Residual::new(net);
    let mut value = 0;
    loop {
        let level = res.levels(s);
        if level[t] == usize::MAX {
            break;
        }
        value += res.blocking_flow(s, t, &level);
    }
    let flow = net
        .arcs
        .iter()
        .enumerate()
        .map(|(i, a)| a.capacity - res.cap[2 * i])
        .collect();
    let side = res.reachable(s);
    let cut = (0..net.nodes).filter(|&v| side[v]).collect();
    MaxFlow { value, flow, cut }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedArc {
    pub tail: usize,
    pub head: usize,
    pub lower: u64,
    pub upper: u64,
}

#[derive(Debug, Clone, Default)]
pub struct CirculationNetwork {
    nodes: usize,
    arcs: Vec<BoundedArc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Circulation {
    /// Value on each arc, indexed like [`CirculationNetwork::arcs`].
    Feasible(Vec<u64>),
    /// A node set `X` whose outgoing lower bounds exceed its incoming upper
    /// bounds. Sorted.
    Infeasible(Vec<usize>),
}

impl CirculationNetwork {
    pub fn new(nodes: usize) -> Self {
        CirculationNetwork {
            nodes,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, lower: u64, upper: u64) -> Result<usize> {
        for v in [tail, head] {
            if v >= self.nodes {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.nodes,
                });
            }
        }
        if lower > upper {
            return Err(Error::Contract(format!(
                "arc {tail}->{head} has lower bound {lower} above upper bound {upper}"
            )));
        }
        self.arcs.push(BoundedArc {
            tail,
            head,
            lower,
            upper,
        });
        Ok(self.arcs.len() - 1)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[BoundedArc] {
        &self.arcs
    }

    /// `(sum of lower bounds leaving X, sum of upper bounds entering X)`.
    pub fn hoffman_sides(&self, member: &[bool]) -> (u64, u64) {
        let mut out_lower = 0;
        let mut in_upper = 0;
        for a in &self.arcs {
            match (member[a.tail], member[a.head]) {
                (true, false) => out_lower += a.lower,
                (false, true) => in_upper += a.upper,
                _ => {}
            }
        }
        (out_lower, in_upper)
    }
}

/// Finds a feasible integer circulation, or a Hoffman-violating node set.
///
/// Lower bounds are shifted out into node excesses that a super source and a
/// super sink must balance; the circulation exists iff the resulting max flow
/// saturates every super-source arc. Otherwise the nodes *not* reachable from
/// the super source in the final residual network violate the condition.
pub fn feasible_circulation(net: &CirculationNetwork) -> Circulation {
    let n = net.nodes;
    let (ss, tt) = (n, n + 1);
    let mut flow_net = FlowNetwork::new(n + 2, ss, tt).expect("fresh endpoints are distinct");
    let mut excess = vec![0i128; n];
    for a in &net.arcs {
        flow_net
            .add_arc(a.tail, a.head, a.upper - a.lower)
            .expect("arc endpoints were validated");
        excess[a.head] += i128::from(a.lower);
        excess[a.tail] -= i128::from(a.lower);
    }
    let mut demand = 0u64;
    for (v, &ex) in excess.iter().enumerate() {
        if ex > 0 {
            let ex = ex as u64;
            flow_net.add_arc(ss, v, ex).expect("valid node");
            demand += ex;
        } else if ex < 0 {
            flow_net.add_arc(v, tt, (-ex) as u64).expect("valid node");
        }
    }

    let result = max_flow(&flow_net);
    if result.value == demand {
        let values = net
            .arcs
            .iter()
            .zip(&result.flow)
            .map(|(a, f)| a.lower + f)
            .collect();
        return Circulation::Feasible(values);
    }
    let mut reached = vec![false; n];
    for &v in &result.cut {
        if v < n {
            reached[v] = true;
        }
    }
    Circulation::Infeasible((0..n).filter(|&v| !reached[v]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn network(nodes: usize, s: usize, t: usize, arcs: &[(usize, usize, u64)]) -> FlowNetwork {
        let mut net = FlowNetwork::new(nodes, s, t).unwrap();
        for &(a, b, c) in arcs {
            net.add_arc(a, b, c).unwrap();
        }
        net
    }

    /// Minimum over all source-side sets of the cut capacity.
    fn min_cut_by_enumeration(net: &FlowNetwork) -> u64 {
        let others: Vec<usize> = (0..net.nodes())
            .filter(|&v| v != net.source() && v != net.sink())
            .collect();
        (0u32..1 << others.len())
            .map(|mask| {
                let mut side = vec![false; net.nodes()];
                side[net.source()] = true;
                for (i, &v) in others.iter().enumerate() {
                    side[v] = mask >> i & 1 == 1;
                }
                net.cut_capacity(&side)
            })
            .min()
            .unwrap()
    }

    /// Largest net outflow of the source over every integer assignment that
    /// respects capacities and conservation.
    fn max_flow_by_enumeration(net: &FlowNetwork) -> u64 {
        let arcs = net.arcs();
        let mut best = 0;
        let mut assignment = vec![0u64; arcs.len()];
        loop {
            let mut balance = vec![0i64; net.nodes()];
            for (a, &f) in arcs.iter().zip(&assignment) {
                balance[a.tail] -= f as i64;
                balance[a.head] += f as i64;
            }
            let conserved =
                (0..net.nodes()).all(|v| v == net.source() || v == net.sink() || balance[v] == 0);
            if conserved && balance[net.sink()] >= 0 {
                best = best.max(balance[net.sink()] as u64);
            }
            // odometer increment
            let mut i = 0;
            loop {
                if i == arcs.len() {
                    return best;
                }
                if assignment[i] < arcs[i].capacity {
                    assignment[i] += 1;
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }

    fn check_witness(net: &FlowNetwork, r: &MaxFlow) {
        let mut balance = vec![0i64; net.nodes()];
        for (a, &f) in net.arcs().iter().zip(&r.flow) {
            assert!(f <= a.capacity);
            balance[a.tail] -= f as i64;
            balance[a.head] += f as i64;
        }
        for v in 0..net.nodes() {
            if v != net.source() && v != net.sink() {
                assert_eq!(balance[v], 0, "conservation at {v}");
            }
        }
        assert_eq!(balance[net.sink()], r.value as i64);
        let mut side = vec![false; net.nodes()];
        for &v in &r.cut {
            side[v] = true;
        }
        assert!(side[net.source()] && !side[net.sink()]);
        assert_eq!(net.cut_capacity(&side), r.value);
    }

    #[test]
    fn single_arc() {
        let net = network(2, 0, 1, &[(0, 1, 3)]);
        let r = max_flow(&net);
        assert_eq!(r.value, 3);
        assert_eq!(r.cut, vec![0]);
    }

    #[test]
    fn two_routes() {
        // s=0, a=1, t=2
        let net = network(3, 0, 2, &[(0, 1, 2), (1, 2, 1), (0, 2, 1)]);
        assert_eq!(min_cut_by_enumeration(&net), 2);
        let r = max_flow(&net);
        assert_eq!(r.value, 2);
        check_witness(&net, &r);
    }

    #[test]
    fn no_arcs() {
        let net = network(4, 0, 3, &[]);
        let r = max_flow(&net);
        assert_eq!(r.value, 0);
        assert_eq!(r.cut, vec![0]);
    }

    #[test]
    fn rejects_bad_endpoints() {
        assert!(FlowNetwork::new(2, 0, 0).is_err());
        assert!(FlowNetwork::new(2, 0, 2).is_err());
        let mut net = FlowNetwork::new(2, 0, 1).unwrap();
        assert!(net.add_arc(0, 5, 1).is_err());
    }

    #[test]
    fn long_path_does_not_recurse() {
        let n = 200_000;
        let arcs: Vec<(usize, usize, u64)> = (1..n).map(|v| (v - 1, v, 1)).collect();
        let r = max_flow(&network(n, 0, n - 1, &arcs));
        assert_eq!(r.value, 1);
    }

    #[test]
    fn random_networks_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xf10e);
        for round in 0..1000 {
            let nodes = rng.gen_range(2..=8);
            let arcs = rng.gen_range(0..=12);
            let arcs: Vec<(usize, usize, u64)> = (0..arcs)
                .map(|_| {
                    (
                        rng.gen_range(0..nodes),
                        rng.gen_range(0..nodes),
                        rng.gen_range(0..=3),
                    )
                })
                .collect();
            let net = network(nodes, 0, nodes - 1, &arcs);
            let r = max_flow(&net);
            check_witness(&net, &r);
            assert_eq!(r.value, min_cut_by_enumeration(&net), "round {round}");
            if arcs.len() <= 6 {
                assert_eq!(r.value, max_flow_by_enumeration(&net), "round {round}");
            }
        }
    }

    fn circulation(nodes: usize, arcs: &[(usize, usize, u64, u64)]) -> CirculationNetwork {
        let mut net = CirculationNetwork::new(nodes);
        for &(a, b, lo, hi) in arcs {
            net.add_arc(a, b, lo, hi).unwrap();
        }
        net
    }

    fn check_circulation(net: &CirculationNetwork, outcome: &Circulation) {
        match outcome {
            Circulation::Feasible(x) => {
                let mut balance = vec![0i64; net.nodes()];
                for (a, &f) in net.arcs().iter().zip(x) {
                    assert!(a.lower <= f && f <= a.upper);
                    balance[a.tail] -= f as i64;
                    balance[a.head] += f as i64;
                }
                assert!(balance.iter().all(|&b| b == 0));
            }
            Circulation::Infeasible(set) => {
                let mut member = vec![false; net.nodes()];
                for &v in set {
                    member[v] = true;
                }
                let (out_lower, in_upper) = net.hoffman_sides(&member);
                assert!(out_lower > in_upper, "{set:?}: {out_lower} <= {in_upper}");
            }
        }
    }

    #[test]
    fn circulation_examples() {
        let zero = circulation(2, &[(0, 1, 0, 1), (1, 0, 0, 1)]);
        assert_eq!(
            feasible_circulation(&zero),
            Circulation::Feasible(vec![0, 0])
        );

        let one_way = circulation(2, &[(0, 1, 1, 1)]);
        assert_eq!(
            feasible_circulation(&one_way),
            Circulation::Infeasible(vec![0])
        );

        // singleton {a}: lower out 2 > upper in 1; singleton {b}: 0 > 2 fails
        let lopsided = circulation(2, &[(0, 1, 2, 2), (1, 0, 0, 1)]);
        let outcome = feasible_circulation(&lopsided);
        assert_eq!(outcome, Circulation::Infeasible(vec![0]));
        check_circulation(&lopsided, &outcome);

        assert!(CirculationNetwork::new(2).add_arc(0, 1, 3, 2).is_err());
    }

    /// Hoffman: feasible iff no subset has lower-out > upper-in.
    #[test]
    fn random_circulations_agree_with_hoffman_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc1c);
        let mut feasible = 0;
        for _ in 0..1000 {
            let nodes = rng.gen_range(1..=6);
            let arcs: Vec<(usize, usize, u64, u64)> = (0..rng.gen_range(0..=10))
                .map(|_| {
                    let lo = rng.gen_range(0..=2);
                    (
                        rng.gen_range(0..nodes),
                        rng.gen_range(0..nodes),
                        lo,
                        lo + rng.gen_range(0..=2),
                    )
                })
                .collect();
            let net = circulation(nodes, &arcs);
            let outcome = feasible_circulation(&net);
            check_circulation(&net, &outcome);
            let violated = (1u32..1 << nodes).any(|mask| {
                let member: Vec<bool> = (0..nodes).map(|v| mask >> v & 1 == 1).collect();
                let (lo, hi) = net.hoffman_sides(&member);
                lo > hi
            });
            assert_eq!(matches!(outcome, Circulation::Infeasible(_)), violated);
            feasible += usize::from(!violated);
        }
        assert!(feasible > 100 && feasible < 900, "{feasible}");
    }
}
