//! Exact symmetric TSP by branch-and-bound on Held–Karp 1-tree bounds.
//!
//! Edges carry a state (free, required, forbidden). A node's bound comes
//! from subgradient ascent on the node penalties; the branching rule picks
//! a free tree edge at a vertex of degree above two and splits into
//! "forbid it" / "require it". Required edges are propagated: a vertex with
//! two required edges loses all its other free edges, and the edge that
//! would close a required path early is forbidden.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::prune_tolerance;

const FREE: u8 = 0;
const REQUIRED: u8 = 1;
const FORBIDDEN: u8 = 2;

const ROOT_ITERATIONS: usize = 2000;
const CHILD_ITERATIONS: usize = 200;

#[derive(Clone)]
struct State {
    m: usize,
    edge: Vec<u8>,
    req_deg: Vec<u8>,
    required_count: usize,
}

impl State {
    fn new(m: usize) -> Self {
        let mut edge = vec![FREE; m * m];
        for i in 0..m {
            edge[i * m + i] = FORBIDDEN;
        }
        Self {
            m,
            edge,
            req_deg: vec![0; m],
            required_count: 0,
        }
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> u8 {
        self.edge[a * self.m + b]
    }

    fn set(&mut self, a: usize, b: usize, s: u8) {
        self.edge[a * self.m + b] = s;
        self.edge[b * self.m + a] = s;
    }

    fn forbid(&self, a: usize, b: usize) -> Option<State> {
        let mut s = self.clone();
        s.set(a, b, FORBIDDEN);
        s.propagate_availability().then_some(s)
    }

    /// Both ends of the required path through `v` and its vertex count.
    /// Only meaningful while required edges form paths, not cycles.
    fn path_ends(&self, v: usize) -> (usize, usize, usize) {
        let nbrs: Vec<usize> = (0..self.m)
            .filter(|&k| self.get(v, k) == REQUIRED)
            .collect();
        let mut ends = [v, v];
        let mut count = 1;
        for (slot, &first) in nbrs.iter().enumerate().take(2) {
            let (mut prev, mut cur) = (v, first);
            count += 1;
            while let Some(next) =
                (0..self.m).find(|&k| k != prev && k != cur && self.get(cur, k) == REQUIRED)
            {
                if next == v {
                    break;
                }
                prev = cur;
                cur = next;
                count += 1;
            }
            ends[slot] = cur;
        }
        (ends[0], ends[1], count)
    }

    fn require(&self, a: usize, b: usize) -> Option<State> {
        if self.get(a, b) != FREE || self.req_deg[a] >= 2 || self.req_deg[b] >= 2 {
            return None;
        }
        let mut s = self.clone();
        let (e1, e2, _) = s.path_ends(a);
        let closes_cycle = s.req_deg[a] > 0 && (e1 == b || e2 == b);
        s.set(a, b, REQUIRED);
        s.req_deg[a] += 1;
        s.req_deg[b] += 1;
        s.required_count += 1;
        if closes_cycle && s.required_count < s.m {
            return None;
        }
        for v in [a, b] {
            if s.req_deg[v] == 2 {
                for k in 0..s.m {
                    if s.get(v, k) == FREE {
                        s.set(v, k, FORBIDDEN);
                    }
                }
            }
        }
        if !closes_cycle {
            let (u, w, len) = s.path_ends(a);
            if len < s.m && s.get(u, w) == FREE {
                s.set(u, w, FORBIDDEN);
            }
        }
        s.propagate_availability().then_some(s)
    }

    /// Every vertex still needs two usable edges.
    fn propagate_availability(&self) -> bool {
        (0..self.m).all(|v| (0..self.m).filter(|&k| self.get(v, k) != FORBIDDEN).count() >= 2)
    }
}

struct OneTree {
    /// Lagrangian value: penalized tree weight minus twice the penalty sum.
    value: f64,
    degree: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

/// Minimum 1-tree under penalties `pi`, honoring edge states. Vertex 0 is
/// the special vertex.
fn one_tree(cost: &[f64], s: &State, pi: &[f64]) -> Option<OneTree> {
    let m = s.m;
    let w = |a: usize, b: usize| cost[a * m + b] + pi[a] + pi[b];
    let mut degree = vec![0usize; m];
    let mut edges = Vec::with_capacity(m);
    let mut value = 0.0;

    if m > 2 {
        // Prim over 1..m with key (is_free, weight)
        let mut in_tree = vec![false; m];
        let mut key = vec![(u8::MAX, f64::INFINITY); m];
        let mut parent = vec![usize::MAX; m];
        key[1] = (0, 0.0);
        for _ in 1..m {
            let mut best = usize::MAX;
            for v in 1..m {
                if !in_tree[v]
                    && key[v].0 != u8::MAX
                    && (best == usize::MAX
                        || key[v].0 < key[best].0
                        || (key[v].0 == key[best].0 && key[v].1 < key[best].1))
                {
                    best = v;
                }
            }
            if best == usize::MAX {
                return None;
            }
            in_tree[best] = true;
            if parent[best] != usize::MAX {
                let p = parent[best];
                edges.push((p.min(best), p.max(best)));
                degree[p] += 1;
                degree[best] += 1;
                value += w(p, best);
            }
            for v in 1..m {
                if in_tree[v] {
                    continue;
                }
                let st = s.get(best, v);
                if st == FORBIDDEN {
                    continue;
                }
                let k = (if st == REQUIRED { 0 } else { 1 }, w(best, v));
                if k.0 < key[v].0 || (k.0 == key[v].0 && k.1 < key[v].1) {
                    key[v] = k;
                    parent[v] = best;
                }
            }
        }
        // every required edge among 1..m must have made it into the tree
        let tree_required = edges
            .iter()
            .filter(|&&(a, b)| s.get(a, b) == REQUIRED)
            .count();
        let all_required = (1..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .filter(|&(a, b)| s.get(a, b) == REQUIRED)
            .count();
        if tree_required < all_required {
            // required edges form a cycle among 1..m: only the closing
            // edge of a full tour can do that, which vertex 0 rules out
            return None;
        }
    }

    // two edges at vertex 0: required first, then cheapest free
    let mut cand: Vec<(u8, f64, usize)> = (1..m)
        .filter(|&k| s.get(0, k) != FORBIDDEN)
        .map(|k| (if s.get(0, k) == REQUIRED { 0 } else { 1 }, w(0, k), k))
        .collect();
    cand.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)));
    if cand.len() < 2 || cand.get(2).is_some_and(|c| c.0 == 0) {
        return None;
    }
    for &(_, wk, k) in &cand[..2] {
        edges.push((0, k));
        degree[0] += 1;
        degree[k] += 1;
        value += wk;
    }
    value -= 2.0 * pi.iter().sum::<f64>();
    Some(OneTree {
        value,
        degree,
        edges,
    })
}

enum Ascent {
    Infeasible,
    /// Bound reached the incumbent.
    Pruned,
    Tour(Vec<(usize, usize)>),
    Bound {
        value: f64,
        tree: OneTree,
    },
}

fn ascend(cost: &[f64], s: &State, pi: &mut [f64], upper: f64, iterations: usize) -> Ascent {
    let m = s.m;
    let mut lambda = 2.0;
    let mut best: Option<(f64, OneTree, Vec<f64>)> = None;
    let mut stall = 0usize;
    let period = (m / 2).max(10);
    for _ in 0..iterations {
        let Some(tree) = one_tree(cost, s, pi) else {
            return Ascent::Infeasible;
        };
        if tree.degree.iter().all(|&d| d == 2) {
            return Ascent::Tour(tree.edges);
        }
        if tree.value >= upper - prune_tolerance(upper) {
            return Ascent::Pruned;
        }
        let norm2: f64 = tree.degree.iter().map(|&d| (d as f64 - 2.0).powi(2)).sum();
        let value = tree.value;
        let degrees = tree.degree.clone();
        let improved = best.as_ref().is_none_or(|b| value > b.0 + 1e-12);
        if improved {
            best = Some((value, tree, pi.to_vec()));
            stall = 0;
        } else {
            stall += 1;
            if stall >= period {
                lambda /= 2.0;
                stall = 0;
                if lambda < 1e-6 {
                    break;
                }
            }
        }
        let gap = if upper.is_finite() {
            upper - value
        } else {
            value.abs().max(1.0) * 0.1
        };
        let step = lambda * gap / norm2;
        for (p, &d) in pi.iter_mut().zip(&degrees) {
            *p += step * (d as f64 - 2.0);
        }
    }
    let (value, tree, best_pi) = best.expect("at least one iteration");
    pi.copy_from_slice(&best_pi);
    Ascent::Bound { value, tree }
}

struct Node {
    bound: f64,
    seq: u64,
    state: State,
    pi: Vec<f64>,
    tree: OneTree,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(other.seq.cmp(&self.seq))
    }
}

fn tour_cost(cost: &[f64], m: usize, edges: &[(usize, usize)]) -> f64 {
    edges.iter().map(|&(a, b)| cost[a * m + b]).sum()
}

/// Cyclic vertex order of a tour given as an edge list.
fn tour_order(m: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::with_capacity(2); m];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut order = Vec::with_capacity(m);
    let (mut prev, mut cur) = (usize::MAX, 0usize);
    for _ in 0..m {
        order.push(cur);
        let next = if adj[cur][0] != prev {
            adj[cur][0]
        } else {
            adj[cur][1]
        };
        prev = cur;
        cur = next;
    }
    order
}

/// Minimum Hamiltonian cycle over the dense symmetric `cost` (`m ≥ 3`),
/// with `required` edges forced in. `incumbent` is a known tour (cyclic
/// vertex order) used as the initial upper bound.
pub(crate) fn solve(
    m: usize,
    cost: &[f64],
    required: &[(usize, usize)],
    incumbent: Option<Vec<usize>>,
) -> Option<(f64, Vec<usize>)> {
    debug_assert!(m >= 3);
    let mut root = State::new(m);
    for &(a, b) in required {
        root = root.require(a, b)?;
    }
    let order_cost = |order: &[usize]| -> f64 {
        (0..order.len())
            .map(|k| cost[order[k] * m + order[(k + 1) % order.len()]])
            .sum()
    };
    let mut best: Option<(f64, Vec<usize>)> = incumbent.map(|o| (order_cost(&o), o));
    let upper = |best: &Option<(f64, Vec<usize>)>| best.as_ref().map_or(f64::INFINITY, |b| b.0);

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut pi = vec![0.0; m];
    let mut consider = |state: State,
                        mut pi: Vec<f64>,
                        iterations: usize,
                        best: &mut Option<(f64, Vec<usize>)>,
                        heap: &mut BinaryHeap<Node>| {
        match ascend(cost, &state, &mut pi, upper(best), iterations) {
            Ascent::Infeasible | Ascent::Pruned => {}
            Ascent::Tour(edges) => {
                let c = tour_cost(cost, m, &edges);
                if c < upper(best) - prune_tolerance(upper(best)) {
                    *best = Some((c, tour_order(m, &edges)));
                }
            }
            Ascent::Bound { value, tree } => {
                seq += 1;
                heap.push(Node {
                    bound: value,
                    seq,
                    state,
                    pi,
                    tree,
                });
            }
        }
    };
    consider(
        root,
        std::mem::take(&mut pi),
        ROOT_ITERATIONS,
        &mut best,
        &mut heap,
    );

    while let Some(node) = heap.pop() {
        let ub = upper(&best);
        if node.bound >= ub - prune_tolerance(ub) {
            break;
        }
        let Some((a, b)) = branch_edge(cost, &node) else {
            continue;
        };
        if let Some(s) = node.state.forbid(a, b) {
            consider(s, node.pi.clone(), CHILD_ITERATIONS, &mut best, &mut heap);
        }
        if let Some(s) = node.state.require(a, b) {
            consider(s, node.pi.clone(), CHILD_ITERATIONS, &mut best, &mut heap);
        }
    }
    best
}

/// Free tree edge at the lowest-indexed vertex of maximum degree, choosing
/// the one with the largest penalized weight.
fn branch_edge(cost: &[f64], node: &Node) -> Option<(usize, usize)> {
    let m = node.state.m;
    let max_deg = *node.tree.degree.iter().max()?;
    if max_deg <= 2 {
        return None;
    }
    let v = node.tree.degree.iter().position(|&d| d == max_deg)?;
    node.tree
        .edges
        .iter()
        .filter(|&&(a, b)| (a == v || b == v) && node.state.get(a, b) == FREE)
        .map(|&(a, b)| (a, b, cost[a * m + b] + node.pi[a] + node.pi[b]))
        .max_by(|x, y| x.2.total_cmp(&y.2).then(y.0.cmp(&x.0)).then(y.1.cmp(&x.1)))
        .map(|(a, b, _)| (a, b))
}
