//! Exact solver for the arc model with degree, endpoint and anti-2-cycle
//! constraints only.
//!
//! Fixing `z_1 = x_|I| = 0` makes the connectivity inequality force every
//! other indicator to one, so feasible arc sets are exactly the assignments
//! of out-nodes `0..n-1` to in-nodes `1..n` with no self-loop and no pair
//! `(i,j),(j,i)`. Such a set is one path `0 → n-1` plus any number of
//! cycles of length three or more.
//!
//! Branch-and-bound over the assignment relaxation: a node whose optimal
//! assignment contains a 2-cycle `i ⇄ j` splits into "forbid i→j" and
//! "require i→j, forbid j→i".

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::assignment::{self, CostMatrix};
use super::prune_tolerance;

struct Node {
    bound: f64,
    seq: u64,
    costs: CostMatrix,
    succ: Vec<usize>,
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
    // min-heap on (bound, seq)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Maps assignment rows/cols back to node successors.
fn evaluate(costs: CostMatrix) -> Option<(f64, Vec<usize>, CostMatrix)> {
    let (total, cols) = assignment::solve(&costs)?;
    // row r is node r, column c is node c + 1
    let succ = cols.into_iter().map(|c| c + 1).collect();
    Some((total, succ, costs))
}

fn first_two_cycle(succ: &[usize]) -> Option<(usize, usize)> {
    let last = succ.len();
    succ.iter()
        .enumerate()
        .find_map(|(i, &j)| (j != last && j > i && succ[j] == i).then_some((i, j)))
}

/// `d` is a dense `n × n` distance matrix (`n ≥ 2`). `upper` is a known
/// feasible arc set (cost, successors) used for pruning. Returns `succ[i]`
/// for `i in 0..n-1`; node `n - 1` has no successor.
pub(crate) fn solve(n: usize, d: &[f64], upper: Option<(f64, Vec<usize>)>) -> Vec<usize> {
    debug_assert!(n >= 2);
    let size = n - 1;
    let mut root = CostMatrix::new(size, f64::INFINITY);
    for i in 0..size {
        for j in 1..n {
            if i != j {
                root.set(i, j - 1, d[i * n + j]);
            }
        }
    }

    let (mut best_cost, mut best_succ) = upper.unwrap_or((f64::INFINITY, Vec::new()));
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    if let Some((bound, succ, costs)) = evaluate(root) {
        heap.push(Node {
            bound,
            seq,
            costs,
            succ,
        });
    }

    while let Some(node) = heap.pop() {
        if node.bound >= best_cost - prune_tolerance(best_cost) {
            break;
        }
        let Some((i, j)) = first_two_cycle(&node.succ) else {
            best_cost = node.bound;
            best_succ = node.succ;
            continue;
        };
        // forbid i -> j
        let mut a = node.costs.clone();
        a.set(i, j - 1, f64::INFINITY);
        // require i -> j and forbid j -> i
        let mut b = node.costs;
        for c in 0..size {
            if c != j - 1 {
                b.set(i, c, f64::INFINITY);
            }
        }
        for r in 0..size {
            if r != i {
                b.set(r, j - 1, f64::INFINITY);
            }
        }
        b.set(j, i - 1, f64::INFINITY);

        for child in [a, b] {
            if let Some((bound, succ, costs)) = evaluate(child) {
                if bound < best_cost - prune_tolerance(best_cost) {
                    seq += 1;
                    heap.push(Node {
                        bound,
                        seq,
                        costs,
                        succ,
                    });
                }
            }
        }
    }

    best_succ
}
