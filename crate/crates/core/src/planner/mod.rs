//! Visit-order planning over decomposition cells.
//!
//! Cells are indexed `0..n` in decomposition order; index 0 is the start
//! cell and index `n - 1` the final cell. Coverage time is total
//! straight-line distance over the visit order divided by airspeed.
//!
//! Three solve modes:
//!
//! * [`solve_paper_mode`]: the arc model with only endpoint, degree,
//!   connectivity-count and anti-2-cycle constraints. Its optimum can contain
//!   detached cycles of length three or more, so it is a lower bound.
//! * [`solve_valid_path`]: the same model with every subtour eliminated,
//!   i.e. the shortest Hamiltonian path from the first to the last cell.
//! * [`heuristic_path`]: nearest neighbour plus 2-opt, for instances above
//!   the exact-solve cap.

mod assignment;
mod heuristic;
mod relaxed;
mod tour;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point;

/// Largest instance the exact solvers accept unless configured otherwise.
pub const DEFAULT_EXACT_CAP: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlannerError {
    #[error("airspeed must be positive and finite, got {0}")]
    NonPositiveSpeed(f64),
    #[error("need at least one cell to plan over")]
    NoCells,
    #[error("{cells} cells exceed the exact-solve cap of {cap}")]
    SizeLimitExceeded { cells: usize, cap: usize },
    #[error("invalid visit order: {0}")]
    InvalidPermutation(String),
}

/// Euclidean distances between cell centers, plus the airspeed.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
    v: f64,
}

impl DistanceMatrix {
    pub fn new(centers: &[Point], v: f64) -> Result<Self, PlannerError> {
        if !(v.is_finite() && v > 0.0) {
            return Err(PlannerError::NonPositiveSpeed(v));
        }
        if centers.is_empty() {
            return Err(PlannerError::NoCells);
        }
        let n = centers.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dij = centers[i].distance(&centers[j]);
                d[i * n + j] = dij;
                d[j * n + i] = dij;
            }
        }
        Ok(Self { n, d, v })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn speed(&self) -> f64 {
        self.v
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    fn relabeled(&self, perm: &[usize]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                out[a * n + b] = self.get(perm[a], perm[b]);
            }
        }
        out
    }
}

/// Convenience wrapper matching [`DistanceMatrix::new`].
pub fn distance_matrix(centers: &[Point], v: f64) -> Result<DistanceMatrix, PlannerError> {
    DistanceMatrix::new(centers, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PlanMode {
    Paper,
    #[default]
    Valid,
    Heuristic,
}

impl std::fmt::Display for PlanMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PlanMode::Paper => "paper",
            PlanMode::Valid => "valid",
            PlanMode::Heuristic => "heuristic",
        })
    }
}

impl std::str::FromStr for PlanMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(PlanMode::Paper),
            "valid" => Ok(PlanMode::Valid),
            "heuristic" => Ok(PlanMode::Heuristic),
            other => Err(format!(
                "unknown mode `{other}` (expected paper, valid or heuristic)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub exact_cap: usize,
    /// Let the solver pick the first and last cells instead of fixing them
    /// to indices 0 and `n - 1`.
    pub free_endpoints: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            exact_cap: DEFAULT_EXACT_CAP,
            free_endpoints: false,
        }
    }
}

/// Optimal arc set of the relaxed model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcSolution {
    /// Directed arcs `(from, to)`, sorted.
    pub arcs: Vec<(usize, usize)>,
    /// `enter[i]`: some arc ends at `i`.
    pub enter: Vec<bool>,
    /// `exit[i]`: some arc leaves `i`.
    pub exit: Vec<bool>,
    pub t_cov: f64,
    pub mode: PlanMode,
    pub optimal: bool,
}

impl ArcSolution {
    fn from_arcs(n: usize, mut arcs: Vec<(usize, usize)>, m: &DistanceMatrix) -> Self {
        arcs.sort_unstable();
        let mut enter = vec![false; n];
        let mut exit = vec![false; n];
        for &(i, j) in &arcs {
            exit[i] = true;
            enter[j] = true;
        }
        let t_cov = arcs.iter().map(|&(i, j)| m.get(i, j)).sum::<f64>() / m.speed();
        Self {
            arcs,
            enter,
            exit,
            t_cov,
            mode: PlanMode::Paper,
            optimal: true,
        }
    }

    /// The visit order if the arcs form one path through every cell.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        let n = self.enter.len();
        let start = self.enter.iter().position(|&e| !e)?;
        let mut succ = vec![usize::MAX; n];
        for &(i, j) in &self.arcs {
            succ[i] = j;
        }
        let mut order = vec![start];
        let mut cur = start;
        while succ[cur] != usize::MAX && order.len() <= n {
            cur = succ[cur];
            order.push(cur);
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_single_path(&self) -> bool {
        self.path_order().is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPlan {
    pub order: Vec<usize>,
    pub t_cov: f64,
    pub mode: PlanMode,
    pub optimal: bool,
}

pub(crate) fn prune_tolerance(best: f64) -> f64 {
    if best.is_finite() {
        1e-10 * best.abs().max(1.0)
    } else {
        0.0
    }
}

/// Total distance along `order` divided by airspeed.
pub fn coverage_time(order: &[usize], m: &DistanceMatrix) -> Result<f64, PlannerError> {
    let n = m.len();
    if order.len() != n {
        return Err(PlannerError::InvalidPermutation(format!(
            "{} entries for {n} cells",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &k in order {
        if k >= n || std::mem::replace(&mut seen[k], true) {
            return Err(PlannerError::InvalidPermutation(format!(
                "index {k} out of range or repeated"
            )));
        }
    }
    Ok(order.windows(2).map(|w| m.get(w[0], w[1])).sum::<f64>() / m.speed())
}

fn check_cap(m: &DistanceMatrix, cfg: &SolverConfig) -> Result<(), PlannerError> {
    if m.len() > cfg.exact_cap {
        Err(PlannerError::SizeLimitExceeded {
            cells: m.len(),
            cap: cfg.exact_cap,
        })
    } else {
        Ok(())
    }
}

/// Exact optimum of the relaxed arc model.
pub fn solve_paper_mode(
    m: &DistanceMatrix,
    cfg: &SolverConfig,
) -> Result<ArcSolution, PlannerError> {
    check_cap(m, cfg)?;
    let n = m.len();
    if n == 1 {
        return Ok(ArcSolution::from_arcs(1, Vec::new(), m));
    }
    if !cfg.free_endpoints {
        let identity: Vec<usize> = (0..n).collect();
        return Ok(ArcSolution::from_arcs(n, relaxed_arcs(m, &identity), m));
    }
    let mut best: Option<ArcSolution> = None;
    for s in 0..n {
        for t in (s + 1)..n {
            let perm = endpoint_permutation(n, s, t);
            let sol = ArcSolution::from_arcs(n, relaxed_arcs(m, &perm), m);
            if best
                .as_ref()
                .is_none_or(|b| sol.t_cov < b.t_cov - prune_tolerance(b.t_cov))
            {
                best = Some(sol);
            }
        }
    }
    Ok(best.expect("n >= 2 gives at least one endpoint pair"))
}

/// Relabeling that puts `s` first and `t` last, others in index order.
fn endpoint_permutation(n: usize, s: usize, t: usize) -> Vec<usize> {
    let mut perm = Vec::with_capacity(n);
    perm.push(s);
    perm.extend((0..n).filter(|&k| k != s && k != t));
    perm.push(t);
    perm
}

/// Solves the relaxed model on `m` relabeled by `perm` and maps arcs back.
fn relaxed_arcs(m: &DistanceMatrix, perm: &[usize]) -> Vec<(usize, usize)> {
    let n = m.len();
    let d = m.relabeled(perm);
    let mut order = heuristic::nearest_neighbor(n, &d, true);
    heuristic::two_opt(&mut order, n, &d, true);
    let mut upper_succ = vec![0usize; n - 1];
    for w in order.windows(2) {
        upper_succ[w[0]] = w[1];
    }
    let upper_cost: f64 = order.windows(2).map(|w| d[w[0] * n + w[1]]).sum();
    relaxed::solve(n, &d, Some((upper_cost, upper_succ)))
        .iter()
        .enumerate()
        .map(|(i, &j)| (perm[i], perm[j]))
        .collect()
}

/// Exact shortest Hamiltonian path (from 0 to `n - 1` unless endpoints are
/// free).
pub fn solve_valid_path(m: &DistanceMatrix, cfg: &SolverConfig) -> Result<PathPlan, PlannerError> {
    check_cap(m, cfg)?;
    let n = m.len();
    let order = match n {
        1 => vec![0],
        2 => vec![0, 1],
        _ if cfg.free_endpoints => free_path(m),
        _ => fixed_path(m),
    };
    Ok(PathPlan {
        t_cov: coverage_time(&order, m)?,
        order,
        mode: PlanMode::Valid,
        optimal: true,
    })
}

fn fixed_path(m: &DistanceMatrix) -> Vec<usize> {
    let n = m.len();
    let mut cost = m.d.clone();
    // closing edge of the tour is the virtual return from the last cell
    cost[n - 1] = 0.0;
    cost[(n - 1) * n] = 0.0;
    let incumbent = heuristic_order(m, false);
    let (_, cyc) = tour::solve(n, &cost, &[(0, n - 1)], Some(incumbent))
        .expect("complete graph always has a tour");
    let start = cyc.iter().position(|&v| v == 0).unwrap();
    let mut order: Vec<usize> = cyc[start..].iter().chain(&cyc[..start]).copied().collect();
    if order[1] == n - 1 {
        order[1..].reverse();
    }
    order
}

fn free_path(m: &DistanceMatrix) -> Vec<usize> {
    let n = m.len();
    let k = n + 1;
    let mut cost = vec![0.0; k * k];
    for a in 0..n {
        for b in 0..n {
            cost[a * k + b] = m.get(a, b);
        }
    }
    let mut incumbent = heuristic_order(m, true);
    incumbent.push(n);
    let (_, cyc) =
        tour::solve(k, &cost, &[], Some(incumbent)).expect("complete graph always has a tour");
    let at = cyc.iter().position(|&v| v == n).unwrap();
    let mut order: Vec<usize> = cyc[at + 1..].iter().chain(&cyc[..at]).copied().collect();
    if order.last() < order.first() {
        order.reverse();
    }
    order
}

fn heuristic_order(m: &DistanceMatrix, free_endpoints: bool) -> Vec<usize> {
    let n = m.len();
    let fixed = !free_endpoints;
    let mut order = heuristic::nearest_neighbor(n, &m.d, fixed);
    heuristic::two_opt(&mut order, n, &m.d, fixed);
    order
}

/// Nearest neighbour + 2-opt path from cell 0 to cell `n - 1`.
pub fn heuristic_path(m: &DistanceMatrix) -> PathPlan {
    heuristic_path_with(m, false)
}

pub fn heuristic_path_with(m: &DistanceMatrix, free_endpoints: bool) -> PathPlan {
    let order = heuristic_order(m, free_endpoints);
    PathPlan {
        t_cov: coverage_time(&order, m).expect("heuristic yields a permutation"),
        order,
        mode: PlanMode::Heuristic,
        optimal: false,
    }
}
