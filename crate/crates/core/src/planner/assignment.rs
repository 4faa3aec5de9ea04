//! Dense linear assignment (Hungarian method with potentials), O(n³).
//!
//! Forbidden pairs are encoded as `f64::INFINITY`; if no finite assignment
//! exists the solver reports `None`.

/// Square cost matrix in row-major order.
#[derive(Debug, Clone)]
pub(crate) struct CostMatrix {
    pub n: usize,
    pub cost: Vec<f64>,
}

impl CostMatrix {
    pub fn new(n: usize, fill: f64) -> Self {
        Self {
            n,
            cost: vec![fill; n * n],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cost[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.cost[row * self.n + col] = value;
    }
}

/// Returns `(total, col_of_row)` for a minimum-cost perfect assignment.
pub(crate) fn solve(m: &CostMatrix) -> Option<(f64, Vec<usize>)> {
    let n = m.n;
    if n == 0 {
        return Some((0.0, Vec::new()));
    }
    // 1-based arrays; index 0 is the virtual column
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = m.get(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if !delta.is_finite() {
                return None;
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of_row = vec![0usize; n];
    for j in 1..=n {
        col_of_row[p[j] - 1] = j - 1;
    }
    let total = col_of_row
        .iter()
        .enumerate()
        .map(|(r, &c)| m.get(r, c))
        .sum::<f64>();
    total.is_finite().then_some((total, col_of_row))
}
