//! Side-by-side comparison of the adaptive and standard grids.

use serde::{Deserialize, Serialize};

use crate::decomposition::{agd_decompose_with, sgd_decompose, sgd_lower_bound, AgdOptions};
use crate::geometry::Polygon;
use crate::planner::{
    heuristic_path_with, solve_paper_mode, solve_valid_path, DistanceMatrix, PlannerError,
    SolverConfig,
};
use crate::Error;

#[derive(Debug, Clone, Copy, Default)]
pub struct CompareOptions {
    pub solver: SolverConfig,
    pub agd: AgdOptions,
}

/// One row of the comparison table. Times are in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub area: f64,
    pub n_sgd: usize,
    pub n_agd: usize,
    pub cell_reduction: i64,
    /// `(N_SGD − 1) · √2 r / v`.
    pub z_sgd: f64,
    /// Valid-path coverage time over the AGD cells (heuristic above the cap).
    pub z_agd: f64,
    pub z_agd_optimal: bool,
    /// Relaxed-model optimum over the AGD cells, when within the cap.
    pub z_agd_paper: Option<f64>,
    /// Fraction, not percent.
    pub relative_improvement: f64,
    pub absolute_gap: f64,
}

/// `(z_sgd − z_agd) / z_sgd`, zero when `z_sgd` is zero.
pub fn relative_improvement(z_sgd: f64, z_agd: f64) -> f64 {
    if z_sgd == 0.0 {
        0.0
    } else {
        (z_sgd - z_agd) / z_sgd
    }
}

pub fn absolute_gap(z_sgd: f64, z_agd: f64) -> f64 {
    (z_sgd - z_agd).abs()
}

pub fn compare_methods(p: &Polygon, r: f64, v: f64) -> Result<ComparisonRow, Error> {
    compare_methods_with(p, r, v, &CompareOptions::default())
}

pub fn compare_methods_with(
    p: &Polygon,
    r: f64,
    v: f64,
    opts: &CompareOptions,
) -> Result<ComparisonRow, Error> {
    let sgd = sgd_decompose(p, r)?;
    let agd = agd_decompose_with(p, r, &opts.agd)?;
    let m = DistanceMatrix::new(&agd.centers(), v)?;

    let (z_agd, z_agd_optimal) = match solve_valid_path(&m, &opts.solver) {
        Ok(plan) => (plan.t_cov, true),
        Err(PlannerError::SizeLimitExceeded { .. }) => (
            heuristic_path_with(&m, opts.solver.free_endpoints).t_cov,
            false,
        ),
        Err(e) => return Err(e.into()),
    };
    let z_agd_paper = match solve_paper_mode(&m, &opts.solver) {
        Ok(sol) => Some(sol.t_cov),
        Err(PlannerError::SizeLimitExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let z_sgd = sgd_lower_bound(sgd.cells.len(), r, v);
    Ok(ComparisonRow {
        area: p.area(),
        n_sgd: sgd.cells.len(),
        n_agd: agd.cells.len(),
        cell_reduction: sgd.cells.len() as i64 - agd.cells.len() as i64,
        z_sgd,
        z_agd,
        z_agd_optimal,
        z_agd_paper,
        relative_improvement: relative_improvement(z_sgd, z_agd),
        absolute_gap: absolute_gap(z_sgd, z_agd),
    })
}
