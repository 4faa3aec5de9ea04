//! Camera-footprint grid decomposition of polygonal search areas and
//! minimum-time coverage paths for a single UAV.
//!
//! The pipeline is: validate a [`Polygon`], split it into cells with
//! [`agd_decompose`] (adaptive channel widths) or [`sgd_decompose`] (uniform
//! grid), then order the cell centers with one of the solvers in
//! [`planner`]. [`compare`] runs both decompositions side by side.

pub mod compare;
pub mod corpus;
pub mod decomposition;
pub mod geometry;
pub mod io;
pub mod planner;

pub use compare::{compare_methods, compare_methods_with, CompareOptions, ComparisonRow};
pub use decomposition::{
    agd_decompose, agd_decompose_with, prune_outside_cells, sgd_decompose, sgd_lower_bound,
    AgdOptions, Cell, ChannelSpan, ChannelTrace, Decomposition, DecompositionError, Method,
};
pub use geometry::{normalize, AffineTransform, GeometryError, Location, Point, Polygon};
pub use planner::{
    coverage_time, distance_matrix, heuristic_path, solve_paper_mode, solve_valid_path,
    ArcSolution, DistanceMatrix, PathPlan, PlanMode, PlannerError, SolverConfig,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Planner(#[from] PlannerError),
}
