//! Raster eigensolver and symmetrisation transforms.
//!
//! Domains are sets of lattice nodes of spacing `h`. The discrete operator is
//! the 5-point Laplacian with zero values on every node outside the set, so a
//! node-based raster of a polygon approximates the polygon from the outside
//! by at most one cell.

mod raster;
mod solver;
mod symmetrize;

use thiserror::Error;

pub use raster::{point_strictly_inside, rasterize, rasterize_anchored, resolution_across, RasterDomain, RasterHeader};
pub use solver::{eigs, eigs_with, solve_level, EigenResult, LevelSolution, SolverOptions};
pub use symmetrize::{
    align_line, continuous_steiner, polarize, reflect_polygon, steiner_symmetrize, Axis, Line, OrientedLine,
};

/// Default resolutions of the oracle grids, in cells across the bounding box.
pub const DEFAULT_RESOLUTION: f64 = 512.0;
pub const COARSE_RESOLUTION: f64 = 256.0;
pub const ITERATION_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("raster has no interior cells")]
    EmptyDomain,
    #[error("eigensolver did not converge within {iterations} iterations (residual {residual:e})")]
    ConvergenceError { iterations: usize, residual: f64 },
    #[error("column {0} is not a single run of cells")]
    NonConvexColumn(i64),
    #[error("rasters are not on the same lattice")]
    LatticeMismatch,
    #[error("invalid raster data: {0}")]
    Format(String),
    #[error("resolution must be positive, got {0}")]
    InvalidResolution(f64),
}
