//! 2D forward solver on mapped nozzle coordinates and the passive boundary
//! measurements it produces.
//!
//! The state lives on the `(x₁, η)` grid with `x₂ = γ(x₁) + ε·η`. Time
//! stepping is implicit in diffusion and explicit in flux and source: the
//! conserved variable is updated explicitly, inverted nodewise by a guarded
//! root-find, and the diffusion solve is backward Euler weighted by `H′`.

mod forward;
mod grid;
mod linsolve;
mod measurement;
mod pair;

pub use forward::{solve_forward, ForwardProblem, ScalarFn, SpaceTimeField};
pub use grid::Grid2D;
pub use linsolve::bicgstab;
pub use measurement::{
    boundary_measurement, discrete_c1_quotient, solve_pair_with_shared_dirichlet,
    MeasurementTrace, PairGapReport,
};
pub use pair::SolverPair;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("grid needs at least 3 nodes per axis, got {0}x{1}")]
    GridTooSmall(usize, usize),
    #[error("CFL violation: dt = {dt} exceeds the bound {bound}")]
    Cfl { dt: f64, bound: f64 },
    #[error("H inversion failed to converge at node ({i}, {j}), step {step}")]
    RootFind { i: usize, j: usize, step: usize },
    #[error("NaN detected at step {0}; aborting")]
    NaN(usize),
    #[error("linear diffusion solve stalled at relative residual {0}")]
    LinearSolve(f64),
    #[error("boundary datum incompatible with the initial field: max mismatch {0}")]
    IncompatibleBoundary(f64),
    #[error("requested window [{0}, {1}] outside the solved span [0, {2}]")]
    WindowOutsideSpan(f64, f64, f64),
    #[error("unknown boundary piece for measurement: {0:?}")]
    BadPiece(crate::geometry::PieceLabel),
    #[error("solver mode requires H' >= {floor}, observed {observed}")]
    DerivativeFloor { floor: f64, observed: f64 },
    #[error("time step and horizon must be positive, got dt = {dt}, t_end = {t_end}")]
    BadTime { dt: f64, t_end: f64 },
}
