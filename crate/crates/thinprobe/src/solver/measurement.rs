//! Passive boundary measurements `(u|_Σ, ∂_ν u + h_F)` with
//! `h_F = ν·F(x,t,u)/μ` evaluated pointwise.

use serde::Serialize;

use super::forward::{solve_forward, ForwardProblem, ScalarFn, SpaceTimeField};
use super::grid::Grid2D;
use super::SolverError;
use crate::geometry::PieceLabel;
use crate::model::ConfigTriplet;
use crate::Point;

/// Sampled trace of one boundary piece over a time window.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementTrace {
    pub piece: String,
    pub times: Vec<f64>,
    /// Node coordinates along the piece.
    pub nodes: Vec<Point>,
    /// `u|_Σ` indexed `[time][node]`.
    pub u_trace: Vec<Vec<f64>>,
    /// `∂_ν u + h_F` indexed `[time][node]`.
    pub flux_trace: Vec<Vec<f64>>,
}

fn piece_nodes(grid: &Grid2D, piece: PieceLabel) -> Result<Vec<(usize, usize)>, SolverError> {
    Ok(match piece {
        PieceLabel::Gamma1 => (0..grid.n1).map(|i| (i, 0)).collect(),
        PieceLabel::Gamma3 => (0..grid.n1).map(|i| (i, grid.n_eta - 1)).collect(),
        PieceLabel::Gamma2 => (0..grid.n_eta).map(|j| (0, j)).collect(),
        PieceLabel::Gamma4 => (0..grid.n_eta).map(|j| (grid.n1 - 1, j)).collect(),
        other => return Err(SolverError::BadPiece(other)),
    })
}

fn piece_normal(grid: &Grid2D, piece: PieceLabel, i: usize) -> Point {
    match piece {
        PieceLabel::Gamma2 => [-1.0, 0.0, 0.0],
        PieceLabel::Gamma4 => [1.0, 0.0, 0.0],
        PieceLabel::Gamma1 => {
            let gp = grid.gp[i];
            let len = (1.0 + gp * gp).sqrt();
            [gp / len, -1.0 / len, 0.0]
        }
        PieceLabel::Gamma3 => {
            let gp = grid.gp[i];
            let len = (1.0 + gp * gp).sqrt();
            [-gp / len, 1.0 / len, 0.0]
        }
        _ => unreachable!(),
    }
}

/// Record the measurement pair on one piece over `[t1, t2]`.
pub fn boundary_measurement(
    field: &SpaceTimeField,
    cfg: &ConfigTriplet,
    piece: PieceLabel,
    t1: f64,
    t2: f64,
) -> Result<MeasurementTrace, SolverError> {
    let grid = &field.grid;
    let t_end = *field.times.last().unwrap();
    let tol = 1e-12 * (1.0 + t_end);
    if t1 < -tol || t2 > t_end + tol || t2 < t1 {
        return Err(SolverError::WindowOutsideSpan(t1, t2, t_end));
    }
    let nodes_ij = piece_nodes(grid, piece)?;
    let nodes: Vec<Point> = nodes_ij.iter().map(|&(i, j)| grid.point(i, j)).collect();

    let mut times = Vec::new();
    let mut u_trace = Vec::new();
    let mut flux_trace = Vec::new();
    for (step, &t) in field.times.iter().enumerate() {
        if t < t1 - tol || t > t2 + tol {
            continue;
        }
        times.push(t);
        let mut urow = Vec::with_capacity(nodes_ij.len());
        let mut frow = Vec::with_capacity(nodes_ij.len());
        for (&(i, j), x) in nodes_ij.iter().zip(&nodes) {
            let uval = field.at(step, i, j);
            let grad = field.gradient(step, i, j);
            let normal = piece_normal(grid, piece, i);
            let dnu = grad[0] * normal[0] + grad[1] * normal[1];
            let fvec = cfg.flux.eval(x, t, uval);
            let h_f = (fvec[0] * normal[0] + fvec[1] * normal[1]) / cfg.mu;
            urow.push(uval);
            frow.push(dnu + h_f);
        }
        u_trace.push(urow);
        flux_trace.push(frow);
    }

    Ok(MeasurementTrace {
        piece: format!("{piece:?}").to_lowercase(),
        times,
        nodes,
        u_trace,
        flux_trace,
    })
}

/// Per-piece sup-norm mismatch between two measurement sets.
#[derive(Debug, Clone, Serialize)]
pub struct PairGapReport {
    /// `(piece, sup |u¹−u²|, sup |flux¹−flux²|)`.
    pub pieces: Vec<(String, f64, f64)>,
}

impl PairGapReport {
    pub fn max_mismatch(&self) -> f64 {
        self.pieces
            .iter()
            .map(|(_, a, b)| a.max(*b))
            .fold(0.0, f64::max)
    }
}

/// Solve two configurations with the shared boundary datum and initial
/// field, and report how far their passive measurements drift. The report
/// quantifies how close the equal-measurement hypothesis is to holding; it
/// is never asserted to be zero.
pub fn solve_pair_with_shared_dirichlet(
    cfg1: ConfigTriplet,
    cfg2: ConfigTriplet,
    extra1: Option<ScalarFn>,
    extra2: Option<ScalarFn>,
    grid: &Grid2D,
    psi: ScalarFn,
    u_init: ScalarFn,
    t_end: f64,
    dt: f64,
) -> Result<(SpaceTimeField, SpaceTimeField, PairGapReport), SolverError> {
    let f1 = solve_forward(
        &ForwardProblem {
            cfg: cfg1.clone(),
            psi: psi.clone(),
            u_init: u_init.clone(),
            t_end,
            dt,
            extra_source: extra1,
        },
        grid,
    )?;
    let f2 = solve_forward(
        &ForwardProblem {
            cfg: cfg2.clone(),
            psi,
            u_init,
            t_end,
            dt,
            extra_source: extra2,
        },
        grid,
    )?;
    let mut pieces = Vec::new();
    for piece in [
        PieceLabel::Gamma1,
        PieceLabel::Gamma2,
        PieceLabel::Gamma3,
        PieceLabel::Gamma4,
    ] {
        let m1 = boundary_measurement(&f1, &cfg1, piece, 0.0, t_end)?;
        let m2 = boundary_measurement(&f2, &cfg2, piece, 0.0, t_end)?;
        let mut du: f64 = 0.0;
        let mut df: f64 = 0.0;
        for (r1, r2) in m1.u_trace.iter().zip(&m2.u_trace) {
            for (a, b) in r1.iter().zip(r2) {
                du = du.max((a - b).abs());
            }
        }
        for (r1, r2) in m1.flux_trace.iter().zip(&m2.flux_trace) {
            for (a, b) in r1.iter().zip(r2) {
                df = df.max((a - b).abs());
            }
        }
        pieces.push((m1.piece.clone(), du, df));
    }
    Ok((f1, f2, PairGapReport { pieces }))
}

/// Sampled discrete `C^{1,α}` quotient of the solution's gradient: the
/// admissibility condition on `u` is not constructive, so the artifact
/// reports the observed quotient rather than assuming it.
pub fn discrete_c1_quotient(field: &SpaceTimeField, alpha: f64) -> f64 {
    let grid = &field.grid;
    let step = field.last_step();
    let mut worst: f64 = 0.0;
    let stride = ((grid.n1 - 1) / 8).max(1);
    for i in (0..grid.n1 - 1).step_by(stride) {
        for j in (0..grid.n_eta - 1).step_by(stride) {
            let g0 = field.gradient(step, i, j);
            for (di, dj) in [(1usize, 0usize), (0, 1), (1, 1)] {
                let (i2, j2) = (i + di, j + dj);
                let g1 = field.gradient(step, i2, j2);
                let p0 = grid.point(i, j);
                let p1 = grid.point(i2, j2);
                let dist =
                    ((p1[0] - p0[0]).powi(2) + (p1[1] - p0[1]).powi(2)).sqrt();
                if dist > 1e-300 {
                    let dg = ((g1[0] - g0[0]).powi(2) + (g1[1] - g0[1]).powi(2)).sqrt();
                    worst = worst.max(dg / dist.powf(alpha));
                }
            }
        }
    }
    worst
}
