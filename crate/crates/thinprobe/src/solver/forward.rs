//! The forward time stepper.
//!
//! One step from `tⁿ` to `tⁿ⁺¹`:
//!
//! 1. explicit flux/source update of the conserved variable,
//!    `H* = H(uⁿ) + Δt·(f − ∇·F)`, then nodewise inversion of `H` by a
//!    guarded Newton-bisection (tolerance 1e-12, at most 50 iterations);
//! 2. backward-Euler diffusion weighted by `H′(u*)`:
//!    `(diag(H′) − Δt·μ·L) uⁿ⁺¹ = diag(H′)·u*`, solved iteratively to a
//!    1e-10 relative residual, with the boundary rows pinned to the datum.
//!
//! The CFL-type precondition `Δt ≤ 0.25·min(h²/μ, h/max|∂F/∂u|)` is
//! enforced up front and NaNs abort with the step index.

use std::sync::Arc;

use ndarray::Array3;

use super::grid::Grid2D;
use super::linsolve::bicgstab;
use super::SolverError;
use crate::model::ConfigTriplet;
use crate::Point;

pub type ScalarFn = Arc<dyn Fn(&Point, f64) -> f64 + Send + Sync>;

/// One forward solve request.
pub struct ForwardProblem {
    pub cfg: ConfigTriplet,
    /// Dirichlet datum on the whole boundary.
    pub psi: ScalarFn,
    pub u_init: ScalarFn,
    pub t_end: f64,
    pub dt: f64,
    /// Optional manufactured `(x,t)` source correction.
    pub extra_source: Option<ScalarFn>,
}

/// Gridded solution `u(x, t)` indexed `(step, i, j)`.
pub struct SpaceTimeField {
    pub values: Array3<f64>,
    pub times: Vec<f64>,
    pub grid: Grid2D,
}

impl SpaceTimeField {
    pub fn at(&self, step: usize, i: usize, j: usize) -> f64 {
        self.values[(step, i, j)]
    }

    pub fn last_step(&self) -> usize {
        self.times.len() - 1
    }

    /// Physical gradient `(u_x1, u_x2)` at a node, one-sided at the rim.
    pub fn gradient(&self, step: usize, i: usize, j: usize) -> [f64; 2] {
        gradient_on(&self.grid, &self.values, step, i, j)
    }
}

fn gradient_on(
    grid: &Grid2D,
    values: &Array3<f64>,
    step: usize,
    i: usize,
    j: usize,
) -> [f64; 2] {
    let h1 = grid.h1();
    let he = grid.h_eta();
    let u = |i: usize, j: usize| values[(step, i, j)];
    let d_xi = if i == 0 {
        (-3.0 * u(0, j) + 4.0 * u(1, j) - u(2, j)) / (2.0 * h1)
    } else if i == grid.n1 - 1 {
        (3.0 * u(i, j) - 4.0 * u(i - 1, j) + u(i - 2, j)) / (2.0 * h1)
    } else {
        (u(i + 1, j) - u(i - 1, j)) / (2.0 * h1)
    };
    let d_eta = if j == 0 {
        (-3.0 * u(i, 0) + 4.0 * u(i, 1) - u(i, 2)) / (2.0 * he)
    } else if j == grid.n_eta - 1 {
        (3.0 * u(i, j) - 4.0 * u(i, j - 1) + u(i, j - 2)) / (2.0 * he)
    } else {
        (u(i, j + 1) - u(i, j - 1)) / (2.0 * he)
    };
    let gp = grid.gp[i];
    [d_xi - gp / grid.eps * d_eta, d_eta / grid.eps]
}

/// Mapped Laplacian stencil applied to a flat `(n1*n_eta)` vector at an
/// interior node.
#[inline]
fn mapped_laplacian(grid: &Grid2D, u: &[f64], i: usize, j: usize) -> f64 {
    let ne = grid.n_eta;
    let idx = |i: usize, j: usize| i * ne + j;
    let h1 = grid.h1();
    let he = grid.h_eta();
    let c = u[idx(i, j)];
    let u_xx = (u[idx(i + 1, j)] - 2.0 * c + u[idx(i - 1, j)]) / (h1 * h1);
    let u_ee = (u[idx(i, j + 1)] - 2.0 * c + u[idx(i, j - 1)]) / (he * he);
    let u_xe = (u[idx(i + 1, j + 1)] - u[idx(i + 1, j - 1)] - u[idx(i - 1, j + 1)]
        + u[idx(i - 1, j - 1)])
        / (4.0 * h1 * he);
    let u_e = (u[idx(i, j + 1)] - u[idx(i, j - 1)]) / (2.0 * he);
    let gp = grid.gp[i];
    let gpp = grid.gpp[i];
    let eps = grid.eps;
    u_xx - 2.0 * gp / eps * u_xe + (1.0 + gp * gp) / (eps * eps) * u_ee - gpp / eps * u_e
}

/// March the balance law forward.
pub fn solve_forward(
    problem: &ForwardProblem,
    grid: &Grid2D,
) -> Result<SpaceTimeField, SolverError> {
    let cfg = &problem.cfg;
    if !(problem.dt > 0.0) || !(problem.t_end > 0.0) {
        return Err(SolverError::BadTime {
            dt: problem.dt,
            t_end: problem.t_end,
        });
    }
    let n1 = grid.n1;
    let ne = grid.n_eta;
    let n = n1 * ne;
    let idx = |i: usize, j: usize| i * ne + j;

    // Initial field and data bounds.
    let mut u = vec![0.0; n];
    let mut z_bound: f64 = 0.0;
    for i in 0..n1 {
        for j in 0..ne {
            let x = grid.point(i, j);
            u[idx(i, j)] = (problem.u_init)(&x, 0.0);
            z_bound = z_bound.max(u[idx(i, j)].abs());
            z_bound = z_bound.max((problem.psi)(&x, 0.0).abs());
            z_bound = z_bound.max((problem.psi)(&x, problem.t_end).abs());
        }
    }
    z_bound += 1.0;

    // Boundary datum must match the initial field at t = 0.
    let mut mismatch: f64 = 0.0;
    for i in 0..n1 {
        for j in 0..ne {
            if grid.is_boundary(i, j) {
                let x = grid.point(i, j);
                mismatch = mismatch.max(((problem.psi)(&x, 0.0) - u[idx(i, j)]).abs());
            }
        }
    }
    if mismatch > 1e-9 * z_bound {
        return Err(SolverError::IncompatibleBoundary(mismatch));
    }

    // Solver mode needs a strictly positive H' over the state range.
    let mut h_min = f64::INFINITY;
    for k in 0..=64 {
        let z = -z_bound + 2.0 * z_bound * k as f64 / 64.0;
        h_min = h_min.min(cfg.h.deriv(z));
    }
    if h_min < cfg.h_deriv_floor {
        return Err(SolverError::DerivativeFloor {
            floor: cfg.h_deriv_floor,
            observed: h_min,
        });
    }

    // CFL-type precondition for the explicit flux stage.
    let h = grid.min_spacing();
    let x_bound = grid.span.max(grid.eps) + grid.g.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let max_dz = cfg.flux.max_dz(x_bound, z_bound).max(1e-12);
    let bound = 0.25 * (h * h / cfg.mu).min(h / max_dz);
    if problem.dt > bound {
        return Err(SolverError::Cfl {
            dt: problem.dt,
            bound,
        });
    }

    let steps = (problem.t_end / problem.dt).round().max(1.0) as usize;
    let dt = problem.t_end / steps as f64;

    let mut values = Array3::zeros((steps + 1, n1, ne));
    let mut times = Vec::with_capacity(steps + 1);
    for i in 0..n1 {
        for j in 0..ne {
            values[(0, i, j)] = u[idx(i, j)];
        }
    }
    times.push(0.0);

    let mut ustar = vec![0.0; n];
    let mut cvec = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut unew = vec![0.0; n];

    for step in 0..steps {
        let t = step as f64 * dt;
        let t_next = t + dt;

        // Explicit flux/source stage in the conserved variable.
        for i in 0..n1 {
            for j in 0..ne {
                let k = idx(i, j);
                let x = grid.point(i, j);
                if grid.is_boundary(i, j) {
                    ustar[k] = (problem.psi)(&x, t_next);
                    continue;
                }
                let grad2 = gradient_slice(grid, &u, i, j);
                let grad: Point = [grad2[0], grad2[1], 0.0];
                let z = u[k];
                let div_flux =
                    cfg.flux.explicit_div(&x, t, z) + crate::dot(&cfg.flux.dz(&x, t, z), &grad, 3);
                let mut src = cfg.source.eval(&x, t, z, &grad);
                if let Some(extra) = &problem.extra_source {
                    src += extra(&x, t);
                }
                let hstar = cfg.h.eval(z) + dt * (src - div_flux);
                match cfg.h.invert(hstar, 1e-12, 50) {
                    Some(v) => ustar[k] = v,
                    None => return Err(SolverError::RootFind { i, j, step }),
                }
            }
        }

        // Implicit diffusion weighted by H'(u*).
        for i in 0..n1 {
            for j in 0..ne {
                let k = idx(i, j);
                if grid.is_boundary(i, j) {
                    cvec[k] = 1.0;
                    rhs[k] = ustar[k];
                } else {
                    let c = cfg.h.deriv(ustar[k]);
                    cvec[k] = c;
                    rhs[k] = c * ustar[k];
                }
            }
        }
        let mu = cfg.mu;
        let apply = |xv: &[f64], out: &mut [f64]| {
            for i in 0..n1 {
                for j in 0..ne {
                    let k = idx(i, j);
                    if grid.is_boundary(i, j) {
                        out[k] = xv[k];
                    } else {
                        out[k] = cvec[k] * xv[k] - dt * mu * mapped_laplacian(grid, xv, i, j);
                    }
                }
            }
        };
        // Jacobi diagonal of the implicit operator.
        let h1 = grid.h1();
        let he = grid.h_eta();
        let mut diag = vec![1.0; n];
        for i in 1..n1 - 1 {
            let gp = grid.gp[i];
            let d = 2.0 / (h1 * h1) + 2.0 * (1.0 + gp * gp) / (grid.eps * grid.eps * he * he);
            for j in 1..ne - 1 {
                diag[idx(i, j)] = cvec[idx(i, j)] + dt * mu * d;
            }
        }
        unew.copy_from_slice(&ustar);
        let res = bicgstab(apply, &diag, &rhs, &mut unew, 1e-10, 20_000);
        if res > 1e-10 {
            return Err(SolverError::LinearSolve(res));
        }

        for (k, v) in unew.iter().enumerate() {
            if !v.is_finite() {
                return Err(SolverError::NaN(step));
            }
            u[k] = *v;
        }
        for i in 0..n1 {
            for j in 0..ne {
                values[(step + 1, i, j)] = u[idx(i, j)];
            }
        }
        times.push(t_next);
    }

    Ok(SpaceTimeField {
        values,
        times,
        grid: grid.clone(),
    })
}

/// Same as [`SpaceTimeField::gradient`] but on the working slice.
fn gradient_slice(grid: &Grid2D, u: &[f64], i: usize, j: usize) -> [f64; 2] {
    let ne = grid.n_eta;
    let idx = |i: usize, j: usize| i * ne + j;
    let h1 = grid.h1();
    let he = grid.h_eta();
    let d_xi = if i == 0 {
        (-3.0 * u[idx(0, j)] + 4.0 * u[idx(1, j)] - u[idx(2, j)]) / (2.0 * h1)
    } else if i == grid.n1 - 1 {
        (3.0 * u[idx(i, j)] - 4.0 * u[idx(i - 1, j)] + u[idx(i - 2, j)]) / (2.0 * h1)
    } else {
        (u[idx(i + 1, j)] - u[idx(i - 1, j)]) / (2.0 * h1)
    };
    let d_eta = if j == 0 {
        (-3.0 * u[idx(i, 0)] + 4.0 * u[idx(i, 1)] - u[idx(i, 2)]) / (2.0 * he)
    } else if j == grid.n_eta - 1 {
        (3.0 * u[idx(i, j)] - 4.0 * u[idx(i, j - 1)] + u[idx(i, j - 2)]) / (2.0 * he)
    } else {
        (u[idx(i, j + 1)] - u[idx(i, j - 1)]) / (2.0 * he)
    };
    let gp = grid.gp[i];
    [d_xi - gp / grid.eps * d_eta, d_eta / grid.eps]
}
