//! Identity-term evaluation on forward-solver output.
//!
//! Two solved fields sharing a grid implement [`GapPair`] by trilinear
//! interpolation of the nodal gap data, so the identity machinery runs on
//! discrete solutions exactly as on manufactured pairs (up to
//! discretization error in the gap data itself).

use ndarray::Array3;

use super::forward::SpaceTimeField;
use crate::field::Jet;
use crate::model::{ConfigTriplet, GapPair};
use crate::Point;

/// Precomputed nodal gap data between two solver runs.
pub struct SolverPair {
    times: Vec<f64>,
    n1: usize,
    n_eta: usize,
    eps: f64,
    span: f64,
    g: Vec<f64>,
    w: Array3<f64>,
    wx1: Array3<f64>,
    wx2: Array3<f64>,
    hgap: Array3<f64>,
    sgap: Array3<f64>,
    fgap1: Array3<f64>,
    fgap2: Array3<f64>,
}

impl SolverPair {
    /// Assemble from two solves with their configurations and optional
    /// manufactured source corrections.
    pub fn new(
        f1: &SpaceTimeField,
        cfg1: &ConfigTriplet,
        extra1: Option<&super::forward::ScalarFn>,
        f2: &SpaceTimeField,
        cfg2: &ConfigTriplet,
        extra2: Option<&super::forward::ScalarFn>,
    ) -> Self {
        let grid = &f1.grid;
        let (nt, n1, ne) = (f1.times.len(), grid.n1, grid.n_eta);
        let mut w = Array3::zeros((nt, n1, ne));
        let mut wx1 = Array3::zeros((nt, n1, ne));
        let mut wx2 = Array3::zeros((nt, n1, ne));
        let mut hgap = Array3::zeros((nt, n1, ne));
        let mut sgap = Array3::zeros((nt, n1, ne));
        let mut fgap1 = Array3::zeros((nt, n1, ne));
        let mut fgap2 = Array3::zeros((nt, n1, ne));
        for (step, &t) in f1.times.iter().enumerate() {
            for i in 0..n1 {
                for j in 0..ne {
                    let x = grid.point(i, j);
                    let u1 = f1.at(step, i, j);
                    let u2 = f2.at(step, i, j);
                    let g1 = f1.gradient(step, i, j);
                    let g2 = f2.gradient(step, i, j);
                    w[(step, i, j)] = u1 - u2;
                    wx1[(step, i, j)] = g1[0] - g2[0];
                    wx2[(step, i, j)] = g1[1] - g2[1];
                    hgap[(step, i, j)] = cfg1.h.eval(u1) - cfg2.h.eval(u2);
                    let grad1: Point = [g1[0], g1[1], 0.0];
                    let grad2: Point = [g2[0], g2[1], 0.0];
                    let mut s1 = cfg1.source.eval(&x, t, u1, &grad1);
                    if let Some(e) = extra1 {
                        s1 += e(&x, t);
                    }
                    let mut s2 = cfg2.source.eval(&x, t, u2, &grad2);
                    if let Some(e) = extra2 {
                        s2 += e(&x, t);
                    }
                    sgap[(step, i, j)] = s1 - s2;
                    let fv1 = cfg1.flux.eval(&x, t, u1);
                    let fv2 = cfg2.flux.eval(&x, t, u2);
                    fgap1[(step, i, j)] = fv1[0] - fv2[0];
                    fgap2[(step, i, j)] = fv1[1] - fv2[1];
                }
            }
        }
        SolverPair {
            times: f1.times.clone(),
            n1,
            n_eta: ne,
            eps: grid.eps,
            span: grid.span,
            g: grid.g.clone(),
            w,
            wx1,
            wx2,
            hgap,
            sgap,
            fgap1,
            fgap2,
        }
    }

    /// Trilinear interpolation weights for `(x, t)`.
    fn locate(&self, x: &Point, t: f64) -> ([usize; 2], [f64; 2], usize, f64) {
        let h1 = self.span / (self.n1 - 1) as f64;
        let fi = (x[0] / h1).clamp(0.0, (self.n1 - 1) as f64 - 1e-12);
        let i = fi.floor() as usize;
        let ai = fi - i as f64;
        // Graph offset interpolated linearly between axial nodes.
        let g = self.g[i] * (1.0 - ai) + self.g[(i + 1).min(self.n1 - 1)] * ai;
        let he = 1.0 / (self.n_eta - 1) as f64;
        let eta = ((x[1] - g) / self.eps).clamp(0.0, 1.0);
        let fj = (eta / he).clamp(0.0, (self.n_eta - 1) as f64 - 1e-12);
        let j = fj.floor() as usize;
        let aj = fj - j as f64;
        let t0 = self.times[0];
        let dt = if self.times.len() > 1 {
            self.times[1] - t0
        } else {
            1.0
        };
        let ft = ((t - t0) / dt).clamp(0.0, (self.times.len() - 1) as f64 - 1e-12);
        let step = ft.floor() as usize;
        let at = ft - step as f64;
        ([i, j], [ai, aj], step, at)
    }

    fn interp(&self, a: &Array3<f64>, x: &Point, t: f64) -> f64 {
        let ([i, j], [ai, aj], step, at) = self.locate(x, t);
        let lerp2 = |s: usize| {
            let v00 = a[(s, i, j)];
            let v10 = a[(s, i + 1, j)];
            let v01 = a[(s, i, j + 1)];
            let v11 = a[(s, i + 1, j + 1)];
            (1.0 - ai) * ((1.0 - aj) * v00 + aj * v01) + ai * ((1.0 - aj) * v10 + aj * v11)
        };
        (1.0 - at) * lerp2(step) + at * lerp2(step + 1)
    }
}

impl GapPair for SolverPair {
    fn dim(&self) -> usize {
        2
    }

    fn w_jet(&self, x: &Point, t: f64) -> Jet {
        Jet {
            value: self.interp(&self.w, x, t),
            dt: 0.0,
            grad: [
                self.interp(&self.wx1, x, t),
                self.interp(&self.wx2, x, t),
                0.0,
            ],
            // The identity terms never use the Laplacian of the gap.
            lap: 0.0,
        }
    }

    fn h_gap(&self, x: &Point, t: f64) -> f64 {
        self.interp(&self.hgap, x, t)
    }

    fn source_gap(&self, x: &Point, t: f64) -> f64 {
        self.interp(&self.sgap, x, t)
    }

    fn flux_gap(&self, x: &Point, t: f64) -> Point {
        [
            self.interp(&self.fgap1, x, t),
            self.interp(&self.fgap2, x, t),
            0.0,
        ]
    }
}
