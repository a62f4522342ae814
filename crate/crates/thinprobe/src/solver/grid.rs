//! Tensor grid on mapped nozzle coordinates.

use crate::geometry::ProbeSubdomain;
use crate::Point;

use super::SolverError;

/// `(x₁, η)` grid with the transverse mapping `x₂ = γ(x₁) + ε·η` and the
/// metric samples needed by the mapped differential operators.
#[derive(Debug, Clone)]
pub struct Grid2D {
    pub n1: usize,
    pub n_eta: usize,
    pub eps: f64,
    pub l: f64,
    pub span: f64,
    /// Graph offset and its first two derivatives at the axial nodes.
    pub g: Vec<f64>,
    pub gp: Vec<f64>,
    pub gpp: Vec<f64>,
}

impl Grid2D {
    /// Grid over a probe subdomain.
    pub fn from_subdomain(
        sub: &ProbeSubdomain,
        n1: usize,
        n_eta: usize,
    ) -> Result<Self, SolverError> {
        if n1 < 3 || n_eta < 3 {
            return Err(SolverError::GridTooSmall(n1, n_eta));
        }
        let mut g = Vec::with_capacity(n1);
        let mut gp = Vec::with_capacity(n1);
        let mut gpp = Vec::with_capacity(n1);
        for i in 0..n1 {
            let x1 = sub.span * i as f64 / (n1 - 1) as f64;
            let (gi, gpi, gppi) = sub.graph.eval(x1);
            g.push(gi);
            gp.push(gpi);
            gpp.push(gppi);
        }
        Ok(Grid2D {
            n1,
            n_eta,
            eps: sub.eps,
            l: sub.l,
            span: sub.span,
            g,
            gp,
            gpp,
        })
    }

    /// Flat strip `[0, span] × [0, ε]` (γ ≡ 0), used by solver unit tests.
    pub fn flat(span: f64, eps: f64, n1: usize, n_eta: usize) -> Result<Self, SolverError> {
        if n1 < 3 || n_eta < 3 {
            return Err(SolverError::GridTooSmall(n1, n_eta));
        }
        Ok(Grid2D {
            n1,
            n_eta,
            eps,
            l: 1.0,
            span,
            g: vec![0.0; n1],
            gp: vec![0.0; n1],
            gpp: vec![0.0; n1],
        })
    }

    #[inline]
    pub fn h1(&self) -> f64 {
        self.span / (self.n1 - 1) as f64
    }

    #[inline]
    pub fn h_eta(&self) -> f64 {
        1.0 / (self.n_eta - 1) as f64
    }

    #[inline]
    pub fn x1(&self, i: usize) -> f64 {
        self.span * i as f64 / (self.n1 - 1) as f64
    }

    #[inline]
    pub fn eta(&self, j: usize) -> f64 {
        j as f64 / (self.n_eta - 1) as f64
    }

    /// Physical (rotated-frame) coordinates of node `(i, j)`.
    #[inline]
    pub fn point(&self, i: usize, j: usize) -> Point {
        [self.x1(i), self.g[i] + self.eps * self.eta(j), 0.0]
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.n1 - 1 || j == self.n_eta - 1
    }

    /// Smallest physical spacing, for CFL-style bounds.
    pub fn min_spacing(&self) -> f64 {
        self.h1().min(self.eps * self.h_eta())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_curve, extract_probe_subdomain, CurveSpec, DomainKind};

    #[test]
    fn spacing_and_mapping() {
        let curve = build_curve(
            CurveSpec::Sine {
                amp: 0.5,
                freq: 4.0 * std::f64::consts::PI,
            },
            2,
            0.1,
            1.0,
        )
        .unwrap();
        let sub = extract_probe_subdomain(&curve, 0.0, 0.1, 1.0, 2, DomainKind::Nozzle).unwrap();
        let grid = Grid2D::from_subdomain(&sub, 11, 21).unwrap();
        assert!((grid.h1() - 0.01).abs() < 1e-15);
        assert!((grid.h_eta() - 0.05).abs() < 1e-15);
        // Node (i, n_eta-1) sits on the upper graph wall.
        let p = grid.point(4, 20);
        let (g, _, _) = sub.graph.eval(grid.x1(4));
        assert!((p[1] - (g + 0.1)).abs() < 1e-14);
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(matches!(
            Grid2D::flat(1.0, 0.1, 2, 5),
            Err(SolverError::GridTooSmall(2, 5))
        ));
    }
}
