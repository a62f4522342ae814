//! Composite Simpson quadrature axes used by the Green-formula and
//! integral-identity evaluators.
//!
//! All integrands in this crate are smooth, so composite Simpson gives
//! fourth-order convergence and a residual that drops by ~16x under
//! per-axis doubling.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("Simpson axis needs an odd node count >= 3, got {0}")]
    BadNodeCount(usize),
    #[error("degenerate interval [{0}, {1}]")]
    DegenerateInterval(f64, f64),
}

/// One quadrature axis: nodes and matching weights on `[a, b]`.
#[derive(Debug, Clone)]
pub struct Axis {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Axis {
    /// Composite Simpson rule with `n` nodes (odd, >= 3).
    pub fn simpson(a: f64, b: f64, n: usize) -> Result<Self, QuadError> {
        if n < 3 || n % 2 == 0 {
            return Err(QuadError::BadNodeCount(n));
        }
        if !(b - a).is_finite() || b <= a {
            return Err(QuadError::DegenerateInterval(a, b));
        }
        let h = (b - a) / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
        let mut weights = vec![0.0; n];
        for i in 0..n {
            weights[i] = if i == 0 || i == n - 1 {
                h / 3.0
            } else if i % 2 == 1 {
                4.0 * h / 3.0
            } else {
                2.0 * h / 3.0
            };
        }
        Ok(Axis { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate a scalar function along this axis.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Node counts for the (axis1, axis2[, axis3], time) product rule of an
/// identity evaluation. Counts must be odd.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct QuadSpec {
    /// Along-curve axis node count.
    pub n_axial: usize,
    /// Transverse axis node count (both transverse axes in 3D).
    pub n_transverse: usize,
    /// Time axis node count.
    pub n_time: usize,
}

impl QuadSpec {
    pub fn new(n_axial: usize, n_transverse: usize, n_time: usize) -> Self {
        QuadSpec {
            n_axial,
            n_transverse,
            n_time,
        }
    }

    /// Double the interior panel count of every axis (65 -> 129 etc.).
    pub fn refined(&self) -> Self {
        let double = |n: usize| 2 * (n - 1) + 1;
        QuadSpec {
            n_axial: double(self.n_axial),
            n_transverse: double(self.n_transverse),
            n_time: double(self.n_time),
        }
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        for n in [self.n_axial, self.n_transverse, self.n_time] {
            if n < 3 || n % 2 == 0 {
                return Err(QuadError::BadNodeCount(n));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [3usize, 5, 33, 65, 129] {
            let ax = Axis::simpson(-0.3, 1.7, n).unwrap();
            let total: f64 = ax.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-12 * 2.0, "n={n} sum={total}");
        }
    }

    #[test]
    fn simpson_three_nodes_matches_classic_weights() {
        // On [0, eps] the three-node rule is {eps/6, 4eps/6, eps/6}.
        let eps = 0.1;
        let ax = Axis::simpson(0.0, eps, 3).unwrap();
        assert!((ax.weights[0] - eps / 6.0).abs() < 1e-15);
        assert!((ax.weights[1] - 4.0 * eps / 6.0).abs() < 1e-15);
        assert!((ax.weights[2] - eps / 6.0).abs() < 1e-15);
        assert_eq!(ax.nodes, vec![0.0, eps / 2.0, eps]);
    }

    #[test]
    fn cubic_integrated_exactly() {
        let ax = Axis::simpson(0.0, 2.0, 5).unwrap();
        let val = ax.integrate(|x| x * x * x);
        assert!((val - 4.0).abs() < 1e-13);
    }

    #[test]
    fn fourth_order_convergence_on_trig() {
        let exact = 1.0 - (1.0f64).cos();
        let coarse = Axis::simpson(0.0, 1.0, 9).unwrap().integrate(f64::sin) - exact;
        let fine = Axis::simpson(0.0, 1.0, 17).unwrap().integrate(f64::sin) - exact;
        let ratio = coarse.abs() / fine.abs();
        assert!(ratio > 12.0, "expected ~16x drop, got {ratio}");
    }

    #[test]
    fn rejects_even_and_tiny_counts() {
        assert!(Axis::simpson(0.0, 1.0, 4).is_err());
        assert!(Axis::simpson(0.0, 1.0, 1).is_err());
        assert!(Axis::simpson(1.0, 1.0, 3).is_err());
    }
}
