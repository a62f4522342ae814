//! Closed nonlinearity registries. Configs name these declaratively, which
//! keeps admissibility machine-checkable; no user code is ever executed.
//!
//! Every registry map exposes exact gap forms (`H(u)−H(v)` etc. factored
//! through `w = u − v`) so downstream identity terms never suffer
//! catastrophic cancellation when the pair gap is small.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::Point;

/// Conserved-quantity nonlinearity `H`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", tag = "id")]
pub enum HSpec {
    Identity,
    /// `H(z) = z³ + δz` with `δ > 0`; `H′ = 3z² + δ ≥ δ`.
    CubicFloor { delta: f64 },
}

impl HSpec {
    pub fn eval(&self, z: f64) -> f64 {
        match self {
            HSpec::Identity => z,
            HSpec::CubicFloor { delta } => z * z * z + delta * z,
        }
    }

    pub fn deriv(&self, z: f64) -> f64 {
        match self {
            HSpec::Identity => 1.0,
            HSpec::CubicFloor { delta } => 3.0 * z * z + delta,
        }
    }

    /// `H(u) − H(v)` factored through `w = u − v`.
    pub fn gap(&self, u: f64, v: f64, w: f64) -> f64 {
        match self {
            HSpec::Identity => w,
            HSpec::CubicFloor { delta } => w * (u * u + u * v + v * v + delta),
        }
    }

    /// `H′(u) − H′(v)` factored through `w`.
    pub fn deriv_gap(&self, u: f64, v: f64, w: f64) -> f64 {
        match self {
            HSpec::Identity => 0.0,
            HSpec::CubicFloor { .. } => 3.0 * w * (u + v),
        }
    }

    /// Guarded nodewise inversion of `H` (monotone by the derivative floor):
    /// Newton with a bisection fallback, tolerance 1e-12, at most 50 steps.
    pub fn invert(&self, y: f64, tol: f64, max_iter: usize) -> Option<f64> {
        match self {
            HSpec::Identity => Some(y),
            HSpec::CubicFloor { delta } => {
                // Bracket: |H(z)| >= delta*|z|, so |root| <= |y|/delta; and
                // |H(z)| >= |z|^3 for |z| >= 1ish gives the cube-root cap.
                let cap = (y.abs() / delta).min(y.abs().powf(1.0 / 3.0) + 1.0) + 1.0;
                let (mut lo, mut hi) = (-cap, cap);
                let mut z = y.abs().powf(1.0 / 3.0).copysign(y);
                for _ in 0..max_iter {
                    let f = self.eval(z) - y;
                    if f.abs() <= tol * (1.0 + y.abs()) {
                        return Some(z);
                    }
                    if f > 0.0 {
                        hi = z;
                    } else {
                        lo = z;
                    }
                    let step = f / self.deriv(z);
                    let mut next = z - step;
                    if !(next > lo && next < hi) {
                        next = 0.5 * (lo + hi);
                    }
                    z = next;
                }
                let f = self.eval(z) - y;
                if f.abs() <= tol * (1.0 + y.abs()) {
                    Some(z)
                } else {
                    None
                }
            }
        }
    }
}

/// Flux nonlinearity `F(x, t, z)`.
///
/// For every registry entry the explicit spatial divergence is linear in `z`
/// and `∂F/∂z` is affine in `z`, which the gap forms below exploit.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", tag = "id")]
pub enum FluxSpec {
    /// `F ≡ 0`; the flux-free configuration used by case (b) families.
    None,
    /// `F = c·z` with a constant velocity `c`.
    ConstantAdvection { c: Point },
    /// `F = ω(−x₂, x₁, 0)·z`, divergence-free rotational transport.
    RotationalAdvection { omega: f64 },
    /// `F = (z²/2)·e₁`.
    BurgersLike,
    /// `F = amp·(cos(k₁x₁)·z, sin(k₂x₂)·z, 0)`.
    SpaceModulated { amp: f64, k1: f64, k2: f64 },
}

impl FluxSpec {
    pub fn eval(&self, x: &Point, _t: f64, z: f64) -> Point {
        match self {
            FluxSpec::None => [0.0; 3],
            FluxSpec::ConstantAdvection { c } => [c[0] * z, c[1] * z, c[2] * z],
            FluxSpec::RotationalAdvection { omega } => {
                [-omega * x[1] * z, omega * x[0] * z, 0.0]
            }
            FluxSpec::BurgersLike => [0.5 * z * z, 0.0, 0.0],
            FluxSpec::SpaceModulated { amp, k1, k2 } => [
                amp * (k1 * x[0]).cos() * z,
                amp * (k2 * x[1]).sin() * z,
                0.0,
            ],
        }
    }

    /// `∂F/∂z`.
    pub fn dz(&self, x: &Point, _t: f64, z: f64) -> Point {
        match self {
            FluxSpec::None => [0.0; 3],
            FluxSpec::ConstantAdvection { c } => *c,
            FluxSpec::RotationalAdvection { omega } => [-omega * x[1], omega * x[0], 0.0],
            FluxSpec::BurgersLike => [z, 0.0, 0.0],
            FluxSpec::SpaceModulated { amp, k1, k2 } => {
                [amp * (k1 * x[0]).cos(), amp * (k2 * x[1]).sin(), 0.0]
            }
        }
    }

    /// Spatial divergence at frozen state, `(∇ₓ·F)(x,t,z)`.
    pub fn explicit_div(&self, x: &Point, _t: f64, z: f64) -> f64 {
        match self {
            FluxSpec::None | FluxSpec::ConstantAdvection { .. } | FluxSpec::BurgersLike => 0.0,
            FluxSpec::RotationalAdvection { .. } => 0.0,
            FluxSpec::SpaceModulated { amp, k1, k2 } => {
                amp * (-k1 * (k1 * x[0]).sin() + k2 * (k2 * x[1]).cos()) * z
            }
        }
    }

    /// `F(x,t,u) − F(x,t,v)` factored through `w`.
    pub fn z_gap(&self, x: &Point, _t: f64, u: f64, v: f64, w: f64) -> Point {
        match self {
            FluxSpec::None => [0.0; 3],
            FluxSpec::ConstantAdvection { c } => [c[0] * w, c[1] * w, c[2] * w],
            FluxSpec::RotationalAdvection { omega } => {
                [-omega * x[1] * w, omega * x[0] * w, 0.0]
            }
            FluxSpec::BurgersLike => [0.5 * w * (u + v), 0.0, 0.0],
            FluxSpec::SpaceModulated { amp, k1, k2 } => [
                amp * (k1 * x[0]).cos() * w,
                amp * (k2 * x[1]).sin() * w,
                0.0,
            ],
        }
    }

    /// `∂F/∂z(x,t,u) − ∂F/∂z(x,t,v)` factored through `w`.
    pub fn dz_gap(&self, _x: &Point, _t: f64, _u: f64, _v: f64, w: f64) -> Point {
        match self {
            FluxSpec::BurgersLike => [w, 0.0, 0.0],
            _ => [0.0; 3],
        }
    }

    /// `(∇ₓ·F)(x,t,u) − (∇ₓ·F)(x,t,v)` factored through `w`.
    pub fn explicit_div_gap(&self, x: &Point, t: f64, w: f64) -> f64 {
        // Explicit divergence is linear in z for the whole registry.
        self.explicit_div(x, t, w)
    }

    /// Max |∂F/∂z| over a state interval; the solver CFL bound needs it.
    pub fn max_dz(&self, x_bound: f64, z_bound: f64) -> f64 {
        match self {
            FluxSpec::None => 0.0,
            FluxSpec::ConstantAdvection { c } => crate::norm(c, 3),
            FluxSpec::RotationalAdvection { omega } => omega.abs() * x_bound * 2.0,
            FluxSpec::BurgersLike => z_bound,
            FluxSpec::SpaceModulated { amp, .. } => amp.abs() * 2.0,
        }
    }
}

/// Source nonlinearity `f(x, t, z, ∇z)`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "id")]
pub enum SourceSpec {
    Zero,
    /// `f = z(1 − z)`.
    Logistic,
    /// `f = κ|∇z|²`.
    GradientQuadratic { kappa: f64 },
    /// Test-only escape hatch; not constructible from scenario files.
    #[serde(skip)]
    Custom(#[serde(skip)] Arc<dyn Fn(&Point, f64, f64, &Point) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for SourceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SourceSpec::Zero => write!(f, "Zero"),
            SourceSpec::Logistic => write!(f, "Logistic"),
            SourceSpec::GradientQuadratic { kappa } => {
                write!(f, "GradientQuadratic {{ kappa: {kappa} }}")
            }
            SourceSpec::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl PartialEq for SourceSpec {
    fn eq(&self, other: &Self) -> bool {
        matches!(
            (self, other),
            (SourceSpec::Zero, SourceSpec::Zero) | (SourceSpec::Logistic, SourceSpec::Logistic)
        ) || matches!((self, other),
            (SourceSpec::GradientQuadratic { kappa: a }, SourceSpec::GradientQuadratic { kappa: b }) if a == b)
    }
}

impl SourceSpec {
    pub fn eval(&self, x: &Point, t: f64, z: f64, grad_z: &Point) -> f64 {
        match self {
            SourceSpec::Zero => 0.0,
            SourceSpec::Logistic => z * (1.0 - z),
            SourceSpec::GradientQuadratic { kappa } => kappa * crate::dot(grad_z, grad_z, 3),
            SourceSpec::Custom(f) => f(x, t, z, grad_z),
        }
    }
}

/// Velocity registry for the reaction-diffusion-convection mapping.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", tag = "id")]
pub enum VelocitySpec {
    Constant { c: Point },
    /// `c = ω(−x₂, x₁, 0)`, divergence-free.
    Rotational { omega: f64 },
    /// `c = (x₁, 0, 0)`: compressible, kept in the registry as the standard
    /// rejection example.
    LinearX,
}

impl VelocitySpec {
    pub fn eval(&self, x: &Point) -> Point {
        match self {
            VelocitySpec::Constant { c } => *c,
            VelocitySpec::Rotational { omega } => [-omega * x[1], omega * x[0], 0.0],
            VelocitySpec::LinearX => [x[0], 0.0, 0.0],
        }
    }

    pub fn divergence(&self, _x: &Point) -> f64 {
        match self {
            VelocitySpec::Constant { .. } | VelocitySpec::Rotational { .. } => 0.0,
            VelocitySpec::LinearX => 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_floor_inversion_round_trips() {
        let h = HSpec::CubicFloor { delta: 0.5 };
        for &z in &[-3.0, -0.2, 0.0, 1e-6, 0.7, 12.0] {
            let y = h.eval(z);
            let back = h.invert(y, 1e-12, 50).unwrap();
            assert!((back - z).abs() < 1e-10 * (1.0 + z.abs()), "z={z} back={back}");
        }
    }

    #[test]
    fn gap_forms_match_direct_differences() {
        let h = HSpec::CubicFloor { delta: 0.3 };
        let (u, v) = (1.2, 0.9);
        let w = u - v;
        assert!((h.gap(u, v, w) - (h.eval(u) - h.eval(v))).abs() < 1e-14);
        assert!((h.deriv_gap(u, v, w) - (h.deriv(u) - h.deriv(v))).abs() < 1e-13);

        let x = [0.3, -0.2, 0.0];
        for flux in [
            FluxSpec::None,
            FluxSpec::ConstantAdvection { c: [1.0, -2.0, 0.0] },
            FluxSpec::RotationalAdvection { omega: 0.7 },
            FluxSpec::BurgersLike,
            FluxSpec::SpaceModulated {
                amp: 0.4,
                k1: 2.0,
                k2: 3.0,
            },
        ] {
            let a = flux.eval(&x, 0.1, u);
            let b = flux.eval(&x, 0.1, v);
            let g = flux.z_gap(&x, 0.1, u, v, w);
            for k in 0..3 {
                assert!(((a[k] - b[k]) - g[k]).abs() < 1e-14, "{flux:?}");
            }
            let ediv = flux.explicit_div(&x, 0.1, u) - flux.explicit_div(&x, 0.1, v);
            assert!((ediv - flux.explicit_div_gap(&x, 0.1, w)).abs() < 1e-14);
        }
    }

    #[test]
    fn explicit_divergence_matches_finite_differences() {
        let flux = FluxSpec::SpaceModulated {
            amp: 0.4,
            k1: 2.0,
            k2: 3.0,
        };
        let x = [0.3, -0.2, 0.0];
        let z = 0.8;
        let h = 1e-6;
        let mut div_fd = 0.0;
        for k in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            div_fd += (flux.eval(&xp, 0.0, z)[k] - flux.eval(&xm, 0.0, z)[k]) / (2.0 * h);
        }
        assert!((div_fd - flux.explicit_div(&x, 0.0, z)).abs() < 1e-7);
    }
}
