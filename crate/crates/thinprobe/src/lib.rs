//! Desk-scale numerical laboratory for identifying flux and source operators
//! of nonlinear balance laws from a single passive boundary measurement on
//! thin product-type domains (nozzles and slabs).
//!
//! The crate is organised around the pipeline an experiment follows:
//!
//! - [`geometry`]: centerline curves, rotation frames, and the ε-scale probe
//!   subdomain `D_ε` with its labelled boundary pieces.
//! - [`cgo`]: complex geometrical optics probe solutions `u₀ = exp(ρ·x/√μ + λt)`
//!   and the `s = ε^{-β}` frequency schedules.
//! - [`field`]: closed-form space-time scalar fields with analytic jets
//!   (value, time derivative, gradient, Laplacian).
//! - [`model`]: admissible configurations `(H, F, f)`, coordinate-rotated
//!   fluxes, manufactured solution pairs, and the reaction-diffusion-convection
//!   mapping.
//! - [`solver`]: a 2D forward solver on mapped nozzle coordinates producing
//!   passive boundary measurements.
//! - [`identity`]: quadrature evaluation of the space-time Green formula and
//!   the integral identity terms `I₁..I₈`, plus ε-scaling sweeps.
//! - [`probe`]: stability exponents τ, τ₁, gap extraction, and theorem-level
//!   one-sided bound checks.
//! - [`cli`]: declarative scenario configs, experiment orchestration, and
//!   report emission.

pub mod cgo;
pub mod cli;
pub mod families;
pub mod field;
pub mod geometry;
pub mod identity;
pub mod model;
pub mod probe;
pub mod quad;
pub mod solver;

/// Point in up to three dimensions. 2D data lives in the first two slots
/// with the third fixed at zero, so geometry, CGO, and quadrature code can
/// share one representation.
pub type Point = [f64; 3];

/// Dot product over the active dimensions.
#[inline]
pub fn dot(a: &Point, b: &Point, dim: usize) -> f64 {
    a.iter().zip(b).take(dim).map(|(x, y)| x * y).sum()
}

/// Euclidean norm over the active dimensions.
#[inline]
pub fn norm(a: &Point, dim: usize) -> f64 {
    dot(a, a, dim).sqrt()
}
