//! Stability exponents τ and τ₁, gap extraction at the probe point, slope
//! fitting, and the theorem-level one-sided bound checks.

mod bound;
mod exponents;
mod fit;
mod gaps;

pub use bound::{theorem_bound_check, BoundFamily, BoundFamilyPoint, TheoremVerdict};
pub use exponents::{beta_tau_table, tau_case_a, tau1, ExponentTable, Tau1Variant};
pub use fit::{fit_slope, FitResult};
pub use gaps::{flux_gap_at, source_gap_at, GapComponents};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("alpha exponent must lie in (0,1), got {0}")]
    AlphaRange(f64),
    #[error("l = {l} outside (0, 1+p) with p = {p}")]
    LRange { l: f64, p: f64 },
    #[error("slope fit needs at least 3 points above the floor, got {0}")]
    TooFewPoints(usize),
    #[error("point ({0}, {1}, {2}) lies outside the probe subdomain closure")]
    PointOutsideDomain(f64, f64, f64),
    #[error("bound check needs at least 3 epsilon values, got {0}")]
    TooFewEps(usize),
    #[error("hypothesis validation failed at eps = {eps}: {failure}")]
    HypothesisFailure { eps: f64, failure: String },
    #[error("family construction failed at eps = {eps}: {message}")]
    Family { eps: f64, message: String },
}
