//! Admissible configurations `(H, F, f)`, coordinate-rotated fluxes,
//! manufactured solution pairs, and the reaction-diffusion-convection
//! mapping.

mod admissibility;
mod mms;
mod pair;
mod rdc;
mod registry;
mod rotate;

pub use admissibility::{validate_admissibility, AdmissibilityReport, ConditionReport, SampleBox};
pub use mms::{mms_source, MmsSource};
pub use pair::{
    manufacture_identity_pair, transverse_bubble_shift, GapPair, ManufacturedPair, PairSpec,
    VectorShift,
};
pub use rdc::rdc_to_balance;
pub use registry::{FluxSpec, HSpec, SourceSpec, VelocitySpec};
pub use rotate::{rotate_flux, RotatedFlux};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("flux dimension {flux} does not match frame dimension {frame}")]
    DimensionMismatch { flux: usize, frame: usize },
    #[error("velocity field is compressible: max |div c| = {0} exceeds 1e-8")]
    CompressibleVelocity(f64),
    #[error("amplitude exponent q must be >= 0, got {0}")]
    NegativeAmplitudeExponent(f64),
    #[error("solver mode requires H' >= floor > 0; observed H' = {observed} < {floor}")]
    DerivativeFloor { observed: f64, floor: f64 },
    #[error("admissibility validation needs at least 100 samples, got {0}")]
    TooFewSamples(usize),
    #[error("unknown registry id `{0}` for {1}")]
    UnknownRegistryId(String, &'static str),
}

/// Declared Hölder metadata for one slot of the admissible class.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HolderMeta {
    pub alpha: f64,
    pub constant: f64,
}

/// One `(H, F, f)` configuration with its admissibility metadata.
#[derive(Debug, Clone)]
pub struct ConfigTriplet {
    pub h: HSpec,
    /// `(α₁, C₁)` — or `(α₁, C₁′)` when `h` is continuously differentiable.
    pub h_meta: HolderMeta,
    pub flux: FluxSpec,
    /// `(α₃, C₃)` shared by all flux components.
    pub flux_meta: HolderMeta,
    pub source: SourceSpec,
    /// `(α₂, C₂)`.
    pub source_meta: HolderMeta,
    pub mu: f64,
    /// Lower bound on `H′` required by the forward solver.
    pub h_deriv_floor: f64,
}

impl ConfigTriplet {
    pub fn new(
        h: HSpec,
        flux: FluxSpec,
        source: SourceSpec,
        mu: f64,
    ) -> Self {
        ConfigTriplet {
            h,
            h_meta: HolderMeta {
                alpha: 0.5,
                constant: 10.0,
            },
            flux,
            flux_meta: HolderMeta {
                alpha: 0.5,
                constant: 10.0,
            },
            source,
            source_meta: HolderMeta {
                alpha: 0.5,
                constant: 10.0,
            },
            mu,
            h_deriv_floor: 1e-3,
        }
    }
}
