//! Domain geometry: centerline curves, rotation frames, and the ε-scale
//! probe subdomain with its labelled boundary decomposition.
//!
//! All geometry objects are immutable after construction and safe to share
//! across concurrent workers.

mod curve;
mod frame;
mod probe;

pub use curve::{
    build_curve, build_curve_with_bound, curve_spec_from_config, parallel_tangent_pairs, Curve,
    CurveSpec,
};
pub use frame::{rotation_frame, Frame};
pub use probe::{
    boundary_nodes, extract_probe_subdomain, tile_probe_subdomains, BoundaryQuad, CurveGraph,
    DomainKind, PieceLabel, ProbeSubdomain,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("unknown curve spec id `{0}` (registry: straight, linear-tilt, sine)")]
    UnknownSpecId(String),
    #[error("curve `{id}` expects {expected} parameters, got {got}")]
    BadParamCount {
        id: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("transverse amplitude {amplitude} exceeds the O(eps) bound K*eps = {bound}")]
    AmplitudeBound { amplitude: f64, bound: f64 },
    #[error("parameter {0} outside the curve interval (-{1}, {1})")]
    ParamOutsideInterval(f64, f64),
    #[error("degenerate tangent at b1 = {0} (|gamma'| < 1e-14)")]
    DegenerateTangent(f64),
    #[error("dimension must be 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("probe extent [b1, b1 + eps^l] = [{0}, {1}] leaves the curve interval")]
    ExtentOutsideInterval(f64, f64),
    #[error("eps^l = {0} must be smaller than the half-length L = {1}")]
    SpanTooLong(f64, f64),
    #[error("slab domains exist only in 3D")]
    SlabNeeds3d,
    #[error("unknown boundary piece `{0}` for this subdomain")]
    UnknownPiece(String),
    #[error("boundary quadrature needs an odd node count >= 3, got {0}")]
    BadNodeCount(usize),
    #[error("graph inversion failed at axial coordinate {0} (curve not a graph over the frame axis)")]
    GraphInversion(f64),
    #[error(
        "rotated curve leaves the x2x3-plane by {0:.3e}; 3D probe extraction needs a b1 with axis-aligned tangent"
    )]
    CurveNotPlanar(f64),
    #[error("non-positive geometry parameter {name} = {value}")]
    NonPositive { name: &'static str, value: f64 },
}
