//! Flux and source gaps evaluated at the probe point, in the rotated
//! components designated by the geometry:
//!
//! - 2D: the second rotated component,
//! - 3D nozzle: components 1 and 3,
//! - 3D slab: component 3.

use serde::Serialize;

use super::ProbeError;
use crate::geometry::{DomainKind, ProbeSubdomain};
use crate::model::GapPair;
use crate::Point;

/// The designated rotated flux-gap components at a point.
#[derive(Debug, Clone, Serialize)]
pub struct GapComponents {
    /// `(component index, |gap_k|)` for each designated k (1-based).
    pub components: Vec<(usize, f64)>,
    /// Max over the designated components: the theorem's gap metric.
    pub value: f64,
}

fn check_inside(sub: &ProbeSubdomain, x: &Point) -> Result<(), ProbeError> {
    let tol = 1e-9;
    let axial = if sub.dim == 2 { x[0] } else { x[1] };
    if axial < -tol || axial > sub.span + tol {
        return Err(ProbeError::PointOutsideDomain(x[0], x[1], x[2]));
    }
    let (g, _, _) = sub.graph.eval(axial.clamp(0.0, sub.span));
    let offset = if sub.dim == 2 { x[1] } else { x[2] };
    if offset < g - tol || offset > g + sub.eps + tol {
        return Err(ProbeError::PointOutsideDomain(x[0], x[1], x[2]));
    }
    if sub.dim == 3 && (x[0] < -tol || x[0] > sub.eps + tol) {
        return Err(ProbeError::PointOutsideDomain(x[0], x[1], x[2]));
    }
    Ok(())
}

/// `|F̃¹(u) − F̃²(u)|` at `(x, t)` by geometry kind.
pub fn flux_gap_at(
    pair: &dyn GapPair,
    sub: &ProbeSubdomain,
    x: &Point,
    t: f64,
) -> Result<GapComponents, ProbeError> {
    check_inside(sub, x)?;
    let gap = pair.flux_gap(x, t);
    let designated: &[usize] = match (sub.dim, sub.kind) {
        (2, _) => &[1],
        (3, DomainKind::Nozzle) => &[0, 2],
        (3, DomainKind::Slab) => &[2],
        _ => unreachable!(),
    };
    let components: Vec<(usize, f64)> = designated
        .iter()
        .map(|&k| (k + 1, gap[k].abs()))
        .collect();
    let value = components
        .iter()
        .map(|(_, v)| *v)
        .fold(0.0f64, f64::max);
    Ok(GapComponents { components, value })
}

/// `|𝔣¹(u) − 𝔣²(u)|` at `(x, t)`.
pub fn source_gap_at(
    pair: &dyn GapPair,
    sub: &ProbeSubdomain,
    x: &Point,
    t: f64,
) -> Result<f64, ProbeError> {
    check_inside(sub, x)?;
    Ok(pair.source_gap(x, t).abs())
}
