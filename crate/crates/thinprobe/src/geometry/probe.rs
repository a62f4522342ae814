//! The ε-scale probe subdomain `D_ε` and its boundary decomposition.
//!
//! In rotated probe coordinates the subdomain is
//!
//! - 2D: `{(x₁, x₂) : 0 < x₁ < ε^l, γ(x₁) < x₂ < γ(x₁) + ε}` with boundary
//!   pieces Γ₁ (lower graph), Γ₂ (x₁ = 0), Γ₃ (upper graph), Γ₄ (x₁ = ε^l);
//! - 3D: `{(x₁, x₂, x₃) : x₁ ∈ E, 0 < x₂ < ε^l, γ(x₂) < x₃ < γ(x₂) + ε}`
//!   with end caps Ω_ε, Ω′_ε at x₂ = 0, ε^l. For nozzles the four long faces
//!   form the lateral boundary Γ_ε; for slabs only the x₃-faces Γ_V are
//!   lateral while the x₁-faces Γ_f, Γ_b are interior cuts.
//!
//! Here `γ` is the transverse graph of the rotated centerline, recovered by
//! solving `(R(γ(a) − γ(b₁)))_along = x` so that sampled graph points lie on
//! the original curve to root-find tolerance.

use serde::{Deserialize, Serialize};

use super::{rotation_frame, Curve, Frame, GeometryError};
use crate::quad::Axis;
use crate::Point;

/// Nozzle or slab probe region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Nozzle,
    Slab,
}

/// Labels for the boundary pieces of `D_ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PieceLabel {
    /// 2D lower graph `x₂ = γ(x₁)`.
    Gamma1,
    /// 2D inlet `x₁ = 0`.
    Gamma2,
    /// 2D upper graph `x₂ = γ(x₁) + ε`.
    Gamma3,
    /// 2D outlet `x₁ = ε^l`.
    Gamma4,
    /// 3D end cap at `x₂ = 0`.
    OmegaEps,
    /// 3D end cap at `x₂ = ε^l`.
    OmegaEpsPrime,
    /// 3D face `x₁ = 0` (part of Γ_ε for nozzles, Γ_b for slabs).
    FaceX1Lo,
    /// 3D face `x₁ = ε` (part of Γ_ε for nozzles, Γ_f for slabs).
    FaceX1Hi,
    /// 3D lower graph face `x₃ = γ(x₂)`.
    FaceX3Lo,
    /// 3D upper graph face `x₃ = γ(x₂) + ε`.
    FaceX3Hi,
}

impl PieceLabel {
    pub fn parse(name: &str) -> Result<Self, GeometryError> {
        Ok(match name {
            "gamma1" => PieceLabel::Gamma1,
            "gamma2" => PieceLabel::Gamma2,
            "gamma3" => PieceLabel::Gamma3,
            "gamma4" => PieceLabel::Gamma4,
            "omega_eps" => PieceLabel::OmegaEps,
            "omega_eps_prime" => PieceLabel::OmegaEpsPrime,
            "gamma_b" | "face_x1_lo" => PieceLabel::FaceX1Lo,
            "gamma_f" | "face_x1_hi" => PieceLabel::FaceX1Hi,
            "gamma_v_lo" | "face_x3_lo" => PieceLabel::FaceX3Lo,
            "gamma_v_hi" | "face_x3_hi" => PieceLabel::FaceX3Hi,
            other => return Err(GeometryError::UnknownPiece(other.to_string())),
        })
    }
}

/// Transverse graph of the rotated centerline over the axial span.
///
/// Evaluation solves the along-axis equation with a guarded Newton iteration
/// and returns the offset together with its first two derivatives, obtained
/// by implicit differentiation.
#[derive(Debug, Clone)]
pub struct CurveGraph {
    curve: Curve,
    frame: Frame,
    origin_param: f64,
    /// Index of the along-axis coordinate in rotated coordinates.
    axis_along: usize,
    /// Index of the transverse offset coordinate.
    axis_offset: usize,
    span: f64,
}

impl CurveGraph {
    /// Offset and derivatives `(γ, γ′, γ″)` at axial coordinate `x ∈ [0, span]`.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let a = self.param_at(x);
        let rot = |p: &Point| self.frame.rotate_vector(p);
        let d1 = rot(&self.curve.deriv(a));
        let d2 = rot(&self.curve.second_deriv(a));
        let rel = self.frame.to_rotated(&self.curve.eval(a));
        let (p1, q1) = (d1[self.axis_along], d1[self.axis_offset]);
        let (p2, q2) = (d2[self.axis_along], d2[self.axis_offset]);
        let g = rel[self.axis_offset];
        let gp = q1 / p1;
        let gpp = (q2 * p1 - q1 * p2) / (p1 * p1 * p1);
        (g, gp, gpp)
    }

    /// Curve parameter whose rotated along-axis coordinate equals `x`.
    pub fn param_at(&self, x: f64) -> f64 {
        let mut a = self.origin_param + x;
        for _ in 0..50 {
            let rel = self.frame.to_rotated(&self.curve.eval(a));
            let f = rel[self.axis_along] - x;
            if f.abs() < 1e-14 * self.span.max(1.0) {
                return a;
            }
            let dp = self.frame.rotate_vector(&self.curve.deriv(a))[self.axis_along];
            a -= f / dp;
        }
        a
    }

    /// Point on the original curve matching axial coordinate `x`.
    pub fn original_point(&self, x: f64) -> Point {
        self.curve.eval(self.param_at(x))
    }
}

/// The extracted ε-scale probe region with its frame and graph.
#[derive(Debug, Clone)]
pub struct ProbeSubdomain {
    pub dim: usize,
    pub kind: DomainKind,
    pub eps: f64,
    pub l: f64,
    /// `l₀ = min(l, 1)`.
    pub l0: f64,
    /// Along-curve extent `ε^l`.
    pub span: f64,
    pub origin_param: f64,
    pub frame: Frame,
    pub graph: CurveGraph,
}

impl ProbeSubdomain {
    /// Physical (rotated-frame) point from probe coordinates:
    /// 2D `(axial, η)`, 3D `(η₁, axial, η₃)` with η ∈ [0, 1].
    pub fn point(&self, axial: f64, eta1: f64, eta3: f64) -> Point {
        let (g, _, _) = self.graph.eval(axial);
        if self.dim == 2 {
            [axial, g + self.eps * eta3, 0.0]
        } else {
            [self.eps * eta1, axial, g + self.eps * eta3]
        }
    }

    /// The boundary pieces of this subdomain, grouped per the domain kind.
    pub fn pieces(&self) -> Vec<PieceLabel> {
        match (self.dim, self.kind) {
            (2, _) => vec![
                PieceLabel::Gamma1,
                PieceLabel::Gamma2,
                PieceLabel::Gamma3,
                PieceLabel::Gamma4,
            ],
            (3, _) => vec![
                PieceLabel::OmegaEps,
                PieceLabel::OmegaEpsPrime,
                PieceLabel::FaceX1Lo,
                PieceLabel::FaceX1Hi,
                PieceLabel::FaceX3Lo,
                PieceLabel::FaceX3Hi,
            ],
            _ => unreachable!(),
        }
    }

    /// Lateral pieces carry the `w = 0, ∂_ν w = h` boundary conditions.
    pub fn lateral_pieces(&self) -> Vec<PieceLabel> {
        match (self.dim, self.kind) {
            (2, _) => vec![PieceLabel::Gamma1, PieceLabel::Gamma3],
            (3, DomainKind::Nozzle) => vec![
                PieceLabel::FaceX1Lo,
                PieceLabel::FaceX1Hi,
                PieceLabel::FaceX3Lo,
                PieceLabel::FaceX3Hi,
            ],
            (3, DomainKind::Slab) => vec![PieceLabel::FaceX3Lo, PieceLabel::FaceX3Hi],
            _ => unreachable!(),
        }
    }

    /// End-cap pieces feeding the I₁/I₂ boundary terms.
    pub fn cap_pieces(&self) -> Vec<PieceLabel> {
        if self.dim == 2 {
            vec![PieceLabel::Gamma2, PieceLabel::Gamma4]
        } else {
            vec![PieceLabel::OmegaEps, PieceLabel::OmegaEpsPrime]
        }
    }

    /// Slab cut faces feeding I₇/I₈ (empty for other kinds).
    pub fn cut_pieces(&self) -> Vec<PieceLabel> {
        if self.dim == 3 && self.kind == DomainKind::Slab {
            vec![PieceLabel::FaceX1Lo, PieceLabel::FaceX1Hi]
        } else {
            vec![]
        }
    }

    /// Exact measure of a boundary piece, with the curved graph pieces
    /// measured by dx₁ extent times the arc-length factor handled in the
    /// quadrature weights.
    pub fn piece_measure_flat(&self, piece: PieceLabel) -> f64 {
        let e = self.eps;
        match piece {
            PieceLabel::Gamma2 | PieceLabel::Gamma4 => e,
            PieceLabel::Gamma1 | PieceLabel::Gamma3 => self.span,
            PieceLabel::OmegaEps | PieceLabel::OmegaEpsPrime => e * e,
            PieceLabel::FaceX1Lo | PieceLabel::FaceX1Hi => self.span * e,
            PieceLabel::FaceX3Lo | PieceLabel::FaceX3Hi => self.span * e,
        }
    }
}

/// Quadrature data for one boundary piece: nodes in rotated coordinates,
/// outward unit normals, and surface-measure weights.
#[derive(Debug, Clone)]
pub struct BoundaryQuad {
    pub piece: PieceLabel,
    pub nodes: Vec<Point>,
    pub normals: Vec<Point>,
    pub weights: Vec<f64>,
}

/// Extract the probe subdomain at `b1`.
pub fn extract_probe_subdomain(
    curve: &Curve,
    b1: f64,
    eps: f64,
    l: f64,
    dim: usize,
    kind: DomainKind,
) -> Result<ProbeSubdomain, GeometryError> {
    if dim != curve.dim {
        return Err(GeometryError::BadDimension(dim));
    }
    if kind == DomainKind::Slab && dim != 3 {
        return Err(GeometryError::SlabNeeds3d);
    }
    if !(eps > 0.0) || !(l > 0.0) {
        return Err(GeometryError::NonPositive {
            name: "eps or l",
            value: eps.min(l),
        });
    }
    let span = eps.powf(l);
    if span >= curve.half_length {
        return Err(GeometryError::SpanTooLong(span, curve.half_length));
    }
    if !curve.contains_param(b1) || !curve.contains_param(b1 + span) {
        return Err(GeometryError::ExtentOutsideInterval(b1, b1 + span));
    }
    let frame = rotation_frame(curve, b1, dim)?;
    let (axis_along, axis_offset) = if dim == 2 { (0, 1) } else { (1, 2) };
    let graph = CurveGraph {
        curve: curve.clone(),
        frame: frame.clone(),
        origin_param: b1,
        axis_along,
        axis_offset,
        span,
    };
    // Sanity pass over the span: the inversion must converge and, in 3D,
    // the rotated curve must stay in the x2x3-plane.
    for i in 0..=16 {
        let x = span * i as f64 / 16.0;
        let a = graph.param_at(x);
        let rel = frame.to_rotated(&curve.eval(a));
        if (rel[axis_along] - x).abs() > 1e-10 * span.max(1.0) {
            return Err(GeometryError::GraphInversion(x));
        }
        if dim == 3 && rel[0].abs() > 1e-10 {
            return Err(GeometryError::CurveNotPlanar(rel[0].abs()));
        }
    }
    Ok(ProbeSubdomain {
        dim,
        kind,
        eps,
        l,
        l0: l.min(1.0),
        span,
        origin_param: b1,
        frame,
        graph,
    })
}

/// Deterministic left-to-right tiling of the parameter interval into
/// `ceil(2L/ε^l)` probe subdomains, the numerical form of the covering
/// argument. Tiles at the right end are clamped inside the interval.
pub fn tile_probe_subdomains(
    curve: &Curve,
    eps: f64,
    l: f64,
    dim: usize,
    kind: DomainKind,
) -> Result<Vec<ProbeSubdomain>, GeometryError> {
    let span = eps.powf(l);
    let total = 2.0 * curve.half_length;
    let count = (total / span).ceil() as usize;
    let margin = 1e-9 * span;
    let mut tiles = Vec::with_capacity(count);
    for i in 0..count {
        let mut b1 = -curve.half_length + i as f64 * span + margin;
        if b1 + span >= curve.half_length {
            b1 = curve.half_length - span - margin;
        }
        tiles.push(extract_probe_subdomain(curve, b1, eps, l, dim, kind)?);
    }
    Ok(tiles)
}

/// Simpson nodes, outward normals, and surface weights on a boundary piece.
///
/// `n` is the per-axis node count (odd, >= 3); 3D faces return an `n × n`
/// tensor grid. Curved graph pieces carry arc-length weights
/// `w_i · sqrt(1 + γ′²)`.
pub fn boundary_nodes(
    sub: &ProbeSubdomain,
    piece: PieceLabel,
    n: usize,
) -> Result<BoundaryQuad, GeometryError> {
    if n < 3 || n % 2 == 0 {
        return Err(GeometryError::BadNodeCount(n));
    }
    if !sub.pieces().contains(&piece) {
        return Err(GeometryError::UnknownPiece(format!("{piece:?}")));
    }
    let eps = sub.eps;
    let span = sub.span;
    let simpson = |a: f64, b: f64| Axis::simpson(a, b, n).expect("validated node count");

    let mut nodes = Vec::new();
    let mut normals = Vec::new();
    let mut weights = Vec::new();

    match piece {
        PieceLabel::Gamma2 | PieceLabel::Gamma4 => {
            let x1 = if piece == PieceLabel::Gamma2 { 0.0 } else { span };
            let (g, _, _) = sub.graph.eval(x1);
            let ax = simpson(g, g + eps);
            let nx = if piece == PieceLabel::Gamma2 {
                [-1.0, 0.0, 0.0]
            } else {
                [1.0, 0.0, 0.0]
            };
            for (x2, w) in ax.nodes.iter().zip(&ax.weights) {
                nodes.push([x1, *x2, 0.0]);
                normals.push(nx);
                weights.push(*w);
            }
        }
        PieceLabel::Gamma1 | PieceLabel::Gamma3 => {
            let ax = simpson(0.0, span);
            let offset = if piece == PieceLabel::Gamma1 { 0.0 } else { eps };
            for (x1, w) in ax.nodes.iter().zip(&ax.weights) {
                let (g, gp, _) = sub.graph.eval(*x1);
                let len = (1.0 + gp * gp).sqrt();
                let normal = if piece == PieceLabel::Gamma1 {
                    [gp / len, -1.0 / len, 0.0]
                } else {
                    [-gp / len, 1.0 / len, 0.0]
                };
                nodes.push([*x1, g + offset, 0.0]);
                normals.push(normal);
                weights.push(*w * len);
            }
        }
        PieceLabel::OmegaEps | PieceLabel::OmegaEpsPrime => {
            let x2 = if piece == PieceLabel::OmegaEps { 0.0 } else { span };
            let (g, _, _) = sub.graph.eval(x2);
            let ax1 = simpson(0.0, eps);
            let ax3 = simpson(g, g + eps);
            let nx = if piece == PieceLabel::OmegaEps {
                [0.0, -1.0, 0.0]
            } else {
                [0.0, 1.0, 0.0]
            };
            for (x1, w1) in ax1.nodes.iter().zip(&ax1.weights) {
                for (x3, w3) in ax3.nodes.iter().zip(&ax3.weights) {
                    nodes.push([*x1, x2, *x3]);
                    normals.push(nx);
                    weights.push(w1 * w3);
                }
            }
        }
        PieceLabel::FaceX1Lo | PieceLabel::FaceX1Hi => {
            let x1 = if piece == PieceLabel::FaceX1Lo { 0.0 } else { eps };
            let nx = if piece == PieceLabel::FaceX1Lo {
                [-1.0, 0.0, 0.0]
            } else {
                [1.0, 0.0, 0.0]
            };
            let ax2 = simpson(0.0, span);
            let ax_eta = simpson(0.0, 1.0);
            for (x2, w2) in ax2.nodes.iter().zip(&ax2.weights) {
                let (g, _, _) = sub.graph.eval(*x2);
                for (eta, we) in ax_eta.nodes.iter().zip(&ax_eta.weights) {
                    nodes.push([x1, *x2, g + eps * eta]);
                    normals.push(nx);
                    weights.push(w2 * we * eps);
                }
            }
        }
        PieceLabel::FaceX3Lo | PieceLabel::FaceX3Hi => {
            let offset = if piece == PieceLabel::FaceX3Lo { 0.0 } else { eps };
            let ax1 = simpson(0.0, eps);
            let ax2 = simpson(0.0, span);
            for (x2, w2) in ax2.nodes.iter().zip(&ax2.weights) {
                let (g, gp, _) = sub.graph.eval(*x2);
                let len = (1.0 + gp * gp).sqrt();
                let normal = if piece == PieceLabel::FaceX3Lo {
                    [0.0, gp / len, -1.0 / len]
                } else {
                    [0.0, -gp / len, 1.0 / len]
                };
                for (x1, w1) in ax1.nodes.iter().zip(&ax1.weights) {
                    nodes.push([*x1, *x2, g + offset]);
                    normals.push(normal);
                    weights.push(w1 * w2 * len);
                }
            }
        }
    }

    Ok(BoundaryQuad {
        piece,
        nodes,
        normals,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_curve, CurveSpec};

    fn sine_curve(eps: f64) -> Curve {
        build_curve(
            CurveSpec::Sine {
                amp: 0.5,
                freq: 4.0 * std::f64::consts::PI,
            },
            2,
            eps,
            1.0,
        )
        .unwrap()
    }

    fn straight2(eps: f64) -> Curve {
        build_curve(
            CurveSpec::Straight {
                direction: [1.0, 0.0, 0.0],
            },
            2,
            eps,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn frozen_gamma4_location() {
        let sub = extract_probe_subdomain(&straight2(0.1), 0.0, 0.1, 0.5, 2, DomainKind::Nozzle)
            .unwrap();
        assert!((sub.span - 0.31622776601683794).abs() < 1e-15);
        let q = boundary_nodes(&sub, PieceLabel::Gamma4, 5).unwrap();
        for node in &q.nodes {
            assert!((node[0] - 0.31622776601683794).abs() < 1e-15);
        }
        let total: f64 = q.weights.iter().sum();
        assert!((total - 0.1).abs() < 1e-13);
    }

    #[test]
    fn l0_is_min_l_one() {
        let sub = extract_probe_subdomain(&straight2(0.1), 0.0, 0.1, 1.7, 2, DomainKind::Nozzle)
            .unwrap();
        assert_eq!(sub.l0, 1.0);
        let sub2 = extract_probe_subdomain(&straight2(0.1), 0.0, 0.1, 0.4, 2, DomainKind::Nozzle)
            .unwrap();
        assert_eq!(sub2.l0, 0.4);
    }

    #[test]
    fn gamma1_points_lie_on_curve() {
        let curve = sine_curve(0.1);
        let sub =
            extract_probe_subdomain(&curve, 0.05, 0.1, 1.0, 2, DomainKind::Nozzle).unwrap();
        let q = boundary_nodes(&sub, PieceLabel::Gamma1, 33).unwrap();
        for node in &q.nodes {
            // Map back to the original frame; the point must sit on the curve.
            let orig = sub.frame.to_original(node);
            let a = sub.graph.param_at(node[0]);
            let on_curve = curve.eval(a);
            let d = ((orig[0] - on_curve[0]).powi(2) + (orig[1] - on_curve[1]).powi(2)).sqrt();
            assert!(d < 1e-12, "distance {d}");
        }
    }

    #[test]
    fn curved_piece_weights_match_richardson_arc_length() {
        let curve = sine_curve(0.1);
        let sub =
            extract_probe_subdomain(&curve, 0.0, 0.1, 0.5, 2, DomainKind::Nozzle).unwrap();
        let q = boundary_nodes(&sub, PieceLabel::Gamma1, 129).unwrap();
        let total: f64 = q.weights.iter().sum();

        // Independent oracle: Richardson-extrapolated trapezoid arc length.
        let arc = |n: usize| -> f64 {
            let mut s = 0.0;
            let mut prev = sub.point(0.0, 0.0, 0.0);
            for i in 1..=n {
                let x = sub.span * i as f64 / n as f64;
                let p = sub.point(x, 0.0, 0.0);
                s += ((p[0] - prev[0]).powi(2) + (p[1] - prev[1]).powi(2)).sqrt();
                prev = p;
            }
            s
        };
        let a1 = arc(4096);
        let a2 = arc(8192);
        let oracle = a2 + (a2 - a1) / 3.0;
        assert!(
            (total - oracle).abs() <= 1e-8 * oracle,
            "weights {total} vs oracle {oracle}"
        );
    }

    #[test]
    fn straight_gamma1_normals_point_down() {
        let sub = extract_probe_subdomain(&straight2(0.1), 0.0, 0.1, 0.5, 2, DomainKind::Nozzle)
            .unwrap();
        let q = boundary_nodes(&sub, PieceLabel::Gamma1, 9).unwrap();
        for nv in &q.normals {
            assert!((nv[0]).abs() < 1e-14 && (nv[1] + 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn normals_are_unit_and_weights_match_measures() {
        let curve = sine_curve(0.1);
        let sub =
            extract_probe_subdomain(&curve, 0.0, 0.1, 0.5, 2, DomainKind::Nozzle).unwrap();
        for piece in sub.pieces() {
            let q = boundary_nodes(&sub, piece, 17).unwrap();
            for nv in &q.normals {
                assert!((crate::norm(nv, 3) - 1.0).abs() < 1e-12);
            }
            let total: f64 = q.weights.iter().sum();
            let flat = sub.piece_measure_flat(piece);
            // Straight pieces match exactly; curved pieces are longer.
            match piece {
                PieceLabel::Gamma2 | PieceLabel::Gamma4 => {
                    assert!((total - flat).abs() < 1e-10 * flat)
                }
                _ => assert!(total >= flat * (1.0 - 1e-12)),
            }
        }
    }

    #[test]
    fn nozzle_3d_pieces() {
        let curve = build_curve(
            CurveSpec::Straight {
                direction: [0.0, 1.0, 0.0],
            },
            3,
            0.1,
            1.0,
        )
        .unwrap();
        let sub = extract_probe_subdomain(&curve, 0.0, 0.1, 1.0, 3, DomainKind::Nozzle).unwrap();
        assert!((sub.span - 0.1).abs() < 1e-15);
        let q = boundary_nodes(&sub, PieceLabel::OmegaEpsPrime, 9).unwrap();
        for (node, nv) in q.nodes.iter().zip(&q.normals) {
            assert!((node[1] - 0.1).abs() < 1e-15);
            assert_eq!(*nv, [0.0, 1.0, 0.0]);
        }
        let total: f64 = q.weights.iter().sum();
        assert!((total - 0.01).abs() < 1e-14);
        assert_eq!(sub.cut_pieces(), Vec::<PieceLabel>::new());
    }

    #[test]
    fn slab_pieces_and_normals() {
        let curve = build_curve(
            CurveSpec::Straight {
                direction: [0.0, 1.0, 0.0],
            },
            3,
            0.1,
            1.0,
        )
        .unwrap();
        let sub = extract_probe_subdomain(&curve, 0.0, 0.1, 1.0, 3, DomainKind::Slab).unwrap();
        let qb = boundary_nodes(&sub, PieceLabel::FaceX1Lo, 5).unwrap();
        assert!(qb.normals.iter().all(|n| *n == [-1.0, 0.0, 0.0]));
        let qf = boundary_nodes(&sub, PieceLabel::FaceX1Hi, 5).unwrap();
        assert!(qf.normals.iter().all(|n| *n == [1.0, 0.0, 0.0]));
        assert_eq!(
            sub.cut_pieces(),
            vec![PieceLabel::FaceX1Lo, PieceLabel::FaceX1Hi]
        );
        assert_eq!(
            sub.lateral_pieces(),
            vec![PieceLabel::FaceX3Lo, PieceLabel::FaceX3Hi]
        );
    }

    #[test]
    fn slab_requires_3d() {
        assert!(matches!(
            extract_probe_subdomain(&straight2(0.1), 0.0, 0.1, 0.5, 2, DomainKind::Slab),
            Err(GeometryError::SlabNeeds3d)
        ));
    }

    #[test]
    fn extent_errors() {
        assert!(matches!(
            extract_probe_subdomain(&straight2(0.1), 0.9, 0.1, 0.5, 2, DomainKind::Nozzle),
            Err(GeometryError::ExtentOutsideInterval(..))
        ));
        let short = build_curve(
            CurveSpec::Straight {
                direction: [1.0, 0.0, 0.0],
            },
            2,
            0.9,
            0.5,
        )
        .unwrap();
        assert!(matches!(
            extract_probe_subdomain(&short, 0.0, 0.9, 0.1, 2, DomainKind::Nozzle),
            Err(GeometryError::SpanTooLong(..))
        ));
    }

    #[test]
    fn tiling_covers_interval() {
        let curve = straight2(0.1);
        let tiles = tile_probe_subdomains(&curve, 0.1, 0.5, 2, DomainKind::Nozzle).unwrap();
        let span = 0.1f64.powf(0.5);
        assert_eq!(tiles.len(), (2.0f64 / span).ceil() as usize);
        for t in &tiles {
            assert!((t.span - span).abs() < 1e-14);
        }
    }

    #[test]
    fn probe_point_span_is_exact() {
        let curve = sine_curve(0.1);
        let sub =
            extract_probe_subdomain(&curve, 0.02, 0.1, 0.5, 2, DomainKind::Nozzle).unwrap();
        let p0 = sub.point(0.0, 0.0, 0.0);
        let p1 = sub.point(sub.span, 0.0, 0.0);
        assert!(p0[0].abs() < 1e-12);
        assert!((p1[0] - sub.span).abs() < 1e-12);
    }
}
