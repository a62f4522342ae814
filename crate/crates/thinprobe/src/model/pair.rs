//! Manufactured solution pairs satisfying the coupled gap system exactly.
//!
//! Given a base field `u`, a gap field `w` vanishing on the lateral boundary,
//! and a flux `F′`, the second configuration is defined by
//!
//! ```text
//! v  := u − w
//! G′(x,t,z) := F′(x,t,z) − μ∇w(x,t) − Y(x,t)
//! f  := ∂ₜH(u) + ∇·F′(·,u) − μΔu        (manufactured source, u side)
//! g  := ∂ₜH(v) + ∇·G′(·,v) − μΔv        (manufactured source, v side)
//! h  := ∂_ν w                            (lateral Neumann gap)
//! ```
//!
//! The `−μ∇w` shift makes the pointwise flux balance
//! `ν·(F′(·,u) − G′(·,v)) = μ∂_ν w = μh` exact on the lateral boundary
//! (where `u = v`), and the optional shift `Y` — constrained to have zero
//! normal component there — injects controlled flux/source gaps for sweep
//! families. All gap quantities are evaluated through factored forms, so
//! they stay accurate when the gap is many orders below the fields.
//!
//! Zero-flux-gap configurations (the theorem's case (b)) instead keep
//! `G′ = F′` by disabling the `−μ∇w` shift; the lateral balance then needs
//! `h = ∂_ν w = 0`, i.e. a transverse profile vanishing to second order,
//! and the `−μΔw` term moves into the source gap.

use std::sync::Arc;

use super::{HSpec, ModelError, RotatedFlux};
use crate::field::{
    FieldRef, FlatEta, Jet, MapAxes, MappedProfile, Product, Scaled, TransverseProfile,
};
use crate::geometry::{boundary_nodes, DomainKind, ProbeSubdomain};
use crate::{dot, Point};

/// Pair gap data consumed by the identity evaluators. Implemented by
/// manufactured pairs (closed forms) and solver pairs (grid interpolation).
pub trait GapPair: Send + Sync {
    fn dim(&self) -> usize;
    /// Jet of `w = u − v`.
    fn w_jet(&self, x: &Point, t: f64) -> Jet;
    /// `H(u) − H(v)`.
    fn h_gap(&self, x: &Point, t: f64) -> f64;
    /// Source realization gap `f − g`.
    fn source_gap(&self, x: &Point, t: f64) -> f64;
    /// Rotated flux realization gap `F′(·,u) − G′(·,v)`.
    fn flux_gap(&self, x: &Point, t: f64) -> Point;
}

/// Optional flux shift `Y(x,t)` with analytic divergence.
#[derive(Clone)]
pub struct VectorShift {
    pub components: [Option<FieldRef>; 3],
}

impl VectorShift {
    pub fn value(&self, x: &Point, t: f64) -> Point {
        let mut out = [0.0; 3];
        for (k, c) in self.components.iter().enumerate() {
            if let Some(f) = c {
                out[k] = f.value(x, t);
            }
        }
        out
    }

    pub fn divergence(&self, x: &Point, t: f64) -> f64 {
        let mut div = 0.0;
        for (k, c) in self.components.iter().enumerate() {
            if let Some(f) = c {
                div += f.jet(x, t).grad[k];
            }
        }
        div
    }
}

/// Declarative inputs of [`manufacture_identity_pair`].
pub struct PairSpec {
    pub base_u: FieldRef,
    pub flux: RotatedFlux,
    pub h: HSpec,
    pub mu: f64,
    /// Amplitude exponent: `w` is scaled by `ε^q`. `None` means `w ≡ 0`
    /// (the zero-gap configuration).
    pub q: Option<f64>,
    /// Along-curve/time profile ψ multiplying the transverse bubble.
    pub psi: FieldRef,
    /// Transverse profile in the wall-to-wall coordinate.
    pub transverse: TransverseProfile,
    /// Extra flux gap `Y`; caller must keep `ν·Y = 0` on the lateral pieces.
    pub shift: Option<VectorShift>,
    /// Apply the `−μ∇w` shift to `G′` (on for flux-gap experiments; off for
    /// zero-flux-gap case (b) pairs, which require `∂_ν w = 0` laterally).
    pub grad_w_shift: bool,
}

/// A fully assembled manufactured pair.
pub struct ManufacturedPair {
    pub dim: usize,
    pub h: HSpec,
    pub mu: f64,
    pub base_u: FieldRef,
    pub w_field: Option<FieldRef>,
    pub flux: RotatedFlux,
    pub shift: Option<VectorShift>,
    pub amplitude_exponent: Option<f64>,
    pub grad_w_shift: bool,
}

impl ManufacturedPair {
    pub fn u_jet(&self, x: &Point, t: f64) -> Jet {
        self.base_u.jet(x, t)
    }

    pub fn u(&self, x: &Point, t: f64) -> f64 {
        self.base_u.value(x, t)
    }

    pub fn v(&self, x: &Point, t: f64) -> f64 {
        self.u(x, t) - self.w_jet_inner(x, t).value
    }

    fn w_jet_inner(&self, x: &Point, t: f64) -> Jet {
        match &self.w_field {
            Some(f) => f.jet(x, t),
            None => Jet::constant(0.0),
        }
    }

    /// Lateral Neumann gap `h = ∂_ν w` at a boundary point.
    pub fn boundary_h(&self, x: &Point, t: f64, normal: &Point) -> f64 {
        dot(&self.w_jet_inner(x, t).grad, normal, 3)
    }

    /// Source realization on the `u` side, `f = ∂ₜH(u) + ∇·F′(·,u) − μΔu`.
    pub fn source_u(&self, x: &Point, t: f64) -> f64 {
        let j = self.u_jet(x, t);
        let dt_h = self.h.deriv(j.value) * j.dt;
        let div = self.flux.explicit_div(x, t, j.value)
            + dot(&self.flux.dz(x, t, j.value), &j.grad, 3);
        dt_h + div - self.mu * j.lap
    }

    /// Source realization on the `v` side, `g = ∂ₜH(v) + ∇·G′(·,v) − μΔv`.
    pub fn source_v(&self, x: &Point, t: f64) -> f64 {
        let ju = self.u_jet(x, t);
        let jw = self.w_jet_inner(x, t);
        let v = ju.value - jw.value;
        let v_dt = ju.dt - jw.dt;
        let v_grad = [
            ju.grad[0] - jw.grad[0],
            ju.grad[1] - jw.grad[1],
            ju.grad[2] - jw.grad[2],
        ];
        let v_lap = ju.lap - jw.lap;
        let dt_h = self.h.deriv(v) * v_dt;
        let mut div = self.flux.explicit_div(x, t, v) + dot(&self.flux.dz(x, t, v), &v_grad, 3);
        // The G' shift contributes -mu*lap(w) - div Y to the realization
        // divergence.
        if self.grad_w_shift {
            div -= self.mu * jw.lap;
        }
        if let Some(shift) = &self.shift {
            div -= shift.divergence(x, t);
        }
        dt_h + div - self.mu * v_lap
    }

    /// Cross-path consistency: the directly assembled `f − g` minus the
    /// factored [`GapPair::source_gap`]. Rounding-level by construction.
    pub fn coupled_residual(&self, x: &Point, t: f64) -> f64 {
        (self.source_u(x, t) - self.source_v(x, t)) - self.source_gap(x, t)
    }

    /// Pointwise lateral conditions sampled on the subdomain's lateral
    /// pieces: returns `(max |w|, max |∂_ν w − FD|, max |ν·gap − μh|)`.
    pub fn lateral_defects(&self, sub: &ProbeSubdomain, n: usize, t: f64) -> (f64, f64, f64) {
        let mut max_w: f64 = 0.0;
        let mut max_fd: f64 = 0.0;
        let mut max_balance: f64 = 0.0;
        for piece in sub.lateral_pieces() {
            let quad = boundary_nodes(sub, piece, n).expect("lateral piece");
            for (node, normal) in quad.nodes.iter().zip(&quad.normals) {
                let jw = self.w_jet_inner(node, t);
                max_w = max_w.max(jw.value.abs());
                let dnu = dot(&jw.grad, normal, 3);
                // One-sided finite difference into the domain.
                let hstep = 1e-7 * sub.eps;
                let inner = [
                    node[0] - hstep * normal[0],
                    node[1] - hstep * normal[1],
                    node[2] - hstep * normal[2],
                ];
                let w_in = self.w_jet_inner(&inner, t).value;
                let fd = (jw.value - w_in) / hstep;
                max_fd = max_fd.max((dnu - fd).abs());
                let gap = self.flux_gap(node, t);
                max_balance = max_balance.max((dot(&gap, normal, 3) - self.mu * dnu).abs());
            }
        }
        (max_w, max_fd, max_balance)
    }
}

impl GapPair for ManufacturedPair {
    fn dim(&self) -> usize {
        self.dim
    }

    fn w_jet(&self, x: &Point, t: f64) -> Jet {
        self.w_jet_inner(x, t)
    }

    fn h_gap(&self, x: &Point, t: f64) -> f64 {
        let ju = self.u_jet(x, t);
        let w = self.w_jet_inner(x, t).value;
        self.h.gap(ju.value, ju.value - w, w)
    }

    fn source_gap(&self, x: &Point, t: f64) -> f64 {
        let ju = self.u_jet(x, t);
        let jw = self.w_jet_inner(x, t);
        let u = ju.value;
        let v = u - jw.value;
        // d/dt (H(u) - H(v)) = (H'(u) - H'(v)) u_t + H'(v) w_t.
        let mut gap = self.h.deriv_gap(u, v, jw.value) * ju.dt + self.h.deriv(v) * jw.dt;
        // Flux realization divergence gap; with the grad-w shift the
        // -mu*lap(w) parts cancel, without it they land in the source.
        gap += self.flux.explicit_div_gap(x, t, jw.value);
        gap += dot(&self.flux.dz_gap(x, t, u, v, jw.value), &ju.grad, 3);
        gap += dot(&self.flux.dz(x, t, v), &jw.grad, 3);
        if !self.grad_w_shift {
            gap -= self.mu * jw.lap;
        }
        if let Some(shift) = &self.shift {
            gap += shift.divergence(x, t);
        }
        gap
    }

    fn flux_gap(&self, x: &Point, t: f64) -> Point {
        let ju = self.u_jet(x, t);
        let jw = self.w_jet_inner(x, t);
        let u = ju.value;
        let v = u - jw.value;
        let mut gap = self.flux.z_gap(x, t, u, v, jw.value);
        if self.grad_w_shift {
            for k in 0..3 {
                gap[k] += self.mu * jw.grad[k];
            }
        }
        if let Some(shift) = &self.shift {
            let y = shift.value(x, t);
            for k in 0..3 {
                gap[k] += y[k];
            }
        }
        gap
    }
}

/// Assemble the manufactured pair on a probe subdomain.
///
/// The gap field is `w = ε^q · ψ(x,t) · P(η₃)` (times a wall bubble in η₁
/// for nozzles in 3D), where `η` are the unit transverse coordinates of the
/// subdomain, so `w` vanishes on the lateral boundary whenever the profile
/// does.
pub fn manufacture_identity_pair(
    sub: &ProbeSubdomain,
    spec: PairSpec,
) -> Result<ManufacturedPair, ModelError> {
    let w_field = match spec.q {
        None => None,
        Some(q) => {
            if q < 0.0 {
                return Err(ModelError::NegativeAmplitudeExponent(q));
            }
            let mapped: FieldRef = Arc::new(MappedProfile {
                graph: sub.graph.clone(),
                axes: MapAxes::for_dim(sub.dim),
                eps: sub.eps,
                profile: spec.transverse,
            });
            let mut w: FieldRef = Arc::new(Product(spec.psi.clone(), mapped));
            if sub.dim == 3 && sub.kind == DomainKind::Nozzle {
                let x1_bubble: FieldRef = Arc::new(FlatEta {
                    offset_axis: 0,
                    eps: sub.eps,
                    profile: TransverseProfile::Bubble,
                });
                w = Arc::new(Product(w, x1_bubble));
            }
            let scale = sub.eps.powf(q);
            if !scale.is_finite() {
                return Err(ModelError::NegativeAmplitudeExponent(q));
            }
            Some(Arc::new(Scaled(scale, w)) as FieldRef)
        }
    };
    Ok(ManufacturedPair {
        dim: sub.dim,
        h: spec.h,
        mu: spec.mu,
        base_u: spec.base_u,
        w_field,
        flux: spec.flux,
        shift: spec.shift,
        amplitude_exponent: spec.q,
        grad_w_shift: spec.grad_w_shift,
    })
}

/// Lateral pieces where `ν·Y` must vanish are the graph walls; a shift with
/// only an axial component `Y = (Y₁(x₁,t), 0)` qualifies on straight-curve
/// subdomains, and a transverse bubble `Y₂ ∝ η(1−η)` qualifies everywhere.
pub fn transverse_bubble_shift(
    sub: &ProbeSubdomain,
    magnitude: f64,
    component: usize,
) -> VectorShift {
    let bubble: FieldRef = Arc::new(MappedProfile {
        graph: sub.graph.clone(),
        axes: MapAxes::for_dim(sub.dim),
        eps: sub.eps,
        profile: TransverseProfile::Bubble,
    });
    // 4*eta*(1-eta) peaks at 1, so `magnitude` is the center value.
    let scaled: FieldRef = Arc::new(Scaled(4.0 * magnitude, bubble));
    let mut components: [Option<FieldRef>; 3] = [None, None, None];
    components[component] = Some(scaled);
    VectorShift { components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PieceLabel;
    use crate::field::{exp_time, product, sum, Monomial, Wave};
    use crate::geometry::{
        build_curve, extract_probe_subdomain, rotation_frame, CurveSpec, DomainKind,
    };
    use crate::model::{rotate_flux, FluxSpec};
    use std::f64::consts::PI;

    fn sine_sub(eps: f64, l: f64) -> ProbeSubdomain {
        let curve = build_curve(
            CurveSpec::Sine {
                amp: 0.5,
                freq: 4.0 * PI,
            },
            2,
            eps,
            1.0,
        )
        .unwrap();
        extract_probe_subdomain(&curve, 0.0, eps, l, 2, DomainKind::Nozzle).unwrap()
    }

    fn axial_bump(span: f64) -> FieldRef {
        // psi = x1 (span - x1).
        sum(vec![
            Arc::new(Monomial {
                coeff: span,
                axis: 0,
                power: 1,
            }),
            Arc::new(Monomial {
                coeff: -1.0,
                axis: 0,
                power: 2,
            }),
        ])
    }

    fn base_field() -> FieldRef {
        product(
            exp_time(1.0, -1.0),
            sum(vec![
                crate::field::constant(1.0),
                Arc::new(Monomial {
                    coeff: 1.0,
                    axis: 0,
                    power: 1,
                }),
            ]),
        )
    }

    fn make_pair(sub: &ProbeSubdomain, q: Option<f64>) -> ManufacturedPair {
        let frame = rotation_frame(
            &build_curve(
                CurveSpec::Sine {
                    amp: 0.5,
                    freq: 4.0 * PI,
                },
                2,
                sub.eps,
                1.0,
            )
            .unwrap(),
            0.0,
            2,
        )
        .unwrap();
        let flux = rotate_flux(FluxSpec::BurgersLike, frame).unwrap();
        manufacture_identity_pair(
            sub,
            PairSpec {
                base_u: base_field(),
                flux,
                h: HSpec::CubicFloor { delta: 0.5 },
                mu: 1.0,
                q,
                psi: axial_bump(sub.span),
                transverse: TransverseProfile::Bubble,
                shift: None,
                grad_w_shift: true,
            },
        )
        .unwrap()
    }

    #[test]
    fn zero_gap_pair_has_no_gaps() {
        let sub = sine_sub(0.1, 1.0);
        let pair = make_pair(&sub, None);
        let x = sub.point(0.04, 0.0, 0.3);
        assert_eq!(pair.w_jet(&x, 0.1).value, 0.0);
        assert_eq!(pair.h_gap(&x, 0.1), 0.0);
        assert_eq!(pair.source_gap(&x, 0.1), 0.0);
        assert_eq!(pair.flux_gap(&x, 0.1), [0.0; 3]);
    }

    #[test]
    fn lateral_conditions_hold() {
        let sub = sine_sub(0.1, 1.0);
        let pair = make_pair(&sub, Some(0.0));
        let (max_w, max_fd, max_balance) = pair.lateral_defects(&sub, 17, 0.03);
        assert!(max_w < 1e-12, "w on lateral boundary: {max_w}");
        assert!(max_fd < 1e-5, "normal derivative FD mismatch: {max_fd}");
        assert!(max_balance < 1e-12, "flux balance defect: {max_balance}");
    }

    #[test]
    fn interior_residual_cross_path() {
        let sub = sine_sub(0.1, 1.0);
        let pair = make_pair(&sub, Some(0.0));
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let x = sub.point(
                rng.gen_range(0.0..sub.span),
                0.0,
                rng.gen_range(0.0..1.0),
            );
            let t = rng.gen_range(0.0..0.01);
            let r = pair.coupled_residual(&x, t);
            assert!(r.abs() <= 1e-10, "residual {r}");
        }
    }

    #[test]
    fn normal_derivative_formula_on_gamma1() {
        // On the lower graph wall the transverse bubble gives
        // dnu(w) = -(1/eps) * eps^q * psi * P'(0) * sqrt(1 + gamma'^2).
        let sub = sine_sub(0.1, 1.0);
        let pair = make_pair(&sub, Some(0.0));
        let quad = boundary_nodes(&sub, PieceLabel::Gamma1, 9).unwrap();
        for (node, normal) in quad.nodes.iter().zip(&quad.normals) {
            let t = 0.02;
            let h = pair.boundary_h(node, t, normal);
            let psi = axial_bump(sub.span).value(node, t);
            let (_, gp, _) = sub.graph.eval(node[0]);
            let expected = -(1.0 / sub.eps) * psi * (1.0 + gp * gp).sqrt();
            assert!(
                (h - expected).abs() < 1e-12 * (1.0 + expected.abs()),
                "h={h} expected={expected}"
            );
        }
    }

    #[test]
    fn amplitude_scaling_in_q() {
        let sub = sine_sub(0.1, 1.0);
        let p1 = make_pair(&sub, Some(1.0));
        let p2 = make_pair(&sub, Some(2.0));
        let x = sub.point(0.05, 0.0, 0.5);
        let w1 = p1.w_jet(&x, 0.0).value;
        let w2 = p2.w_jet(&x, 0.0).value;
        assert!((w2 / w1 - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_q() {
        let sub = sine_sub(0.1, 1.0);
        let frame = crate::geometry::Frame::identity(2);
        let flux = rotate_flux(FluxSpec::None, frame).unwrap();
        let err = manufacture_identity_pair(
            &sub,
            PairSpec {
                base_u: base_field(),
                flux,
                h: HSpec::Identity,
                mu: 1.0,
                q: Some(-0.5),
                psi: axial_bump(sub.span),
                transverse: TransverseProfile::Bubble,
                shift: None,
                grad_w_shift: true,
            },
        );
        assert!(matches!(err, Err(ModelError::NegativeAmplitudeExponent(_))));
    }

    #[test]
    fn mapped_base_field_residual() {
        // base_u = e^{-t} sin(pi x1) cos(pi eta): residuals still vanish.
        let sub = sine_sub(0.1, 1.0);
        let mapped: FieldRef = Arc::new(MappedProfile {
            graph: sub.graph.clone(),
            axes: MapAxes::for_dim(2),
            eps: sub.eps,
            profile: TransverseProfile::CosPi,
        });
        let base = product(
            exp_time(1.0, -1.0),
            product(
                Arc::new(Wave {
                    axis: 0,
                    wavenumber: PI,
                    phase: 0.0,
                }),
                mapped,
            ),
        );
        let frame = rotation_frame(
            &build_curve(
                CurveSpec::Sine {
                    amp: 0.5,
                    freq: 4.0 * PI,
                },
                2,
                0.1,
                1.0,
            )
            .unwrap(),
            0.0,
            2,
        )
        .unwrap();
        let flux = rotate_flux(FluxSpec::BurgersLike, frame).unwrap();
        let pair = manufacture_identity_pair(
            &sub,
            PairSpec {
                base_u: base,
                flux,
                h: HSpec::CubicFloor { delta: 0.5 },
                mu: 1.0,
                q: Some(0.0),
                psi: axial_bump(sub.span),
                transverse: TransverseProfile::Bubble,
                shift: None,
                grad_w_shift: true,
            },
        )
        .unwrap();
        let x = sub.point(0.031, 0.0, 0.42);
        assert!(pair.coupled_residual(&x, 0.004).abs() < 1e-10);
    }
}
