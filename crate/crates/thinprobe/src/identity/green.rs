//! Space-time Green formula residual.
//!
//! `∬ (gΔf − fΔg) dx dt = ∮ (g∂_ν f − f∂_ν g) dσ dt` for smooth fields;
//! both sides are evaluated by independent Simpson quadrature (volume in
//! mapped coordinates, boundary over all pieces with arc-length weights)
//! and the mismatch shrinks at order ≥ 4 under refinement.

use serde::Serialize;

use super::IdentityError;
use crate::field::Field;
use crate::geometry::{boundary_nodes, ProbeSubdomain};
use crate::dot;
use crate::quad::{Axis, QuadSpec};

#[derive(Debug, Clone, Serialize)]
pub struct GreenReport {
    pub volume_side: f64,
    pub boundary_side: f64,
    pub residual: f64,
    pub relative_residual: f64,
}

/// Evaluate both sides of the Green formula over `D_ε × [T₁, T₂]`.
pub fn green_residual(
    f: &dyn Field,
    g: &dyn Field,
    sub: &ProbeSubdomain,
    t1: f64,
    t2: f64,
    rule: QuadSpec,
) -> Result<GreenReport, IdentityError> {
    rule.validate()?;
    if !(t2 > t1) {
        return Err(IdentityError::BadWindow(t1, t2));
    }
    let time = Axis::simpson(t1, t2, rule.n_time)?;
    let axial = Axis::simpson(0.0, sub.span, rule.n_axial)?;
    let eta = Axis::simpson(0.0, 1.0, rule.n_transverse)?;

    let mut volume = 0.0;
    if sub.dim == 2 {
        for (&xa, &wa) in axial.nodes.iter().zip(&axial.weights) {
            for (&e3, &w3) in eta.nodes.iter().zip(&eta.weights) {
                let x = sub.point(xa, 0.0, e3);
                let wspace = wa * w3 * sub.eps;
                for (&t, &wt) in time.nodes.iter().zip(&time.weights) {
                    let jf = f.jet(&x, t);
                    let jg = g.jet(&x, t);
                    volume += wspace * wt * (jg.value * jf.lap - jf.value * jg.lap);
                }
            }
        }
    } else {
        for (&e1, &w1) in eta.nodes.iter().zip(&eta.weights) {
            for (&xa, &wa) in axial.nodes.iter().zip(&axial.weights) {
                for (&e3, &w3) in eta.nodes.iter().zip(&eta.weights) {
                    let x = sub.point(xa, e1, e3);
                    let wspace = w1 * wa * w3 * sub.eps * sub.eps;
                    for (&t, &wt) in time.nodes.iter().zip(&time.weights) {
                        let jf = f.jet(&x, t);
                        let jg = g.jet(&x, t);
                        volume += wspace * wt * (jg.value * jf.lap - jf.value * jg.lap);
                    }
                }
            }
        }
    }

    let mut boundary = 0.0;
    for piece in sub.pieces() {
        let n = rule.n_transverse.max(rule.n_axial);
        let quad = boundary_nodes(sub, piece, n)?;
        for ((node, normal), wsigma) in quad.nodes.iter().zip(&quad.normals).zip(&quad.weights) {
            for (&t, &wt) in time.nodes.iter().zip(&time.weights) {
                let jf = f.jet(node, t);
                let jg = g.jet(node, t);
                let dnf = dot(&jf.grad, normal, 3);
                let dng = dot(&jg.grad, normal, 3);
                boundary += wsigma * wt * (jg.value * dnf - jf.value * dng);
            }
        }
    }

    let residual = volume - boundary;
    let scale = volume.abs().max(boundary.abs()).max(1e-300);
    Ok(GreenReport {
        volume_side: volume,
        boundary_side: boundary,
        residual,
        relative_residual: residual.abs() / scale,
    })
}

/// Antisymmetry ensures `f = g` gives exactly zero; exposed for tests.
pub fn green_self_residual(
    f: &dyn Field,
    sub: &ProbeSubdomain,
    t1: f64,
    t2: f64,
    rule: QuadSpec,
) -> Result<f64, IdentityError> {
    Ok(green_residual(f, f, sub, t1, t2, rule)?.residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{constant, product, Monomial, Wave};
    use crate::geometry::{build_curve, extract_probe_subdomain, CurveSpec, DomainKind};
    use std::sync::Arc;

    fn straight_sub(eps: f64, l: f64) -> ProbeSubdomain {
        let curve = build_curve(
            CurveSpec::Straight {
                direction: [1.0, 0.0, 0.0],
            },
            2,
            eps,
            1.0,
        )
        .unwrap();
        extract_probe_subdomain(&curve, 0.0, eps, l, 2, DomainKind::Nozzle).unwrap()
    }

    #[test]
    fn self_pair_gives_exact_zero() {
        let sub = straight_sub(0.3, 1.0);
        let f = product(
            constant(1.3),
            Arc::new(Wave {
                axis: 0,
                wavenumber: 3.0,
                phase: 0.1,
            }),
        );
        let r = green_self_residual(f.as_ref(), &sub, 0.0, 0.01, QuadSpec::new(17, 17, 5)).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn polynomial_pair_volume_side_closed_form() {
        // f = x1^2, g = 1: volume side = 2 |D| (T2-T1), boundary side equal.
        let sub = straight_sub(0.3, 1.0);
        let f: Arc<dyn Field> = Arc::new(Monomial {
            coeff: 1.0,
            axis: 0,
            power: 2,
        });
        let g = constant(1.0);
        let dt = 0.02;
        let report =
            green_residual(f.as_ref(), g.as_ref(), &sub, 0.0, dt, QuadSpec::new(129, 129, 5))
                .unwrap();
        let expected = 2.0 * (0.3 * 0.3) * dt;
        assert!(
            (report.volume_side - expected).abs() < 1e-12 * expected,
            "volume {}",
            report.volume_side
        );
        assert!(report.relative_residual <= 1e-10, "{report:?}");
    }

    #[test]
    fn trig_pair_fourth_order_convergence() {
        let sub = straight_sub(0.3, 1.0);
        let f = product(
            Arc::new(Wave {
                axis: 0,
                wavenumber: 7.0,
                phase: 0.2,
            }),
            Arc::new(Wave {
                axis: 1,
                wavenumber: 9.0,
                phase: 0.5,
            }),
        );
        let g = product(
            Arc::new(Wave {
                axis: 0,
                wavenumber: 5.0,
                phase: 1.0,
            }),
            Arc::new(Wave {
                axis: 1,
                wavenumber: 4.0,
                phase: 0.0,
            }),
        );
        let coarse = green_residual(
            f.as_ref(),
            g.as_ref(),
            &sub,
            0.0,
            0.01,
            QuadSpec::new(17, 17, 5),
        )
        .unwrap();
        let fine = green_residual(
            f.as_ref(),
            g.as_ref(),
            &sub,
            0.0,
            0.01,
            QuadSpec::new(33, 33, 5),
        )
        .unwrap();
        let ratio = coarse.residual.abs() / fine.residual.abs().max(1e-300);
        assert!(ratio >= 12.0, "Simpson order drop only {ratio}");
    }
}
