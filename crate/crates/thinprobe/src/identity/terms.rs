//! Evaluation of the integral identity terms.
//!
//! ```text
//! I₁ = μ ∬_{caps} (w ∂_ν u₀ − u₀ ∂_ν w)      I₂ = ∬_{caps} ν·(F′−G′) u₀
//! I₃ = ∬_D (f − g) u₀                         I₄ = ∬_D (F′−G′)·∇u₀
//! I₅ = ∫_D [(H(u)−H(v)) u₀]_{T₁}^{T₂}         I₆ = λ ∬_D (w −(H(u)−H(v))) u₀
//! I₇, I₈ = the I₁/I₂ analogues over the slab cut faces Γ_f ∪ Γ_b
//! ```
//!
//! `caps` are Γ₂ ∪ Γ₄ in 2D and Ω_ε ∪ Ω′_ε in 3D. I₅ evaluates the time
//! bracket directly at T₁ and T₂ with no quadrature in time. The I₂ and I₄
//! Hölder-expansion sub-terms (I₂₁/I₂₂, I₄₁..I₄₆) are reported with the gap
//! frozen at the probe point, which is what the per-lemma bounds quantify.

use num_complex::Complex64;
use serde::Serialize;

use super::IdentityError;
use crate::cgo::CgoParams;
use crate::geometry::{boundary_nodes, DomainKind, ProbeSubdomain};
use crate::model::GapPair;
use crate::quad::{Axis, QuadSpec};
use crate::{dot, Point};

/// Identifies one term (or sub-term) of the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermId {
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
    I7,
    I8,
    I21,
    I22,
    I41,
    I42,
    I43,
    I44,
    I45,
    I46,
}

impl TermId {
    pub fn parse(s: &str) -> Option<TermId> {
        Some(match s {
            "i1" => TermId::I1,
            "i2" => TermId::I2,
            "i3" => TermId::I3,
            "i4" => TermId::I4,
            "i5" => TermId::I5,
            "i6" => TermId::I6,
            "i7" => TermId::I7,
            "i8" => TermId::I8,
            "i21" => TermId::I21,
            "i22" => TermId::I22,
            "i41" => TermId::I41,
            "i42" => TermId::I42,
            "i43" => TermId::I43,
            "i44" => TermId::I44,
            "i45" => TermId::I45,
            "i46" => TermId::I46,
            _ => return None,
        })
    }
}

/// Evaluated identity terms with the residual bookkeeping.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub dim: usize,
    pub kind: DomainKind,
    pub eps: f64,
    pub l: f64,
    pub window: (f64, f64),
    pub rule: QuadSpec,
    /// `I₁..I₈` as (re, im); I₇/I₈ stay zero outside slab geometry.
    pub terms: [(f64, f64); 8],
    /// Hölder sub-terms `I₂₁, I₂₂, I₄₁..I₄₆`.
    pub sub_terms: [(f64, f64); 8],
    pub residual: (f64, f64),
    pub max_term_abs: f64,
    pub relative_residual_re: f64,
    pub relative_residual_im: f64,
}

impl IdentityReport {
    pub fn term(&self, id: TermId) -> Complex64 {
        let c = |p: (f64, f64)| Complex64::new(p.0, p.1);
        match id {
            TermId::I1 => c(self.terms[0]),
            TermId::I2 => c(self.terms[1]),
            TermId::I3 => c(self.terms[2]),
            TermId::I4 => c(self.terms[3]),
            TermId::I5 => c(self.terms[4]),
            TermId::I6 => c(self.terms[5]),
            TermId::I7 => c(self.terms[6]),
            TermId::I8 => c(self.terms[7]),
            TermId::I21 => c(self.sub_terms[0]),
            TermId::I22 => c(self.sub_terms[1]),
            TermId::I41 => c(self.sub_terms[2]),
            TermId::I42 => c(self.sub_terms[3]),
            TermId::I43 => c(self.sub_terms[4]),
            TermId::I44 => c(self.sub_terms[5]),
            TermId::I45 => c(self.sub_terms[6]),
            TermId::I46 => c(self.sub_terms[7]),
        }
    }

    pub fn relative_residual(&self) -> f64 {
        self.relative_residual_re.max(self.relative_residual_im)
    }

    /// Residual recomputed without the slab cut terms; the ablation check.
    pub fn residual_without_cut_terms(&self) -> Complex64 {
        let c = |p: (f64, f64)| Complex64::new(p.0, p.1);
        c(self.terms[0]) + c(self.terms[1])
            - (c(self.terms[2]) + c(self.terms[3]) - c(self.terms[4]) - c(self.terms[5]))
    }
}

/// One evaluation request.
pub struct TermEvaluator<'a> {
    pub pair: &'a dyn GapPair,
    pub cgo: &'a CgoParams,
    pub sub: &'a ProbeSubdomain,
    pub t1: f64,
    pub t2: f64,
    pub rule: QuadSpec,
    /// Gap reference point for the Hölder sub-terms; defaults to the
    /// subdomain center at the window midpoint.
    pub probe_point: Option<(Point, f64)>,
}

impl<'a> TermEvaluator<'a> {
    pub fn eval(&self) -> Result<IdentityReport, IdentityError> {
        self.rule.validate()?;
        if !(self.t2 > self.t1) {
            return Err(IdentityError::BadWindow(self.t1, self.t2));
        }
        let sub = self.sub;
        let pair = self.pair;
        let cgo = self.cgo;
        let mu = cgo.mu;
        let lambda = cgo.lambda;
        let rmu = mu.sqrt();

        let (x0, t0) = self.probe_point.unwrap_or_else(|| {
            (
                sub.point(0.5 * sub.span, 0.5, 0.5),
                0.5 * (self.t1 + self.t2),
            )
        });
        let gap0 = pair.flux_gap(&x0, t0);

        let time = Axis::simpson(self.t1, self.t2, self.rule.n_time)?;
        let axial = Axis::simpson(0.0, sub.span, self.rule.n_axial)?;
        let eta = Axis::simpson(0.0, 1.0, self.rule.n_transverse)?;

        let mut i1 = Complex64::default();
        let mut i2 = Complex64::default();
        let mut i3 = Complex64::default();
        let mut i5 = Complex64::default();
        let mut i6 = Complex64::default();
        let mut i7 = Complex64::default();
        let mut i8 = Complex64::default();
        // Volume accumulators: U = ∬ u₀, A_k = ∬ gap_k u₀.
        let mut vol_u0 = Complex64::default();
        let mut vol_gap = [Complex64::default(); 3];

        // Volume nodes (and the I₅ bracket on the same spatial grid).
        let mut spatial: Vec<(Point, f64)> = Vec::new();
        if sub.dim == 2 {
            for (&xa, &wa) in axial.nodes.iter().zip(&axial.weights) {
                for (&e3, &w3) in eta.nodes.iter().zip(&eta.weights) {
                    spatial.push((sub.point(xa, 0.0, e3), wa * w3 * sub.eps));
                }
            }
        } else {
            for (&e1, &w1) in eta.nodes.iter().zip(&eta.weights) {
                for (&xa, &wa) in axial.nodes.iter().zip(&axial.weights) {
                    for (&e3, &w3) in eta.nodes.iter().zip(&eta.weights) {
                        spatial.push((sub.point(xa, e1, e3), w1 * wa * w3 * sub.eps * sub.eps));
                    }
                }
            }
        }

        for (x, wx) in &spatial {
            // I5 bracket at the window ends.
            for (t, sign) in [(self.t2, 1.0), (self.t1, -1.0)] {
                let u0 = cgo.eval(x, t)?.u0;
                i5 += sign * wx * pair.h_gap(x, t) * u0;
            }
            for (&t, &wt) in time.nodes.iter().zip(&time.weights) {
                let u0 = cgo.eval(x, t)?.u0;
                let w = wx * wt;
                let wv = pair.w_jet(x, t).value;
                let hg = pair.h_gap(x, t);
                let sg = pair.source_gap(x, t);
                let fg = pair.flux_gap(x, t);
                i3 += w * sg * u0;
                i6 += w * lambda * (wv - hg) * u0;
                vol_u0 += w * u0;
                for k in 0..sub.dim {
                    vol_gap[k] += w * fg[k] * u0;
                }
            }
        }

        // Cap pieces: I1 and I2.
        for piece in sub.cap_pieces() {
            let quad = boundary_nodes(sub, piece, self.rule.n_transverse)?;
            for ((node, normal), wsigma) in
                quad.nodes.iter().zip(&quad.normals).zip(&quad.weights)
            {
                for (&t, &wt) in time.nodes.iter().zip(&time.weights) {
                    let ev = cgo.eval(node, t)?;
                    let w = wsigma * wt;
                    let jw = pair.w_jet(node, t);
                    let dnu_u0: Complex64 = (0..sub.dim)
                        .map(|k| ev.grad_u0[k] * normal[k])
                        .sum();
                    let dnu_w = dot(&jw.grad, normal, 3);
                    i1 += w * mu * (jw.value * dnu_u0 - ev.u0 * dnu_w);
                    let fg = pair.flux_gap(node, t);
                    i2 += w * dot(&fg, normal, 3) * ev.u0;
                }
            }
        }

        // Slab cut faces: I7 and I8.
        if sub.kind == DomainKind::Slab {
            for piece in sub.cut_pieces() {
                let quad = boundary_nodes(sub, piece, self.rule.n_transverse)?;
                for ((node, normal), wsigma) in
                    quad.nodes.iter().zip(&quad.normals).zip(&quad.weights)
                {
                    for (&t, &wt) in time.nodes.iter().zip(&time.weights) {
                        let ev = cgo.eval(node, t)?;
                        let w = wsigma * wt;
                        let jw = pair.w_jet(node, t);
                        let dnu_u0: Complex64 = (0..sub.dim)
                            .map(|k| ev.grad_u0[k] * normal[k])
                            .sum();
                        let dnu_w = dot(&jw.grad, normal, 3);
                        i7 += w * mu * (jw.value * dnu_u0 - ev.u0 * dnu_w);
                        let fg = pair.flux_gap(node, t);
                        i8 += w * dot(&fg, normal, 3) * ev.u0;
                    }
                }
            }
        }

        // I4 from the componentwise accumulators: I4 = sum_k (rho_k/√μ) A_k.
        let mut i4 = Complex64::default();
        let mut coeff = [Complex64::default(); 3];
        for k in 0..sub.dim {
            coeff[k] = cgo.rho[k] / rmu;
            i4 += coeff[k] * vol_gap[k];
        }

        // Hölder sub-terms with the gap frozen at the probe point.
        // 2D pairs (I41,I42) on component 1 and (I43,I44) on component 2;
        // 3D spreads over components (1,2,3) -> (I41/I42, I43/I44, I45/I46).
        let mut sub_terms = [(0.0, 0.0); 8];
        let frozen = |k: usize| Complex64::new(gap0[k], 0.0);
        let store = |z: Complex64| (z.re, z.im);
        if sub.dim == 2 {
            let i41 = coeff[0] * frozen(0) * vol_u0;
            let i43 = coeff[1] * frozen(1) * vol_u0;
            sub_terms[2] = store(i41);
            sub_terms[3] = store(coeff[0] * vol_gap[0] - i41);
            sub_terms[4] = store(i43);
            sub_terms[5] = store(coeff[1] * vol_gap[1] - i43);
        } else {
            let i41 = coeff[0] * frozen(0) * vol_u0;
            let i43 = coeff[1] * frozen(1) * vol_u0;
            let i45 = coeff[2] * frozen(2) * vol_u0;
            sub_terms[2] = store(i41);
            sub_terms[3] = store(coeff[0] * vol_gap[0] - i41);
            sub_terms[4] = store(i43);
            sub_terms[5] = store(coeff[1] * vol_gap[1] - i43);
            sub_terms[6] = store(i45);
            sub_terms[7] = store(coeff[2] * vol_gap[2] - i45);
        }

        // I2 split: I21 freezes the cap-normal component of the gap at the
        // probe point; the normal is ∓e₁ (2D) or ∓e₂ (3D).
        let cap_axis = if sub.dim == 2 { 0 } else { 1 };
        let mut cap_u0_signed = Complex64::default();
        for piece in sub.cap_pieces() {
            let quad = boundary_nodes(sub, piece, self.rule.n_transverse)?;
            for ((node, normal), wsigma) in
                quad.nodes.iter().zip(&quad.normals).zip(&quad.weights)
            {
                for (&t, &wt) in time.nodes.iter().zip(&time.weights) {
                    let u0 = cgo.eval(node, t)?.u0;
                    cap_u0_signed += wsigma * wt * normal[cap_axis] * u0;
                }
            }
        }
        let i21 = frozen(cap_axis) * cap_u0_signed;
        sub_terms[0] = store(i21);
        sub_terms[1] = store(i2 - i21);

        let lhs = i1 + i2 + i7 + i8;
        let rhs = i3 + i4 - i5 - i6;
        let residual = lhs - rhs;
        let terms = [i1, i2, i3, i4, i5, i6, i7, i8].map(|z| (z.re, z.im));
        let max_term_abs = [i1, i2, i3, i4, i5, i6, i7, i8]
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
            .max(1e-300);

        Ok(IdentityReport {
            dim: sub.dim,
            kind: sub.kind,
            eps: sub.eps,
            l: sub.l,
            window: (self.t1, self.t2),
            rule: self.rule,
            terms,
            sub_terms,
            residual: (residual.re, residual.im),
            max_term_abs,
            relative_residual_re: residual.re.abs() / max_term_abs,
            relative_residual_im: residual.im.abs() / max_term_abs,
        })
    }
}

/// Convenience wrapper for the common case.
pub fn eval_terms(
    pair: &dyn GapPair,
    cgo: &CgoParams,
    sub: &ProbeSubdomain,
    t1: f64,
    t2: f64,
    rule: QuadSpec,
) -> Result<IdentityReport, IdentityError> {
    TermEvaluator {
        pair,
        cgo,
        sub,
        t1,
        t2,
        rule,
        probe_point: None,
    }
    .eval()
}
