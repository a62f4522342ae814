//! Method of manufactured solutions: derive the source that makes a chosen
//! exact field solve the balance law.
//!
//! `f(x,t) := ∂ₜH(u) + ∇ₓ·F(x,t,u) − μΔu`, assembled by composition from the
//! field's analytic jet. Plugging the field back yields rounding-level
//! residuals, which is the solver's quantitative verification tool.

use super::{FluxSpec, HSpec};
use crate::field::FieldRef;
use crate::Point;

/// The manufactured source realization as an `(x,t)` map.
#[derive(Clone)]
pub struct MmsSource {
    pub u: FieldRef,
    pub h: HSpec,
    pub flux: FluxSpec,
    pub mu: f64,
}

impl MmsSource {
    pub fn value(&self, x: &Point, t: f64) -> f64 {
        let j = self.u.jet(x, t);
        let dt_h = self.h.deriv(j.value) * j.dt;
        let div_flux = self.flux.explicit_div(x, t, j.value)
            + crate::dot(&self.flux.dz(x, t, j.value), &j.grad, 3);
        dt_h + div_flux - self.mu * j.lap
    }

    /// Residual of the balance law with this source at `(x,t)`; rounding
    /// noise by construction, exposed so tests can assert it.
    pub fn residual(&self, x: &Point, t: f64) -> f64 {
        let j = self.u.jet(x, t);
        let dt_h = self.h.deriv(j.value) * j.dt;
        let div_flux = self.flux.explicit_div(x, t, j.value)
            + crate::dot(&self.flux.dz(x, t, j.value), &j.grad, 3);
        dt_h + div_flux - self.mu * j.lap - self.value(x, t)
    }
}

/// Build the manufactured source for `(u, H, F, μ)`.
pub fn mms_source(u: FieldRef, h: HSpec, flux: FluxSpec, mu: f64) -> MmsSource {
    MmsSource { u, h, flux, mu }
}
