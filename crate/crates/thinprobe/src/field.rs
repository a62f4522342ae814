//! Closed-form space-time scalar fields with analytic jets.
//!
//! A [`Jet`] carries value, time derivative, spatial gradient, and Laplacian
//! at a point, and the combinators propagate them exactly (sums, products,
//! chain rule through a mapped transverse coordinate). Manufactured sources
//! are "evaluated symbolically-by-composition": the residual of a PDE whose
//! source was built this way is pure rounding noise.

use std::sync::Arc;

use crate::geometry::CurveGraph;
use crate::Point;

/// Value and derivatives of a scalar field at one space-time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub dt: f64,
    pub grad: Point,
    pub lap: f64,
}

impl Jet {
    pub fn constant(c: f64) -> Self {
        Jet {
            value: c,
            dt: 0.0,
            grad: [0.0; 3],
            lap: 0.0,
        }
    }
}

/// A scalar space-time field with exact derivatives.
pub trait Field: Send + Sync {
    fn jet(&self, x: &Point, t: f64) -> Jet;

    fn value(&self, x: &Point, t: f64) -> f64 {
        self.jet(x, t).value
    }
}

/// Shareable boxed field.
pub type FieldRef = Arc<dyn Field>;

pub struct Constant(pub f64);

impl Field for Constant {
    fn jet(&self, _x: &Point, _t: f64) -> Jet {
        Jet::constant(self.0)
    }
}

/// `A·exp(σt)` time factor.
pub struct ExpTime {
    pub amplitude: f64,
    pub rate: f64,
}

impl Field for ExpTime {
    fn jet(&self, _x: &Point, t: f64) -> Jet {
        let v = self.amplitude * (self.rate * t).exp();
        Jet {
            value: v,
            dt: self.rate * v,
            grad: [0.0; 3],
            lap: 0.0,
        }
    }
}

/// `a + b·sin(ω t + φ)`; used when a bounded, non-monotone time factor is
/// wanted.
pub struct SineTime {
    pub offset: f64,
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
}

impl Field for SineTime {
    fn jet(&self, _x: &Point, t: f64) -> Jet {
        let arg = self.omega * t + self.phase;
        Jet {
            value: self.offset + self.amplitude * arg.sin(),
            dt: self.amplitude * self.omega * arg.cos(),
            grad: [0.0; 3],
            lap: 0.0,
        }
    }
}

/// Monomial in one spatial coordinate: `c·x_k^p` (p >= 0).
pub struct Monomial {
    pub coeff: f64,
    pub axis: usize,
    pub power: u32,
}

impl Field for Monomial {
    fn jet(&self, x: &Point, _t: f64) -> Jet {
        let v = x[self.axis];
        let p = self.power;
        let val = self.coeff * v.powi(p as i32);
        let d1 = if p >= 1 {
            self.coeff * p as f64 * v.powi(p as i32 - 1)
        } else {
            0.0
        };
        let d2 = if p >= 2 {
            self.coeff * (p * (p - 1)) as f64 * v.powi(p as i32 - 2)
        } else {
            0.0
        };
        let mut grad = [0.0; 3];
        grad[self.axis] = d1;
        Jet {
            value: val,
            dt: 0.0,
            grad,
            lap: d2,
        }
    }
}

/// `sin(k·x_axis + φ)` or `cos` via phase.
pub struct Wave {
    pub axis: usize,
    pub wavenumber: f64,
    pub phase: f64,
}

impl Field for Wave {
    fn jet(&self, x: &Point, _t: f64) -> Jet {
        let arg = self.wavenumber * x[self.axis] + self.phase;
        let (s, c) = arg.sin_cos();
        let mut grad = [0.0; 3];
        grad[self.axis] = self.wavenumber * c;
        Jet {
            value: s,
            dt: 0.0,
            grad,
            lap: -self.wavenumber * self.wavenumber * s,
        }
    }
}

pub struct Sum(pub Vec<FieldRef>);

impl Field for Sum {
    fn jet(&self, x: &Point, t: f64) -> Jet {
        let mut out = Jet::constant(0.0);
        for f in &self.0 {
            let j = f.jet(x, t);
            out.value += j.value;
            out.dt += j.dt;
            for k in 0..3 {
                out.grad[k] += j.grad[k];
            }
            out.lap += j.lap;
        }
        out
    }
}

pub struct Product(pub FieldRef, pub FieldRef);

impl Field for Product {
    fn jet(&self, x: &Point, t: f64) -> Jet {
        let a = self.0.jet(x, t);
        let b = self.1.jet(x, t);
        let mut grad = [0.0; 3];
        let mut cross = 0.0;
        for k in 0..3 {
            grad[k] = a.grad[k] * b.value + a.value * b.grad[k];
            cross += a.grad[k] * b.grad[k];
        }
        Jet {
            value: a.value * b.value,
            dt: a.dt * b.value + a.value * b.dt,
            grad,
            lap: a.lap * b.value + 2.0 * cross + a.value * b.lap,
        }
    }
}

pub struct Scaled(pub f64, pub FieldRef);

impl Field for Scaled {
    fn jet(&self, x: &Point, t: f64) -> Jet {
        let j = self.1.jet(x, t);
        Jet {
            value: self.0 * j.value,
            dt: self.0 * j.dt,
            grad: [self.0 * j.grad[0], self.0 * j.grad[1], self.0 * j.grad[2]],
            lap: self.0 * j.lap,
        }
    }
}

/// Polynomial transverse profiles `P(η)` composed with the mapped coordinate
/// `η = (x_offset − γ(x_axial)) / ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransverseProfile {
    /// `η(1−η)`: vanishes on both walls.
    Bubble,
    /// `η²(1−η)²`: vanishes with its derivative on both walls.
    BubbleSquared,
    /// `cos(πη)`: Neumann-friendly test profile.
    CosPi,
    /// Constant 1.
    One,
    /// `(η + c)(1 − η)`: deliberately violates the lower-wall condition.
    ShiftedBubble(i32),
}

impl TransverseProfile {
    /// `(P, P′, P″)` at η.
    pub fn eval(&self, eta: f64) -> (f64, f64, f64) {
        match self {
            TransverseProfile::Bubble => (eta * (1.0 - eta), 1.0 - 2.0 * eta, -2.0),
            TransverseProfile::BubbleSquared => {
                let p = eta * (1.0 - eta);
                (
                    p * p,
                    2.0 * p * (1.0 - 2.0 * eta),
                    2.0 * (1.0 - 6.0 * eta + 6.0 * eta * eta),
                )
            }
            TransverseProfile::CosPi => {
                use std::f64::consts::PI;
                let (s, c) = (PI * eta).sin_cos();
                (c, -PI * s, -PI * PI * c)
            }
            TransverseProfile::One => (1.0, 0.0, 0.0),
            TransverseProfile::ShiftedBubble(milli) => {
                let c = *milli as f64 / 1000.0;
                ((eta + c) * (1.0 - eta), 1.0 - 2.0 * eta - c, -2.0)
            }
        }
    }
}

/// Which transverse direction is mapped: 2D uses `(axial, offset) = (0, 1)`,
/// 3D uses `(1, 2)`.
#[derive(Debug, Clone, Copy)]
pub struct MapAxes {
    pub axial: usize,
    pub offset: usize,
}

impl MapAxes {
    pub fn for_dim(dim: usize) -> Self {
        if dim == 2 {
            MapAxes {
                axial: 0,
                offset: 1,
            }
        } else {
            MapAxes {
                axial: 1,
                offset: 2,
            }
        }
    }
}

/// `P(η(x))` with `η = (x_offset − γ(x_axial))/ε`, differentiated through
/// the graph by the chain rule:
///
/// ```text
/// η_axial = −γ′/ε,  η_offset = 1/ε,  η_axial,axial = −γ″/ε
/// ```
pub struct MappedProfile {
    pub graph: CurveGraph,
    pub axes: MapAxes,
    pub eps: f64,
    pub profile: TransverseProfile,
}

impl Field for MappedProfile {
    fn jet(&self, x: &Point, _t: f64) -> Jet {
        let xa = x[self.axes.axial];
        let xo = x[self.axes.offset];
        let (g, gp, gpp) = self.graph.eval(xa);
        let eta = (xo - g) / self.eps;
        let (p, p1, p2) = self.profile.eval(eta);
        let ea = -gp / self.eps;
        let eo = 1.0 / self.eps;
        let eaa = -gpp / self.eps;
        let mut grad = [0.0; 3];
        grad[self.axes.axial] = p1 * ea;
        grad[self.axes.offset] = p1 * eo;
        let lap = p2 * (ea * ea + eo * eo) + p1 * eaa;
        Jet {
            value: p,
            dt: 0.0,
            grad,
            lap,
        }
    }
}

/// Fixed unit transverse coordinate on a flat strip: `η = x_offset/ε`
/// (used by solver tests where the grid already lives in mapped space).
pub struct FlatEta {
    pub offset_axis: usize,
    pub eps: f64,
    pub profile: TransverseProfile,
}

impl Field for FlatEta {
    fn jet(&self, x: &Point, _t: f64) -> Jet {
        let eta = x[self.offset_axis] / self.eps;
        let (p, p1, p2) = self.profile.eval(eta);
        let mut grad = [0.0; 3];
        grad[self.offset_axis] = p1 / self.eps;
        Jet {
            value: p,
            dt: 0.0,
            grad,
            lap: p2 / (self.eps * self.eps),
        }
    }
}

/// Helpers for assembling common manufactured fields.
pub fn product(a: FieldRef, b: FieldRef) -> FieldRef {
    Arc::new(Product(a, b))
}

pub fn sum(fields: Vec<FieldRef>) -> FieldRef {
    Arc::new(Sum(fields))
}

pub fn scaled(c: f64, f: FieldRef) -> FieldRef {
    Arc::new(Scaled(c, f))
}

pub fn constant(c: f64) -> FieldRef {
    Arc::new(Constant(c))
}

pub fn exp_time(amplitude: f64, rate: f64) -> FieldRef {
    Arc::new(ExpTime { amplitude, rate })
}

/// Central-difference check of a field's jet; returns the worst absolute
/// mismatch across dt/grad/lap. Test helper.
pub fn jet_fd_defect(f: &dyn Field, x: &Point, t: f64, h: f64, dim: usize) -> f64 {
    let j = f.jet(x, t);
    let mut worst = ((f.value(x, t + h) - f.value(x, t - h)) / (2.0 * h) - j.dt).abs();
    let mut lap_fd = 0.0;
    for k in 0..dim {
        let mut xp = *x;
        let mut xm = *x;
        xp[k] += h;
        xm[k] -= h;
        let d1 = (f.value(&xp, t) - f.value(&xm, t)) / (2.0 * h);
        worst = worst.max((d1 - j.grad[k]).abs());
        lap_fd += (f.value(&xp, t) - 2.0 * j.value + f.value(&xm, t)) / (h * h);
    }
    worst.max((lap_fd - j.lap).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_curve, extract_probe_subdomain, CurveSpec, DomainKind};

    #[test]
    fn product_rule_jets_match_finite_differences() {
        let f = product(
            exp_time(1.0, -0.7),
            product(
                Arc::new(Wave {
                    axis: 0,
                    wavenumber: 2.0,
                    phase: 0.3,
                }),
                Arc::new(Monomial {
                    coeff: 0.5,
                    axis: 1,
                    power: 3,
                }),
            ),
        );
        let x = [0.4, 0.7, 0.0];
        let defect = jet_fd_defect(f.as_ref(), &x, 0.2, 1e-5, 2);
        assert!(defect < 1e-6, "defect {defect}");
    }

    #[test]
    fn mapped_profile_chain_rule() {
        let curve = build_curve(
            CurveSpec::Sine {
                amp: 0.5,
                freq: 4.0 * std::f64::consts::PI,
            },
            2,
            0.1,
            1.0,
        )
        .unwrap();
        let sub = extract_probe_subdomain(&curve, 0.03, 0.1, 1.0, 2, DomainKind::Nozzle).unwrap();
        let f = MappedProfile {
            graph: sub.graph.clone(),
            axes: MapAxes::for_dim(2),
            eps: 0.1,
            profile: TransverseProfile::Bubble,
        };
        let x = sub.point(0.04, 0.0, 0.37);
        let defect = jet_fd_defect(&f, &x, 0.0, 1e-5, 2);
        assert!(defect < 1e-3, "defect {defect}");
        // Vanishes on both walls.
        for eta in [0.0, 1.0] {
            let p = sub.point(0.02, 0.0, eta);
            assert!(f.value(&p, 0.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bubble_squared_kills_normal_derivative() {
        let (p, p1, _) = TransverseProfile::BubbleSquared.eval(0.0);
        assert_eq!((p, p1), (0.0, 0.0));
        let (p, p1, _) = TransverseProfile::BubbleSquared.eval(1.0);
        assert_eq!((p, p1), (0.0, 0.0));
    }
}
