//! Centerline curve registry.
//!
//! Curves are declarative: a registry id plus a coefficient list, so that
//! scenario configs stay data and admissibility stays machine-checkable.
//! The sine amplitude coefficient is declared in units of ε and the builder
//! multiplies by ε, which enforces the `|γ| = O(ε)` transverse bound by
//! construction.
//!
//! 2D curves take the form `γ(a) = (a, g(a))`; 3D curves run along the
//! second axis, `γ(a) = (0, a, g(a))` (straight curves may point in any
//! direction with strictly positive leading component).

use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::{norm, Point};

/// Closed registry of centerline shapes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "spec_id", content = "params")]
pub enum CurveSpec {
    /// `γ(a) = a·dir`, zero transverse amplitude.
    Straight { direction: Point },
    /// Constant tilted tangent: 2D `γ(a) = (a, slope·a)`, 3D `(0, a, slope·a)`.
    LinearTilt { slope: f64 },
    /// `g(a) = amp·ε·sin(freq·a)`; `amp` is declared in units of ε.
    Sine { amp: f64, freq: f64 },
}

/// A parametrized centerline over `I = (−L, L)` with closed-form derivatives.
#[derive(Debug, Clone)]
pub struct Curve {
    pub spec: CurveSpec,
    pub dim: usize,
    pub eps: f64,
    pub half_length: f64,
    /// Declared constant in the transverse bound `max|γ_⊥| ≤ K·ε`.
    pub amplitude_bound_k: f64,
}

impl Curve {
    pub fn eval(&self, a: f64) -> Point {
        match &self.spec {
            CurveSpec::Straight { direction } => {
                [a * direction[0], a * direction[1], a * direction[2]]
            }
            CurveSpec::LinearTilt { slope } => self.place(a, *slope * a),
            CurveSpec::Sine { amp, freq } => self.place(a, amp * self.eps * (freq * a).sin()),
        }
    }

    pub fn deriv(&self, a: f64) -> Point {
        match &self.spec {
            CurveSpec::Straight { direction } => *direction,
            CurveSpec::LinearTilt { slope } => self.place_d(*slope),
            CurveSpec::Sine { amp, freq } => {
                self.place_d(amp * self.eps * freq * (freq * a).cos())
            }
        }
    }

    pub fn second_deriv(&self, a: f64) -> Point {
        match &self.spec {
            CurveSpec::Straight { .. } | CurveSpec::LinearTilt { .. } => [0.0; 3],
            CurveSpec::Sine { amp, freq } => {
                let g2 = -amp * self.eps * freq * freq * (freq * a).sin();
                if self.dim == 2 {
                    [0.0, g2, 0.0]
                } else {
                    [0.0, 0.0, g2]
                }
            }
        }
    }

    /// Along/transverse placement: `(a, g)` in 2D, `(0, a, g)` in 3D.
    fn place(&self, a: f64, g: f64) -> Point {
        if self.dim == 2 {
            [a, g, 0.0]
        } else {
            [0.0, a, g]
        }
    }

    fn place_d(&self, gprime: f64) -> Point {
        if self.dim == 2 {
            [1.0, gprime, 0.0]
        } else {
            [0.0, 1.0, gprime]
        }
    }

    pub fn contains_param(&self, a: f64) -> bool {
        a > -self.half_length && a < self.half_length
    }

    /// Max distance of sampled points from the chord through the endpoints.
    /// This is the numerical reading of the `|γ| = O(ε)` amplitude bound.
    pub fn transverse_amplitude(&self, samples: usize) -> f64 {
        let a0 = -self.half_length;
        let a1 = self.half_length;
        let p0 = self.eval(a0);
        let p1 = self.eval(a1);
        let mut chord = [0.0; 3];
        for k in 0..3 {
            chord[k] = p1[k] - p0[k];
        }
        let clen = norm(&chord, 3).max(1e-300);
        let mut worst: f64 = 0.0;
        for i in 0..=samples {
            let a = a0 + (a1 - a0) * i as f64 / samples as f64;
            let p = self.eval(a);
            let mut rel = [0.0; 3];
            for k in 0..3 {
                rel[k] = p[k] - p0[k];
            }
            // Distance from the chord line: |rel - (rel . chord-hat) chord-hat|.
            let proj = crate::dot(&rel, &chord, 3) / clen;
            let mut d2 = 0.0;
            for k in 0..3 {
                let c = rel[k] - proj * chord[k] / clen;
                d2 += c * c;
            }
            worst = worst.max(d2.sqrt());
        }
        worst
    }
}

/// Build a registry curve and enforce the transverse amplitude bound.
pub fn build_curve(
    spec: CurveSpec,
    dim: usize,
    eps: f64,
    half_length: f64,
) -> Result<Curve, GeometryError> {
    build_curve_with_bound(spec, dim, eps, half_length, 2.0)
}

/// Same as [`build_curve`] with an explicit amplitude-bound constant `K`.
pub fn build_curve_with_bound(
    spec: CurveSpec,
    dim: usize,
    eps: f64,
    half_length: f64,
    amplitude_bound_k: f64,
) -> Result<Curve, GeometryError> {
    if dim != 2 && dim != 3 {
        return Err(GeometryError::BadDimension(dim));
    }
    if !(eps > 0.0) {
        return Err(GeometryError::NonPositive {
            name: "eps",
            value: eps,
        });
    }
    if !(half_length > 0.0) {
        return Err(GeometryError::NonPositive {
            name: "L",
            value: half_length,
        });
    }
    let spec = match spec {
        CurveSpec::Straight { direction } => {
            let mut d = direction;
            if dim == 2 {
                d[2] = 0.0;
            }
            let n = norm(&d, 3);
            if n < 1e-14 {
                return Err(GeometryError::DegenerateTangent(0.0));
            }
            for c in d.iter_mut() {
                *c /= n;
            }
            CurveSpec::Straight { direction: d }
        }
        other => other,
    };
    let curve = Curve {
        spec,
        dim,
        eps,
        half_length,
        amplitude_bound_k,
    };
    let amplitude = curve.transverse_amplitude(1000);
    let bound = amplitude_bound_k * eps;
    if amplitude > bound {
        return Err(GeometryError::AmplitudeBound { amplitude, bound });
    }
    Ok(curve)
}

/// Parse a registry id + coefficient list as they appear in scenario files.
pub fn curve_spec_from_config(spec_id: &str, params: &[f64]) -> Result<CurveSpec, GeometryError> {
    match spec_id {
        "straight" => {
            if params.is_empty() {
                Ok(CurveSpec::Straight {
                    direction: [1.0, 0.0, 0.0],
                })
            } else if params.len() == 2 || params.len() == 3 {
                let mut d = [0.0; 3];
                d[..params.len()].copy_from_slice(params);
                Ok(CurveSpec::Straight { direction: d })
            } else {
                Err(GeometryError::BadParamCount {
                    id: "straight",
                    expected: 0,
                    got: params.len(),
                })
            }
        }
        "linear-tilt" => {
            if params.len() == 1 {
                Ok(CurveSpec::LinearTilt { slope: params[0] })
            } else {
                Err(GeometryError::BadParamCount {
                    id: "linear-tilt",
                    expected: 1,
                    got: params.len(),
                })
            }
        }
        "sine" => {
            if params.len() == 2 {
                Ok(CurveSpec::Sine {
                    amp: params[0],
                    freq: params[1],
                })
            } else {
                Err(GeometryError::BadParamCount {
                    id: "sine",
                    expected: 2,
                    got: params.len(),
                })
            }
        }
        other => Err(GeometryError::UnknownSpecId(other.to_string())),
    }
}

/// Scan the parameter interval for pairs `(b1, b2)` with `|b1 − b2| ≤ ε^l`
/// and parallel tangents (relative cross product within `tol`).
///
/// The grid resolution is `ε^l / 32`; an empty list is a valid outcome.
pub fn parallel_tangent_pairs(curve: &Curve, l: f64, eps: f64, tol: f64) -> Vec<(f64, f64)> {
    let span = eps.powf(l);
    let step = span / 32.0;
    let lo = -curve.half_length + step;
    let hi = curve.half_length - step;
    let n = ((hi - lo) / step).floor() as usize;
    let params: Vec<f64> = (0..=n).map(|i| lo + step * i as f64).collect();
    let tangents: Vec<Point> = params.iter().map(|&a| curve.deriv(a)).collect();
    let norms: Vec<f64> = tangents.iter().map(|t| norm(t, 3)).collect();
    let window = (span / step).ceil() as usize;

    let mut out = Vec::new();
    for i in 0..params.len() {
        for j in (i + 1)..params.len().min(i + window + 1) {
            if params[j] - params[i] > span + 1e-12 * span {
                break;
            }
            let (t1, t2) = (&tangents[i], &tangents[j]);
            let cross = [
                t1[1] * t2[2] - t1[2] * t2[1],
                t1[2] * t2[0] - t1[0] * t2[2],
                t1[0] * t2[1] - t1[1] * t2[0],
            ];
            if norm(&cross, 3) <= tol * norms[i] * norms[j] {
                out.push((params[i], params[j]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_curve_is_flat() {
        let c = build_curve(
            curve_spec_from_config("straight", &[]).unwrap(),
            2,
            0.1,
            1.0,
        )
        .unwrap();
        assert_eq!(c.eval(0.3), [0.3, 0.0, 0.0]);
        assert!(c.transverse_amplitude(100) < 1e-15);
    }

    #[test]
    fn sine_amplitude_is_declared_in_eps_units() {
        let spec = curve_spec_from_config("sine", &[0.5, 4.0 * std::f64::consts::PI]).unwrap();
        let c = build_curve(spec, 2, 0.1, 1.0).unwrap();
        let amp = c.transverse_amplitude(4000);
        assert!((amp - 0.05).abs() < 1e-4, "amplitude {amp}");
    }

    #[test]
    fn amplitude_bound_rejects_violations() {
        let spec = CurveSpec::Sine {
            amp: 5.0,
            freq: 4.0 * std::f64::consts::PI,
        };
        assert!(matches!(
            build_curve(spec, 2, 0.1, 1.0),
            Err(GeometryError::AmplitudeBound { .. })
        ));
    }

    #[test]
    fn unknown_spec_id_is_rejected() {
        assert!(matches!(
            curve_spec_from_config("helix", &[]),
            Err(GeometryError::UnknownSpecId(_))
        ));
    }

    #[test]
    fn linear_tilt_tangents_are_globally_parallel() {
        let spec = curve_spec_from_config("linear-tilt", &[0.05]).unwrap();
        let c = build_curve(spec, 2, 0.1, 1.0).unwrap();
        let t0 = c.deriv(-0.7);
        for i in 0..1001 {
            let a = -1.0 + 2.0 * i as f64 / 1000.0;
            let t = c.deriv(a);
            let cross = t0[0] * t[1] - t0[1] * t[0];
            assert!(cross.abs() <= 1e-12);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let spec = curve_spec_from_config("sine", &[0.5, 7.0]).unwrap();
        let c = build_curve(spec, 2, 0.1, 1.0).unwrap();
        let h = 1e-6;
        for &a in &[-0.6, -0.1, 0.33] {
            let fd_d = {
                let p1 = c.eval(a + h);
                let p0 = c.eval(a - h);
                [(p1[0] - p0[0]) / (2.0 * h), (p1[1] - p0[1]) / (2.0 * h)]
            };
            let d = c.deriv(a);
            assert!((fd_d[0] - d[0]).abs() < 1e-8);
            assert!((fd_d[1] - d[1]).abs() < 1e-8);
            let fd_d2 = {
                let p1 = c.deriv(a + h);
                let p0 = c.deriv(a - h);
                [(p1[0] - p0[0]) / (2.0 * h), (p1[1] - p0[1]) / (2.0 * h)]
            };
            let d2 = c.second_deriv(a);
            assert!((fd_d2[0] - d2[0]).abs() < 1e-6);
            assert!((fd_d2[1] - d2[1]).abs() < 1e-6);
        }
    }

    #[test]
    fn straight_curve_all_near_pairs_parallel() {
        let c = build_curve(
            curve_spec_from_config("straight", &[]).unwrap(),
            2,
            0.1,
            1.0,
        )
        .unwrap();
        let pairs = parallel_tangent_pairs(&c, 0.5, 0.1, 1e-10);
        // Every sampled pair within eps^l qualifies: count the expected total.
        let span = 0.1f64.powf(0.5);
        let step = span / 32.0;
        let lo = -1.0 + step;
        let hi = 1.0 - step;
        let n = ((hi - lo) / step).floor() as usize + 1;
        let mut expected = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (lo + step * i as f64, lo + step * j as f64);
                if b - a <= span + 1e-12 * span {
                    expected += 1;
                } else {
                    break;
                }
            }
        }
        assert_eq!(pairs.len(), expected);
        assert!(!pairs.is_empty());
    }

    #[test]
    fn sine_pairs_recur_with_parameter_period() {
        // Parameter period eps^l: freq = 2*pi/eps^l.
        let eps = 0.1f64;
        let l = 0.5;
        let span = eps.powf(l);
        let freq = 2.0 * std::f64::consts::PI / span;
        let c = build_curve(CurveSpec::Sine { amp: 0.5, freq }, 2, eps, 1.0).unwrap();
        let pairs = parallel_tangent_pairs(&c, l, eps, 1e-8);
        assert!(!pairs.is_empty());
        // Periodic recurrence: some pair separated by a full period.
        let has_period_pair = pairs
            .iter()
            .any(|(a, b)| ((b - a) - span).abs() <= span / 16.0);
        assert!(has_period_pair);
    }
}
