//! Rotation frames aligning the centerline tangent with a coordinate axis.
//!
//! In 2D the frame translates the origin to `γ(b₁)` and rotates clockwise by
//! θ so that `γ′(b₁)` lands on the x₁-axis. In 3D a rotation by θ about the
//! x₂-axis followed by β about the x₃-axis sends the tangent to the x₂-axis.
//! "Clockwise" is realised as the unique rotation with minimal |angle|
//! achieving the alignment; the resulting matrix is exactly the flux
//! transformation matrix used by the rotated realizations.

use super::{Curve, GeometryError};
use crate::{norm, Point};

type Mat3 = [[f64; 3]; 3];

/// Rigid motion `x ↦ R(x − translation)` with `RᵀR = I`, `det R = 1`.
#[derive(Debug, Clone)]
pub struct Frame {
    pub dim: usize,
    pub rotation: Mat3,
    /// First rotation angle (about x₂ in 3D; the full angle in 2D).
    pub theta: f64,
    /// Second rotation angle about x₃; zero in 2D.
    pub beta_rot: f64,
    pub translation: Point,
}

impl Frame {
    /// Identity frame, convenient for tests and pre-aligned constructions.
    pub fn identity(dim: usize) -> Self {
        Frame {
            dim,
            rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            theta: 0.0,
            beta_rot: 0.0,
            translation: [0.0; 3],
        }
    }

    pub fn rotate_vector(&self, v: &Point) -> Point {
        let r = &self.rotation;
        [
            r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
            r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
            r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
        ]
    }

    pub fn unrotate_vector(&self, v: &Point) -> Point {
        let r = &self.rotation;
        [
            r[0][0] * v[0] + r[1][0] * v[1] + r[2][0] * v[2],
            r[0][1] * v[0] + r[1][1] * v[1] + r[2][1] * v[2],
            r[0][2] * v[0] + r[1][2] * v[1] + r[2][2] * v[2],
        ]
    }

    /// Map an original-frame point into rotated probe coordinates.
    pub fn to_rotated(&self, x: &Point) -> Point {
        let rel = [
            x[0] - self.translation[0],
            x[1] - self.translation[1],
            x[2] - self.translation[2],
        ];
        self.rotate_vector(&rel)
    }

    /// Inverse of [`Frame::to_rotated`].
    pub fn to_original(&self, x: &Point) -> Point {
        let v = self.unrotate_vector(x);
        [
            v[0] + self.translation[0],
            v[1] + self.translation[1],
            v[2] + self.translation[2],
        ]
    }

    pub fn det(&self) -> f64 {
        let r = &self.rotation;
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    }

    /// Max deviation of `RᵀR` from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        let r = &self.rotation;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let mut v = 0.0;
                for k in 0..3 {
                    v += r[k][i] * r[k][j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }
}

/// Build the frame at parameter `b1`: translation `γ(b1)` plus the minimal
/// rotation aligning `γ′(b1)` with the x₁-axis (2D) or the x₂-axis (3D).
pub fn rotation_frame(curve: &Curve, b1: f64, dim: usize) -> Result<Frame, GeometryError> {
    if dim != curve.dim {
        return Err(GeometryError::BadDimension(dim));
    }
    if !curve.contains_param(b1) {
        return Err(GeometryError::ParamOutsideInterval(b1, curve.half_length));
    }
    let t = curve.deriv(b1);
    let tn = norm(&t, 3);
    if tn < 1e-14 {
        return Err(GeometryError::DegenerateTangent(b1));
    }
    let translation = curve.eval(b1);

    if dim == 2 {
        let theta = t[1].atan2(t[0]);
        let (s, c) = theta.sin_cos();
        // Clockwise rotation by theta: R = [[c, s], [-s, c]].
        let rotation = [[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]];
        return Ok(Frame {
            dim,
            rotation,
            theta,
            beta_rot: 0.0,
            translation,
        });
    }

    // 3D: rotate about x2 by theta to kill the x3-component, then about x3
    // by beta to land on x2. Composition R = Rz(beta) * Ry(theta) is the
    // flux-transformation matrix.
    let theta = if t[0].abs() < 1e-14 && t[2].abs() < 1e-14 {
        0.0
    } else {
        (-t[2]).atan2(t[0])
    };
    let (st, ct) = theta.sin_cos();
    let r_mid = ct * t[0] - st * t[2];
    let denom = (r_mid * r_mid + t[1] * t[1]).sqrt();
    if denom < 1e-14 {
        return Err(GeometryError::DegenerateTangent(b1));
    }
    let beta = (-r_mid).atan2(t[1]);
    let (sb, cb) = beta.sin_cos();
    let rotation = [
        [cb * ct, sb, -cb * st],
        [-sb * ct, cb, sb * st],
        [st, 0.0, ct],
    ];
    Ok(Frame {
        dim,
        rotation,
        theta,
        beta_rot: beta,
        translation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_curve, CurveSpec};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn straight2() -> Curve {
        build_curve(
            CurveSpec::Straight {
                direction: [1.0, 0.0, 0.0],
            },
            2,
            0.1,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn identity_frame_for_straight_curve() {
        let f = rotation_frame(&straight2(), 0.0, 2).unwrap();
        assert_eq!(f.theta, 0.0);
        assert!(f.orthogonality_defect() < 1e-15);
        assert!((f.det() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_tangent_gives_quarter_pi() {
        let c = build_curve(
            CurveSpec::Straight {
                direction: [1.0, 1.0, 0.0],
            },
            2,
            0.1,
            1.0,
        )
        .unwrap();
        let f = rotation_frame(&c, 0.0, 2).unwrap();
        assert!((f.theta - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
        let r = 0.5f64.sqrt();
        let aligned = f.rotate_vector(&[r, r, 0.0]);
        assert!((aligned[0] - 1.0).abs() < 1e-14);
        assert!(aligned[1].abs() < 1e-14);
    }

    #[test]
    fn sine_frame_aligns_tangent() {
        let freq = 4.0 * std::f64::consts::PI;
        let c = build_curve(CurveSpec::Sine { amp: 0.5, freq }, 2, 0.1, 1.0).unwrap();
        let f = rotation_frame(&c, 0.0, 2).unwrap();
        // gamma'(0) = (1, amp*eps*freq), theta = atan(0.5*0.1*4*pi).
        let expected = (0.5 * 0.1 * freq).atan();
        assert!((f.theta - expected).abs() < 1e-13);
        let t = c.deriv(0.0);
        let aligned = f.rotate_vector(&t);
        assert!(aligned[1].abs() <= 1e-12 * norm(&t, 3));
    }

    #[test]
    fn frame_translation_is_curve_point() {
        let c = build_curve(CurveSpec::LinearTilt { slope: 0.05 }, 2, 0.1, 1.0).unwrap();
        let f = rotation_frame(&c, 0.25, 2).unwrap();
        assert_eq!(f.translation, c.eval(0.25));
        let round = f.to_original(&f.to_rotated(&[0.3, 0.01, 0.0]));
        assert!((round[0] - 0.3).abs() < 1e-14 && (round[1] - 0.01).abs() < 1e-14);
    }

    #[test]
    fn random_frames_hold_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let dim = if rng.gen_bool(0.5) { 2 } else { 3 };
            let mut dir = [0.0; 3];
            loop {
                for (k, c) in dir.iter_mut().enumerate().take(dim) {
                    let _ = k;
                    *c = rng.gen_range(-1.0..1.0);
                }
                if norm(&dir, 3) > 0.1 {
                    break;
                }
            }
            let c = match build_curve(CurveSpec::Straight { direction: dir }, dim, 0.1, 1.0) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let b1 = rng.gen_range(-0.9..0.9);
            let f = rotation_frame(&c, b1, dim).unwrap();
            assert!(f.orthogonality_defect() < 1e-12);
            assert!((f.det() - 1.0).abs() < 1e-12);
            let t = c.deriv(b1);
            let aligned = f.rotate_vector(&t);
            let axis = if dim == 2 { 0 } else { 1 };
            for (k, comp) in aligned.iter().enumerate() {
                if k != axis {
                    assert!(
                        comp.abs() <= 1e-10 * norm(&t, 3),
                        "dim={dim} k={k} comp={comp}"
                    );
                }
            }
            assert!(aligned[axis] > 0.0);
        }
    }

    #[test]
    fn three_d_matrix_matches_component_formulas() {
        let c = build_curve(
            CurveSpec::Straight {
                direction: [-0.3, 0.8, -0.2],
            },
            3,
            0.1,
            1.0,
        )
        .unwrap();
        let f = rotation_frame(&c, 0.1, 3).unwrap();
        let (st, ct) = f.theta.sin_cos();
        let (sb, cb) = f.beta_rot.sin_cos();
        let v = [0.3, -1.2, 0.7];
        let rot = f.rotate_vector(&v);
        let expected = [
            v[0] * cb * ct + v[1] * sb - v[2] * cb * st,
            -v[0] * sb * ct + v[1] * cb + v[2] * sb * st,
            v[0] * st + v[2] * ct,
        ];
        for k in 0..3 {
            assert!((rot[k] - expected[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn degenerate_tangent_rejected() {
        let c = straight2();
        // Construct a pathological request: param outside interval.
        assert!(matches!(
            rotation_frame(&c, 2.0, 2),
            Err(GeometryError::ParamOutsideInterval(..))
        ));
    }
}
