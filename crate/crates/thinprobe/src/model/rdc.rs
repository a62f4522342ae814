//! Reaction-diffusion-convection systems as balance laws.
//!
//! `∂ₜu + ∇·(c u) = μΔu + R(u, ∇u)` maps onto the general form through
//! `H = id`, `F(x,t,u) = c·u`, `f = R`, provided the velocity field is
//! incompressible.

use super::{ConfigTriplet, FluxSpec, HSpec, ModelError, SourceSpec, VelocitySpec};
use crate::Point;

/// Map an RDC model onto a balance-law configuration, rejecting compressible
/// velocity fields (sampled `|∇·c|` above 1e-8).
pub fn rdc_to_balance(
    velocity: &VelocitySpec,
    reaction: SourceSpec,
    mu: f64,
    sample_box: &[(f64, f64); 3],
    grid_per_axis: usize,
) -> Result<ConfigTriplet, ModelError> {
    let mut worst: f64 = 0.0;
    let n = grid_per_axis.max(2);
    for i in 0..n {
        for j in 0..n {
            let x: Point = [
                sample_box[0].0 + (sample_box[0].1 - sample_box[0].0) * i as f64 / (n - 1) as f64,
                sample_box[1].0 + (sample_box[1].1 - sample_box[1].0) * j as f64 / (n - 1) as f64,
                0.0,
            ];
            worst = worst.max(velocity.divergence(&x).abs());
        }
    }
    if worst > 1e-8 {
        return Err(ModelError::CompressibleVelocity(worst));
    }
    let flux = match velocity {
        VelocitySpec::Constant { c } => FluxSpec::ConstantAdvection { c: *c },
        VelocitySpec::Rotational { omega } => FluxSpec::RotationalAdvection { omega: *omega },
        VelocitySpec::LinearX => unreachable!("rejected above"),
    };
    Ok(ConfigTriplet::new(HSpec::Identity, flux, reaction, mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOX: [(f64, f64); 3] = [(-1.0, 1.0), (-1.0, 1.0), (0.0, 0.0)];

    #[test]
    fn constant_velocity_passes() {
        let cfg = rdc_to_balance(
            &VelocitySpec::Constant { c: [1.0, 0.0, 0.0] },
            SourceSpec::Zero,
            0.5,
            &BOX,
            16,
        )
        .unwrap();
        assert_eq!(cfg.h, HSpec::Identity);
        assert!(matches!(cfg.flux, FluxSpec::ConstantAdvection { .. }));
    }

    #[test]
    fn rotational_velocity_is_divergence_free() {
        let cfg = rdc_to_balance(
            &VelocitySpec::Rotational { omega: 1.0 },
            SourceSpec::Logistic,
            0.5,
            &BOX,
            16,
        )
        .unwrap();
        // Analytic divergence is identically zero.
        for &x in &[[0.3, -0.7, 0.0], [0.0, 0.0, 0.0]] {
            assert_eq!(VelocitySpec::Rotational { omega: 1.0 }.divergence(&x), 0.0);
        }
        assert!(matches!(cfg.flux, FluxSpec::RotationalAdvection { .. }));
    }

    #[test]
    fn compressible_velocity_rejected() {
        let err = rdc_to_balance(&VelocitySpec::LinearX, SourceSpec::Zero, 0.5, &BOX, 8);
        assert!(matches!(err, Err(ModelError::CompressibleVelocity(d)) if (d - 1.0).abs() < 1e-12));
    }
}
