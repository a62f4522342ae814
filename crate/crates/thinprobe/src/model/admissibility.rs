//! Sampled Hölder-quotient validation of the admissibility conditions.
//!
//! True Hölder norms are not computable; sampled quotients give the
//! falsification power tests need. Each condition varies one argument slot
//! at a time, matching the slot-wise supremum in the class definition, and
//! the time slot uses the parabolic scaling `|t − t′|^{α/2}`. Beyond random
//! pairs, the sampler adds geometrically shrinking pairs around interior
//! anchors, which is what catches genuinely rougher-than-declared maps like
//! `√|z|` against an optimistic exponent.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ConfigTriplet, ModelError};
use crate::Point;

/// Axis-aligned sampling region for `(x, t, z, ∇z)`.
#[derive(Debug, Clone, Copy)]
pub struct SampleBox {
    pub x: [(f64, f64); 3],
    pub t: (f64, f64),
    pub z: (f64, f64),
    pub grad: (f64, f64),
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox {
            x: [(0.0, 1.0), (0.0, 1.0), (0.0, 0.0)],
            t: (0.0, 1.0),
            z: (-1.0, 1.0),
            grad: (-1.0, 1.0),
        }
    }
}

/// One validated condition.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub name: String,
    pub alpha: f64,
    pub declared_constant: f64,
    pub worst_quotient: f64,
    pub pass: bool,
}

/// Per-condition pass/fail with worst observed quotients. Report-only: the
/// caller decides whether failures abort.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub samples: usize,
    pub conditions: Vec<ConditionReport>,
}

impl AdmissibilityReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }
}

struct QuotientTracker {
    worst: f64,
}

impl QuotientTracker {
    fn new() -> Self {
        QuotientTracker { worst: 0.0 }
    }

    fn push(&mut self, df: f64, dist: f64, alpha: f64) {
        if dist > 1e-300 {
            let q = df.abs() / dist.powf(alpha);
            if q > self.worst {
                self.worst = q;
            }
        }
    }
}

fn lerp(range: (f64, f64), u: f64) -> f64 {
    range.0 + (range.1 - range.0) * u
}

/// Validate the declared Hölder metadata of a configuration by sampling.
///
/// Slack factor `1 + 1e-6` on the declared constants absorbs rounding in
/// the quotient evaluation itself.
pub fn validate_admissibility(
    cfg: &ConfigTriplet,
    sample_box: &SampleBox,
    samples: usize,
    seed: u64,
) -> Result<AdmissibilityReport, ModelError> {
    if samples < 100 {
        return Err(ModelError::TooFewSamples(samples));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slack = 1.0 + 1e-6;

    let draw_point = |rng: &mut ChaCha8Rng| -> (Point, f64, f64, Point) {
        let x = [
            lerp(sample_box.x[0], rng.gen()),
            lerp(sample_box.x[1], rng.gen()),
            lerp(sample_box.x[2], rng.gen()),
        ];
        let t = lerp(sample_box.t, rng.gen());
        let z = lerp(sample_box.z, rng.gen());
        let g = [
            lerp(sample_box.grad, rng.gen()),
            lerp(sample_box.grad, rng.gen()),
            0.0,
        ];
        (x, t, z, g)
    };

    let a2 = cfg.source_meta.alpha;
    let a3 = cfg.flux_meta.alpha;
    let a1 = cfg.h_meta.alpha;

    let mut f_space = QuotientTracker::new();
    let mut f_time = QuotientTracker::new();
    let mut f_state = QuotientTracker::new();
    let mut f_grad = QuotientTracker::new();
    let mut flux_state = QuotientTracker::new();
    let mut flux_space = QuotientTracker::new();
    let mut h_state = QuotientTracker::new();

    // Separations: random plus geometric shrinkage toward zero.
    let separations: Vec<f64> = (0..40).map(|k| 2f64.powi(-(k as i32))).collect();

    for i in 0..samples {
        let (x, t, z, g) = draw_point(&mut rng);
        let sep = if i % 3 == 0 {
            separations[i / 3 % separations.len()]
        } else {
            rng.gen_range(1e-6..1.0)
        };

        // f: vary each slot in turn.
        let base = cfg.source.eval(&x, t, z, &g);
        let mut x2 = x;
        x2[0] = lerp(sample_box.x[0], rng.gen());
        let dx = (x2[0] - x[0]).abs();
        f_space.push(cfg.source.eval(&x2, t, z, &g) - base, dx, a2);

        let t2 = (t + sep).min(sample_box.t.1);
        f_time.push(
            cfg.source.eval(&x, t2, z, &g) - base,
            (t2 - t).abs(),
            a2 / 2.0,
        );

        // State slot: random pair and a shrinking pair anchored near 0.
        let z2 = lerp(sample_box.z, rng.gen());
        f_state.push(
            cfg.source.eval(&x, t, z2, &g) - base,
            (z2 - z).abs(),
            a2,
        );
        let za = sep.min(sample_box.z.1.abs().max(1e-12));
        f_state.push(
            cfg.source.eval(&x, t, za, &g) - cfg.source.eval(&x, t, 0.0, &g),
            za,
            a2,
        );

        let mut g2 = g;
        g2[0] = lerp(sample_box.grad, rng.gen());
        f_grad.push(
            cfg.source.eval(&x, t, z, &g2) - base,
            (g2[0] - g[0]).abs(),
            a2,
        );

        // Flux components: state and space slots.
        let fz1 = cfg.flux.eval(&x, t, z);
        let fz2 = cfg.flux.eval(&x, t, z2);
        for k in 0..3 {
            flux_state.push(fz2[k] - fz1[k], (z2 - z).abs(), a3);
        }
        let fx2 = cfg.flux.eval(&x2, t, z);
        for k in 0..3 {
            flux_space.push(fx2[k] - fz1[k], dx, a3);
        }

        // H: state slot with shrinking pairs.
        let h1 = cfg.h.eval(z);
        let h2 = cfg.h.eval(z2);
        h_state.push(h2 - h1, (z2 - z).abs(), a1);
        h_state.push(cfg.h.eval(za) - cfg.h.eval(0.0), za, a1);
    }

    let conditions = vec![
        ConditionReport {
            name: "f_space_alpha2".into(),
            alpha: a2,
            declared_constant: cfg.source_meta.constant,
            worst_quotient: f_space.worst,
            pass: f_space.worst <= cfg.source_meta.constant * slack,
        },
        ConditionReport {
            name: "f_time_alpha2_half".into(),
            alpha: a2 / 2.0,
            declared_constant: cfg.source_meta.constant,
            worst_quotient: f_time.worst,
            pass: f_time.worst <= cfg.source_meta.constant * slack,
        },
        ConditionReport {
            name: "f_state_alpha2".into(),
            alpha: a2,
            declared_constant: cfg.source_meta.constant,
            worst_quotient: f_state.worst,
            pass: f_state.worst <= cfg.source_meta.constant * slack,
        },
        ConditionReport {
            name: "f_gradient_alpha2".into(),
            alpha: a2,
            declared_constant: cfg.source_meta.constant,
            worst_quotient: f_grad.worst,
            pass: f_grad.worst <= cfg.source_meta.constant * slack,
        },
        ConditionReport {
            name: "flux_state_alpha3".into(),
            alpha: a3,
            declared_constant: cfg.flux_meta.constant,
            worst_quotient: flux_state.worst,
            pass: flux_state.worst <= cfg.flux_meta.constant * slack,
        },
        ConditionReport {
            name: "flux_space_alpha3".into(),
            alpha: a3,
            declared_constant: cfg.flux_meta.constant,
            worst_quotient: flux_space.worst,
            pass: flux_space.worst <= cfg.flux_meta.constant * slack,
        },
        ConditionReport {
            name: "h_state_alpha1".into(),
            alpha: a1,
            declared_constant: cfg.h_meta.constant,
            worst_quotient: h_state.worst,
            pass: h_state.worst <= cfg.h_meta.constant * slack,
        },
    ];

    Ok(AdmissibilityReport {
        samples,
        conditions,
    })
}
