//! Complex geometrical optics (CGO) probe solutions and their frequency
//! schedules.
//!
//! The probe is the exponential `u₀(x,t) = exp(ρ·x/√μ + λt)` with
//! `ρ = s·d + i·√(s²+λ)·d⊥`, which satisfies `(∂ₜ + μΔ)u₀ = 0` and
//! `∂ₜu₀ = λu₀` exactly: `ρ·ρ = s² − (s²+λ) = −λ` (complex dot product
//! without conjugation). The proofs take `s = ε^{-β}` with `β ≤ l`, `β < 1`,
//! and rely on `s·ε` staying well below one.
//!
//! Direction conventions: in 2D, `d = (d₁,d₂)` with `d₁,d₂ < 0` and
//! `d⊥ = (d₂,−d₁)`; in 3D, `d = (d₁,d₂,d₃)` with all components negative and
//! `d⊥ ∝ (d₂,−d₁,0)`, normalised to unit length so that `ρ·ρ = −λ` holds in
//! every dimension.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{norm, Point};

/// Exponent guard: beyond this the probe factor overflows f64.
pub const EXP_ARG_LIMIT: f64 = 700.0;

#[derive(Debug, Error)]
pub enum CgoError {
    #[error("direction must be a unit vector, |d| = {0}")]
    NonUnitDirection(f64),
    #[error("direction component {index} is {value}; the proof convention requires it strictly negative")]
    NonNegativeComponent { index: usize, value: f64 },
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("probe exponent {0} exceeds the overflow guard {EXP_ARG_LIMIT}")]
    Overflow(f64),
    #[error("dimension must be 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("schedule violates s*eps <= 0.5: s = {s}, eps = {eps}")]
    ScheduleOutOfRange { s: f64, eps: f64 },
    #[error("beta constraint violated: beta = {beta}, l = {l} (need beta <= l and beta < 1)")]
    BetaConstraint { beta: f64, l: f64 },
    #[error("case (a) schedule requires 0 < l < 1 + p, got l = {l}, p = {p}")]
    CaseARange { l: f64, p: f64 },
    #[error("alpha exponent out of (0,1): {0}")]
    AlphaRange(f64),
    #[error("finite-difference step must be positive, got {0}")]
    BadStep(f64),
}

/// Parameters of one CGO probe solution.
#[derive(Debug, Clone)]
pub struct CgoParams {
    pub dim: usize,
    /// Frequency parameter `s > 0`.
    pub s: f64,
    /// Temporal rate `λ > 0`.
    pub lambda: f64,
    /// Diffusion coefficient `μ > 0`.
    pub mu: f64,
    /// Unit direction with strictly negative components.
    pub d: Point,
    /// Unit direction orthogonal to `d`, derived from it.
    pub d_perp: Point,
    /// Complex vector `ρ = s·d + i·√(s²+λ)·d⊥`.
    pub rho: [Complex64; 3],
}

/// Value, gradient, and time derivative of the probe at one point.
#[derive(Debug, Clone, Copy)]
pub struct CgoEval {
    pub u0: Complex64,
    pub grad_u0: [Complex64; 3],
    pub dt_u0: Complex64,
}

/// Build a probe from `(s, λ, μ, d)`. `d⊥` is derived, never supplied.
pub fn make_cgo(s: f64, lambda: f64, mu: f64, d: &[f64]) -> Result<CgoParams, CgoError> {
    let dim = d.len();
    if dim != 2 && dim != 3 {
        return Err(CgoError::BadDimension(dim));
    }
    for (name, value) in [("s", s), ("lambda", lambda), ("mu", mu)] {
        if !(value > 0.0) {
            return Err(CgoError::NonPositiveParameter { name, value });
        }
    }
    let mut dp: Point = [0.0; 3];
    dp[..dim].copy_from_slice(d);
    let len = norm(&dp, dim);
    if (len - 1.0).abs() > 1e-12 {
        return Err(CgoError::NonUnitDirection(len));
    }
    for (index, &value) in d.iter().enumerate() {
        if value >= 0.0 {
            return Err(CgoError::NonNegativeComponent { index, value });
        }
    }
    // 2D: d_perp = (d2, -d1). 3D: same in the first two slots, then
    // normalised so rho.rho = -lambda survives in three dimensions.
    let mut d_perp: Point = [dp[1], -dp[0], 0.0];
    let plen = norm(&d_perp, dim);
    for c in d_perp.iter_mut() {
        *c /= plen;
    }
    let root = (s * s + lambda).sqrt();
    let mut rho = [Complex64::new(0.0, 0.0); 3];
    for k in 0..dim {
        rho[k] = Complex64::new(s * dp[k], root * d_perp[k]);
    }
    Ok(CgoParams {
        dim,
        s,
        lambda,
        mu,
        d: dp,
        d_perp,
        rho,
    })
}

impl CgoParams {
    /// `ρ·ρ` without conjugation; equals `−λ` by construction.
    pub fn rho_dot_rho(&self) -> Complex64 {
        self.rho[..self.dim].iter().map(|z| z * z).sum()
    }

    /// Complex exponent `ρ·x/√μ + λt`.
    fn exponent(&self, x: &Point, t: f64) -> Complex64 {
        let rmu = self.mu.sqrt();
        let mut arg = Complex64::new(self.lambda * t, 0.0);
        for k in 0..self.dim {
            arg += self.rho[k] * x[k] / rmu;
        }
        arg
    }

    /// Evaluate `u₀`, `∇u₀ = (ρ/√μ)u₀`, and `∂ₜu₀ = λu₀` at `(x, t)`.
    pub fn eval(&self, x: &Point, t: f64) -> Result<CgoEval, CgoError> {
        let arg = self.exponent(x, t);
        if arg.re > EXP_ARG_LIMIT {
            return Err(CgoError::Overflow(arg.re));
        }
        let u0 = arg.exp();
        let rmu = self.mu.sqrt();
        let mut grad_u0 = [Complex64::new(0.0, 0.0); 3];
        for k in 0..self.dim {
            grad_u0[k] = self.rho[k] / rmu * u0;
        }
        Ok(CgoEval {
            u0,
            grad_u0,
            dt_u0: self.lambda * u0,
        })
    }

    /// Residual of `(∂ₜ + μΔ)u₀`.
    ///
    /// Analytic mode returns `(λ + ρ·ρ)u₀`, which vanishes to rounding.
    /// Finite-difference mode returns the centered-difference residual,
    /// expected `O(h²·|u₀|·poly(s))`.
    pub fn pde_residual(
        &self,
        x: &Point,
        t: f64,
        mode: ResidualMode,
    ) -> Result<Complex64, CgoError> {
        match mode {
            ResidualMode::Analytic => {
                let u0 = self.eval(x, t)?.u0;
                Ok((Complex64::new(self.lambda, 0.0) + self.rho_dot_rho()) * u0)
            }
            ResidualMode::FiniteDifference { h } => {
                if !(h > 0.0) {
                    return Err(CgoError::BadStep(h));
                }
                let u = |x: &Point, t: f64| -> Result<Complex64, CgoError> {
                    Ok(self.eval(x, t)?.u0)
                };
                let dt = (u(x, t + h)? - u(x, t - h)?) / (2.0 * h);
                let mut lap = Complex64::new(0.0, 0.0);
                let center = u(x, t)?;
                for k in 0..self.dim {
                    let mut xp = *x;
                    let mut xm = *x;
                    xp[k] += h;
                    xm[k] -= h;
                    lap += (u(&xp, t)? - 2.0 * center + u(&xm, t)?) / (h * h);
                }
                Ok(dt + self.mu * lap)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum ResidualMode {
    Analytic,
    FiniteDifference { h: f64 },
}

/// Which theorem case a schedule belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleCase {
    A,
    B,
}

/// A frozen `s = ε^{-β}` schedule.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CgoSchedule {
    pub eps: f64,
    /// CGO frequency exponent β (named apart from the 3D rotation angle β).
    pub cgo_beta: f64,
    pub s: f64,
    pub case: ScheduleCase,
    /// The α-product `p` used by the case (a) branches.
    pub exponent_product: f64,
}

/// Case (a) frequency exponent β(l, p): three branches, continuous in `l`,
/// with the branch point `l = 1/(1+p)` closed on the left.
pub fn beta_case_a(l: f64, p: f64) -> Result<f64, CgoError> {
    if !(0.0 < p && p < 1.0) {
        return Err(CgoError::AlphaRange(p));
    }
    if !(0.0 < l && l < 1.0 + p) {
        return Err(CgoError::CaseARange { l, p });
    }
    let split = 1.0 / (1.0 + p);
    Ok(if l <= split {
        l
    } else if l < 1.0 {
        0.5 * (1.0 + l * (1.0 - p))
    } else {
        0.5 * (1.0 + l - p)
    })
}

/// Case (b) frequency exponent β = (1−α₂α₄)·α₄ / (1+α₂α₄).
pub fn beta_case_b(alpha2: f64, alpha4: f64) -> Result<f64, CgoError> {
    for a in [alpha2, alpha4] {
        if !(0.0 < a && a < 1.0) {
            return Err(CgoError::AlphaRange(a));
        }
    }
    let prod = alpha2 * alpha4;
    Ok((1.0 - prod) * alpha4 / (1.0 + prod))
}

/// Build the `s = ε^{-β}` schedule for one ε.
///
/// `product` is the α-product `p` for case (a); case (b) uses `(α₂, α₄)`
/// directly. Both `β ≤ l`, `β < 1` and `s·ε ≤ 0.5` are enforced; the
/// latter is a hard error because every proof estimate assumes `sε ≪ 1`.
pub fn schedule_s(
    eps: f64,
    l: f64,
    case: ScheduleCase,
    alphas: &[f64; 4],
    product: f64,
) -> Result<CgoSchedule, CgoError> {
    if !(eps > 0.0) {
        return Err(CgoError::NonPositiveParameter {
            name: "eps",
            value: eps,
        });
    }
    let beta = match case {
        ScheduleCase::A => beta_case_a(l, product)?,
        ScheduleCase::B => beta_case_b(alphas[1], alphas[3])?,
    };
    if beta > l || beta >= 1.0 {
        return Err(CgoError::BetaConstraint { beta, l });
    }
    let s = eps.powf(-beta);
    if s * eps > 0.5 {
        return Err(CgoError::ScheduleOutOfRange { s, eps });
    }
    Ok(CgoSchedule {
        eps,
        cgo_beta: beta,
        s,
        case,
        exponent_product: product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dot;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn d2() -> Vec<f64> {
        let r = 0.5f64.sqrt();
        vec![-r, -r]
    }

    #[test]
    fn rho_dot_rho_is_minus_lambda() {
        let p = make_cgo(1.0, 1.0, 1.0, &d2()).unwrap();
        let rr = p.rho_dot_rho();
        assert!((rr.re + 1.0).abs() < 1e-12);
        assert!(rr.im.abs() < 1e-12);
    }

    #[test]
    fn rho_dot_rho_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10_000 {
            let s = 10f64.powf(rng.gen_range(-2.0..3.0));
            let lambda = 10f64.powf(rng.gen_range(-2.0..2.0));
            let mu = 10f64.powf(rng.gen_range(-1.0..1.0));
            let phi = rng.gen_range(std::f64::consts::PI..1.5 * std::f64::consts::PI);
            let d = vec![phi.cos(), phi.sin()];
            let p = make_cgo(s, lambda, mu, &d).unwrap();
            let rr = p.rho_dot_rho();
            let scale = (s * s + lambda).max(1.0);
            assert!(
                (rr.re + lambda).abs() <= 1e-12 * scale && rr.im.abs() <= 1e-12 * scale,
                "s={s} lambda={lambda}: rho.rho = {rr}"
            );
        }
    }

    #[test]
    fn d_perp_is_rotation_of_d() {
        let p = make_cgo(1.0, 1.0, 1.0, &[-0.6, -0.8]).unwrap();
        assert!((p.d_perp[0] + 0.8).abs() < 1e-15);
        assert!((p.d_perp[1] - 0.6).abs() < 1e-15);
        assert!(dot(&p.d, &p.d_perp, 2).abs() < 1e-15);
    }

    #[test]
    fn d_perp_3d_is_normalised() {
        let c = -(1.0f64 / 3.0).sqrt();
        let p = make_cgo(2.0, 0.5, 1.0, &[c, c, c]).unwrap();
        let r = 0.5f64.sqrt();
        assert!((p.d_perp[0] + r).abs() < 1e-14);
        assert!((p.d_perp[1] - r).abs() < 1e-14);
        assert!(p.d_perp[2].abs() < 1e-15);
        assert!(dot(&p.d, &p.d_perp, 3).abs() < 1e-15);
        let rr = p.rho_dot_rho();
        assert!((rr.re + 0.5).abs() < 1e-12 && rr.im.abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_directions_and_parameters() {
        assert!(matches!(
            make_cgo(1.0, 1.0, 1.0, &[-1.0, 0.1]),
            Err(CgoError::NonUnitDirection(_))
        ));
        let r = 0.5f64.sqrt();
        assert!(matches!(
            make_cgo(1.0, 1.0, 1.0, &[r, -r]),
            Err(CgoError::NonNegativeComponent { .. })
        ));
        assert!(make_cgo(0.0, 1.0, 1.0, &d2()).is_err());
        assert!(make_cgo(1.0, -1.0, 1.0, &d2()).is_err());
        assert!(make_cgo(1.0, 1.0, 0.0, &d2()).is_err());
    }

    #[test]
    fn probe_is_one_at_origin() {
        let p = make_cgo(3.0, 2.0, 0.7, &d2()).unwrap();
        let e = p.eval(&[0.0; 3], 0.0).unwrap();
        assert!((e.u0 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn time_derivative_ratio_is_lambda() {
        let p = make_cgo(2.0, 1.5, 0.8, &d2()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = [rng.gen_range(-0.2..0.0), rng.gen_range(-0.2..0.0), 0.0];
            let t = rng.gen_range(0.0..0.1);
            let e = p.eval(&x, t).unwrap();
            let ratio = e.dt_u0 / e.u0;
            assert!((ratio - Complex64::new(1.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn analytic_residual_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let s = 10f64.powf(rng.gen_range(-1.0..1.5));
            let p = make_cgo(s, 2.0, 0.5, &d2()).unwrap();
            let x = [rng.gen_range(-0.1..0.0), rng.gen_range(-0.1..0.0), 0.0];
            let t = rng.gen_range(0.0..0.05);
            let r = p.pde_residual(&x, t, ResidualMode::Analytic).unwrap();
            let u0 = p.eval(&x, t).unwrap().u0;
            assert!(r.norm() <= 1e-12 * u0.norm().max(1e-300));
        }
    }

    #[test]
    fn analytic_residual_specific_sample() {
        let p = make_cgo(10.0, 2.0, 0.5, &d2()).unwrap();
        let x = [-0.01, -0.01, 0.0];
        let r = p.pde_residual(&x, 0.01, ResidualMode::Analytic).unwrap();
        let u0 = p.eval(&x, 0.01).unwrap().u0;
        assert!(r.norm() <= 1e-12 * u0.norm());
    }

    #[test]
    fn fd_residual_converges_at_order_two() {
        let p = make_cgo(2.0, 1.0, 1.0, &d2()).unwrap();
        let x = [-0.05, -0.02, 0.0];
        let t = 0.02;
        let r1 = p
            .pde_residual(&x, t, ResidualMode::FiniteDifference { h: 1e-3 })
            .unwrap();
        let r2 = p
            .pde_residual(&x, t, ResidualMode::FiniteDifference { h: 5e-4 })
            .unwrap();
        let ratio = r1.norm() / r2.norm();
        assert!((ratio - 4.0).abs() < 0.3, "two-grid ratio {ratio}");
    }

    #[test]
    fn overflow_guard_fires() {
        let p = make_cgo(1.0, 1.0, 1.0, &d2()).unwrap();
        assert!(matches!(
            p.eval(&[0.0; 3], 1e6),
            Err(CgoError::Overflow(_))
        ));
    }

    #[test]
    fn schedule_examples() {
        let alphas = [0.5; 4];
        let sch = schedule_s(0.01, 0.5, ScheduleCase::A, &alphas, 0.5).unwrap();
        assert!((sch.cgo_beta - 0.5).abs() < 1e-15);
        assert!((sch.s - 10.0).abs() < 1e-10);

        let beta = beta_case_a(0.8, 0.5).unwrap();
        assert!((beta - 0.7).abs() < 1e-15);

        let beta_b = beta_case_b(0.5, 0.5).unwrap();
        assert!((beta_b - 0.3).abs() < 1e-15);
    }

    #[test]
    fn schedule_rejects_out_of_range() {
        let alphas = [0.5; 4];
        // l beyond 1+p.
        assert!(matches!(
            schedule_s(0.1, 1.6, ScheduleCase::A, &alphas, 0.5),
            Err(CgoError::CaseARange { .. })
        ));
        // s*eps = eps^{1-beta} too large at this eps.
        assert!(matches!(
            schedule_s(0.45, 0.9, ScheduleCase::A, &alphas, 0.5),
            Err(CgoError::ScheduleOutOfRange { .. })
        ));
    }

    #[test]
    fn beta_constraints_hold_on_grid() {
        // beta <= l and beta < 1 across a 200x200 grid of (l, p).
        for i in 0..200 {
            let p = 0.005 + 0.99 * (i as f64) / 199.0;
            for j in 0..200 {
                let l = 0.005 + (1.0 + p - 0.01) * (j as f64) / 199.0;
                let beta = beta_case_a(l, p).unwrap();
                assert!(beta <= l + 1e-15, "beta={beta} l={l} p={p}");
                assert!(beta < 1.0, "beta={beta} l={l} p={p}");
            }
        }
    }

    #[test]
    fn beta_continuous_across_branches() {
        for i in 0..200 {
            let p = 0.005 + 0.99 * (i as f64) / 199.0;
            let split = 1.0 / (1.0 + p);
            let lo = beta_case_a(split - 1e-9, p).unwrap();
            let hi = beta_case_a(split + 1e-9, p).unwrap();
            assert!((lo - hi).abs() < 1e-8);
            let lo1 = beta_case_a(1.0 - 1e-9, p).unwrap();
            let hi1 = beta_case_a(1.0, p).unwrap();
            assert!((lo1 - hi1).abs() < 1e-8);
        }
    }

    #[test]
    fn grad_magnitude_ratio() {
        // |grad u0| / |u0| = sqrt(2s^2 + lambda) / sqrt(mu).
        let p = make_cgo(3.0, 2.0, 0.5, &d2()).unwrap();
        let e = p.eval(&[-0.03, -0.04, 0.0], 0.01).unwrap();
        let g = (e.grad_u0[0].norm_sqr() + e.grad_u0[1].norm_sqr()).sqrt();
        let expected = (2.0f64 * 9.0 + 2.0).sqrt() / 0.5f64.sqrt() * e.u0.norm();
        assert!((g - expected).abs() < 1e-12 * expected);
    }
}
