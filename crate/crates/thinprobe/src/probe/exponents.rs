//! The stability exponents.
//!
//! Case (a) flux exponent, with `p` the α-product (the theorem statement
//! uses α₂α₃ while the proof derives α₃α₄; both are supported and the
//! default experiment configs set them equal):
//!
//! ```text
//! τ = p·l                    0 < l ≤ 1/(1+p)
//! τ = [1 − l(1−p)] / 2       1/(1+p) < l < 1
//! τ = (1 − l + p) / 2        1 ≤ l < 1+p
//! ```
//!
//! Case (b) source exponent: τ₁ = a·b²/(1+a·b) with `(a,b) = (α₁,α₃)`
//! (theorem variant) or `(α₂,α₄)` (proof variant).

use serde::Serialize;

use super::ProbeError;
use crate::cgo::{beta_case_a, beta_case_b};

/// Which published formula a τ₁ value follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tau1Variant {
    /// `α₁α₃²/(1+α₁α₃)`.
    Theorem,
    /// `α₂α₄²/(1+α₂α₄)`.
    Proof,
}

/// Case (a) exponent τ(l, p); continuous across both branch points, with
/// the first branch closed on the left.
pub fn tau_case_a(l: f64, p: f64) -> Result<f64, ProbeError> {
    if !(0.0 < p && p < 1.0) {
        return Err(ProbeError::AlphaRange(p));
    }
    if !(0.0 < l && l < 1.0 + p) {
        return Err(ProbeError::LRange { l, p });
    }
    let split = 1.0 / (1.0 + p);
    Ok(if l <= split {
        p * l
    } else if l < 1.0 {
        0.5 * (1.0 - l * (1.0 - p))
    } else {
        0.5 * (1.0 - l + p)
    })
}

/// Case (b) exponent τ₁ = a·b² / (1 + a·b).
pub fn tau1(alpha_a: f64, alpha_b: f64, _variant: Tau1Variant) -> Result<f64, ProbeError> {
    for a in [alpha_a, alpha_b] {
        if !(0.0 < a && a < 1.0) {
            return Err(ProbeError::AlphaRange(a));
        }
    }
    Ok(alpha_a * alpha_b * alpha_b / (1.0 + alpha_a * alpha_b))
}

/// Frozen exponent bookkeeping for one experiment configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentTable {
    pub l: f64,
    pub alphas: [f64; 4],
    /// α-product used by case (a): theorem reading α₂α₃.
    pub p_theorem: f64,
    /// α-product used by case (a): proof reading α₃α₄.
    pub p_proof: f64,
    pub tau_theorem: f64,
    pub tau_proof: f64,
    pub tau1_theorem: f64,
    pub tau1_proof: f64,
    pub beta_case_a_theorem: f64,
    pub beta_case_a_proof: f64,
    pub beta_case_b: f64,
    /// Flags the α₂α₃ vs α₃α₄ discrepancy when the two products differ.
    pub product_discrepancy: bool,
}

/// Build the full table for `(l, α₁..α₄)`.
pub fn beta_tau_table(l: f64, alphas: [f64; 4]) -> Result<ExponentTable, ProbeError> {
    let [a1, a2, a3, a4] = alphas;
    let p_theorem = a2 * a3;
    let p_proof = a3 * a4;
    let to_probe = |e: crate::cgo::CgoError| match e {
        crate::cgo::CgoError::AlphaRange(a) => ProbeError::AlphaRange(a),
        crate::cgo::CgoError::CaseARange { l, p } => ProbeError::LRange { l, p },
        other => ProbeError::Family {
            eps: f64::NAN,
            message: other.to_string(),
        },
    };
    Ok(ExponentTable {
        l,
        alphas,
        p_theorem,
        p_proof,
        tau_theorem: tau_case_a(l, p_theorem)?,
        tau_proof: tau_case_a(l, p_proof)?,
        tau1_theorem: tau1(a1, a3, Tau1Variant::Theorem)?,
        tau1_proof: tau1(a2, a4, Tau1Variant::Proof)?,
        beta_case_a_theorem: beta_case_a(l, p_theorem).map_err(to_probe)?,
        beta_case_a_proof: beta_case_a(l, p_proof).map_err(to_probe)?,
        beta_case_b: beta_case_b(a2, a4).map_err(to_probe)?,
        product_discrepancy: (p_theorem - p_proof).abs() > 1e-15,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_examples() {
        assert!((tau_case_a(0.5, 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!((tau_case_a(0.8, 0.5).unwrap() - 0.3).abs() < 1e-15);
        assert!((tau_case_a(1.2, 0.5).unwrap() - 0.15).abs() < 1e-15);
        assert!((tau1(0.5, 0.5, Tau1Variant::Theorem).unwrap() - 0.1).abs() < 1e-15);
        assert!((tau1(0.5, 0.5, Tau1Variant::Proof).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn tau_continuity_and_meeting_values() {
        for i in 0..200 {
            let p = 0.005 + 0.99 * (i as f64) / 199.0;
            let split = 1.0 / (1.0 + p);
            let left = tau_case_a(split, p).unwrap();
            let right = tau_case_a(split + 1e-13, p).unwrap();
            assert!((left - right).abs() <= 1e-12, "p={p}");
            // Branch 1/2 meet at p/(1+p).
            assert!((left - p / (1.0 + p)).abs() <= 1e-12, "p={p} left={left}");
            let l1m = tau_case_a(1.0 - 1e-13, p).unwrap();
            let l1 = tau_case_a(1.0, p).unwrap();
            assert!((l1m - l1).abs() <= 1e-12);
            // Branch 2/3 meet at p/2.
            assert!((l1 - p / 2.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn tau_in_unit_interval_and_monotone_in_p() {
        for i in 0..50 {
            let p = 0.01 + 0.97 * (i as f64) / 49.0;
            for j in 0..50 {
                let l = 0.01 + (1.0 + p - 0.02) * (j as f64) / 49.0;
                let t = tau_case_a(l, p).unwrap();
                assert!(t > 0.0 && t < 1.0, "tau={t} l={l} p={p}");
            }
            // Branch-1 monotonicity in p for fixed l.
            let l = 0.3;
            let t_lo = tau_case_a(l, p).unwrap();
            let t_hi = tau_case_a(l, (p + 0.01).min(0.99)).unwrap();
            assert!(t_hi >= t_lo - 1e-15);
        }
    }

    #[test]
    fn tau1_monotone_in_each_alpha() {
        let mut prev = 0.0;
        for i in 1..40 {
            let a = i as f64 / 40.0;
            let t = tau1(a, 0.5, Tau1Variant::Theorem).unwrap();
            assert!(t > prev);
            prev = t;
        }
        prev = 0.0;
        for i in 1..40 {
            let b = i as f64 / 40.0;
            let t = tau1(0.5, b, Tau1Variant::Theorem).unwrap();
            assert!(t > prev);
            prev = t;
        }
        // alpha -> 0 limit.
        assert!(tau1(1e-9, 0.5, Tau1Variant::Proof).unwrap() < 1e-9);
    }

    #[test]
    fn beta_tau_consistency_branch_one() {
        // Branch 1: beta = l and tau = p*l = p*beta.
        for i in 0..200 {
            let p = 0.005 + 0.99 * (i as f64) / 199.0;
            for j in 0..200 {
                let l = 1e-3 + (1.0 / (1.0 + p) - 2e-3) * (j as f64) / 199.0;
                let tau = tau_case_a(l, p).unwrap();
                let beta = crate::cgo::beta_case_a(l, p).unwrap();
                assert!((tau - p * beta).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn branches_two_three_satisfy_beta_plus_tau_equals_one() {
        for i in 0..100 {
            let p = 0.01 + 0.97 * (i as f64) / 99.0;
            for &l in &[1.0 / (1.0 + p) + 0.01, 0.99, 1.0, 1.0 + 0.9 * p] {
                if l >= 1.0 + p || l <= 1.0 / (1.0 + p) {
                    continue;
                }
                let tau = tau_case_a(l, p).unwrap();
                let beta = crate::cgo::beta_case_a(l, p).unwrap();
                assert!((tau + beta - 1.0).abs() < 1e-13, "l={l} p={p}");
            }
        }
    }

    #[test]
    fn table_flags_product_discrepancy() {
        let t = beta_tau_table(0.5, [0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(!t.product_discrepancy);
        let t2 = beta_tau_table(0.5, [0.5, 0.6, 0.5, 0.4]).unwrap();
        assert!(t2.product_discrepancy);
        assert!((t2.p_theorem - 0.3).abs() < 1e-15);
        assert!((t2.p_proof - 0.2).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(tau_case_a(1.6, 0.5).is_err());
        assert!(tau_case_a(0.5, 1.5).is_err());
        assert!(tau1(0.5, 1.0, Tau1Variant::Theorem).is_err());
    }
}
