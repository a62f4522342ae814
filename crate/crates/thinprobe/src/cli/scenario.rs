//! Scenario schema: flat, sectioned key-value text (TOML), schema-validated
//! before any computation, unknown keys rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cgo::ScheduleCase;
use crate::families::{FamilyConfig, GapFieldSpec, ShiftSpec, WindowRule};
use crate::geometry::{CurveSpec, DomainKind};
use crate::model::{FluxSpec, HSpec, SourceSpec, VelocitySpec};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("TOML parse/validation error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("scenario is not valid UTF-8")]
    Utf8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    pub dim: usize,
    pub kind: DomainKind,
    pub curve: CurveSpec,
    pub eps: Option<f64>,
    pub eps_list: Option<Vec<f64>>,
    pub l: f64,
    pub half_length: f64,
    #[serde(default)]
    pub b1: f64,
}

fn default_true() -> bool {
    true
}

fn default_probe_eta() -> f64 {
    0.5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CgoBlock {
    pub lambda: f64,
    pub mu: f64,
    /// Fixed frequency for identity runs; sweeps derive `s` from the
    /// schedule instead.
    pub s_fixed: Option<f64>,
    pub case: ScheduleCase,
    pub alphas: [f64; 4],
    #[serde(default = "default_true")]
    pub use_proof_product: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub h: HSpec,
    pub flux: FluxSpec,
    #[serde(default = "default_source")]
    pub source: SourceSpec,
    pub gap: Option<GapFieldSpec>,
    pub shift: Option<ShiftSpec>,
    #[serde(default = "default_true")]
    pub grad_w_shift: bool,
    #[serde(default = "default_probe_eta")]
    pub probe_eta: f64,
    #[serde(default = "default_window")]
    pub window: WindowRule,
}

fn default_source() -> SourceSpec {
    SourceSpec::Zero
}

fn default_window() -> WindowRule {
    WindowRule::EpsSquared
}

impl Default for ModelBlock {
    fn default() -> Self {
        ModelBlock {
            h: HSpec::Identity,
            flux: FluxSpec::None,
            source: SourceSpec::Zero,
            gap: None,
            shift: None,
            grad_w_shift: true,
            probe_eta: 0.5,
            window: WindowRule::EpsSquared,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub n1: usize,
    pub n_eta: usize,
    /// `Δt = dt_factor · h² / μ`.
    #[serde(default = "default_dt_factor")]
    pub dt_factor: f64,
    pub t_end: f64,
}

fn default_dt_factor() -> f64 {
    0.2
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "kebab-case")]
pub enum ExperimentBlock {
    /// Built-in consistency suites.
    Selfcheck {},
    /// Integral-identity residual at one ε, with optional refinement check.
    Identity {
        rule: [usize; 3],
        tol_rel: f64,
        #[serde(default)]
        refine: bool,
        /// Minimal residual drop factor under per-axis doubling.
        #[serde(default = "default_refine_factor")]
        refine_factor_min: f64,
        /// Slab only: require the ablated residual (without I₇+I₈) to blow
        /// up by at least this factor.
        ablation_factor_min: Option<f64>,
    },
    /// Per-term ε-scaling sweep (optionally with the I₄₃ ratio check).
    Sweep {
        terms: Vec<String>,
        rule: [usize; 3],
        #[serde(default = "default_slope_tol")]
        slope_tol: f64,
        /// O(1) source-gap magnitude for the i3 family.
        #[serde(default = "default_sigma")]
        i3_sigma: f64,
        /// Probe-point flux gap for the i43 family.
        #[serde(default = "default_delta")]
        i43_delta: f64,
    },
    /// Forward-solver verification.
    Solve {
        mode: SolveMode,
        #[serde(default = "default_refinements")]
        refinements: usize,
        #[serde(default = "default_order_floor")]
        order_floor: f64,
    },
    /// Theorem-level one-sided bound check on the shipped families.
    TheoremCheck {
        #[serde(default = "default_slope_guard")]
        slope_guard: f64,
    },
    /// Reaction-diffusion-convection mapping and gap estimates.
    Rdc {
        velocity: VelocitySpec,
        reaction: RdcReaction,
        /// Scale exponent of the injected reaction perturbation.
        #[serde(default = "default_rdc_exponent")]
        perturbation_exponent: f64,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMode {
    Mms,
    Constant,
    Pair,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum RdcReaction {
    Zero,
    Logistic,
}

fn default_refine_factor() -> f64 {
    8.0
}

fn default_slope_tol() -> f64 {
    0.15
}

fn default_sigma() -> f64 {
    1.0
}

fn default_delta() -> f64 {
    0.1
}

fn default_refinements() -> usize {
    3
}

fn default_order_floor() -> f64 {
    1.8
}

fn default_slope_guard() -> f64 {
    0.2
}

fn default_rdc_exponent() -> f64 {
    2.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: String,
    #[serde(default)]
    pub formats: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub seed: u64,
    pub geometry: GeometryBlock,
    pub cgo: CgoBlock,
    #[serde(default)]
    pub model: Option<ModelBlock>,
    pub solver: Option<SolverBlock>,
    pub experiment: ExperimentBlock,
    pub output: OutputBlock,
}

impl Scenario {
    pub fn model(&self) -> ModelBlock {
        self.model.clone().unwrap_or_default()
    }

    /// The family configuration implied by the geometry/cgo/model blocks.
    pub fn family_config(&self) -> FamilyConfig {
        let model = self.model();
        FamilyConfig {
            dim: self.geometry.dim,
            kind: self.geometry.kind,
            curve: self.geometry.curve.clone(),
            b1: self.geometry.b1,
            l: self.geometry.l,
            half_length: self.geometry.half_length,
            h: model.h.clone(),
            flux: model.flux.clone(),
            mu: self.cgo.mu,
            lambda: self.cgo.lambda,
            alphas: self.cgo.alphas,
            case: self.cgo.case,
            use_proof_product: self.cgo.use_proof_product,
            gap: model.gap,
            shift: model.shift,
            grad_w_shift: model.grad_w_shift,
            window: model.window,
            probe_eta: model.probe_eta,
        }
    }

    pub fn eps_list(&self) -> Vec<f64> {
        if let Some(list) = &self.geometry.eps_list {
            list.clone()
        } else if let Some(eps) = self.geometry.eps {
            vec![eps]
        } else {
            vec![]
        }
    }

    /// The built-in selfcheck scenario used by the `selfcheck` subcommand.
    pub fn builtin_selfcheck(seed: u64) -> Scenario {
        Scenario {
            seed,
            geometry: GeometryBlock {
                dim: 2,
                kind: DomainKind::Nozzle,
                curve: CurveSpec::Sine {
                    amp: 0.5,
                    freq: 4.0 * std::f64::consts::PI,
                },
                eps: Some(0.1),
                eps_list: None,
                l: 1.0,
                half_length: 1.0,
                b1: 0.0,
            },
            cgo: CgoBlock {
                lambda: 1.0,
                mu: 1.0,
                s_fixed: Some(3.0),
                case: ScheduleCase::A,
                alphas: [0.5; 4],
                use_proof_product: true,
            },
            model: None,
            solver: None,
            experiment: ExperimentBlock::Selfcheck {},
            output: OutputBlock {
                dir: "out/selfcheck".into(),
                formats: vec!["json".into()],
            },
        }
    }
}

/// Parse and validate a scenario file.
pub fn load_scenario(bytes: &[u8]) -> Result<Scenario, ScenarioError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ScenarioError::Utf8)?;
    Ok(toml::from_str(text)?)
}

/// One acceptance-style check row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub predicted: String,
    pub measured: String,
    pub tolerance: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Check {
    pub fn passed(
        name: impl Into<String>,
        predicted: impl Into<String>,
        measured: impl Into<String>,
        tolerance: impl Into<String>,
        pass: bool,
    ) -> Check {
        Check {
            name: name.into(),
            predicted: predicted.into(),
            measured: measured.into(),
            tolerance: tolerance.into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
seed = 7
[geometry]
dim = 2
kind = "nozzle"
l = 1.0
half_length = 1.0
eps = 0.1
[geometry.curve]
spec_id = "sine"
[geometry.curve.params]
amp = 0.5
freq = 12.566370614359172
[cgo]
lambda = 1.0
mu = 1.0
s_fixed = 3.0
case = "a"
alphas = [0.5, 0.5, 0.5, 0.5]
[experiment]
type = "identity"
rule = [65, 65, 33]
tol_rel = 1e-6
[output]
dir = "out/test"
"#;

    #[test]
    fn minimal_scenario_parses() {
        let sc = load_scenario(MINIMAL.as_bytes()).unwrap();
        assert_eq!(sc.seed, 7);
        assert_eq!(sc.geometry.dim, 2);
        assert!(matches!(sc.experiment, ExperimentBlock::Identity { .. }));
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = MINIMAL.replace("seed = 7", "seed = 7\nbogus_key = 1");
        assert!(load_scenario(bad.as_bytes()).is_err());
        let bad2 = MINIMAL.replace("dim = 2", "dim = 2\nwhatever = \"x\"");
        assert!(load_scenario(bad2.as_bytes()).is_err());
    }
}
