//! Shipped ε-indexed experiment families.
//!
//! A family maps ε to a probe subdomain plus a manufactured pair, keeping
//! every declared constant under control as ε shrinks. Flux gaps are
//! injected through a shift `Y(x,t)` with vanishing normal component on the
//! lateral walls (so the pointwise flux balance survives), and source gaps
//! through the gap field `w` (whose `−μ∇w` flux compensation makes the
//! source gap reduce to `∂ₜ(H(u)−H(v)) + ∇·(F′(u)−F′(v)) + ∇·Y`).
//!
//! The per-term sweep families follow the arithmetic of the per-lemma
//! estimates, whose displayed bounds carry one `(e^{λε}−1)` time factor, so
//! the sweep window defaults to `T₂ − T₁ = ε`; identity-residual checks keep
//! the `ε²` window.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cgo::{make_cgo, schedule_s, CgoSchedule, ScheduleCase};
use crate::field::{
    constant, exp_time, product, sum, FieldRef, Monomial, SineTime, TransverseProfile,
};
use crate::geometry::{
    build_curve, extract_probe_subdomain, rotation_frame, CurveSpec, DomainKind, ProbeSubdomain,
};
use crate::identity::{FamilyPoint, IdentityError, PairFamily};
use crate::model::{
    manufacture_identity_pair, rotate_flux, ConfigTriplet, FluxSpec, HSpec, HolderMeta,
    ManufacturedPair, PairSpec, SourceSpec, VectorShift,
};
use crate::probe::{BoundFamily, BoundFamilyPoint, ProbeError};
use crate::Point;

/// Time-window convention of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule")]
pub enum WindowRule {
    /// `[0, ε²]`: the coupled-system convention; identity-residual default.
    EpsSquared,
    /// `[0, ε]`: the per-term estimate arithmetic; sweep default.
    Eps,
    Fixed { t1: f64, t2: f64 },
}

impl WindowRule {
    pub fn window(&self, eps: f64) -> (f64, f64) {
        match self {
            WindowRule::EpsSquared => (0.0, eps * eps),
            WindowRule::Eps => (0.0, eps),
            WindowRule::Fixed { t1, t2 } => (*t1, *t2),
        }
    }
}

/// Injected flux-gap shift.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ShiftSpec {
    /// `Y = (σ·x_axial, 0)`: constant divergence σ, zero normal component
    /// on flat lateral walls. Source-gap generator.
    AxialLinear { sigma: f64 },
    /// `Y_k = δ·ε^e · 4η(1−η)` on the designated transverse component:
    /// center value `δ·ε^e`, vanishing on the walls. Flux-gap generator.
    TransverseBubble { delta: f64, eps_exponent: f64 },
}

/// Gap field (`w`) specification.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GapFieldSpec {
    /// Amplitude exponent: `w` carries `ε^q` (after bump normalisation).
    pub q: f64,
    pub transverse: TransverseKind,
    /// Angular rate of the bounded `1 + sin/2` time factor; 0 disables it.
    pub time_omega: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum TransverseKind {
    Bubble,
    BubbleSquared,
    /// Fails the lateral `w = 0` condition; adversarial families only.
    ShiftedBubble,
}

impl TransverseKind {
    pub fn profile(&self) -> TransverseProfile {
        match self {
            TransverseKind::Bubble => TransverseProfile::Bubble,
            TransverseKind::BubbleSquared => TransverseProfile::BubbleSquared,
            TransverseKind::ShiftedBubble => TransverseProfile::ShiftedBubble(100),
        }
    }
}

/// Declarative family description; the single source of truth shared by
/// sweeps, theorem checks, the CLI, and tests.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub dim: usize,
    pub kind: DomainKind,
    pub curve: CurveSpec,
    pub b1: f64,
    pub l: f64,
    pub half_length: f64,
    pub h: HSpec,
    pub flux: FluxSpec,
    pub mu: f64,
    pub lambda: f64,
    pub alphas: [f64; 4],
    pub case: ScheduleCase,
    /// Use the proof α-product (α₃α₄) or the theorem one (α₂α₃).
    pub use_proof_product: bool,
    pub gap: Option<GapFieldSpec>,
    pub shift: Option<ShiftSpec>,
    /// `G′ = F′ − μ∇w − Y` when true; case (b) families turn it off to keep
    /// the flux realizations identical.
    pub grad_w_shift: bool,
    pub window: WindowRule,
    /// Transverse probe position η₀ (axial position is the midpoint).
    pub probe_eta: f64,
}

impl FamilyConfig {
    pub fn product(&self) -> f64 {
        if self.use_proof_product {
            self.alphas[2] * self.alphas[3]
        } else {
            self.alphas[1] * self.alphas[2]
        }
    }

    fn axial_axis(&self) -> usize {
        if self.dim == 2 {
            0
        } else {
            1
        }
    }

    /// Normalised axial bump `x(span−x)·4/span²` along the subdomain axis.
    fn normalized_bump(&self, span: f64) -> FieldRef {
        let axis = self.axial_axis();
        let scale = 4.0 / (span * span);
        sum(vec![
            Arc::new(Monomial {
                coeff: span * scale,
                axis,
                power: 1,
            }),
            Arc::new(Monomial {
                coeff: -scale,
                axis,
                power: 2,
            }),
        ])
    }

    /// Base state `u = e^{−t}(1 + x_axial)`: ε-uniform C¹ size.
    fn base_field(&self) -> FieldRef {
        product(
            exp_time(1.0, -1.0),
            sum(vec![
                constant(1.0),
                Arc::new(Monomial {
                    coeff: 1.0,
                    axis: self.axial_axis(),
                    power: 1,
                }),
            ]),
        )
    }

    fn psi(&self, span: f64) -> FieldRef {
        let bump = self.normalized_bump(span);
        match self.gap {
            Some(g) if g.time_omega != 0.0 => product(
                bump,
                Arc::new(SineTime {
                    offset: 1.0,
                    amplitude: 0.5,
                    omega: g.time_omega,
                    phase: 0.3,
                }),
            ),
            _ => bump,
        }
    }

    fn build_shift(&self, sub: &ProbeSubdomain, eps: f64) -> Option<VectorShift> {
        match self.shift {
            None => None,
            Some(ShiftSpec::AxialLinear { sigma }) => {
                let axis = self.axial_axis();
                let mut components: [Option<FieldRef>; 3] = [None, None, None];
                components[axis] = Some(Arc::new(Monomial {
                    coeff: sigma,
                    axis,
                    power: 1,
                }) as FieldRef);
                Some(VectorShift { components })
            }
            Some(ShiftSpec::TransverseBubble {
                delta,
                eps_exponent,
            }) => {
                let component = if self.dim == 2 { 1 } else { 2 };
                Some(crate::model::transverse_bubble_shift(
                    sub,
                    delta * eps.powf(eps_exponent),
                    component,
                ))
            }
        }
    }

    /// Build the subdomain and pair at one ε.
    pub fn build(&self, eps: f64) -> Result<(ProbeSubdomain, Arc<ManufacturedPair>), String> {
        let curve = build_curve(self.curve.clone(), self.dim, eps, self.half_length)
            .map_err(|e| e.to_string())?;
        let sub = extract_probe_subdomain(&curve, self.b1, eps, self.l, self.dim, self.kind)
            .map_err(|e| e.to_string())?;
        let frame = rotation_frame(&curve, self.b1, self.dim).map_err(|e| e.to_string())?;
        let flux = rotate_flux(self.flux.clone(), frame).map_err(|e| e.to_string())?;
        let shift = self.build_shift(&sub, eps);
        let pair = manufacture_identity_pair(
            &sub,
            PairSpec {
                base_u: self.base_field(),
                flux,
                h: self.h.clone(),
                mu: self.mu,
                q: self.gap.map(|g| g.q),
                psi: self.psi(sub.span),
                transverse: self
                    .gap
                    .map(|g| g.transverse.profile())
                    .unwrap_or(TransverseProfile::Bubble),
                shift,
                grad_w_shift: self.grad_w_shift,
            },
        )
        .map_err(|e| e.to_string())?;
        Ok((sub, Arc::new(pair)))
    }

    pub fn probe_point(&self, sub: &ProbeSubdomain, window: (f64, f64)) -> (Point, f64) {
        (
            sub.point(0.5 * sub.span, 0.5, self.probe_eta),
            0.5 * (window.0 + window.1),
        )
    }

    pub fn schedule(&self, eps: f64) -> Result<CgoSchedule, String> {
        schedule_s(eps, self.l, self.case, &self.alphas, self.product()).map_err(|e| e.to_string())
    }

    /// CGO direction: all components strictly negative, unit length.
    pub fn direction(&self) -> Vec<f64> {
        if self.dim == 2 {
            let r = 0.5f64.sqrt();
            vec![-r, -r]
        } else {
            let r = (1.0f64 / 3.0).sqrt();
            vec![-r, -r, -r]
        }
    }
}

/// A sweep family: schedules the CGO probe per ε.
pub struct ManufacturedFamily {
    pub config: FamilyConfig,
    pub name: String,
}

impl PairFamily for ManufacturedFamily {
    fn at(&self, eps: f64) -> Result<FamilyPoint, IdentityError> {
        let (sub, pair) = self
            .config
            .build(eps)
            .map_err(|message| IdentityError::Family { eps, message })?;
        let schedule = self
            .config
            .schedule(eps)
            .map_err(|message| IdentityError::Family { eps, message })?;
        let cgo = make_cgo(
            schedule.s,
            self.config.lambda,
            self.config.mu,
            &self.config.direction(),
        )?;
        let window = self.config.window.window(eps);
        let probe_point = Some(self.config.probe_point(&sub, window));
        Ok(FamilyPoint {
            sub,
            pair,
            cgo,
            schedule,
            window,
            probe_point,
        })
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

/// Theorem-check family: no CGO schedule, but declared Hölder metadata and
/// a uniform C¹ bound that the hypothesis validator enforces per ε.
pub struct TheoremFamily {
    pub config: FamilyConfig,
    pub name: String,
    pub h_meta: HolderMeta,
    pub flux_meta: HolderMeta,
    pub source_meta: HolderMeta,
    pub c4_bound: f64,
}

impl BoundFamily for TheoremFamily {
    fn case(&self) -> ScheduleCase {
        self.config.case
    }

    fn at(&self, eps: f64) -> Result<BoundFamilyPoint, ProbeError> {
        let (sub, pair) = self
            .config
            .build(eps)
            .map_err(|message| ProbeError::Family { eps, message })?;
        let mut cfg = ConfigTriplet::new(
            self.config.h.clone(),
            self.config.flux.clone(),
            SourceSpec::Zero,
            self.config.mu,
        );
        cfg.h_meta = self.h_meta;
        cfg.flux_meta = self.flux_meta;
        cfg.source_meta = self.source_meta;
        let window = self.config.window.window(eps);
        let probe_point = Some(self.config.probe_point(&sub, window));
        Ok(BoundFamilyPoint {
            sub,
            pair,
            cfg,
            window,
            probe_point,
            c4_bound: self.c4_bound,
        })
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

fn straight2() -> CurveSpec {
    CurveSpec::Straight {
        direction: [1.0, 0.0, 0.0],
    }
}

fn base_family(l: f64, alphas: [f64; 4]) -> FamilyConfig {
    FamilyConfig {
        dim: 2,
        kind: DomainKind::Nozzle,
        curve: straight2(),
        b1: 0.0,
        l,
        half_length: 1.5,
        h: HSpec::Identity,
        flux: FluxSpec::None,
        mu: 1.0,
        lambda: 1.0,
        alphas,
        case: ScheduleCase::A,
        use_proof_product: true,
        gap: None,
        shift: None,
        grad_w_shift: true,
        window: WindowRule::Eps,
        probe_eta: 0.5,
    }
}

/// `I₃` sweep family: O(1) source gap from the axial-linear shift, no `w`.
pub fn family_i3(l: f64, alphas: [f64; 4], sigma: f64) -> ManufacturedFamily {
    let mut config = base_family(l, alphas);
    config.shift = Some(ShiftSpec::AxialLinear { sigma });
    ManufacturedFamily {
        config,
        name: "i3-source-gap".into(),
    }
}

/// `I₅`/`I₆` sweep family: cubic-floor `H` and a gap field at the declared
/// Hölder scale `q = α₁α₄·l₀`.
pub fn family_i5_i6(l: f64, alphas: [f64; 4]) -> ManufacturedFamily {
    let mut config = base_family(l, alphas);
    config.h = HSpec::CubicFloor { delta: 0.5 };
    let l0 = l.min(1.0);
    config.gap = Some(GapFieldSpec {
        q: alphas[0] * alphas[3] * l0,
        transverse: TransverseKind::Bubble,
        time_omega: 1.0,
    });
    ManufacturedFamily {
        config,
        name: "i5-i6-h-gap".into(),
    }
}

/// `I₄₃` lower-bound family: constant designated flux gap `δ` at the probe
/// point via the transverse bubble shift.
pub fn family_i43(l: f64, alphas: [f64; 4], delta: f64) -> ManufacturedFamily {
    let mut config = base_family(l, alphas);
    config.shift = Some(ShiftSpec::TransverseBubble {
        delta,
        eps_exponent: 0.0,
    });
    ManufacturedFamily {
        config,
        name: "i43-constant-gap".into(),
    }
}

/// Zero-gap family: everything at the floor.
pub fn family_zero_gap(l: f64, alphas: [f64; 4]) -> ManufacturedFamily {
    ManufacturedFamily {
        config: base_family(l, alphas),
        name: "zero-gap".into(),
    }
}

/// Diagnostic family whose probe-point gap decays (sign-alternating
/// transverse derivative, amplitude shrinking with ε): the lower-bound
/// ratio degrades and the check reports it.
pub fn family_i43_degrading(alphas: [f64; 4]) -> ManufacturedFamily {
    let mut config = base_family(0.5, alphas);
    config.gap = Some(GapFieldSpec {
        q: 1.6,
        transverse: TransverseKind::Bubble,
        time_omega: 0.0,
    });
    config.probe_eta = 0.25;
    ManufacturedFamily {
        config,
        name: "i43-degrading".into(),
    }
}

/// Shipped case (a) theorem family: flux gap `δ·ε^{α₃}` through the
/// transverse bubble shift, its Hölder quotient uniform in ε by
/// construction, with τ = 0.25 at `l = 0.78125`, α = (0.9, 0.9, 0.4, 0.9).
pub fn theorem_family_case_a() -> TheoremFamily {
    let alphas = [0.9, 0.9, 0.4, 0.9];
    let mut config = base_family(0.78125, alphas);
    config.curve = CurveSpec::LinearTilt { slope: 0.05 };
    config.case = ScheduleCase::A;
    config.shift = Some(ShiftSpec::TransverseBubble {
        delta: 0.1,
        eps_exponent: alphas[2],
    });
    config.window = WindowRule::EpsSquared;
    TheoremFamily {
        config,
        name: "theorem-case-a".into(),
        h_meta: HolderMeta {
            alpha: alphas[0],
            constant: 4.0,
        },
        flux_meta: HolderMeta {
            alpha: alphas[2],
            constant: 4.0,
        },
        source_meta: HolderMeta {
            alpha: alphas[1],
            constant: 4.0,
        },
        c4_bound: 8.0,
    }
}

/// Shipped case (b) theorem family: zero flux gap and `h = 0` (quadratic
/// transverse profile), source gap `~ ε^{α₂}` — the steepest scale whose
/// Hölder quotients stay uniform — against τ₁ = 0.1.
pub fn theorem_family_case_b() -> TheoremFamily {
    let alphas = [0.5, 0.5, 0.5, 0.5];
    let mut config = base_family(0.5, alphas);
    config.h = HSpec::CubicFloor { delta: 0.5 };
    config.case = ScheduleCase::B;
    config.grad_w_shift = false;
    config.gap = Some(GapFieldSpec {
        q: alphas[1] + 2.0,
        transverse: TransverseKind::BubbleSquared,
        time_omega: 1.0,
    });
    config.window = WindowRule::EpsSquared;
    TheoremFamily {
        config,
        name: "theorem-case-b".into(),
        h_meta: HolderMeta {
            alpha: alphas[0],
            constant: 16.0,
        },
        flux_meta: HolderMeta {
            alpha: alphas[2],
            constant: 4.0,
        },
        source_meta: HolderMeta {
            alpha: alphas[1],
            constant: 16.0,
        },
        c4_bound: 8.0,
    }
}

/// Adversarial family: O(1) gap with the lateral `w = 0` condition broken
/// (shifted transverse profile). The hypothesis validator must abort.
pub fn theorem_family_adversarial() -> TheoremFamily {
    let mut family = theorem_family_case_b();
    family.name = "theorem-adversarial".into();
    if let Some(gap) = family.config.gap.as_mut() {
        gap.q = 0.0;
        gap.transverse = TransverseKind::ShiftedBubble;
    }
    family
}
