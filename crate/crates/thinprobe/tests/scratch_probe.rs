//! Temporary exploration harness (numbers feeding the acceptance suite).

use std::sync::Arc;

use thinprobe::cgo::make_cgo;
use thinprobe::families::*;
use thinprobe::field::*;
use thinprobe::geometry::*;
use thinprobe::identity::*;
use thinprobe::model::*;
use thinprobe::probe::*;
use thinprobe::quad::QuadSpec;

fn manufactured_2d(eps: f64, l: f64) -> (ProbeSubdomain, ManufacturedPair) {
    let curve = build_curve(
        CurveSpec::Sine {
            amp: 0.5,
            freq: 4.0 * std::f64::consts::PI,
        },
        2,
        eps,
        1.5,
    )
    .unwrap();
    let sub = extract_probe_subdomain(&curve, 0.0, eps, l, 2, DomainKind::Nozzle).unwrap();
    let frame = rotation_frame(&curve, 0.0, 2).unwrap();
    let flux = rotate_flux(FluxSpec::BurgersLike, frame).unwrap();
    let span = sub.span;
    let psi = sum(vec![
        Arc::new(Monomial {
            coeff: span,
            axis: 0,
            power: 1,
        }) as FieldRef,
        Arc::new(Monomial {
            coeff: -1.0,
            axis: 0,
            power: 2,
        }),
    ]);
    let base = product(
        exp_time(1.0, -1.0),
        product(
            Arc::new(Wave {
                axis: 0,
                wavenumber: std::f64::consts::PI,
                phase: 0.0,
            }),
            Arc::new(MappedProfile {
                graph: sub.graph.clone(),
                axes: MapAxes::for_dim(2),
                eps,
                profile: TransverseProfile::CosPi,
            }),
        ),
    );
    let pair = manufacture_identity_pair(
        &sub,
        PairSpec {
            base_u: base,
            flux,
            h: HSpec::CubicFloor { delta: 0.5 },
            mu: 1.0,
            q: Some(0.0),
            psi,
            transverse: TransverseProfile::Bubble,
            shift: None,
            grad_w_shift: true,
        },
    )
    .unwrap();
    (sub, pair)
}

#[test]
#[ignore]
fn probe_identity_2d() {
    let eps = 0.1;
    let (sub, pair) = manufactured_2d(eps, 1.0);
    let cgo = make_cgo(3.0, 1.0, 1.0, &[-0.5f64.sqrt(), -0.5f64.sqrt()]).unwrap();
    for rule in [QuadSpec::new(65, 65, 33), QuadSpec::new(129, 129, 65)] {
        let t0 = std::time::Instant::now();
        let rep = eval_terms(&pair, &cgo, &sub, 0.0, eps * eps, rule).unwrap();
        println!(
            "rule {:?}: rel_res = ({:.3e}, {:.3e}), |res| = {:.3e}, max|I| = {:.3e}, {:?}",
            rule,
            rep.relative_residual_re,
            rep.relative_residual_im,
            (rep.residual.0.powi(2) + rep.residual.1.powi(2)).sqrt(),
            rep.max_term_abs,
            t0.elapsed()
        );
        for (k, t) in rep.terms.iter().enumerate() {
            println!("  I{} = ({:.6e}, {:.6e})", k + 1, t.0, t.1);
        }
    }
}

#[test]
#[ignore]
fn probe_identity_3d() {
    for kind in [DomainKind::Nozzle, DomainKind::Slab] {
        let eps = 0.1;
        let freq = 4.0 * std::f64::consts::PI;
        let b1 = std::f64::consts::PI / (2.0 * freq);
        let curve = build_curve(CurveSpec::Sine { amp: 0.5, freq }, 3, eps, 1.5).unwrap();
        let sub = extract_probe_subdomain(&curve, b1, eps, 1.0, 3, kind).unwrap();
        let frame = rotation_frame(&curve, b1, 3).unwrap();
        let flux = rotate_flux(
            FluxSpec::ConstantAdvection { c: [0.5, -0.3, 0.2] },
            frame,
        )
        .unwrap();
        let span = sub.span;
        let psi = sum(vec![
            constant(0.3),
            Arc::new(Monomial {
                coeff: span,
                axis: 1,
                power: 1,
            }) as FieldRef,
            Arc::new(Monomial {
                coeff: -1.0,
                axis: 1,
                power: 2,
            }),
        ]);
        let base = product(
            exp_time(1.0, -1.0),
            sum(vec![
                constant(1.0),
                Arc::new(Monomial {
                    coeff: 1.0,
                    axis: 1,
                    power: 1,
                }),
            ]),
        );
        let pair = manufacture_identity_pair(
            &sub,
            PairSpec {
                base_u: base,
                flux,
                h: HSpec::CubicFloor { delta: 0.5 },
                mu: 1.0,
                q: Some(0.0),
                psi,
                transverse: TransverseProfile::Bubble,
                shift: None,
                grad_w_shift: true,
            },
        )
        .unwrap();
        let r3 = (1.0f64 / 3.0).sqrt();
        let cgo = make_cgo(3.0, 1.0, 1.0, &[-r3, -r3, -r3]).unwrap();
        let rule = QuadSpec::new(33, 33, 33);
        let t0 = std::time::Instant::now();
        let rep = eval_terms(&pair, &cgo, &sub, 0.0, eps * eps, rule).unwrap();
        let full = (rep.residual.0.powi(2) + rep.residual.1.powi(2)).sqrt();
        let ablated = rep.residual_without_cut_terms().norm();
        println!(
            "{kind:?}: rel = ({:.3e}, {:.3e}), ablation factor = {:.3e}, time {:?}",
            rep.relative_residual_re,
            rep.relative_residual_im,
            ablated / full,
            t0.elapsed()
        );
    }
}

#[test]
#[ignore]
fn probe_sweeps() {
    let alphas = [0.5; 4];
    let l = 0.5;
    let eps_list = [0.2, 0.1, 0.05, 0.025];
    let rule = QuadSpec::new(33, 33, 17);
    for (name, family, term, predicted) in [
        (
            "i3",
            family_i3(l, alphas, 1.0),
            TermId::I3,
            2.0 + l,
        ),
        (
            "i5",
            family_i5_i6(l, alphas),
            TermId::I5,
            2.0 + l + 0.25 * 0.5,
        ),
        (
            "i6",
            family_i5_i6(l, alphas),
            TermId::I6,
            2.0 + l + 0.25 * 0.5,
        ),
    ] {
        let t0 = std::time::Instant::now();
        let rep = term_scaling_sweep(&family, term, &eps_list, rule, Some(predicted)).unwrap();
        println!(
            "{name}: slope = {:?} predicted {predicted} (obs {:?}) time {:?}",
            rep.measured_slope(),
            rep.observations
                .iter()
                .map(|o| o.abs)
                .collect::<Vec<_>>(),
            t0.elapsed()
        );
    }
    let fam = family_i43(l, alphas, 0.1);
    let rep = lower_bound_check_i43(&fam, &eps_list, rule).unwrap();
    println!("i43 const: {:?}", rep);
    let fam = family_zero_gap(l, alphas);
    let rep = lower_bound_check_i43(&fam, &eps_list, rule).unwrap();
    println!("i43 zero: {:?}", rep.status);
    let fam = family_i43_degrading(alphas);
    let rep = lower_bound_check_i43(&fam, &eps_list, rule).unwrap();
    println!("i43 degrading: {:?} ratios {:?}", rep.status, rep.ratios);
}

#[test]
#[ignore]
fn probe_theorem_families() {
    let eps_list = [0.2, 0.1, 0.05, 0.025];
    for family in [theorem_family_case_a(), theorem_family_case_b()] {
        let table = beta_tau_table(family.config.l, family.config.alphas).unwrap();
        let t0 = std::time::Instant::now();
        match theorem_bound_check(&family, &table, &eps_list, 42) {
            Ok(v) => println!(
                "{}: tau = {:.4}, slope = {:?}, bound_holds = {}, gaps = {:?}, time {:?}",
                family.label(),
                v.tau,
                v.measured_slope,
                v.bound_holds,
                v.gaps,
                t0.elapsed()
            ),
            Err(e) => println!("{}: ERROR {e}", family.label()),
        }
    }
    let adv = theorem_family_adversarial();
    let table = beta_tau_table(adv.config.l, adv.config.alphas).unwrap();
    match theorem_bound_check(&adv, &table, &eps_list, 42) {
        Ok(_) => println!("adversarial: UNEXPECTED PASS"),
        Err(e) => println!("adversarial: aborted as expected: {e}"),
    }
}
