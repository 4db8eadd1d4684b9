use std::f64::consts::PI;

use lzs_core::dynamics::{default_config, evolve, propagate, Conditional};
use lzs_core::hamiltonians::{
    default_harmonic_cutoff, hamiltonian, hermiticity_defect, Frame, FrameGenerator,
};
use lzs_core::numerics::{integrate, IntegratorConfig};
use lzs_core::presets::find;
use lzs_core::sweeps::{scan_2d, Deviation, GridAxis, Metric};
use lzs_core::{DecayRates, DriveParams, TwoLevelState, UnitSystem};
use num_complex::Complex64;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = DriveParams> {
    (0.0f64..20.0, -20.0f64..20.0, 0.5f64..15.0, -PI..PI)
        .prop_map(|(a, d, w, phi)| DriveParams::rescaled(a, d, w).unwrap().with_phase(phi))
}

fn distance(a: &TwoLevelState, b: &TwoLevelState) -> f64 {
    ((a.c_g - b.c_g).norm_sqr() + (a.c_e - b.c_e).norm_sqr()).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norm_is_conserved(p in params(), cycles in 0.1f64..3.0) {
        let traj = propagate(&p, Frame::Lab, None, TwoLevelState::ground(), p.duration_for_cycles(cycles), &default_config(&p)).unwrap();
        for r in &traj.rows {
            prop_assert!((r.norm - 1.0).abs() < 1e-8);
            prop_assert!((r.p_g + r.p_e - r.norm).abs() < 1e-12);
        }
        prop_assert!(traj.rows.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn lab_and_rotated_agree_on_g(p in params(), cycles in 0.1f64..3.0) {
        let t = p.duration_for_cycles(cycles);
        let cfg = default_config(&p);
        let lab = evolve(&p, Frame::Lab, None, TwoLevelState::ground(), t, &cfg).unwrap();
        let rot = evolve(&p, Frame::Rotated, None, TwoLevelState::ground(), t, &cfg).unwrap();
        prop_assert!((lab.c_g - rot.c_g).norm() < 1e-8);
        prop_assert!((lab.p_e() - rot.p_e()).abs() < 1e-8);
    }

    #[test]
    fn floquet_converges_to_rotated(p in params(), cycles in 0.1f64..2.0) {
        let t = p.duration_for_cycles(cycles);
        let cfg = IntegratorConfig::default();
        let rot = evolve(&p, Frame::Rotated, None, TwoLevelState::ground(), t, &cfg).unwrap();
        let n = default_harmonic_cutoff(&p).unwrap();
        let flo = evolve(&p, Frame::FloquetTruncated(n), None, TwoLevelState::ground(), t, &cfg).unwrap();
        prop_assert!(distance(&rot, &flo) < 1e-6);
    }

    #[test]
    fn decay_is_monotone(p in params(), gg in 0.0f64..0.5, ge in 0.0f64..0.5) {
        let d = DecayRates::new(gg, ge, UnitSystem::Rescaled).unwrap();
        let traj = propagate(&p, Frame::Lab, Some(&d), TwoLevelState::ground(), p.duration_for_cycles(2.0), &default_config(&p)).unwrap();
        prop_assert!(traj.rows.windows(2).all(|w| w[1].norm <= w[0].norm + 1e-10));
        prop_assert!(traj.rows.iter().all(|r| r.norm <= 1.0 + 1e-10));
    }

    #[test]
    fn every_frame_is_hermitian(p in params(), t in 0.0f64..50.0) {
        for f in [Frame::Lab, Frame::Rotated, Frame::Interaction, Frame::FloquetTruncated(8)] {
            prop_assert!(hermiticity_defect(&hamiltonian(&p, f, t).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn forward_then_backward_recovers_start(a in 0.0f64..20.0, d in -20.0f64..20.0, w in 0.5f64..15.0, cycles in 0.1f64..3.0) {
        let p = DriveParams::rescaled(a, d, w).unwrap();
        let t = p.duration_for_cycles(cycles);
        let cfg = IntegratorConfig::default().with_sample_interval(t);
        let gen = FrameGenerator::new(p, Frame::Lab).unwrap();
        let y0 = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let fwd = integrate(&gen, y0, 0.0, t, &cfg).unwrap();
        let reversed = |s: f64| {
            let h = gen.matrix(t - s);
            h.map(|row| row.map(|x| -x))
        };
        let back = integrate(&reversed, fwd.final_state, 0.0, t, &cfg).unwrap();
        prop_assert!((back.final_state[0] - y0[0]).norm() < 1e-8);
        prop_assert!((back.final_state[1] - y0[1]).norm() < 1e-8);
    }
}

#[test]
fn equal_rates_decay_exponentially_with_weak_coupling() {
    let p = DriveParams::new(1e-9, 3.0, 2.0, 1.0, UnitSystem::Rescaled).unwrap();
    let d = DecayRates::new(0.2, 0.2, UnitSystem::Rescaled).unwrap();
    let traj = propagate(
        &p,
        Frame::Lab,
        Some(&d),
        TwoLevelState::ground(),
        10.0,
        &default_config(&p),
    )
    .unwrap();
    for r in &traj.rows {
        assert!((r.norm - (-0.2 * r.t).exp()).abs() < 1e-9);
    }
}

#[test]
fn conditional_generator_adds_loss_only_on_diagonal() {
    let p = DriveParams::rescaled(1.0, 2.0, 3.0).unwrap();
    let d = DecayRates::new(0.4, 0.2, UnitSystem::Rescaled).unwrap();
    let g = Conditional::new(FrameGenerator::new(p, Frame::Lab).unwrap(), Some(&d));
    use lzs_core::numerics::Generator;
    let h = g.hamiltonian(0.3);
    let h0 = hamiltonian(&p, Frame::Lab, 0.3).unwrap();
    assert_eq!(h[0][1], h0[0][1]);
    assert!((h[0][0] - h0[0][0] - Complex64::new(0.0, -0.2)).norm() < 1e-15);
    assert!((h[1][1] - h0[1][1] - Complex64::new(0.0, -0.1)).norm() < 1e-15);
}

#[test]
fn phase_deviation_map_is_symmetric() {
    let cs = find("cs_robust").unwrap();
    let axes = [
        GridAxis::new(Deviation::Amplitude, -0.05, 0.05, 3),
        GridAxis::new(Deviation::Phase, -0.5, 0.5, 11),
    ];
    let cfg = IntegratorConfig {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        ..IntegratorConfig::default()
    };
    for metric in [Metric::Fidelity, Metric::PGFinal, Metric::PhaseOverPi] {
        let g = scan_2d(
            &cs.params().unwrap(),
            cs.duration().unwrap(),
            None,
            axes,
            metric,
            &cfg,
        )
        .unwrap();
        for i in 0..3 {
            let row = g.row(i);
            for j in 0..11 {
                assert!(
                    (row[j] - row[10 - j]).abs() < 1e-6,
                    "{metric:?} row {i} col {j}"
                );
            }
        }
    }
}

#[test]
fn phase_deviation_map_is_nearly_flat() {
    let cs = find("cs_robust").unwrap();
    let axes = [
        GridAxis::new(Deviation::Phase, -0.5, 0.5, 11),
        GridAxis::new(Deviation::Frequency, -0.01, 0.01, 3),
    ];
    let d = cs.decay().unwrap();
    let g = scan_2d(
        &cs.params().unwrap(),
        cs.duration().unwrap(),
        Some(&d),
        axes,
        Metric::Fidelity,
        &IntegratorConfig::default(),
    )
    .unwrap();
    let col = g.column(1);
    let spread = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - col.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 1e-3, "spread {spread}");
}
