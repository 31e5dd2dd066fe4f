use euler_fan::patching::{galilean_shift, reflect};
use euler_fan::riemann1d::{
    classify, evaluate_selfsimilar, hugoniot_density, isentrope_density, rarefaction_branch, shock_branch,
    solve_middle, vacuum_bound, wave_curve, RiemannData, SelfSimilarSolution, WaveKind, DEFAULT_TOL_CLS,
};
use euler_fan::verifier::{verify_jumps, verify_rarefaction, Tolerances};
use euler_fan::{Error, GasModel, PrimState};
use proptest::prelude::*;

fn st(rho: f64, u: f64, v: f64, p: f64) -> PrimState {
    PrimState::new(rho, u, v, p).unwrap()
}

fn data(cv: f64, l: PrimState, r: PrimState) -> RiemannData {
    RiemannData::new(GasModel::new(cv).unwrap(), l, r).unwrap()
}

fn case13() -> RiemannData {
    data(1.5, st(1.0, 0.0, (1.0f64 / 3.0).sqrt(), 1.0), st(1.0, 0.0, 0.0, 2.0))
}

#[test]
fn gas_rejects_small_cv() {
    assert!(GasModel::new(0.5).is_err());
    assert!(GasModel::new(f64::NAN).is_err());
    let g = GasModel::new(1.5).unwrap();
    assert!((g.gamma() - 5.0 / 3.0).abs() < 1e-15);
}

#[test]
fn thermodynamics_of_a_unit_state() {
    let g = GasModel::new(2.5).unwrap();
    let s = st(1.0, 0.0, 0.0, 1.0);
    assert_eq!(g.internal_energy(&s).unwrap(), 2.5);
    assert_eq!(g.entropy(&s).unwrap(), 0.0);
    assert!((g.sound_speed(&s).unwrap() - 1.4f64.sqrt()).abs() < 1e-15);
    assert!(PrimState::new(-1.0, 0.0, 0.0, 1.0).is_err());
}

#[test]
fn pure_shock_with_contact() {
    let d = case13();
    let p = classify(&d).unwrap();
    assert_eq!(p.row(), 13);
    assert_eq!((p.left_wave, p.right_wave, p.contact), (WaveKind::Shock, WaveKind::None, true));
    let m = p.middle.unwrap();
    assert!((m.p - 2.0).abs() < 1e-12);
    assert!((m.rho_left - 1.5).abs() < 1e-12);
    assert!(m.v.abs() < 1e-12);
}

#[test]
fn equal_states_are_row_one() {
    let s = st(1.3, 0.2, -0.4, 0.9);
    let p = classify(&data(1.0, s, s)).unwrap();
    assert_eq!(p.row(), 1);
    assert!(p.middle.is_none());
}

#[test]
fn separating_states_open_a_vacuum() {
    let d = data(1.5, st(1.0, 0.0, -10.0, 1.0), st(1.0, 0.0, 10.0, 1.0));
    assert!(matches!(solve_middle(&d), Err(Error::Vacuum { .. })));
    assert!(matches!(classify(&d), Err(Error::Vacuum { .. })));
}

#[test]
fn sample_outside_the_fan_returns_the_data() {
    let d = data(1.5, st(1.0, 0.1, 0.5, 1.0), st(0.4, -0.2, -0.1, 3.0));
    let sol = SelfSimilarSolution::new(&d, DEFAULT_TOL_CLS).unwrap();
    let [a, b] = sol.extent();
    assert_eq!(sol.sample(a - 1.0), d.left);
    assert_eq!(sol.sample(b + 1.0), d.right);
    let pattern = classify(&d).unwrap();
    assert_eq!(evaluate_selfsimilar(&d, &pattern, a - 1.0).unwrap(), d.left);
}

#[test]
fn jumps_of_the_solution_verify() {
    let tol = Tolerances::default();
    let d = data(1.0, st(2.0, 0.0, 1.0, 3.0), st(1.0, 0.5, -1.0, 1.0));
    let sol = SelfSimilarSolution::new(&d, DEFAULT_TOL_CLS).unwrap();
    assert_eq!(sol.pattern.shock_count(), 2);
    let rep = verify_jumps(&sol.jumps(), &d.gas, &tol).unwrap();
    assert!(rep.passed, "{:?}", rep.failures());
}

#[test]
fn rarefaction_ends_satisfy_the_invariants() {
    let g = GasModel::new(1.5).unwrap();
    let d = data(1.5, st(1.0, 0.0, -0.5, 1.0), st(1.0, 0.0, 0.5, 1.0));
    let m = solve_middle(&d).unwrap();
    assert!(m.p < 1.0);
    let tol = Tolerances::default();
    assert!(verify_rarefaction(&d.left, &m.left_state(), 1, &g, &tol).unwrap().passed);
    assert!(verify_rarefaction(&m.right_state(), &d.right, 3, &g, &tol).unwrap().passed);
}

#[test]
fn branches_meet_at_the_anchor() {
    let g = GasModel::new(2.5).unwrap();
    assert_eq!(rarefaction_branch(&g, 1.2, 0.7, 0.7).unwrap(), 0.0);
    assert!(shock_branch(&g, 1.2, 0.7, 0.7).is_err());
    assert_eq!(wave_curve(&g, 1.2, 0.7, 0.7).unwrap(), 0.0);
    assert!((isentrope_density(&g, 1.2, 0.7, 0.7).unwrap() - 1.2).abs() < 1e-15);
    assert!((hugoniot_density(&g, 1.2, 0.7, 0.7 * (1.0 + 1e-12)).unwrap() - 1.2).abs() < 1e-11);
    // rarefaction to zero pressure is the vacuum bound
    let tiny = rarefaction_branch(&g, 1.2, 0.7, 1e-300).unwrap();
    assert!((tiny - vacuum_bound(&g, 1.2, 0.7)).abs() < 1e-12);
}

fn state() -> impl Strategy<Value = PrimState> {
    (-2.0f64..2.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_map(|(lr, u, v, lp)| st(10f64.powf(lr), u, v, 10f64.powf(lp / 2.0)))
}

fn cv() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.51), Just(1.0), Just(1.5), Just(2.5), Just(5.0), 0.6f64..8.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn middle_pressure_solves_the_velocity_balance(cv in cv(), l in state(), r in state()) {
        let d = data(cv, l, r);
        if let Ok(m) = solve_middle(&d) {
            let g = d.gas;
            let vl = l.v - wave_curve(&g, l.rho, l.p, m.p).unwrap();
            let vr = r.v + wave_curve(&g, r.rho, r.p, m.p).unwrap();
            let scale = l.v.abs().max(r.v.abs()).max(vl.abs()).max(1e-3);
            prop_assert!((vl - vr).abs() / scale < 1e-10);
            prop_assert!((vl - m.v).abs() / scale < 1e-10);
        }
    }

    #[test]
    fn hugoniot_states_satisfy_the_jump_relations(cv in cv(), rho in 0.1f64..10.0, p in 0.1f64..10.0, ratio in 1.001f64..100.0) {
        // 3-shock from a state at rest to a higher pressure behind it
        let g = GasModel::new(cv).unwrap();
        let right = st(rho, 0.0, 0.0, p);
        let pb = p * ratio;
        let behind = st(hugoniot_density(&g, rho, p, pb).unwrap(), 0.0, shock_branch(&g, rho, p, pb).unwrap(), pb);
        let sigma = -right.rho * right.v / (behind.rho - right.rho) + behind.rho * behind.v / (behind.rho - right.rho);
        let jump = euler_fan::riemann1d::Jump { left: behind, right, speed: sigma };
        let rep = verify_jumps(&[jump], &g, &Tolerances::default()).unwrap();
        prop_assert!(rep.passed, "{:?}", rep.failures());
        prop_assert!(sigma > 0.0);
    }

    #[test]
    fn shift_preserves_the_row(cv in cv(), l in state(), r in state(), a in (-5.0f64..5.0, -5.0f64..5.0)) {
        let d = data(cv, l, r);
        if let Ok(p) = classify(&d) {
            let shifted = classify(&galilean_shift(&d, [a.0, a.1])).unwrap();
            prop_assert_eq!(shifted.row(), p.row());
        }
    }

    #[test]
    fn reflection_swaps_families(cv in cv(), l in state(), r in state()) {
        let d = data(cv, l, r);
        if let Ok(p) = classify(&d) {
            let q = classify(&reflect(&d)).unwrap();
            prop_assert_eq!((q.left_wave, q.contact, q.right_wave), (p.right_wave, p.contact, p.left_wave));
        }
    }

    #[test]
    fn samples_are_admissible_states(cv in cv(), l in state(), r in state(), xi in -10.0f64..10.0) {
        let d = data(cv, l, r);
        if let Ok(sol) = SelfSimilarSolution::new(&d, DEFAULT_TOL_CLS) {
            let s = sol.sample(xi);
            prop_assert!(s.rho > 0.0 && s.p > 0.0 && s.v.is_finite() && s.u.is_finite());
        }
    }
}
