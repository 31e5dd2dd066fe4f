use euler_fan::riemann1d::{classify, Jump, RiemannData, SelfSimilarSolution, DEFAULT_TOL_CLS};
use euler_fan::subsolution::{construct, rho_k, simplified_residuals, smallness_upper, SubsolutionParams};
use euler_fan::verifier::{
    lift, slacks, subsolution_margins, verify_jumps, verify_solution, verify_subsolution, FanQuintuple, InequalityKind,
    Region, ResidualReport, Tolerances,
};
use euler_fan::{GasModel, PrimState};
use proptest::prelude::*;

fn st(rho: f64, u: f64, v: f64, p: f64) -> PrimState {
    PrimState::new(rho, u, v, p).unwrap()
}

fn window_data(cv: f64, ratio: f64, level: f64) -> RiemannData {
    let g = GasModel::new(cv).unwrap();
    let w = level * smallness_upper(&g, 1.0, ratio).unwrap();
    RiemannData::new(g, st(1.0, 0.0, w.sqrt(), 1.0), st(1.0, 0.0, 0.0, ratio)).unwrap()
}

/// Outcome of the reduced system: residuals, ordering and positive slacks.
fn simplified_pass(sub: &euler_fan::subsolution::FanSubsolution, g: &GasModel, tol: f64) -> bool {
    let residuals_ok = simplified_residuals(sub, g).iter().all(|(_, r)| r.abs() <= tol);
    let [mu0, mu1, _] = sub.mu;
    let order_ok = mu0 < mu1 && mu1 < 0.0;
    let slacks_ok = sub.eps.iter().chain(&sub.eps_tilde).all(|&e| e > 0.0);
    residuals_ok && order_ok && slacks_ok
}

fn scaled(q: &FanQuintuple, k: f64) -> FanQuintuple {
    let mut out = *q;
    for r in out.regions.iter_mut() {
        r.rho *= k;
        r.p *= k;
    }
    for s in [&mut out.left, &mut out.right] {
        s.rho *= k;
        s.p *= k;
    }
    out
}

fn signs(rep: &ResidualReport) -> Vec<(String, bool)> {
    rep.inequalities.iter().map(|c| (c.id.clone(), c.margin > 0.0)).collect()
}

#[test]
fn report_lists_every_condition() {
    let d = window_data(1.5, 2.0, 0.99);
    let g = d.gas;
    let rk = rho_k(&d).unwrap();
    let sub = construct(&d, &g, &SubsolutionParams { rho1: rk - 1e-3 * (rk - 1.0), rho2: rk * (1.0 + 1e-3) }).unwrap();
    let rep = verify_subsolution(&sub.quintuple(), &g, &Tolerances::default()).unwrap();
    for side in ["left", "middle", "right"] {
        for q in ["mass", "momentum_x", "momentum_y", "energy"] {
            assert!(rep.equation(&format!("{side}.{q}")).is_some(), "{side}.{q}");
        }
        let e = rep.inequality(&format!("{side}.entropy")).unwrap();
        assert_eq!(e.kind, InequalityKind::NonStrict);
    }
    for id in ["order.mu1_minus_mu0", "order.mu2_minus_mu1", "subsolution.1.trace", "subsolution.2.determinant"] {
        assert_eq!(rep.inequality(id).unwrap().kind, InequalityKind::Strict);
    }
    assert!(rep.passed, "{:?}", rep.failures());
}

#[test]
fn perturbed_quintuple_names_the_broken_condition() {
    let d = window_data(1.0, 10.0, 0.95);
    let g = d.gas;
    let rk = rho_k(&d).unwrap();
    let sub = construct(&d, &g, &SubsolutionParams { rho1: rk - 1e-4 * (rk - 1.0), rho2: rk * (1.0 + 1e-4) }).unwrap();
    let mut q = sub.quintuple();
    q.regions[1].rho *= 1.01;
    let rep = verify_subsolution(&q, &g, &Tolerances::default()).unwrap();
    assert!(!rep.passed);
    let failed = rep.failures();
    assert!(failed.iter().any(|f| f == "middle.mass"), "{failed:?}");
    // the right interface is stationary with no mass flux on either side
    assert!(rep.equation("right.mass").unwrap().passed);
    assert!(!failed.iter().any(|f| f == "left.mass"), "{failed:?}");
}

#[test]
fn non_positive_density_is_a_domain_error() {
    let r = Region { rho: -1.0, alpha: 0.0, beta: 0.0, gamma: 0.0, delta: 0.0, c: 1.0, p: 1.0 };
    let s = st(1.0, 0.0, 0.0, 1.0);
    let q = FanQuintuple { mu: [-1.0, -0.5, 0.0], regions: [r, r], left: s, right: s };
    let g = GasModel::new(1.5).unwrap();
    assert!(verify_subsolution(&q, &g, &Tolerances::default()).is_err());
    let bad = Tolerances { eq: 0.0, cls: 1e-9 };
    assert!(verify_solution(&[s], &[], &g, &bad).is_err());
}

#[test]
fn speeds_must_not_decrease() {
    let g = GasModel::new(1.5).unwrap();
    let s = st(1.0, 0.0, 0.0, 1.0);
    assert!(verify_solution(&[s, s, s], &[1.0, 0.0], &g, &Tolerances::default()).is_err());
    assert!(verify_solution(&[s, s], &[1.0, 0.0], &g, &Tolerances::default()).is_err());
}

#[test]
fn admissible_shocks_pass_and_expansive_ones_fail() {
    let tol = Tolerances::default();
    let d = RiemannData::new(GasModel::new(2.5).unwrap(), st(1.0, 0.0, 1.0, 1.0), st(1.0, 0.0, -1.0, 1.0)).unwrap();
    let sol = SelfSimilarSolution::new(&d, DEFAULT_TOL_CLS).unwrap();
    let jumps = sol.jumps();
    let shocks: Vec<Jump> = jumps.iter().copied().filter(|j| j.left.p != j.right.p).collect();
    assert_eq!(shocks.len(), 2);
    assert!(verify_jumps(&shocks, &d.gas, &tol).unwrap().passed);
    for j in shocks {
        let swapped = Jump { left: j.right, right: j.left, speed: j.speed };
        let rep = verify_jumps(&[swapped], &d.gas, &tol).unwrap();
        assert_eq!(rep.failures(), vec!["jump0.entropy".to_string()]);
    }
}

fn region() -> impl Strategy<Value = Region> {
    (0.1f64..5.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, 0.1f64..20.0, 0.1f64..5.0)
        .prop_map(|(rho, alpha, beta, gamma, delta, c, p)| Region { rho, alpha, beta, gamma, delta, c, p })
}

fn ansatz() -> impl Strategy<Value = (RiemannData, SubsolutionParams)> {
    (
        prop_oneof![Just(0.51), Just(1.0), Just(1.5), Just(2.5), Just(5.0)],
        prop_oneof![Just(1.1), Just(2.0), Just(10.0), Just(100.0)],
        0.05f64..0.9999,
        0.0f64..1.0,
        -12.0f64..1.0,
    )
        .prop_map(|(cv, ratio, level, t1, l2)| {
            let d = window_data(cv, ratio, level);
            let rk = rho_k(&d).unwrap();
            let rho1 = 1.0 + (rk - 1.0) * t1.clamp(1e-9, 1.0 - 1e-12);
            (d, SubsolutionParams { rho1, rho2: rk * (1.0 + 10f64.powf(l2)) })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn full_and_reduced_systems_agree((d, params) in ansatz()) {
        let g = d.gas;
        if let Ok(sub) = construct(&d, &g, &params) {
            let tol = Tolerances::default();
            let full = verify_subsolution(&sub.quintuple(), &g, &tol).map_or(false, |r| r.passed);
            prop_assert_eq!(full, simplified_pass(&sub, &g, tol.eq));
        }
    }

    #[test]
    fn slacks_invert_the_lift((d, params) in ansatz()) {
        let g = d.gas;
        if let Ok(sub) = construct(&d, &g, &params) {
            let q = lift(&sub);
            for (i, (e, t)) in slacks(&q).into_iter().enumerate() {
                let scale = 1.0 + q.regions[i].c.abs();
                prop_assert!((e - sub.eps[i]).abs() <= 1e-13 * scale);
                prop_assert!((t - sub.eps_tilde[i]).abs() <= 1e-13 * scale);
            }
        }
    }

    #[test]
    fn determinant_is_symmetric(r in region()) {
        let swapped = Region { alpha: r.beta, beta: r.alpha, gamma: -r.gamma, ..r };
        prop_assert_eq!(subsolution_margins(&r), subsolution_margins(&swapped));
    }

    #[test]
    fn scaling_keeps_margin_signs((d, params) in ansatz(), lk in -3.0f64..3.0) {
        let g = d.gas;
        let k = 10f64.powf(lk);
        if let Ok(sub) = construct(&d, &g, &params) {
            let tol = Tolerances::default();
            let q = sub.quintuple();
            if let (Ok(a), Ok(b)) = (verify_subsolution(&q, &g, &tol), verify_subsolution(&scaled(&q, k), &g, &tol)) {
                prop_assert_eq!(a.passed, b.passed);
                let strict = |r: &ResidualReport| {
                    signs(r).into_iter().filter(|(id, _)| !id.ends_with(".entropy")).collect::<Vec<_>>()
                };
                prop_assert_eq!(strict(&a), strict(&b));
            }
        }
    }

    #[test]
    fn scaling_keeps_shock_entropy_signs(
        cv in 0.6f64..6.0,
        l in (0.1f64..10.0, -2.0f64..2.0, 0.1f64..10.0),
        r in (0.1f64..10.0, -2.0f64..2.0, 0.1f64..10.0),
        lk in -3.0f64..3.0,
    ) {
        let g = GasModel::new(cv).unwrap();
        let d = RiemannData::new(g, st(l.0, 0.0, l.1, l.2), st(r.0, 0.0, r.1, r.2)).unwrap();
        let k = 10f64.powf(lk);
        if let Ok(sol) = SelfSimilarSolution::new(&d, DEFAULT_TOL_CLS) {
            let tol = Tolerances::default();
            for j in sol.jumps() {
                for jump in [j, Jump { left: j.right, right: j.left, speed: j.speed }] {
                    let sc = |s: PrimState| PrimState { rho: s.rho * k, p: s.p * k, ..s };
                    let other = Jump { left: sc(jump.left), right: sc(jump.right), speed: jump.speed };
                    let a = verify_jumps(&[jump], &g, &tol).unwrap();
                    let b = verify_jumps(&[other], &g, &tol).unwrap();
                    let m = a.inequality("jump0.entropy").unwrap().margin;
                    // zero margins (contacts) carry no sign
                    if m.abs() > 1e-9 {
                        prop_assert_eq!(m > 0.0, b.inequality("jump0.entropy").unwrap().margin > 0.0);
                    }
                    prop_assert_eq!(a.equations.iter().all(|e| e.passed), b.equations.iter().all(|e| e.passed));
                }
            }
        }
    }

    #[test]
    fn constant_state_passes_for_any_speeds(
        s in (0.01f64..100.0, -3.0f64..3.0, -3.0f64..3.0, 0.01f64..100.0),
        mut speeds in proptest::collection::vec(-10.0f64..10.0, 0..5),
    ) {
        speeds.sort_by(f64::total_cmp);
        let s = st(s.0, s.1, s.2, s.3);
        let states = vec![s; speeds.len() + 1];
        let rep = verify_solution(&states, &speeds, &GasModel::new(1.5).unwrap(), &Tolerances::default()).unwrap();
        prop_assert!(rep.passed);
        prop_assert_eq!(rep.max_abs_residual(), 0.0);
    }

    #[test]
    fn classified_jumps_verify(
        cv in 0.6f64..6.0,
        l in (0.1f64..10.0, -2.0f64..2.0, -2.0f64..2.0, 0.1f64..10.0),
        r in (0.1f64..10.0, -2.0f64..2.0, -2.0f64..2.0, 0.1f64..10.0),
    ) {
        let g = GasModel::new(cv).unwrap();
        let d = RiemannData::new(g, st(l.0, l.1, l.2, l.3), st(r.0, r.1, r.2, r.3)).unwrap();
        if classify(&d).is_ok() {
            let sol = SelfSimilarSolution::new(&d, DEFAULT_TOL_CLS).unwrap();
            let rep = verify_jumps(&sol.jumps(), &g, &Tolerances::default()).unwrap();
            prop_assert!(rep.passed, "{:?}", rep.failures());
        }
    }
}
