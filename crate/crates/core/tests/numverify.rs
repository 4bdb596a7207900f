use nonnoether::conslaws::{secular_roots, ConservedSet};
use nonnoether::models::{build_toda, PdeSpec};
use nonnoether::numverify::{
    convergence_order, integrate_hamiltonian, isospectral_check, pde_run, relative_drift,
    root_gradients, sech_profile, secular_bracket_max, standard_monitors, Lcg, NumError,
};
use nonnoether::operators::lax_pair;
use nonnoether::{Form, MultiVec, PhaseModel, Symbols};

#[test]
fn generator_is_deterministic() {
    let a: Vec<u64> = {
        let mut r = Lcg::new(42);
        (0..5).map(|_| r.next_u64()).collect()
    };
    let mut r = Lcg::new(42);
    assert_eq!(a, (0..5).map(|_| r.next_u64()).collect::<Vec<_>>());
    assert_eq!(
        a[0],
        42u64
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407)
    );
    let mut r = Lcg::new(1);
    for _ in 0..1000 {
        let x = r.uniform(-1.0, 1.0);
        assert!((-1.0..1.0).contains(&x));
    }
    assert_ne!(Lcg::new(1).next_u64(), Lcg::new(2).next_u64());
}

#[test]
fn drift_is_relative_with_a_unit_floor() {
    assert_eq!(relative_drift(&[]), 0.0);
    assert_eq!(relative_drift(&[2.0, 2.5, 1.0]), 0.5);
    assert_eq!(relative_drift(&[0.0, 1e-3]), 1e-3);
}

#[test]
fn two_particle_reference_run() {
    let m = build_toda(2);
    let set = ConservedSet::build(&m, 2).unwrap();
    let traj = integrate_hamiltonian(
        &m,
        &[1.0, -1.0, 1.0, 0.0],
        10.0,
        1e-3,
        &standard_monitors(&m, &set),
        1,
    )
    .unwrap();
    assert_eq!(traj.times.len(), 10_001);
    assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    assert!((traj.times.last().unwrap() - 10.0).abs() < 1e-12);
    for name in ["h", "Y1", "Y2"] {
        assert!(traj.drift(name).unwrap() < 1e-9, "{name}");
    }
    assert!(isospectral_check(&lax_pair(&m).unwrap(), &traj).unwrap() < 1e-6);
}

#[test]
fn three_particle_random_run() {
    let m = build_toda(3);
    let set = ConservedSet::build(&m, 3).unwrap();
    let start = Lcg::new(42).point(6, -1.0, 1.0);
    let traj =
        integrate_hamiltonian(&m, &start, 10.0, 1e-3, &standard_monitors(&m, &set), 10).unwrap();
    assert!(traj.states.iter().all(|z| z.len() == 6));
    for (name, d) in traj.drifts() {
        assert!(d < 1e-8, "{name}: {d}");
    }
    assert!(isospectral_check(&lax_pair(&m).unwrap(), &traj).unwrap() < 1e-6);
}

#[test]
fn frozen_trajectory() {
    let m = build_toda(2);
    let traj = integrate_hamiltonian(
        &m,
        &[0.1, 0.2, 0.3, 0.4],
        0.0,
        1e-3,
        &[("h".into(), m.h().clone())],
        1,
    )
    .unwrap();
    assert_eq!(traj.states.len(), 1);
    assert_eq!(traj.drift("h"), Some(0.0));
    assert_eq!(
        isospectral_check(&lax_pair(&m).unwrap(), &traj).unwrap(),
        0.0
    );
}

#[test]
fn rk4_order() {
    let m = build_toda(2);
    let report = convergence_order(
        &m,
        &[1.0, -1.0, 1.0, 0.0],
        10.0,
        &[0.1, 0.05, 0.025, 0.0125],
    )
    .unwrap();
    assert!((3.7..=4.3).contains(&report.order), "{}", report.order);
    for ratio in report.errors.windows(2).map(|e| e[0] / e[1]) {
        assert!((12.0..=21.0).contains(&ratio), "{ratio}");
    }
}

#[test]
fn integration_errors() {
    let m = build_toda(2);
    let z = [0.0; 4];
    assert!(matches!(
        integrate_hamiltonian(&m, &z, 1.0, 0.0, &[], 1),
        Err(NumError::BadStep { .. })
    ));
    assert!(matches!(
        integrate_hamiltonian(&m, &z, -1.0, 0.1, &[], 1),
        Err(NumError::BadStep { .. })
    ));
    assert!(matches!(
        integrate_hamiltonian(&m, &z[..3], 1.0, 0.1, &[], 1),
        Err(NumError::WrongDimension(3, 4))
    ));

    let s = Symbols::numbered("z", 2);
    let w = MultiVec::basis(2, &[0, 1]);
    let omega = Form::basis(2, &[0, 1]);
    let timed = PhaseModel::new(
        "timed",
        s.clone(),
        w.clone(),
        Some(omega.clone()),
        s.expr("t*z1"),
        MultiVec::zero(2, 1),
    )
    .unwrap();
    assert_eq!(
        integrate_hamiltonian(&timed, &[0.0, 0.0], 1.0, 0.1, &[], 1).unwrap_err(),
        NumError::TimeDependentHamiltonian
    );

    // ż1 = −z1² from z1 = −1 blows up at t = 1.
    let blow = PhaseModel::new(
        "blow",
        s.clone(),
        w,
        Some(omega),
        s.expr("z1^2*z2"),
        MultiVec::zero(2, 1),
    )
    .unwrap();
    let err = integrate_hamiltonian(&blow, &[-1.0, 1.0], 2.0, 1e-2, &[], 1).unwrap_err();
    assert!(
        matches!(err, NumError::NonFiniteState(t) if t > 0.9 && t <= 2.0),
        "{err:?}"
    );
}

#[test]
fn secular_roots_are_in_involution() {
    for n in 2..=5 {
        let m = build_toda(n);
        let set = ConservedSet::build(&m, n).unwrap();
        let mut rng = Lcg::new(42);
        let points: Vec<Vec<f64>> = (0..100).map(|_| rng.point(2 * n, -1.0, 1.0)).collect();
        let worst = secular_bracket_max(&m, &set.c, &points, 0.0);
        assert!(worst < 1e-8, "toda{n}: {worst}");
    }
}

#[test]
fn root_gradients_match_finite_differences() {
    let m = build_toda(3);
    let set = ConservedSet::build(&m, 3).unwrap();
    let z = Lcg::new(5).point(6, -1.0, 1.0);
    let roots = secular_roots(&m, &z, 0.0).real();
    let grads = root_gradients(&m, &set.c, &roots, &z, 0.0);
    let h = 1e-6;
    for a in 0..6 {
        let mut up = z.clone();
        let mut down = z.clone();
        up[a] += h;
        down[a] -= h;
        let (ru, rd) = (
            secular_roots(&m, &up, 0.0).real(),
            secular_roots(&m, &down, 0.0).real(),
        );
        for i in 0..3 {
            let fd = (ru[i] - rd[i]) / (2.0 * h);
            assert!(
                (fd - grads[i][a]).abs() < 1e-6,
                "root {i} coord {a}: {fd} vs {}",
                grads[i][a]
            );
        }
    }
}

#[test]
fn kdv_zero_profile() {
    let report = pde_run(&PdeSpec::kdv(80.0, 256), &|_| 0.0, 0.5, None, 10, None).unwrap();
    assert!(report.initial.iter().chain(&report.last).all(|v| *v == 0.0));
    assert!(report.drifts.iter().all(|d| *d == 0.0));
    assert!(report.shape_error.is_none());
}

#[test]
fn mkdv_small_sech_profile() {
    let report = pde_run(
        &PdeSpec::mkdv(80.0, 1024),
        &sech_profile(0.5, 0.5, 40.0),
        5.0,
        None,
        100,
        None,
    )
    .unwrap();
    assert_eq!(report.names, ["I1", "I2", "I3"]);
    assert!(
        report.drifts[0] < 1e-6 && report.drifts[1] < 1e-6,
        "{:?}",
        report.drifts
    );
    assert_eq!(report.equation, "mkdv");
}

#[test]
fn oversized_step_is_reported_unstable() {
    let spec = PdeSpec::kdv(80.0, 256);
    let dt = 50.0 * nonnoether::numverify::default_pde_dt(&spec);
    let sol = nonnoether::numverify::kdv_soliton(0.5, 40.0, 80.0);
    let err = pde_run(&spec, &|x| sol(x, 0.0), 5.0, Some(dt), 10, None).unwrap_err();
    assert!(
        matches!(err, NumError::Unstable(_) | NumError::NonFiniteState(_)),
        "{err:?}"
    );
    assert!(matches!(
        pde_run(&PdeSpec::kdv(80.0, 200), &|_| 0.0, 1.0, None, 1, None),
        Err(NumError::BadGrid(_))
    ));
}
