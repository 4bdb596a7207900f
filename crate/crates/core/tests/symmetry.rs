use nonnoether::expr::rat_int;
use nonnoether::models::build_toda;
use nonnoether::symmetry::{
    check_bihamiltonian, check_symmetry, check_yang_baxter, hojman_invariant, orbit_family,
    proportionality, ModelError, SymmetryError,
};
use nonnoether::{Expr, Form, MultiVec, PhaseModel, Symbols};

fn constant_pair(n: usize) -> (MultiVec, Form) {
    let mut w = MultiVec::zero(2 * n, 2);
    let mut omega = Form::zero(2 * n, 2);
    for i in 0..n {
        w.add_at(&[i, n + i], Expr::one());
        omega.add_at(&[i, n + i], Expr::one());
    }
    (w, omega)
}

#[test]
fn toda_generators_are_non_noether_symmetries() {
    for n in 2..=5 {
        let report = check_symmetry(&build_toda(n));
        assert!(report.is_symmetry, "toda{n}");
        assert!(!report.is_noether, "toda{n}");
        assert!(report.yang_baxter, "toda{n}");
    }
}

#[test]
fn evolution_field_is_noether() {
    let m = build_toda(2);
    let report = check_symmetry(&m.with_symmetry(m.flow()));
    assert!(report.is_symmetry && report.is_noether && report.yang_baxter);
    assert!(report.residuals.iter().all(|(_, r)| r.is_zero()));
}

#[test]
fn generic_generator_violates_yang_baxter() {
    let m = build_toda(2);
    let e = MultiVec::from_components(
        ["z3^2", "0", "z1*z2", "z4*z1"]
            .map(|src| m.symbols().expr(src))
            .to_vec(),
    );
    assert!(!check_yang_baxter(&m.with_symmetry(e)).is_zero());
    // z1²∂3 is Hamiltonian for W, so [E, W] and the whole residual vanish.
    let e = MultiVec::monomial(4, &[2], Expr::coord(0).pow(2));
    let hamiltonian = m.with_symmetry(e);
    assert!(hamiltonian.e_bracket_w().is_zero());
    assert!(check_yang_baxter(&hamiltonian).is_zero());
}

#[test]
fn bihamiltonian_triples() {
    for n in [2usize, 3] {
        let r = check_bihamiltonian(&build_toda(n));
        assert!(r.holds(), "toda{n}");
        if n == 2 {
            assert_eq!(r.w_top, Expr::int(-2));
        }
    }
    let (w, omega) = constant_pair(2);
    let m = PhaseModel::new(
        "free",
        Symbols::numbered("z", 4),
        w,
        Some(omega),
        Expr::zero(),
        MultiVec::zero(4, 1),
    )
    .unwrap();
    assert!(m.second_bivector().is_zero());
    assert!(check_bihamiltonian(&m).holds());
}

#[test]
fn model_validation() {
    let (w, omega) = constant_pair(2);
    let s = Symbols::numbered("z", 4);
    let bad_w = MultiVec::basis(4, &[0, 2]);
    let err = PhaseModel::new(
        "x",
        s.clone(),
        bad_w,
        None,
        Expr::zero(),
        MultiVec::zero(4, 1),
    )
    .unwrap_err();
    assert_eq!(err, ModelError::DegeneratePoisson);
    let odd = PhaseModel::new(
        "x",
        Symbols::numbered("z", 3),
        MultiVec::zero(3, 2),
        None,
        Expr::zero(),
        MultiVec::zero(3, 1),
    );
    assert!(matches!(odd, Err(ModelError::OddDimension(3))));
    let not_closed = Form::monomial(4, &[0, 2], s.expr("1 + z2"));
    let mut om = omega.clone();
    om.add_at(&[1, 3], Expr::zero());
    let r = PhaseModel::new(
        "x",
        s.clone(),
        w.clone(),
        Some(&om + &not_closed),
        Expr::zero(),
        MultiVec::zero(4, 1),
    );
    assert!(r.is_err());
    let derived = PhaseModel::new("x", s, w, None, Expr::zero(), MultiVec::zero(4, 1)).unwrap();
    assert_eq!(derived.omega(), Some(&omega));
}

#[test]
fn hojman_family_of_three_particles() {
    let m = build_toda(3);
    let s = m.symbols().clone();
    let fam = hojman_invariant(&m.flow(), m.e(), m.volume().unwrap(), 2).unwrap();
    assert_eq!(fam.members[0], s.expr("z1 + z2 + z3"));
    assert_eq!(
        fam.members[1],
        s.expr("1/2*(z1^2 + z2^2 + z3^2) + exp(z4-z5) + exp(z5-z6)")
    );
    assert!(fam.conservation.iter().all(Expr::is_zero));

    let x = m.flow();
    let zero = hojman_invariant(&x, &x, m.volume().unwrap(), 0).unwrap();
    assert!(zero.members[0].is_zero());
}

#[test]
fn hojman_preconditions() {
    let m = build_toda(2);
    let s = m.symbols().clone();
    let squeeze =
        MultiVec::from_components(vec![s.expr("z1"), Expr::zero(), Expr::zero(), Expr::zero()]);
    let err = hojman_invariant(&squeeze, m.e(), m.volume().unwrap(), 1).unwrap_err();
    assert_eq!(err, SymmetryError::NotLiouville);
    let e = MultiVec::monomial(4, &[2], s.expr("z1^2"));
    let err = hojman_invariant(&m.flow(), &e, m.volume().unwrap(), 1).unwrap_err();
    assert_eq!(err, SymmetryError::NotASymmetry);
}

#[test]
fn orbit_constants_and_conservation() {
    for n in 2..=4 {
        let m = build_toda(n);
        let j: Expr = (0..n).map(Expr::coord).sum();
        let orbit = orbit_family(&m, &j, 2).unwrap();
        assert_eq!(orbit.c0, Some(rat_int(3)));
        assert_eq!(orbit.c1, Some(rat_int(-1)));
        assert!(orbit.involutive_by_theorem());
        assert!(orbit.family.iter().all(|f| m.total_dt(f).is_zero()));
    }
}

#[test]
fn hamiltonian_seed_gives_a_constant_family() {
    let m = build_toda(2);
    let ds = m.differential(m.h());
    let seeded = m.with_symmetry(m.flow()).with_seed(ds).unwrap();
    let orbit = orbit_family(&seeded, m.h(), 2).unwrap();
    assert!(orbit.family[1].is_zero());
}

#[test]
fn seed_must_reproduce_the_generator() {
    let m = build_toda(2);
    let other = m.with_symmetry(m.flow());
    assert_eq!(
        orbit_family(&other, m.h(), 1).unwrap_err(),
        SymmetryError::SeedMismatch
    );
}

#[test]
fn y_laws_are_conserved_and_involutive() {
    for n in [2usize, 3] {
        let m = build_toda(n);
        let ys = nonnoether::conslaws::y_laws(&m).unwrap();
        for (a, y) in ys.iter().enumerate() {
            assert!(m.total_dt(y).is_zero());
            for z in &ys[a + 1..] {
                assert!(m.poisson(y, z).is_zero());
            }
        }
    }
}

#[test]
fn exact_proportionality() {
    let m = build_toda(2);
    let w = m.w();
    let tripled = w.map(|e| e.scale(&rat_int(3)));
    assert_eq!(proportionality(&tripled, w), Some(rat_int(3)));
    assert_eq!(proportionality(&m.second_bivector(), w), None);
}

#[test]
fn trivector_checks_vanish_in_two_dimensions() {
    let s = Symbols::new(["p", "q"]);
    let w = MultiVec::basis(2, &[0, 1]);
    let e = MultiVec::from_components(vec![s.expr("p"), s.expr("0")]);
    let m = PhaseModel::new("plane", s.clone(), w, None, s.expr("1/2*p^2 + 1/2*q^2"), e).unwrap();
    assert!(check_yang_baxter(&m).is_zero());
    let bh = check_bihamiltonian(&m);
    assert!(bh.w_w.is_zero() && bh.what_w.is_zero() && bh.what_what.is_zero());
    assert!(!check_symmetry(&m).is_symmetry);
}
