mod common;

use common::{arb_expr, arb_point};
use nonnoether::geom::{
    apply_vector, exterior_derivative, interior, lie_derivative, lie_derivative_multivec, schouten,
};
use nonnoether::models::build_toda;
use nonnoether::{Expr, Form, GeomError, MultiVec, Musical, Symbols};
use proptest::prelude::*;

fn z4() -> Symbols {
    Symbols::numbered("z", 4)
}

fn top(dim: usize, coef: Expr) -> MultiVec {
    MultiVec::monomial(dim, &(0..dim).collect::<Vec<_>>(), coef)
}

#[test]
fn wedge_powers_of_the_two_particle_pair() {
    let m = build_toda(2);
    let s = z4();
    assert_eq!(m.w().wedge(m.w()).unwrap(), top(4, Expr::int(-2)));
    assert_eq!(
        m.second_bivector().wedge(m.w()).unwrap(),
        top(4, s.expr("-(z1+z2)"))
    );
    let x = MultiVec::from_components(vec![
        s.expr("z1"),
        s.expr("exp(z3-z4)"),
        Expr::int(2),
        Expr::zero(),
    ]);
    assert!(x.wedge(&x).unwrap().is_zero());
    assert!(matches!(
        m.w().wedge_power(3),
        Err(GeomError::DegreeOverflow { .. })
    ));
}

#[test]
fn interior_pairing() {
    let m = build_toda(2);
    let s = z4();
    let one = interior(&MultiVec::basis(4, &[0, 2]), &Form::basis(4, &[0, 2])).unwrap();
    assert_eq!(one.coefficient(), Expr::one());

    let omega = m.omega().unwrap();
    let theta = interior(m.e(), omega).unwrap();
    assert_eq!(
        exterior_derivative(&theta).unwrap(),
        lie_derivative(m.e(), omega).unwrap()
    );

    let c1 = interior(m.w(), &m.omega_dot().unwrap()).unwrap();
    assert_eq!(c1.coefficient(), s.expr("z1 + z2"));
    assert!(matches!(
        interior(m.w(), &Form::basis(4, &[1])),
        Err(GeomError::DegreeMismatch(_))
    ));
}

#[test]
fn schouten_examples() {
    let s = z4();
    let d1 = MultiVec::basis(4, &[0]);
    let x = MultiVec::monomial(4, &[1], s.expr("z1"));
    assert_eq!(schouten(&d1, &x).unwrap(), MultiVec::basis(4, &[1]));

    let m = build_toda(2);
    assert!(schouten(m.w(), m.w()).unwrap().is_zero());
    // Standard sign: [E, W] is the negative of the second bivector.
    assert_eq!(schouten(m.e(), m.w()).unwrap(), -&m.second_bivector());

    let f = MultiVec::scalar(4, s.expr("z2^2"));
    let y = MultiVec::monomial(4, &[1], s.expr("z3"));
    assert_eq!(schouten(&y, &f).unwrap().coefficient(), s.expr("2*z2*z3"));
}

#[test]
fn exterior_derivative_examples() {
    let s = z4();
    let u = Form::monomial(4, &[2], s.expr("z1"));
    assert_eq!(exterior_derivative(&u).unwrap(), Form::basis(4, &[0, 2]));
    let m = build_toda(2);
    assert!(exterior_derivative(m.omega().unwrap()).unwrap().is_zero());
    assert!(exterior_derivative(&m.omega_dot().unwrap())
        .unwrap()
        .is_zero());
}

#[test]
fn lie_derivative_examples() {
    let s = z4();
    let m = build_toda(2);
    let mut want = Form::zero(4, 2);
    want.add_at(&[0, 2], s.expr("z1"));
    want.add_at(&[1, 3], s.expr("z2"));
    want.add_at(&[0, 1], Expr::one());
    want.add_at(&[2, 3], s.expr("exp(z3-z4)"));
    let got = lie_derivative(m.e(), m.omega().unwrap()).unwrap();
    assert_eq!(got, want);
    assert_eq!(m.musical().unwrap().lower(&m.second_bivector()), got);

    let toda3 = build_toda(3);
    assert!(lie_derivative(&toda3.flow(), toda3.volume().unwrap())
        .unwrap()
        .is_zero());

    let d1 = MultiVec::basis(4, &[0]);
    assert!(lie_derivative(&d1, m.omega().unwrap()).unwrap().is_zero());
    assert_eq!(
        lie_derivative_multivec(m.e(), m.w()).unwrap(),
        schouten(m.e(), m.w()).unwrap()
    );
}

#[test]
fn hamilton_equations() {
    let s = z4();
    let m = build_toda(2);
    let x = m.musical().unwrap().raise(&m.differential(m.h()));
    let want = ["-exp(z3-z4)", "exp(z3-z4)", "z1", "z2"].map(|src| s.expr(src));
    assert_eq!(x.components(), want.to_vec());
    assert_eq!(x, m.flow());
}

#[test]
fn musical_round_trip_on_bases() {
    for n in [2usize, 3] {
        let m = build_toda(n);
        let mu = m.musical().unwrap();
        for a in 0..2 * n {
            let u = Form::basis(2 * n, &[a]);
            assert_eq!(mu.lower(&mu.raise(&u)), u);
            let v = MultiVec::basis(2 * n, &[a]);
            assert_eq!(mu.raise(&mu.lower(&v)), v);
        }
    }
}

#[test]
fn inconsistent_musical_pair() {
    let m = build_toda(2);
    let wrong = m
        .omega()
        .unwrap()
        .map(|e| e.scale(&nonnoether::expr::rat(2, 1)));
    assert!(matches!(
        Musical::new(m.w(), &wrong),
        Err(GeomError::InconsistentPair(..))
    ));
    let derived = Musical::symplectic_from_constant(m.w()).unwrap();
    assert_eq!(&derived, m.omega().unwrap());
}

#[test]
fn d_squared_vanishes_on_bases() {
    for deg in 0..3 {
        for a in 0..4 {
            let idx: Vec<usize> = (a..a + deg).filter(|&i| i < 4).collect();
            if idx.len() != deg {
                continue;
            }
            let u = Form::monomial(4, &idx, z4().expr("z1*z2*exp(z3-z4) + t*z4^2"));
            let du = exterior_derivative(&u).unwrap();
            assert!(exterior_derivative(&du).unwrap().is_zero());
        }
    }
}

fn arb_vector() -> impl Strategy<Value = MultiVec> {
    prop::collection::vec(arb_expr(), 4).prop_map(MultiVec::from_components)
}

fn arb_bivector() -> impl Strategy<Value = MultiVec> {
    prop::collection::vec(arb_expr(), 6).prop_map(|cs| {
        let mut w = MultiVec::zero(4, 2);
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for ((a, b), c) in pairs.into_iter().zip(cs) {
            w.add_at(&[a, b], c);
        }
        w
    })
}

fn arb_one_form() -> impl Strategy<Value = Form> {
    prop::collection::vec(arb_expr(), 4).prop_map(Form::from_components)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn schouten_graded_antisymmetry(x in arb_vector(), y in arb_vector(), w in arb_bivector(), v in arb_bivector()) {
        // [a, b] = −(−1)^((p−1)(q−1)) [b, a]
        prop_assert_eq!(schouten(&x, &y).unwrap(), -&schouten(&y, &x).unwrap());
        prop_assert_eq!(schouten(&x, &w).unwrap(), -&schouten(&w, &x).unwrap());
        prop_assert_eq!(schouten(&w, &v).unwrap(), schouten(&v, &w).unwrap());
    }

    #[test]
    fn vector_jacobi(x in arb_vector(), y in arb_vector(), z in arb_vector()) {
        let br = |a: &MultiVec, b: &MultiVec| schouten(a, b).unwrap();
        let cyc = &(&br(&x, &br(&y, &z)) + &br(&y, &br(&z, &x))) + &br(&z, &br(&x, &y));
        prop_assert!(cyc.is_zero());
    }

    #[test]
    fn hamiltonian_fields_preserve_w(f in arb_expr()) {
        let m = build_toda(2);
        let xf = m.hamiltonian_field(&f);
        prop_assert!(schouten(&xf, m.w()).unwrap().is_zero());
        let what = m.second_bivector();
        let yf = nonnoether::geom::contract(&m.differential(&f), &what).unwrap();
        prop_assert!(schouten(&yf, &what).unwrap().is_zero());
    }

    #[test]
    fn poisson_jacobi(f in arb_expr(), g in arb_expr(), h in arb_expr()) {
        let m = build_toda(2);
        let pb = |a: &Expr, b: &Expr| m.poisson(a, b);
        let cyc = &(&pb(&f, &pb(&g, &h)) + &pb(&g, &pb(&h, &f))) + &pb(&h, &pb(&f, &g));
        prop_assert!(cyc.is_zero());
        let df = m.differential(&f).wedge(&m.differential(&g)).unwrap();
        prop_assert_eq!(interior(m.w(), &df).unwrap().coefficient(), pb(&f, &g));
        prop_assert_eq!(pb(&f, &g), apply_vector(&m.hamiltonian_field(&f), &g));
        prop_assert_eq!(pb(&f, &g), -&apply_vector(&m.hamiltonian_field(&g), &f));
    }

    #[test]
    fn hamiltonian_homomorphism(f in arb_expr(), g in arb_expr()) {
        let m = build_toda(2);
        let lhs = schouten(&m.hamiltonian_field(&f), &m.hamiltonian_field(&g)).unwrap();
        prop_assert_eq!(lhs, m.hamiltonian_field(&m.poisson(&f, &g)));
    }

    #[test]
    fn d_squared_is_zero(u in arb_one_form(), f in arb_expr()) {
        let du = exterior_derivative(&u).unwrap();
        prop_assert!(exterior_derivative(&du).unwrap().is_zero());
        let df = exterior_derivative(&Form::scalar(4, f)).unwrap();
        prop_assert!(exterior_derivative(&df).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_commutes_with_d(x in arb_vector(), u in arb_one_form()) {
        let lhs = exterior_derivative(&lie_derivative(&x, &u).unwrap()).unwrap();
        let rhs = lie_derivative(&x, &exterior_derivative(&u).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_derivative_matches_pullback(x in arb_vector(), u in arb_one_form(), z in arb_point()) {
        // (L_X u)_a = d/ds at 0 of u(φ_s z)·∂_a φ_s, with φ_s(z) = z + sX(z).
        let lx = lie_derivative(&x, &u).unwrap().components();
        let xs = x.components();
        let uc = u.components();
        let xz: Vec<f64> = xs.iter().map(|e| e.evaluate(&z, 0.0).unwrap()).collect();
        let s = 1e-5;
        for a in 0..4 {
            let pull = |sign: f64| -> f64 {
                let moved: Vec<f64> = z.iter().zip(&xz).map(|(zi, xi)| zi + sign * s * xi).collect();
                (0..4)
                    .map(|b| {
                        let jac = if a == b { 1.0 } else { 0.0 } + sign * s * xs[b].d(a).evaluate(&z, 0.0).unwrap();
                        uc[b].evaluate(&moved, 0.0).unwrap() * jac
                    })
                    .sum()
            };
            let approx = (pull(1.0) - pull(-1.0)) / (2.0 * s);
            let exact = lx[a].evaluate(&z, 0.0).unwrap();
            prop_assert!((approx - exact).abs() <= 1e-5 * exact.abs().max(1.0), "{} vs {}", approx, exact);
        }
    }
}
