mod common;

use common::arb_expr;
use nonnoether::conslaws::ConservedSet;
use nonnoether::expr::rat_int;
use nonnoether::geom::exterior_derivative;
use nonnoether::models::build_toda;
use nonnoether::operators::{
    bicomplex_verify, dbar, fn_invariance, fn_operator, fn_torsion, lax_pair, lax_residual,
    lenard_residuals, recursion_check, twisted_form, LaxPair, RecursionOperator,
};
use nonnoether::{Acts, Expr, Form, MultiVec, Tensor11};
use proptest::prelude::*;

fn scalar(dim: usize, e: Expr) -> Form {
    Form::scalar(dim, e)
}

#[test]
fn lax_pairs() {
    for (n, entries) in [(2usize, 8usize), (3, 16)] {
        let m = build_toda(n);
        let lp = lax_pair(&m).unwrap();
        assert_eq!(lp.l.nonzero_count(), entries);
        assert!(lax_residual(&m, &lp).is_zero());
        let mut l = lp.l.clone();
        l.set(0, 0, lp.l.get(0, 0) + &Expr::coord(0));
        assert!(!lax_residual(&m, &LaxPair { l, p: lp.p.clone() }).is_zero());
    }
}

#[test]
fn two_particle_lax_matrix() {
    let m = build_toda(2);
    let s = m.symbols().clone();
    let l = lax_pair(&m).unwrap().l;
    let rows = [
        ["z1", "0", "0", "-exp(z3-z4)"],
        ["0", "z2", "exp(z3-z4)", "0"],
        ["0", "1", "z1", "0"],
        ["-1", "0", "0", "z2"],
    ];
    let want: Vec<Vec<Expr>> = rows
        .iter()
        .map(|r| r.iter().map(|x| s.expr(x)).collect())
        .collect();
    assert_eq!(l.rows(), want);
}

#[test]
fn dbar_on_coordinates() {
    let m = build_toda(2);
    let s = m.symbols().clone();
    let got = dbar(&m, &scalar(4, s.expr("z1"))).unwrap();
    let mut want = Form::monomial(4, &[0], s.expr("z1"));
    want.add_at(&[3], s.expr("-exp(z3-z4)"));
    assert_eq!(got, want);
    assert!(dbar(&m, &got).unwrap().is_zero());

    let m = build_toda(3);
    let s = m.symbols().clone();
    let got = dbar(&m, &scalar(6, s.expr("z5"))).unwrap();
    let mut want = Form::monomial(6, &[4], s.expr("z2"));
    want.add_at(&[0], Expr::int(-1));
    want.add_at(&[2], Expr::one());
    assert_eq!(got, want);
}

#[test]
fn dbar_degree_overflow() {
    let m = build_toda(2);
    let top = Form::basis(4, &[0, 1, 2, 3]);
    assert!(dbar(&m, &top).is_err());
}

#[test]
fn bicomplex_and_lenard_chains() {
    for n in [2usize, 3] {
        let m = build_toda(n);
        let set = ConservedSet::build(&m, n + 1).unwrap();
        let report = bicomplex_verify(&m, &set.i).unwrap();
        assert!(report.holds(), "toda{n}");
        assert_eq!(report.dbar_squared.len(), 4 * n);
    }
    let m = build_toda(4);
    let set = ConservedSet::build(&m, 4).unwrap();
    let lenard = lenard_residuals(&m, &set.i).unwrap();
    assert_eq!(lenard.len(), 3);
    assert!(lenard.iter().all(Form::is_zero));
}

#[test]
fn recursion_operator() {
    for n in [2usize, 3] {
        let m = build_toda(n);
        let r = fn_operator(&m).unwrap();
        assert_eq!(r.r_vectors.rows(), r.r_forms.transpose().rows());
        assert_eq!(r.r_forms, lax_pair(&m).unwrap().l);
        let torsion = fn_torsion(&r.r_vectors);
        assert_eq!(torsion.len(), n * (2 * n - 1));
        assert!(torsion.iter().all(|(_, t)| t.is_zero()));
        assert!(fn_invariance(&m, &r.r_vectors).is_zero());
        let set = ConservedSet::build(&m, n + 1).unwrap();
        assert!(recursion_check(&m, &r, &set.i).iter().all(Form::is_zero));
    }
    let zero = build_toda(2).with_symmetry(MultiVec::zero(4, 1));
    let r = fn_operator(&zero).unwrap();
    assert!(r.r_forms.is_zero() && r.r_vectors.is_zero());
}

#[test]
fn duality_under_pairing() {
    let m = build_toda(3);
    let r = fn_operator(&m).unwrap();
    for a in 0..6 {
        let ra = r.r_vectors.apply_vector(&MultiVec::basis(6, &[a]));
        for b in 0..6 {
            let rb = r.r_forms.apply_form(&Form::basis(6, &[b]));
            assert_eq!(ra.get(&[b]), rb.get(&[a]));
        }
    }
}

#[test]
fn torsion_of_an_ad_hoc_operator() {
    let m = build_toda(2);
    let s = m.symbols().clone();
    let r = Tensor11::from_fn(4, Acts::OnVectors, |a, b| match (a, b) {
        (0, 0) => s.expr("z2"),
        (1, 1) => s.expr("z1"),
        _ => Expr::zero(),
    });
    assert!(fn_torsion(&r).iter().any(|(_, t)| !t.is_zero()));
}

#[test]
fn identity_operator_breaks_the_recursion() {
    let m = build_toda(2);
    let id = Tensor11::identity(4, Acts::OnForms);
    let r = RecursionOperator {
        r_forms: id.clone(),
        r_vectors: id,
    };
    let h = m.h().clone();
    let res = recursion_check(&m, &r, &[h.clone(), h.clone()]);
    assert_eq!(res[0], m.differential(&h));
}

#[test]
fn auxiliary_forms_are_closed() {
    for n in [2usize, 3] {
        let m = build_toda(n);
        let r = fn_operator(&m).unwrap().r_vectors;
        let omega = m.omega().unwrap();
        for k in 0..3 {
            let f = twisted_form(&r, omega, k).expect("antisymmetric");
            assert!(exterior_derivative(&f).unwrap().is_zero(), "toda{n} k={k}");
        }
        assert_eq!(twisted_form(&r, omega, 0).unwrap(), *omega);
    }
    let m = build_toda(2);
    let skew = Tensor11::from_fn(4, Acts::OnVectors, |a, b| {
        if (a, b) == (0, 1) {
            Expr::one()
        } else {
            Expr::zero()
        }
    });
    assert!(twisted_form(&skew, m.omega().unwrap(), 1).is_none());
}

#[test]
fn symplectic_potential() {
    // d(i_E ω) is the Lie derivative of ω, not ω itself.
    let m = build_toda(2);
    let omega = m.omega().unwrap();
    let theta = nonnoether::geom::interior(m.e(), omega).unwrap();
    let dtheta = exterior_derivative(&theta).unwrap();
    assert_eq!(dtheta, m.omega_dot().unwrap());
    assert_ne!(&dtheta, omega);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dbar_is_a_derivation(f in arb_expr(), g in arb_expr()) {
        let m = build_toda(2);
        let lhs = dbar(&m, &scalar(4, &f * &g)).unwrap();
        let df = dbar(&m, &scalar(4, f.clone())).unwrap();
        let dg = dbar(&m, &scalar(4, g.clone())).unwrap();
        prop_assert_eq!(lhs, &dg.scale(&f) + &df.scale(&g));
    }

    #[test]
    fn torsion_is_tensorial(f in arb_expr()) {
        let m = build_toda(2);
        let r = fn_operator(&m).unwrap().r_vectors;
        let x = MultiVec::monomial(4, &[0], f.clone());
        let y = MultiVec::basis(4, &[2]);
        let t = nonnoether::operators::torsion(&r, &x, &y);
        prop_assert!(t.is_zero());
        let ad_hoc = Tensor11::from_fn(4, Acts::OnVectors, |a, b| if a == b && a < 2 { Expr::coord(1 - a) } else { Expr::zero() });
        let lhs = nonnoether::operators::torsion(&ad_hoc, &x, &y);
        let rhs = nonnoether::operators::torsion(&ad_hoc, &MultiVec::basis(4, &[0]), &y).scale(&f);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lenard_relation_on_scaled_laws(k in 1i64..4) {
        let m = build_toda(2);
        let set = ConservedSet::build(&m, 2).unwrap();
        let scaled: Vec<Expr> = set.i.iter().map(|e| e.scale(&rat_int(k))).collect();
        prop_assert!(lenard_residuals(&m, &scaled).unwrap().iter().all(Form::is_zero));
    }
}
