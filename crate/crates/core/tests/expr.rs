mod common;

use common::{arb_expr, arb_expr_with_time, arb_point};
use nonnoether::expr::{rat, ExprError};
use nonnoether::{Expr, Symbols, Var};
use proptest::prelude::*;

fn z4() -> Symbols {
    Symbols::numbered("z", 4)
}

#[test]
fn commuting_products_cancel() {
    let s = z4();
    assert!(s.expr("z1*z2 - z2*z1").is_zero());
    assert_eq!(s.expr("exp(z3-z4)*exp(z4-z3)"), Expr::one());
}

#[test]
fn toda_hamiltonian_has_three_terms() {
    let h = z4().expr("1/2*z1^2 + 1/2*z2^2 + exp(z3-z4)");
    assert_eq!(h.len(), 3);
    assert_eq!(h.evaluate(&[1.0, 0.0, 0.0, 0.0], 0.0).unwrap(), 1.5);
}

#[test]
fn derivatives() {
    let s = z4();
    assert_eq!(s.expr("exp(z3-z4)").d(2), s.expr("exp(z3-z4)"));
    assert_eq!(s.expr("t^2*z1").dt(), s.expr("2*t*z1"));
    let e1 = s.expr("1/2*z1^2 - exp(z3-z4) - 1/2*t*(z1+z2)*exp(z3-z4)");
    assert_eq!(e1.d(0), s.expr("z1 - 1/2*t*exp(z3-z4)"));
}

#[test]
fn evaluation() {
    let s = z4();
    let v = s
        .expr("z1*z2 - exp(z3-z4)")
        .evaluate(&[1.0, 0.0, 0.0, 0.0], 0.0)
        .unwrap();
    assert_eq!(v, -1.0);
    assert_eq!(Expr::zero().evaluate(&[], 3.0).unwrap(), 0.0);
    assert!(matches!(
        s.expr("z4").evaluate(&[1.0], 0.0),
        Err(ExprError::UnboundCoordinate(_))
    ));
}

#[test]
fn exact_division() {
    let s = z4();
    let q = s.expr("-(z1+z2)").exact_divide(&Expr::int(-2)).unwrap();
    assert_eq!(q, s.expr("1/2*(z1+z2)"));
    let q = s
        .expr("-2*(z1*z2 - exp(z3-z4))")
        .exact_divide(&Expr::int(-2))
        .unwrap();
    assert_eq!(q, s.expr("z1*z2 - exp(z3-z4)"));
    let x = s.expr("3*t*z2^2*exp(z1)");
    assert_eq!(x.exact_divide(&x).unwrap(), Expr::one());
    assert!(s.expr("z1 + 1").exact_divide(&s.expr("z1 + z2")).is_err());
}

#[test]
fn parse_errors() {
    let s = z4();
    assert!(matches!(
        s.parse("z9 + 1"),
        Err(ExprError::UnknownSymbol(_))
    ));
    assert!(matches!(
        s.parse("exp(z1*z2)"),
        Err(ExprError::NonLinearExponent(_))
    ));
    assert!(matches!(
        s.parse("exp(t)"),
        Err(ExprError::NonLinearExponent(_))
    ));
    assert!(s.parse("(z1 + ").is_err());
    assert_eq!(s.var("t").unwrap(), Var::Time);
}

#[test]
fn rational_exponents_and_powers() {
    let s = z4();
    assert_eq!(s.expr("exp(1/2*z1)^2"), s.expr("exp(z1)"));
    assert_eq!(s.expr("(z1 + z2)^2"), s.expr("z1^2 + 2*z1*z2 + z2^2"));
    assert_eq!(Expr::ratio(2, 4), Expr::constant(rat(1, 2)));
}

fn central_difference(e: &Expr, z: &[f64], a: usize) -> f64 {
    let h = 1e-5;
    let mut up = z.to_vec();
    let mut down = z.to_vec();
    up[a] += h;
    down[a] -= h;
    (e.evaluate(&up, 0.3).unwrap() - e.evaluate(&down, 0.3).unwrap()) / (2.0 * h)
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz(a in arb_expr_with_time(2), b in arb_expr_with_time(2), k in 0usize..4) {
        prop_assert_eq!((&a * &b).d(k), &(&a.d(k) * &b) + &(&a * &b.d(k)));
        prop_assert_eq!((&a * &b).dt(), &(&a.dt() * &b) + &(&a * &b.dt()));
    }

    #[test]
    fn mixed_partials(e in arb_expr()) {
        for a in 0..4 {
            for b in 0..4 {
                prop_assert_eq!(e.d(a).d(b), e.d(b).d(a));
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference(e in arb_expr_with_time(1), z in arb_point(), a in 0usize..4) {
        let exact = e.d(a).evaluate(&z, 0.3).unwrap();
        let approx = central_difference(&e, &z, a);
        prop_assert!((exact - approx).abs() <= 1e-6 * exact.abs().max(1.0), "{exact} vs {approx}");
    }

    #[test]
    fn print_parse_round_trip(e in arb_expr_with_time(2)) {
        let s = z4();
        let text = s.show(&e).to_string();
        prop_assert_eq!(s.parse(&text).unwrap(), e);
    }

    #[test]
    fn compiled_matches_evaluate(e in arb_expr_with_time(2), z in arb_point()) {
        let direct = e.evaluate(&z, 0.7).unwrap();
        let compiled = e.compile().eval(&z, 0.7);
        prop_assert!((direct - compiled).abs() <= 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn division_inverts_multiplication(a in arb_expr(), b in arb_expr()) {
        prop_assume!(!b.is_zero() && b.len() == 1);
        prop_assert_eq!((&a * &b).exact_divide(&b).unwrap(), a);
    }
}
