#![allow(dead_code)]

use nonnoether::expr::rat;
use nonnoether::Expr;
use proptest::prelude::*;

fn factor_exp(which: usize) -> Expr {
    match which {
        0 => Expr::one(),
        1 => Expr::exp_diff(2, 3),
        2 => Expr::exp_diff(0, 1),
        _ => Expr::exp_linear(&[(1, rat(1, 2)), (3, rat(-1, 3))]),
    }
}

/// Small expressions in `z1..z4` and `t`: a few terms, each a rational times
/// a power of `t`, a monomial and an exponential factor.
pub fn arb_expr_with_time(max_t: u32) -> impl Strategy<Value = Expr> {
    prop::collection::vec(
        (
            -3i64..=3,
            1i64..=3,
            0..=max_t,
            prop::array::uniform4(0u32..3),
            0usize..4,
        ),
        1..4,
    )
    .prop_map(|terms| {
        terms
            .into_iter()
            .map(|(num, den, tp, mono, ex)| {
                let mut e = &Expr::ratio(num, den) * &Expr::time().pow(tp);
                for (i, p) in mono.iter().enumerate() {
                    e = &e * &Expr::coord(i).pow(*p);
                }
                &e * &factor_exp(ex)
            })
            .sum()
    })
}

pub fn arb_expr() -> impl Strategy<Value = Expr> {
    arb_expr_with_time(0)
}

pub fn arb_point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 4)
}
