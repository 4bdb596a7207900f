use crate::expr::{rat, rat_int, Expr, Symbols};
use crate::geom::{Form, MultiVec};
use crate::symmetry::{seed_from_symmetry, PhaseModel};

/// `ε(k)`: 1 for positive `k`, 0 at zero, odd.
pub fn epsilon(k: i64) -> i64 {
    k.signum()
}

/// Index of `p_i` (1-based `i`) among `z1..z2n`.
pub fn p(i: usize) -> usize {
    i - 1
}

/// Index of `q_i` (1-based `i`) among `z1..z2n`.
pub fn q(n: usize, i: usize) -> usize {
    n + i - 1
}

/// `e^{q_i − q_{i+1}}`; zero outside `1 ≤ i < n`.
fn bond(n: usize, i: i64) -> Expr {
    if i < 1 || i as usize >= n {
        Expr::zero()
    } else {
        let i = i as usize;
        Expr::exp_diff(q(n, i), q(n, i + 1))
    }
}

fn pc(n: usize, i: i64) -> Expr {
    if i < 1 || i as usize > n {
        Expr::zero()
    } else {
        Expr::coord(p(i as usize))
    }
}

pub fn toda_hamiltonian(n: usize) -> Expr {
    let half = Expr::ratio(1, 2);
    let kinetic: Expr = (1..=n).map(|i| &half * &Expr::coord(p(i)).pow(2)).sum();
    let potential: Expr = (1..n as i64).map(|i| bond(n, i)).sum();
    &kinetic + &potential
}

/// The time-dependent non-Noether symmetry generator of the `n`-particle chain.
pub fn toda_symmetry(n: usize) -> MultiVec {
    let ni = n as i64;
    let t = Expr::time();
    let half = rat(1, 2);
    let mut comps = vec![Expr::zero(); 2 * n];
    for i in 1..=n {
        let ii = i as i64;
        let left = bond(n, ii - 1);
        let right = bond(n, ii);
        let eps_l = rat_int(epsilon(ii - 1));
        let eps_r = rat_int(epsilon(ni - ii));
        let pi = Expr::coord(p(i));

        let mut ep = pi.pow(2).scale(&half);
        ep += &left.scale(&(&eps_l * rat_int(ni - ii + 2)));
        ep -= &right.scale(&(&eps_r * rat_int(ni - ii)));
        let tl = (&(&pc(n, ii - 1) + &pi) * &left).scale(&eps_l);
        let tr = (&(&pi + &pc(n, ii + 1)) * &right).scale(&eps_r);
        ep += &(&t * &(&tl - &tr)).scale(&half);
        comps[p(i)] = ep;

        let mut eq = pi.scale(&rat_int(ni - ii + 1));
        for k in 1..i {
            eq -= &Expr::coord(p(k)).scale(&half);
        }
        for k in i + 1..=n {
            eq += &Expr::coord(p(k)).scale(&half);
        }
        let inner = &(&pi.pow(2) + &left.scale(&eps_l)) + &right.scale(&eps_r);
        eq += &(&t * &inner).scale(&half);
        comps[q(n, i)] = eq;
    }
    MultiVec::from_components(comps)
}

/// The `n`-particle non-periodic Toda chain with `z_i = p_i`, `z_{n+i} = q_i`.
pub fn build_toda(n: usize) -> PhaseModel {
    assert!(n >= 2, "the chain needs at least two particles");
    let dim = 2 * n;
    let symbols = Symbols::numbered("z", dim);
    let mut w = MultiVec::zero(dim, 2);
    let mut omega = Form::zero(dim, 2);
    for i in 1..=n {
        w.add_at(&[p(i), q(n, i)], Expr::one());
        omega.add_at(&[p(i), q(n, i)], Expr::one());
    }
    let e = toda_symmetry(n);
    let seed = seed_from_symmetry(&e, &omega);
    let volume = Form::basis(dim, &(0..dim).collect::<Vec<_>>());
    PhaseModel::new(
        format!("toda{n}"),
        symbols,
        w,
        Some(omega),
        toda_hamiltonian(n),
        e,
    )
    .and_then(|m| m.with_seed(seed))
    .and_then(|m| m.with_volume(volume))
    .expect("the Toda chain is a valid model")
}
