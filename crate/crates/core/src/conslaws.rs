//! Conservation laws generated by a non-Noether symmetry: `Y^(k)`, `C^(k)`,
//! `I^(k)` and the secular roots `c_i`.

use nalgebra::{Complex, DMatrix};

use crate::expr::{rat_int, Compiled, Expr, ExprError};
use crate::geom::{interior, Form};
use crate::symmetry::{PhaseModel, SymmetryError};

#[derive(Debug, Clone)]
pub struct ConservedSet {
    pub y: Vec<Expr>,
    pub c: Vec<Expr>,
    pub i: Vec<Expr>,
}

impl ConservedSet {
    pub fn build(m: &PhaseModel, k_max: usize) -> Result<ConservedSet, SymmetryError> {
        let y = y_laws(m)?;
        let (c, i) = c_and_i_laws(m, k_max)?;
        Ok(ConservedSet { y, c, i })
    }

    pub fn roots_at(&self, m: &PhaseModel, z: &[f64], t: f64) -> SecularRoots {
        secular_roots(m, z, t)
    }
}

/// `Y^(k) = Ŵ^k ∧ W^{n−k} / W^n` for `k = 1..n`.
pub fn y_laws(m: &PhaseModel) -> Result<Vec<Expr>, ExprError> {
    let n = m.n();
    let what = m.second_bivector();
    let top = m.w().wedge_power(n).expect("degrees fit").coefficient();
    let mut w_pow = vec![m.w().wedge_power(0).expect("degree 0")];
    for _ in 0..n {
        let next = w_pow.last().unwrap().wedge(m.w()).expect("degrees fit");
        w_pow.push(next);
    }
    let mut out = Vec::with_capacity(n);
    let mut what_pow = what.clone();
    for k in 1..=n {
        let num = what_pow
            .wedge(&w_pow[n - k])
            .expect("degrees fit")
            .coefficient();
        out.push(num.exact_divide(&top)?);
        if k < n {
            what_pow = what_pow.wedge(&what).expect("degrees fit");
        }
    }
    Ok(out)
}

/// Pointwise `Y^(k)` values, usable when the symbolic quotient does not exist.
pub fn y_values_at(m: &PhaseModel, z: &[f64], t: f64) -> Vec<f64> {
    let n = m.n();
    let what = m.second_bivector();
    let top = m
        .w()
        .wedge_power(n)
        .expect("degrees fit")
        .coefficient()
        .compile()
        .eval(z, t);
    (1..=n)
        .map(|k| {
            let num = what
                .wedge_power(k)
                .and_then(|a| a.wedge(&m.w().wedge_power(n - k)?))
                .expect("degrees fit")
                .coefficient();
            num.compile().eval(z, t) / top
        })
        .collect()
}

/// `C^(k) = i_{W^k} (L_E ω)^k / (k!)²` for `k ≤ n`, and `I^(k)` for
/// `k ≤ k_max` from the Newton recursion. The interior product pairs basis
/// elements to 1, so both wedge powers carry a `k!`.
pub fn c_and_i_laws(m: &PhaseModel, k_max: usize) -> Result<(Vec<Expr>, Vec<Expr>), SymmetryError> {
    let n = m.n();
    let od = m.omega_dot().ok_or(SymmetryError::MissingSymplectic)?;
    let mut c = Vec::with_capacity(n);
    let mut w_pow = m.w().clone();
    let mut od_pow: Form = od.clone();
    let mut fact = rat_int(1);
    for k in 1..=n {
        fact *= rat_int(k as i64);
        let norm = (&fact * &fact).recip();
        c.push(interior(&w_pow, &od_pow)?.coefficient().scale(&norm));
        if k < n {
            w_pow = w_pow.wedge(m.w())?;
            od_pow = od_pow.wedge(&od)?;
        }
    }
    Ok((c.clone(), power_sums(&c, k_max)))
}

/// Power sums `I^(m) = Σ c_i^m` from elementary symmetric functions `C^(k)`:
/// `I^(m) + (−1)^m m C^(m) + Σ_{k=1}^{m−1} (−1)^k I^(m−k) C^(k) = 0`.
pub fn power_sums(c: &[Expr], k_max: usize) -> Vec<Expr> {
    let e = |k: usize| c.get(k - 1).cloned().unwrap_or_default();
    let mut i: Vec<Expr> = Vec::with_capacity(k_max);
    for m in 1..=k_max {
        let sign = |p: usize| {
            if p.is_multiple_of(2) {
                rat_int(1)
            } else {
                rat_int(-1)
            }
        };
        let mut acc = e(m).scale(&(sign(m + 1) * rat_int(m as i64)));
        for k in 1..m {
            acc += &(&i[m - k - 1] * &e(k)).scale(&sign(k + 1));
        }
        i.push(acc);
    }
    i
}

#[derive(Debug, Clone)]
pub struct SecularRoots {
    /// Roots sorted ascending by real part.
    pub roots: Vec<Complex<f64>>,
    pub complex: bool,
    pub pairing_warning: bool,
}

impl SecularRoots {
    pub fn real(&self) -> Vec<f64> {
        self.roots.iter().map(|c| c.re).collect()
    }
}

fn eval_matrix(rows: &[Vec<Expr>], z: &[f64], t: f64) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |a, b| rows[a][b].compile().eval(z, t))
}

/// Roots of the pencil `Ŵ − cW` at a point, one per doubled eigenvalue.
pub fn secular_roots(m: &PhaseModel, z: &[f64], t: f64) -> SecularRoots {
    let w = eval_matrix(&m.w().matrix(), z, t);
    let what = eval_matrix(&m.second_bivector().matrix(), z, t);
    pencil_roots(&w, &what)
}

/// Halved spectrum of `W⁻¹Ŵ`, with eigenvalues paired by proximity.
pub fn pencil_roots(w: &DMatrix<f64>, what: &DMatrix<f64>) -> SecularRoots {
    let dim = w.nrows();
    let mat = w
        .clone()
        .lu()
        .solve(what)
        .unwrap_or_else(|| DMatrix::from_element(dim, dim, f64::NAN));
    let mut eig = eigenvalues(mat).unwrap_or_else(|| vec![Complex::new(f64::NAN, 0.0); dim]);
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut used = vec![false; eig.len()];
    let mut roots = Vec::with_capacity(dim / 2);
    let mut pairing_warning = false;
    for i in 0..eig.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = (0..eig.len()).filter(|&j| !used[j]).min_by(|&a, &b| {
            (eig[a] - eig[i])
                .norm()
                .total_cmp(&(eig[b] - eig[i]).norm())
        });
        match partner {
            Some(j) => {
                used[j] = true;
                if (eig[j] - eig[i]).norm() > 1e-6 * (1.0 + eig[i].norm()) {
                    pairing_warning = true;
                }
                roots.push((eig[i] + eig[j]) * 0.5);
            }
            None => {
                pairing_warning = true;
                roots.push(eig[i]);
            }
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let complex = roots.iter().any(|c| c.im.abs() > 1e-9 * (1.0 + c.norm()));
    SecularRoots {
        roots,
        complex,
        pairing_warning,
    }
}

/// Eigenvalues of a real square matrix via its real Schur form.
pub fn eigenvalues(mat: DMatrix<f64>) -> Option<Vec<Complex<f64>>> {
    // The QR iteration never deflates a zero matrix.
    if mat.iter().all(|x| *x == 0.0) {
        return Some(vec![Complex::new(0.0, 0.0); mat.nrows()]);
    }
    let (_, tri) = mat.try_schur(1e-14, 10_000)?.unpack();
    Some(schur_eigenvalues(&tri))
}

/// Eigenvalues of a real quasi-triangular matrix. Near-degenerate real pairs
/// in a 2×2 block come out real instead of with a NaN imaginary part.
fn schur_eigenvalues(tri: &DMatrix<f64>) -> Vec<Complex<f64>> {
    let dim = tri.nrows();
    let mut out = Vec::with_capacity(dim);
    let mut i = 0;
    while i < dim {
        if i + 1 < dim && tri[(i + 1, i)] != 0.0 {
            let (a, b, c, d) = (
                tri[(i, i)],
                tri[(i, i + 1)],
                tri[(i + 1, i)],
                tri[(i + 1, i + 1)],
            );
            let mid = (a + d) / 2.0;
            let disc = ((a - d) / 2.0).powi(2) + b * c;
            if disc >= 0.0 {
                let r = disc.sqrt();
                out.push(Complex::new(mid + r, 0.0));
                out.push(Complex::new(mid - r, 0.0));
            } else {
                let r = (-disc).sqrt();
                out.push(Complex::new(mid, r));
                out.push(Complex::new(mid, -r));
            }
            i += 2;
        } else {
            out.push(Complex::new(tri[(i, i)], 0.0));
            i += 1;
        }
    }
    out
}

/// Elementary symmetric polynomials `e_1..e_n` of `xs`.
pub fn elementary_symmetric(xs: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; xs.len() + 1];
    e[0] = 1.0;
    for (j, x) in xs.iter().enumerate() {
        for k in (1..=j + 1).rev() {
            e[k] += e[k - 1] * x;
        }
    }
    e[1..].to_vec()
}

/// All pairwise Poisson brackets, symbolically.
pub fn involutivity_symbolic(m: &PhaseModel, fs: &[Expr]) -> Vec<Vec<Expr>> {
    fs.iter()
        .map(|f| fs.iter().map(|g| m.poisson(f, g)).collect())
        .collect()
}

/// Pointwise bracket evaluator built from compiled gradients.
pub struct NumericBracket {
    w: Vec<(usize, usize, Compiled)>,
    grads: Vec<Vec<Compiled>>,
}

impl NumericBracket {
    pub fn new(m: &PhaseModel, fs: &[Expr]) -> NumericBracket {
        let w = m
            .w()
            .iter()
            .map(|(idx, e)| (idx[0], idx[1], e.compile()))
            .collect();
        let grads = fs
            .iter()
            .map(|f| (0..m.dim()).map(|a| f.d(a).compile()).collect())
            .collect();
        NumericBracket { w, grads }
    }

    pub fn bracket(&self, i: usize, j: usize, z: &[f64], t: f64) -> f64 {
        let (gi, gj) = (&self.grads[i], &self.grads[j]);
        self.w
            .iter()
            .map(|(a, b, wab)| {
                wab.eval(z, t)
                    * (gi[*a].eval(z, t) * gj[*b].eval(z, t)
                        - gi[*b].eval(z, t) * gj[*a].eval(z, t))
            })
            .sum()
    }

    /// Largest `|{f_i, f_j}|` over the given points.
    pub fn max_abs(&self, points: &[Vec<f64>], t: f64) -> f64 {
        let k = self.grads.len();
        let mut worst: f64 = 0.0;
        for z in points {
            for i in 0..k {
                for j in i + 1..k {
                    worst = worst.max(self.bracket(i, j, z, t).abs());
                }
            }
        }
        worst
    }
}

/// Numeric rank of the Jacobian `∂f_k/∂z_a` at a point.
pub fn jacobian_rank(fs: &[Expr], dim: usize, z: &[f64], t: f64) -> usize {
    let j = DMatrix::from_fn(fs.len(), dim, |k, a| fs[k].d(a).compile().eval(z, t));
    let scale = j.amax().max(1.0);
    j.svd(false, false).rank(1e-10 * scale)
}
