//! Lax pairs, the second differential `d̄` and the Frölicher-Nijenhuis
//! recursion operator induced by a symmetry.

use crate::expr::{rat_int, Expr, Var};
use crate::geom::{
    exterior_derivative, lie_derivative, schouten, Acts, Form, GeomError, MultiVec, Tensor11,
};
use crate::symmetry::{PhaseModel, SymmetryError};

/// `dL/dt = [L, P]` along the flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxPair {
    pub l: Tensor11,
    pub p: Tensor11,
}

/// Lax pair of a symmetry on a symplectic model.
///
/// `L` is the matrix of `R̄_E` (row `a` = image of `dz_a`):
/// `L_ab = Σ_{c,d} ω_bd (W_ac ∂_c E_d − E_c ∂_c W_da − W_dc ∂_c E_a)`,
/// and `P_ab = Σ_c (∂_b W_ac ∂_c h + W_ac ∂_b ∂_c h)`, the negated Jacobian
/// of the evolution field.
pub fn lax_pair(m: &PhaseModel) -> Result<LaxPair, SymmetryError> {
    let omega = m.omega().ok_or(SymmetryError::MissingSymplectic)?.matrix();
    let w = m.w().matrix();
    let e = m.e().components();
    let dim = m.dim();
    let de: Vec<Vec<Expr>> = e
        .iter()
        .map(|ec| (0..dim).map(|c| ec.d(c)).collect())
        .collect();
    let dw: Vec<Vec<Vec<Expr>>> = (0..dim)
        .map(|c| {
            w.iter()
                .map(|row| row.iter().map(|x| x.d(c)).collect())
                .collect()
        })
        .collect();

    let l = Tensor11::from_fn(dim, Acts::OnForms, |a, b| {
        let mut acc = Expr::zero();
        for d in 0..dim {
            if omega[b][d].is_zero() {
                continue;
            }
            let mut inner = Expr::zero();
            for c in 0..dim {
                inner += &(&w[a][c] * &de[d][c]);
                inner -= &(&e[c] * &dw[c][d][a]);
                inner -= &(&w[d][c] * &de[a][c]);
            }
            acc += &(&omega[b][d] * &inner);
        }
        acc
    });

    let h = m.h();
    let dh: Vec<Expr> = (0..dim).map(|c| h.d(c)).collect();
    let p = Tensor11::from_fn(dim, Acts::OnForms, |a, b| {
        (0..dim)
            .map(|c| &(&dw[b][a][c] * &dh[c]) + &(&w[a][c] * &dh[c].d(b)))
            .sum()
    });
    Ok(LaxPair { l, p })
}

/// Entrywise `∂L/∂t + {h, L_ab} − [L, P]_ab`.
pub fn lax_residual(m: &PhaseModel, lp: &LaxPair) -> Tensor11 {
    lp.l.map(|x| m.total_dt(x)).sub(&lp.l.commutator(&lp.p))
}

/// `d̄u = Φ_ω([[E, W], Φ_W(u)])`.
pub fn dbar(m: &PhaseModel, u: &Form) -> Result<Form, SymmetryError> {
    let musical = m.musical().ok_or(SymmetryError::MissingSymplectic)?;
    if u.degree() + 1 > u.dim() {
        return Err(GeomError::DegreeOverflow {
            degree: u.degree() + 1,
            dim: u.dim(),
        }
        .into());
    }
    let ew = m.e_bracket_w();
    let raised = musical.raise(u);
    Ok(musical.lower(&schouten(&ew, &raised)?))
}

#[derive(Debug, Clone)]
pub struct BicomplexReport {
    /// `d̄²` on each coordinate function and basis one-form.
    pub dbar_squared: Vec<(String, Form)>,
    /// `dd̄ + d̄d` on the same inputs.
    pub anticommutator: Vec<(String, Form)>,
    /// `(k+1) d̄I^(k) − k dI^(k+1)` for consecutive pairs.
    pub lenard: Vec<Form>,
}

impl BicomplexReport {
    pub fn holds(&self) -> bool {
        self.dbar_squared
            .iter()
            .chain(&self.anticommutator)
            .all(|(_, f)| f.is_zero())
            && self.lenard.iter().all(Form::is_zero)
    }
}

pub fn bicomplex_verify(m: &PhaseModel, laws: &[Expr]) -> Result<BicomplexReport, SymmetryError> {
    let dim = m.dim();
    let mut dbar_squared = Vec::new();
    let mut anticommutator = Vec::new();
    let mut inputs: Vec<(String, Form)> = Vec::new();
    for a in 0..dim {
        let name = m.symbols().name(a).to_string();
        inputs.push((name.clone(), Form::scalar(dim, Expr::coord(a))));
        inputs.push((format!("d{name}"), Form::basis(dim, &[a])));
    }
    for (name, u) in inputs {
        if u.degree() + 2 > dim {
            continue;
        }
        let du = dbar(m, &u)?;
        dbar_squared.push((name.clone(), dbar(m, &du)?));
        let mixed = &exterior_derivative(&du)? + &dbar(m, &exterior_derivative(&u)?)?;
        anticommutator.push((name, mixed));
    }
    let lenard = lenard_residuals(m, laws)?;
    Ok(BicomplexReport {
        dbar_squared,
        anticommutator,
        lenard,
    })
}

/// `(k+1) d̄I^(k) − k dI^(k+1)`.
pub fn lenard_residuals(m: &PhaseModel, laws: &[Expr]) -> Result<Vec<Form>, SymmetryError> {
    let mut out = Vec::new();
    for k in 1..laws.len() {
        let lhs = dbar(m, &Form::scalar(m.dim(), laws[k - 1].clone()))?;
        let rhs = m.differential(&laws[k]);
        out.push(
            &lhs.map(|e| e.scale(&rat_int(k as i64 + 1)))
                - &rhs.map(|e| e.scale(&rat_int(k as i64))),
        );
    }
    Ok(out)
}

/// `R̄_E` on one-forms and its transpose `R_E` on vector fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionOperator {
    pub r_forms: Tensor11,
    pub r_vectors: Tensor11,
}

/// `R̄_E(u) = L_E u − Φ_ω([E, Φ_W u])` and its dual `R_E(X) = Φ_W(L_E Φ_ω X) − [E, X]`.
pub fn fn_operator(m: &PhaseModel) -> Result<RecursionOperator, SymmetryError> {
    let musical = m.musical().ok_or(SymmetryError::MissingSymplectic)?;
    let dim = m.dim();
    let e = m.e();
    let mut forms = Vec::with_capacity(dim);
    let mut vectors = Vec::with_capacity(dim);
    for a in 0..dim {
        let dza = Form::basis(dim, &[a]);
        let img = &lie_derivative(e, &dza)? - &musical.lower(&schouten(e, musical.raise_basis(a))?);
        forms.push(img.components());
        let da = MultiVec::basis(dim, &[a]);
        let img = &musical.raise(&lie_derivative(e, musical.lower_basis(a))?) - &schouten(e, &da)?;
        vectors.push(img.components());
    }
    Ok(RecursionOperator {
        r_forms: Tensor11::from_rows(forms, Acts::OnForms),
        r_vectors: Tensor11::from_rows(vectors, Acts::OnVectors),
    })
}

/// `T(R)(X, Y) = [RX, RY] − R([RX, Y] + [X, RY] − R[X, Y])`.
pub fn torsion(r: &Tensor11, x: &MultiVec, y: &MultiVec) -> MultiVec {
    let br = |a: &MultiVec, b: &MultiVec| schouten(a, b).expect("vector fields");
    let rx = r.apply_vector(x);
    let ry = r.apply_vector(y);
    let inner = &(&br(&rx, y) + &br(x, &ry)) - &r.apply_vector(&br(x, y));
    &br(&rx, &ry) - &r.apply_vector(&inner)
}

/// Torsion on all coordinate pairs `(∂_a, ∂_b)`, `a < b`.
pub fn fn_torsion(r: &Tensor11) -> Vec<((usize, usize), MultiVec)> {
    let dim = r.dim();
    let mut out = Vec::new();
    for a in 0..dim {
        for b in a + 1..dim {
            let t = torsion(r, &MultiVec::basis(dim, &[a]), &MultiVec::basis(dim, &[b]));
            out.push(((a, b), t));
        }
    }
    out
}

/// `(k+1) R̄_E(dI^(k)) − k dI^(k+1)`.
pub fn recursion_check(m: &PhaseModel, r: &RecursionOperator, laws: &[Expr]) -> Vec<Form> {
    (1..laws.len())
        .map(|k| {
            let lhs = r.r_forms.apply_form(&m.differential(&laws[k - 1]));
            let rhs = m.differential(&laws[k]);
            &lhs.map(|e| e.scale(&rat_int(k as i64 + 1)))
                - &rhs.map(|e| e.scale(&rat_int(k as i64)))
        })
        .collect()
}

/// `∂R/∂t + L_{X_h} R` on vector fields; row `a` is the residual on `∂_a`.
pub fn fn_invariance(m: &PhaseModel, r: &Tensor11) -> Tensor11 {
    let x = m.flow();
    let dim = m.dim();
    let rows = (0..dim)
        .map(|a| {
            let da = MultiVec::basis(dim, &[a]);
            let rda = r.apply_vector(&da);
            let lie = &schouten(&x, &rda).expect("vectors")
                - &r.apply_vector(&schouten(&x, &da).expect("vectors"));
            (&rda.diff(Var::Time) + &lie).components()
        })
        .collect();
    Tensor11::from_rows(rows, Acts::OnVectors)
}

/// `(X, Y) ↦ ω(R^k X, Y)` as a two-form, or `None` when it is not
/// antisymmetric.
pub fn twisted_form(r: &Tensor11, omega: &Form, k: usize) -> Option<Form> {
    let dim = r.dim();
    let mut rk = Tensor11::identity(dim, r.acts());
    for _ in 0..k {
        rk = rk.matmul(r);
    }
    let om = omega.matrix();
    let rows: Vec<Vec<Expr>> = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| (0..dim).map(|c| rk.get(a, c) * &om[c][b]).sum())
                .collect()
        })
        .collect();
    for a in 0..dim {
        for b in a..dim {
            if !(&rows[a][b] + &rows[b][a]).is_zero() {
                return None;
            }
        }
    }
    Some(Form::from_matrix(&rows))
}
