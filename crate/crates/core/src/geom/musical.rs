use num_traits::{One, Zero};

use super::{Form, GeomError, MultiVec};
use crate::expr::{Expr, Rational};

/// The isomorphisms `Φ_W: u ↦ W(u)` and `Φ_ω: X ↦ −i_X ω`, extended
/// multiplicatively to all degrees.
#[derive(Debug, Clone)]
pub struct Musical {
    dim: usize,
    raised: Vec<MultiVec>,
    lowered: Vec<Form>,
}

impl Musical {
    /// Builds the pair, requiring `Φ_ω ∘ Φ_W = id` on every basis form.
    pub fn new(w: &MultiVec, omega: &Form) -> Result<Musical, GeomError> {
        if w.dim() != omega.dim() {
            return Err(GeomError::DimensionMismatch(w.dim(), omega.dim()));
        }
        let dim = w.dim();
        let wm = w.matrix();
        let om = omega.matrix();
        for a in 0..dim {
            for c in 0..dim {
                let s: Expr = (0..dim).map(|b| -(&wm[a][b] * &om[b][c])).sum();
                let want = if a == c { Expr::one() } else { Expr::zero() };
                if s != want {
                    return Err(GeomError::InconsistentPair(a, c));
                }
            }
        }
        let raised = (0..dim)
            .map(|a| MultiVec::from_components(wm[a].clone()))
            .collect();
        let lowered = (0..dim)
            .map(|a| Form::from_components(om[a].iter().map(|e| -e).collect()))
            .collect();
        Ok(Musical {
            dim,
            raised,
            lowered,
        })
    }

    /// `ω = −W⁻¹` for a Poisson bivector with rational constant entries.
    pub fn symplectic_from_constant(w: &MultiVec) -> Result<Form, GeomError> {
        let dim = w.dim();
        let mut m: Vec<Vec<Rational>> = Vec::with_capacity(dim);
        for row in w.matrix() {
            let r: Option<Vec<Rational>> = row.iter().map(Expr::as_constant).collect();
            m.push(r.ok_or(GeomError::NonConstantPoisson)?);
        }
        let inv = invert(m).ok_or(GeomError::Degenerate)?;
        let neg: Vec<Vec<Expr>> = inv
            .into_iter()
            .map(|row| row.into_iter().map(|c| Expr::constant(-c)).collect())
            .collect();
        Ok(Form::from_matrix(&neg))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Φ_W(dz_a)`.
    pub fn raise_basis(&self, a: usize) -> &MultiVec {
        &self.raised[a]
    }

    /// `Φ_ω(∂_a)`.
    pub fn lower_basis(&self, a: usize) -> &Form {
        &self.lowered[a]
    }

    pub fn raise(&self, u: &Form) -> MultiVec {
        let mut out = MultiVec::zero(self.dim, u.degree());
        for (idx, c) in u.iter() {
            let mut img = MultiVec::scalar(self.dim, c.clone());
            for &i in idx {
                img = img.wedge(&self.raised[i]).expect("degree within range");
            }
            out = &out + &img;
        }
        out
    }

    pub fn lower(&self, v: &MultiVec) -> Form {
        let mut out = Form::zero(self.dim, v.degree());
        for (idx, c) in v.iter() {
            let mut img = Form::scalar(self.dim, c.clone());
            for &i in idx {
                img = img.wedge(&self.lowered[i]).expect("degree within range");
            }
            out = &out + &img;
        }
        out
    }
}

fn invert(mut m: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let a = &m[col][j] * &f;
                    m[r][j] -= a;
                    let b = &inv[col][j] * &f;
                    inv[r][j] -= b;
                }
            }
        }
    }
    Some(inv)
}
