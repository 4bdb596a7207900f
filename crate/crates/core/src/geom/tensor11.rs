use super::{Form, MultiVec};
use crate::expr::{Expr, Symbols, Var};

/// What a [`Tensor11`] acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acts {
    OnForms,
    OnVectors,
}

/// Square matrix of expressions read as a (1,1)-tensor.
///
/// Row `a` holds the image of the `a`-th basis element: `T(dz_a) = Σ_b T_ab dz_b`
/// on forms, `T(∂_a) = Σ_b T_ab ∂_b` on vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor11 {
    dim: usize,
    entries: Vec<Expr>,
    acts: Acts,
}

impl Tensor11 {
    pub fn zero(dim: usize, acts: Acts) -> Tensor11 {
        Tensor11 {
            dim,
            entries: vec![Expr::zero(); dim * dim],
            acts,
        }
    }

    pub fn identity(dim: usize, acts: Acts) -> Tensor11 {
        Tensor11::from_fn(
            dim,
            acts,
            |a, b| if a == b { Expr::one() } else { Expr::zero() },
        )
    }

    pub fn from_fn(dim: usize, acts: Acts, mut f: impl FnMut(usize, usize) -> Expr) -> Tensor11 {
        let mut entries = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                entries.push(f(a, b));
            }
        }
        Tensor11 { dim, entries, acts }
    }

    pub fn from_rows(rows: Vec<Vec<Expr>>, acts: Acts) -> Tensor11 {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Tensor11 {
            dim,
            entries: rows.into_iter().flatten().collect(),
            acts,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn acts(&self) -> Acts {
        self.acts
    }

    pub fn get(&self, a: usize, b: usize) -> &Expr {
        &self.entries[a * self.dim + b]
    }

    pub fn set(&mut self, a: usize, b: usize, e: Expr) {
        self.entries[a * self.dim + b] = e;
    }

    pub fn rows(&self) -> Vec<Vec<Expr>> {
        self.entries
            .chunks(self.dim)
            .map(<[Expr]>::to_vec)
            .collect()
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Tensor11 {
        Tensor11 {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
            acts: self.acts,
        }
    }

    pub fn zip(&self, other: &Tensor11, f: impl Fn(&Expr, &Expr) -> Expr) -> Tensor11 {
        assert_eq!(self.dim, other.dim);
        Tensor11 {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
            acts: self.acts,
        }
    }

    pub fn add(&self, other: &Tensor11) -> Tensor11 {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Tensor11) -> Tensor11 {
        self.zip(other, |a, b| a - b)
    }

    pub fn diff(&self, v: Var) -> Tensor11 {
        self.map(|e| e.diff(v))
    }

    pub fn transpose(&self) -> Tensor11 {
        Tensor11::from_fn(self.dim, self.acts, |a, b| self.get(b, a).clone())
    }

    pub fn matmul(&self, other: &Tensor11) -> Tensor11 {
        assert_eq!(self.dim, other.dim);
        Tensor11::from_fn(self.dim, self.acts, |a, b| {
            (0..self.dim)
                .filter(|&c| !self.get(a, c).is_zero() && !other.get(c, b).is_zero())
                .map(|c| self.get(a, c) * other.get(c, b))
                .sum()
        })
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Tensor11) -> Tensor11 {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn trace(&self) -> Expr {
        (0..self.dim).map(|a| self.get(a, a).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Expr::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }

    /// Image of a one-form; the tensor must act on forms.
    pub fn apply_form(&self, u: &Form) -> Form {
        assert_eq!(self.acts, Acts::OnForms);
        assert_eq!(u.degree(), 1);
        let comps = u.components();
        Form::from_components(self.image(&comps))
    }

    /// Image of a vector field; the tensor must act on vectors.
    pub fn apply_vector(&self, x: &MultiVec) -> MultiVec {
        assert_eq!(self.acts, Acts::OnVectors);
        assert_eq!(x.degree(), 1);
        let comps = x.components();
        MultiVec::from_components(self.image(&comps))
    }

    fn image(&self, comps: &[Expr]) -> Vec<Expr> {
        (0..self.dim)
            .map(|b| {
                (0..self.dim)
                    .filter(|&a| !comps[a].is_zero() && !self.get(a, b).is_zero())
                    .map(|a| &comps[a] * self.get(a, b))
                    .sum()
            })
            .collect()
    }

    pub fn display(&self, symbols: &Symbols) -> String {
        let mut out = String::new();
        for a in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|b| symbols.show(self.get(a, b)).to_string())
                .collect();
            out.push_str(&format!("[{}]\n", row.join(", ")));
        }
        out
    }
}
