//! Multivectors and differential forms on a coordinate patch, with the
//! calculus built on them.

mod calculus;
mod musical;
mod tensor11;

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use crate::expr::{Expr, Symbols, Var};

pub use calculus::{
    apply_vector, contract, exterior_derivative, interior, lie_derivative, lie_derivative_multivec,
    schouten,
};
pub use musical::Musical;
pub use tensor11::{Acts, Tensor11};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("degree {degree} exceeds dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error(
        "W and omega are not mutually inverse: entry ({0}, {1}) of -W*omega is not the identity"
    )]
    InconsistentPair(usize, usize),
    #[error("W has non-constant entries; omega must be supplied")]
    NonConstantPoisson,
    #[error("W is degenerate")]
    Degenerate,
}

pub trait Variance: Copy + fmt::Debug + PartialEq + Eq + Default + 'static {
    const BASIS: &'static str;
}

/// Contravariant slots (`∂_a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Up;

/// Covariant slots (`dz_a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Down;

impl Variance for Up {
    const BASIS: &'static str = "D";
}

impl Variance for Down {
    const BASIS: &'static str = "d";
}

/// Totally antisymmetric tensor stored on strictly increasing index tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alt<V: Variance> {
    dim: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Expr>,
    _v: PhantomData<V>,
}

pub type MultiVec = Alt<Up>;
pub type Form = Alt<Down>;

/// Sorts `idx` in place, returning the permutation sign, or `None` on a repeat.
pub(crate) fn sort_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl<V: Variance> Alt<V> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Alt {
            dim,
            degree,
            comps: BTreeMap::new(),
            _v: PhantomData,
        }
    }

    pub fn scalar(dim: usize, e: Expr) -> Self {
        let mut out = Self::zero(dim, 0);
        out.add_at(&[], e);
        out
    }

    /// `coef · b_{i1} ∧ … ∧ b_{ip}`; indices may be unordered.
    pub fn monomial(dim: usize, idx: &[usize], coef: Expr) -> Self {
        let mut out = Self::zero(dim, idx.len());
        out.add_at(idx, coef);
        out
    }

    pub fn basis(dim: usize, idx: &[usize]) -> Self {
        Self::monomial(dim, idx, Expr::one())
    }

    /// Degree-one element with the given components.
    pub fn from_components(comps: Vec<Expr>) -> Self {
        let dim = comps.len();
        let mut out = Self::zero(dim, 1);
        for (i, c) in comps.into_iter().enumerate() {
            out.add_at(&[i], c);
        }
        out
    }

    /// Degree-two element from the upper triangle of an antisymmetric matrix.
    pub fn from_matrix(m: &[Vec<Expr>]) -> Self {
        let dim = m.len();
        let mut out = Self::zero(dim, 2);
        for (a, row) in m.iter().enumerate() {
            for (b, e) in row.iter().enumerate().skip(a + 1) {
                out.add_at(&[a, b], e.clone());
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Number of nonzero components.
    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Expr)> {
        self.comps.iter()
    }

    /// Component on an arbitrary index tuple, with the antisymmetry sign.
    pub fn get(&self, idx: &[usize]) -> Expr {
        let mut sorted = idx.to_vec();
        match sort_sign(&mut sorted) {
            None => Expr::zero(),
            Some(sign) => match self.comps.get(&sorted) {
                None => Expr::zero(),
                Some(e) if sign > 0 => e.clone(),
                Some(e) => -e,
            },
        }
    }

    /// Adds `e` to the component on `idx` (any order).
    pub fn add_at(&mut self, idx: &[usize], e: Expr) {
        assert_eq!(
            idx.len(),
            self.degree,
            "index tuple length must equal the degree"
        );
        assert!(idx.iter().all(|&i| i < self.dim), "index out of range");
        if e.is_zero() {
            return;
        }
        let mut sorted = idx.to_vec();
        let Some(sign) = sort_sign(&mut sorted) else {
            return;
        };
        let slot = self.comps.entry(sorted.clone()).or_default();
        if sign > 0 {
            *slot += &e;
        } else {
            *slot -= &e;
        }
        if slot.is_zero() {
            self.comps.remove(&sorted);
        }
    }

    /// Components of a degree-one element.
    pub fn components(&self) -> Vec<Expr> {
        assert_eq!(self.degree, 1);
        (0..self.dim).map(|i| self.get(&[i])).collect()
    }

    /// Full antisymmetric matrix of a degree-two element.
    pub fn matrix(&self) -> Vec<Vec<Expr>> {
        assert_eq!(self.degree, 2);
        (0..self.dim)
            .map(|a| (0..self.dim).map(|b| self.get(&[a, b])).collect())
            .collect()
    }

    /// The coefficient of a degree-zero or top-degree element.
    pub fn coefficient(&self) -> Expr {
        assert!(self.degree == 0 || self.degree == self.dim);
        self.comps.values().next().cloned().unwrap_or_default()
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (k, e) in &self.comps {
            out.add_at(k, f(e));
        }
        out
    }

    pub fn scale(&self, s: &Expr) -> Self {
        self.map(|e| e * s)
    }

    pub fn diff(&self, v: Var) -> Self {
        self.map(|e| e.diff(v))
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, GeomError> {
        if self.dim != other.dim {
            return Err(GeomError::DimensionMismatch(self.dim, other.dim));
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Err(GeomError::DegreeOverflow {
                degree,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim, degree);
        for (i, a) in &self.comps {
            for (j, b) in &other.comps {
                let mut idx: Vec<usize> = i.iter().chain(j.iter()).copied().collect();
                if let Some(sign) = sort_sign(&mut idx) {
                    let prod = a * b;
                    out.add_at(&idx, if sign > 0 { prod } else { -prod });
                }
            }
        }
        Ok(out)
    }

    /// `self ∧ … ∧ self` (`k` factors); `k = 0` gives the scalar 1.
    pub fn wedge_power(&self, k: usize) -> Result<Self, GeomError> {
        let mut acc = Self::scalar(self.dim, Expr::one());
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    pub fn display<'a>(&'a self, symbols: &'a Symbols) -> AltDisplay<'a, V> {
        AltDisplay { alt: self, symbols }
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
    }
}

impl<V: Variance> Add<&Alt<V>> for &Alt<V> {
    type Output = Alt<V>;
    fn add(self, rhs: &Alt<V>) -> Alt<V> {
        self.check_same(rhs);
        let mut out = self.clone();
        for (k, e) in &rhs.comps {
            out.add_at(k, e.clone());
        }
        out
    }
}

impl<V: Variance> Sub<&Alt<V>> for &Alt<V> {
    type Output = Alt<V>;
    fn sub(self, rhs: &Alt<V>) -> Alt<V> {
        self.check_same(rhs);
        let mut out = self.clone();
        for (k, e) in &rhs.comps {
            out.add_at(k, -e);
        }
        out
    }
}

impl<V: Variance> Neg for &Alt<V> {
    type Output = Alt<V>;
    fn neg(self) -> Alt<V> {
        self.map(|e| -e)
    }
}

pub struct AltDisplay<'a, V: Variance> {
    alt: &'a Alt<V>,
    symbols: &'a Symbols,
}

impl<V: Variance> fmt::Display for AltDisplay<'_, V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alt.is_zero() {
            return write!(f, "0");
        }
        for (n, (idx, e)) in self.alt.comps.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", self.symbols.show(e))?;
            for i in idx {
                let name = if *i < self.symbols.len() {
                    self.symbols.name(*i).to_string()
                } else {
                    format!("z{}", i + 1)
                };
                write!(f, " {}{}", V::BASIS, name)?;
            }
        }
        Ok(())
    }
}
