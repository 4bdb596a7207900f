//! Phase-space models and checks on a candidate symmetry generator `E`.

use crate::expr::{Expr, ExprError, Rational, Symbols};
use crate::geom::{
    apply_vector, contract, exterior_derivative, interior, lie_derivative, schouten, Form,
    GeomError, MultiVec, Musical,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("phase space dimension {0} is not even")]
    OddDimension(usize),
    #[error("{0} has dimension {1}, expected {2}")]
    WrongShape(&'static str, usize, usize),
    #[error("{0} has degree {1}, expected {2}")]
    WrongDegree(&'static str, usize, usize),
    #[error("W is degenerate: its top wedge power vanishes")]
    DegeneratePoisson,
    #[error("omega is not closed")]
    NotClosed,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("the flow does not preserve the volume form")]
    NotLiouville,
    #[error("E does not satisfy dE/dt = [E, X]")]
    NotASymmetry,
    #[error("E differs from W(s)")]
    SeedMismatch,
    #[error("model has no seed one-form s")]
    MissingSeed,
    #[error("model has no symplectic form")]
    MissingSymplectic,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// A Hamiltonian system `(W, h)` on a coordinate patch with a candidate
/// symmetry generator `E`.
#[derive(Debug, Clone)]
pub struct PhaseModel {
    name: String,
    symbols: Symbols,
    w: MultiVec,
    omega: Option<Form>,
    musical: Option<Musical>,
    h: Expr,
    e: MultiVec,
    s: Option<Form>,
    volume: Option<Form>,
}

impl PhaseModel {
    /// Validates and assembles a model. When `omega` is absent and `W` has
    /// constant entries, `ω = −W⁻¹` is derived.
    pub fn new(
        name: impl Into<String>,
        symbols: Symbols,
        w: MultiVec,
        omega: Option<Form>,
        h: Expr,
        e: MultiVec,
    ) -> Result<PhaseModel, ModelError> {
        let dim = symbols.len();
        if !dim.is_multiple_of(2) {
            return Err(ModelError::OddDimension(dim));
        }
        if w.dim() != dim {
            return Err(ModelError::WrongShape("W", w.dim(), dim));
        }
        if w.degree() != 2 {
            return Err(ModelError::WrongDegree("W", w.degree(), 2));
        }
        if e.dim() != dim {
            return Err(ModelError::WrongShape("E", e.dim(), dim));
        }
        if e.degree() != 1 {
            return Err(ModelError::WrongDegree("E", e.degree(), 1));
        }
        if w.wedge_power(dim / 2)?.is_zero() {
            return Err(ModelError::DegeneratePoisson);
        }
        let omega = match omega {
            Some(o) => Some(o),
            None => Musical::symplectic_from_constant(&w).ok(),
        };
        let musical = match &omega {
            Some(o) => {
                if o.dim() != dim {
                    return Err(ModelError::WrongShape("omega", o.dim(), dim));
                }
                if o.degree() != 2 {
                    return Err(ModelError::WrongDegree("omega", o.degree(), 2));
                }
                let m = Musical::new(&w, o)?;
                if dim > 2 && !exterior_derivative(o)?.is_zero() {
                    return Err(ModelError::NotClosed);
                }
                Some(m)
            }
            None => None,
        };
        Ok(PhaseModel {
            name: name.into(),
            symbols,
            w,
            omega,
            musical,
            h,
            e,
            s: None,
            volume: None,
        })
    }

    pub fn with_seed(mut self, s: Form) -> Result<PhaseModel, ModelError> {
        if s.dim() != self.dim() {
            return Err(ModelError::WrongShape("s", s.dim(), self.dim()));
        }
        if s.degree() != 1 {
            return Err(ModelError::WrongDegree("s", s.degree(), 1));
        }
        self.s = Some(s);
        Ok(self)
    }

    pub fn with_volume(mut self, v: Form) -> Result<PhaseModel, ModelError> {
        if v.dim() != self.dim() {
            return Err(ModelError::WrongShape("volume", v.dim(), self.dim()));
        }
        if v.degree() != self.dim() {
            return Err(ModelError::WrongDegree("volume", v.degree(), self.dim()));
        }
        self.volume = Some(v);
        Ok(self)
    }

    /// Same system with another candidate generator.
    pub fn with_symmetry(&self, e: MultiVec) -> PhaseModel {
        assert_eq!(e.dim(), self.dim());
        assert_eq!(e.degree(), 1);
        PhaseModel { e, ..self.clone() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn n(&self) -> usize {
        self.dim() / 2
    }

    pub fn w(&self) -> &MultiVec {
        &self.w
    }

    pub fn omega(&self) -> Option<&Form> {
        self.omega.as_ref()
    }

    pub fn h(&self) -> &Expr {
        &self.h
    }

    pub fn e(&self) -> &MultiVec {
        &self.e
    }

    pub fn seed(&self) -> Option<&Form> {
        self.s.as_ref()
    }

    pub fn volume(&self) -> Option<&Form> {
        self.volume.as_ref()
    }

    pub fn musical(&self) -> Option<&Musical> {
        self.musical.as_ref()
    }

    pub fn differential(&self, f: &Expr) -> Form {
        exterior_derivative(&Form::scalar(self.dim(), f.clone())).expect("dimension is positive")
    }

    /// `X_f = W(df)`, i.e. `X_f^b = Σ_a ∂_a f · W^{ab}`.
    pub fn hamiltonian_field(&self, f: &Expr) -> MultiVec {
        contract(&self.differential(f), &self.w).expect("degrees fit")
    }

    /// The evolution field `X_h`.
    pub fn flow(&self) -> MultiVec {
        self.hamiltonian_field(&self.h)
    }

    /// `{f, g} = W(df ∧ dg)`.
    pub fn poisson(&self, f: &Expr, g: &Expr) -> Expr {
        let df = self.differential(f);
        let dg = self.differential(g);
        let mut acc = Expr::zero();
        for (idx, wab) in self.w.iter() {
            let (a, b) = (idx[0], idx[1]);
            let fa = df.get(&[a]);
            let fb = df.get(&[b]);
            let ga = dg.get(&[a]);
            let gb = dg.get(&[b]);
            acc += &(wab * &(&(&fa * &gb) - &(&fb * &ga)));
        }
        acc
    }

    /// Total time derivative `∂F/∂t + {h, F}` along the flow.
    pub fn total_dt(&self, f: &Expr) -> Expr {
        &f.dt() + &self.poisson(&self.h, f)
    }

    /// `[E, W]`.
    pub fn e_bracket_w(&self) -> MultiVec {
        schouten(&self.e, &self.w).expect("degrees fit")
    }

    /// The second Poisson bivector `Ŵ = Φ_W(L_E ω)`, computed as `−[E, W]`.
    pub fn second_bivector(&self) -> MultiVec {
        -&self.e_bracket_w()
    }

    /// `ω• = L_E ω`.
    pub fn omega_dot(&self) -> Option<Form> {
        self.omega
            .as_ref()
            .map(|o| lie_derivative(&self.e, o).expect("degrees fit"))
    }
}

/// Outcome of [`check_symmetry`].
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub is_symmetry: bool,
    pub is_noether: bool,
    pub yang_baxter: bool,
    /// `symmetry`: `∂E/∂t − [E, X_h]`; `noether`: `[E, W]`;
    /// `yang_baxter`: `[[E, [E, W]], W]`.
    pub residuals: Vec<(String, MultiVec)>,
}

impl SymmetryReport {
    pub fn residual(&self, name: &str) -> Option<&MultiVec> {
        self.residuals
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r)
    }
}

pub fn symmetry_residual(m: &PhaseModel) -> MultiVec {
    let bracket = schouten(m.e(), &m.flow()).expect("degrees fit");
    &m.e().diff(crate::expr::Var::Time) - &bracket
}

pub fn check_symmetry(m: &PhaseModel) -> SymmetryReport {
    let sym = symmetry_residual(m);
    let ew = m.e_bracket_w();
    let yb = check_yang_baxter(m);
    let is_symmetry = sym.is_zero();
    SymmetryReport {
        is_symmetry,
        is_noether: is_symmetry && ew.is_zero(),
        yang_baxter: yb.is_zero(),
        residuals: vec![
            ("symmetry".into(), sym),
            ("noether".into(), ew),
            ("yang_baxter".into(), yb),
        ],
    }
}

/// `[[E, [E, W]], W]`, zero when the Yang-Baxter condition holds.
pub fn check_yang_baxter(m: &PhaseModel) -> MultiVec {
    let ew = m.e_bracket_w();
    let eew = schouten(m.e(), &ew).expect("degrees fit");
    top_bracket(&eew, m.w())
}

/// Bracket of two bivectors; a trivector vanishes identically in dimension 2.
fn top_bracket(p: &MultiVec, q: &MultiVec) -> MultiVec {
    match schouten(p, q) {
        Err(GeomError::DegreeOverflow { degree, dim }) => MultiVec::zero(dim, degree),
        other => other.expect("degrees fit"),
    }
}

#[derive(Debug, Clone)]
pub struct BiHamiltonianReport {
    pub w_w: MultiVec,
    pub what_w: MultiVec,
    pub what_what: MultiVec,
    /// Coefficient of `W^n` on the top basis element.
    pub w_top: Expr,
}

impl BiHamiltonianReport {
    pub fn holds(&self) -> bool {
        self.w_w.is_zero()
            && self.what_w.is_zero()
            && self.what_what.is_zero()
            && !self.w_top.is_zero()
    }
}

pub fn check_bihamiltonian(m: &PhaseModel) -> BiHamiltonianReport {
    let what = m.second_bivector();
    BiHamiltonianReport {
        w_w: top_bracket(m.w(), m.w()),
        what_w: top_bracket(&what, m.w()),
        what_what: top_bracket(&what, &what),
        w_top: m.w().wedge_power(m.n()).expect("degrees fit").coefficient(),
    }
}

#[derive(Debug, Clone)]
pub struct HojmanFamily {
    /// `J, L_E J, …, (L_E)^depth J`.
    pub members: Vec<Expr>,
    /// Total time derivatives of the members along `X`.
    pub conservation: Vec<Expr>,
}

/// `J = L_E Ω / Ω` and its iterates `(L_E)^k J` for a volume-preserving flow `X`.
pub fn hojman_invariant(
    x: &MultiVec,
    e: &MultiVec,
    volume: &Form,
    depth: usize,
) -> Result<HojmanFamily, SymmetryError> {
    if !lie_derivative(x, volume)?.is_zero() {
        return Err(SymmetryError::NotLiouville);
    }
    let commutes = &e.diff(crate::expr::Var::Time) - &schouten(e, x)?;
    if !commutes.is_zero() {
        return Err(SymmetryError::NotASymmetry);
    }
    let num = lie_derivative(e, volume)?.coefficient();
    let j = num.exact_divide(&volume.coefficient())?;
    let mut members = vec![j];
    for _ in 0..depth {
        let next = apply_vector(e, members.last().unwrap());
        members.push(next);
    }
    let conservation = members
        .iter()
        .map(|f| &f.dt() + &apply_vector(x, f))
        .collect();
    Ok(HojmanFamily {
        members,
        conservation,
    })
}

/// Exact constant `c` with `a = c·b`, if one exists and `b ≠ 0`.
pub fn proportionality(a: &MultiVec, b: &MultiVec) -> Option<Rational> {
    let (idx, pivot) = b.iter().next()?;
    let c = a.get(idx).exact_divide(pivot).ok()?.as_constant()?;
    let scaled = b.map(|e| e.scale(&c));
    (a == &scaled).then_some(c)
}

#[derive(Debug, Clone)]
pub struct OrbitFamily {
    /// `c0` with `Φ_W((L_{W(s)})²ω) = c0·[W(s), [W(s), W]]`.
    pub c0: Option<Rational>,
    /// Ratio of `[W, [W(s), W](s)]` to `[W(s), [W(s), W]]`.
    pub c0_nested: Option<Rational>,
    /// `c1` with `W(L_{W(s)} dJ) = c1·[W(s), W](dJ)`.
    pub c1: Option<Rational>,
    /// `J, L_{W(s)} J, …`.
    pub family: Vec<Expr>,
}

impl OrbitFamily {
    pub fn involutive_by_theorem(&self) -> bool {
        self.c0.is_some() && self.c1.is_some()
    }
}

/// The orbit of `J` under the seed field `W(s)`, with the constants that
/// make the orbit involutive.
pub fn orbit_family(m: &PhaseModel, j: &Expr, depth: usize) -> Result<OrbitFamily, SymmetryError> {
    let s = m.seed().ok_or(SymmetryError::MissingSeed)?;
    let ws = contract(s, m.w())?;
    if &ws != m.e() {
        return Err(SymmetryError::SeedMismatch);
    }
    let musical = m.musical().ok_or(SymmetryError::MissingSymplectic)?;
    let omega = m.omega().ok_or(SymmetryError::MissingSymplectic)?;

    let ws_w = schouten(&ws, m.w())?;
    let rhs0 = schouten(&ws, &ws_w)?;
    let l2 = lie_derivative(&ws, &lie_derivative(&ws, omega)?)?;
    let c0 = proportionality(&musical.raise(&l2), &rhs0).filter(|c| *c != crate::expr::rat_int(-1));
    let nested = schouten(m.w(), &contract(s, &ws_w)?)?;
    let c0_nested = proportionality(&nested, &rhs0);

    let dj = m.differential(j);
    let lhs1 = contract(&lie_derivative(&ws, &dj)?, m.w())?;
    let rhs1 = contract(&dj, &ws_w)?;
    let c1 = proportionality(&lhs1, &rhs1);

    let mut family = vec![j.clone()];
    for _ in 0..depth {
        let next = apply_vector(&ws, family.last().unwrap());
        family.push(next);
    }
    Ok(OrbitFamily {
        c0,
        c0_nested,
        c1,
        family,
    })
}

/// `s = −i_E ω`, the seed with `W(s) = E`.
pub fn seed_from_symmetry(e: &MultiVec, omega: &Form) -> Form {
    -&interior(e, omega).expect("degrees fit")
}
