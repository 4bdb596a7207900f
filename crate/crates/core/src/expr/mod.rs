//! Exact scalar expressions: finite sums of `c · t^k · z^α · exp(λ·z)` with
//! rational `c` and rational-linear `λ`, kept in a canonical normal form.

mod parse;
mod print;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use parse::parse_with;
pub use print::Displayed;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("exp argument `{0}` is not a rational-linear form in the coordinates")]
    NonLinearExponent(String),
    #[error("coordinate index {0} is unbound")]
    UnboundCoordinate(usize),
    #[error("no exact quotient exists")]
    NotDivisible,
    #[error("division by the zero expression")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Differentiation variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Coord(usize),
    Time,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent data of one term.
///
/// Ordering is lexicographic on `(t, monomial, exponent vector)`, each vector
/// compared densely (a missing index counts as zero). This is a group order,
/// so leading terms multiply.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TermKey {
    t: u32,
    mono: Vec<(usize, u32)>,
    lin: Vec<(usize, Rational)>,
}

fn dense_cmp<T: Ord + Zero>(a: &[(usize, T)], b: &[(usize, T)]) -> Ordering {
    let zero = T::zero();
    let (mut i, mut j) = (0, 0);
    loop {
        let (ia, va) = match a.get(i) {
            Some((k, v)) => (*k, v),
            None => (usize::MAX, &zero),
        };
        let (ib, vb) = match b.get(j) {
            Some((k, v)) => (*k, v),
            None => (usize::MAX, &zero),
        };
        if ia == usize::MAX && ib == usize::MAX {
            return Ordering::Equal;
        }
        let ord = match ia.cmp(&ib) {
            Ordering::Equal => {
                i += 1;
                j += 1;
                va.cmp(vb)
            }
            Ordering::Less => {
                i += 1;
                va.cmp(&zero)
            }
            Ordering::Greater => {
                j += 1;
                zero.cmp(vb)
            }
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.t
            .cmp(&other.t)
            .then_with(|| dense_cmp(&self.mono, &other.mono))
            .then_with(|| dense_cmp(&self.lin, &other.lin))
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn merge_add<T: Clone + Zero>(a: &[(usize, T)], b: &[(usize, T)]) -> Vec<(usize, T)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                let s = x.1.clone() + y.1.clone();
                if !s.is_zero() {
                    out.push((x.0, s));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                out.push(x.clone());
                i += 1;
            }
            (Some(x), None) => {
                out.push(x.clone());
                i += 1;
            }
            (_, Some(y)) => {
                out.push(y.clone());
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

impl TermKey {
    pub fn t_power(&self) -> u32 {
        self.t
    }

    pub fn monomial(&self) -> &[(usize, u32)] {
        &self.mono
    }

    pub fn exponent(&self) -> &[(usize, Rational)] {
        &self.lin
    }

    pub fn is_one(&self) -> bool {
        self.t == 0 && self.mono.is_empty() && self.lin.is_empty()
    }

    fn mul(&self, other: &TermKey) -> TermKey {
        TermKey {
            t: self.t + other.t,
            mono: merge_add(&self.mono, &other.mono),
            lin: merge_add(&self.lin, &other.lin),
        }
    }

    /// `self / other` when the quotient has non-negative powers.
    fn try_div(&self, other: &TermKey) -> Option<TermKey> {
        let t = self.t.checked_sub(other.t)?;
        let mut mono: Vec<(usize, u32)> = self.mono.clone();
        for (k, p) in &other.mono {
            let pos = mono.iter().position(|(i, _)| i == k)?;
            let rest = mono[pos].1.checked_sub(*p)?;
            if rest == 0 {
                mono.remove(pos);
            } else {
                mono[pos].1 = rest;
            }
        }
        let neg: Vec<(usize, Rational)> = other.lin.iter().map(|(k, v)| (*k, -v.clone())).collect();
        Some(TermKey {
            t,
            mono,
            lin: merge_add(&self.lin, &neg),
        })
    }

    fn max_coord(&self) -> Option<usize> {
        let a = self.mono.last().map(|(k, _)| *k);
        let b = self.lin.last().map(|(k, _)| *k);
        a.max(b)
    }
}

/// A symbolic scalar in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Expr {
    terms: BTreeMap<TermKey, Rational>,
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::default()
    }

    pub fn one() -> Expr {
        Expr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Expr {
        Expr::from_term(TermKey::default(), c)
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(rat_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::constant(rat(n, d))
    }

    pub fn coord(i: usize) -> Expr {
        Expr::from_term(
            TermKey {
                mono: vec![(i, 1)],
                ..TermKey::default()
            },
            Rational::one(),
        )
    }

    pub fn time() -> Expr {
        Expr::from_term(
            TermKey {
                t: 1,
                ..TermKey::default()
            },
            Rational::one(),
        )
    }

    /// `exp(Σ w_i z_i)`; weights may be given in any order and may repeat.
    pub fn exp_linear(weights: &[(usize, Rational)]) -> Expr {
        let mut lin: Vec<(usize, Rational)> = Vec::new();
        for (k, w) in weights {
            lin = merge_add(&lin, &[(*k, w.clone())]);
        }
        Expr::from_term(
            TermKey {
                lin,
                ..TermKey::default()
            },
            Rational::one(),
        )
    }

    /// `exp(z_a − z_b)`, the Toda bond factor.
    pub fn exp_diff(a: usize, b: usize) -> Expr {
        Expr::exp_linear(&[(a, rat_int(1)), (b, rat_int(-1))])
    }

    pub fn from_term(key: TermKey, c: Rational) -> Expr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(key, c);
        }
        Expr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (ascending) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&TermKey, &Rational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                k.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn depends_on_time(&self) -> bool {
        self.terms.keys().any(|k| k.t > 0)
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        self.terms.keys().filter_map(TermKey::max_coord).max()
    }

    fn add_term(&mut self, key: TermKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut acc = Expr::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn diff(&self, v: Var) -> Expr {
        let mut out = Expr::zero();
        for (k, c) in &self.terms {
            match v {
                Var::Time => {
                    if k.t > 0 {
                        let mut nk = k.clone();
                        nk.t -= 1;
                        out.add_term(nk, c * rat_int(k.t as i64));
                    }
                }
                Var::Coord(a) => {
                    if let Some(pos) = k.mono.iter().position(|(i, _)| *i == a) {
                        let p = k.mono[pos].1;
                        let mut nk = k.clone();
                        if p == 1 {
                            nk.mono.remove(pos);
                        } else {
                            nk.mono[pos].1 -= 1;
                        }
                        out.add_term(nk, c * rat_int(p as i64));
                    }
                    if let Some((_, w)) = k.lin.iter().find(|(i, _)| *i == a) {
                        out.add_term(k.clone(), c * w);
                    }
                }
            }
        }
        out
    }

    /// `∂/∂z_a`.
    pub fn d(&self, a: usize) -> Expr {
        self.diff(Var::Coord(a))
    }

    pub fn dt(&self) -> Expr {
        self.diff(Var::Time)
    }

    pub fn evaluate(&self, z: &[f64], t: f64) -> Result<f64, ExprError> {
        if let Some(m) = self.max_coord() {
            if m >= z.len() {
                return Err(ExprError::UnboundCoordinate(m));
            }
        }
        Ok(self.compile().eval(z, t))
    }

    pub fn compile(&self) -> Compiled {
        Compiled {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| CTerm {
                    c: c.to_f64().unwrap_or(f64::NAN),
                    t: k.t as i32,
                    mono: k.mono.iter().map(|(i, p)| (*i, *p as i32)).collect(),
                    lin: k
                        .lin
                        .iter()
                        .map(|(i, w)| (*i, w.to_f64().unwrap_or(f64::NAN)))
                        .collect(),
                })
                .collect(),
        }
    }

    fn leading(&self) -> Option<(&TermKey, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / den`, found by leading-term division.
    pub fn exact_divide(&self, den: &Expr) -> Result<Expr, ExprError> {
        let (dk, dc) = den.leading().ok_or(ExprError::DivisionByZero)?;
        let (dk, dc) = (dk.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = Expr::zero();
        let cap = 16 + 4 * (self.len() + 1) * (den.len() + 1);
        for _ in 0..cap {
            let Some((rk, rc)) = rem.leading() else {
                return Ok(q);
            };
            let k = rk.try_div(&dk).ok_or(ExprError::NotDivisible)?;
            let step = Expr::from_term(k, rc / &dc);
            rem -= &(&step * den);
            q += &step;
        }
        Err(ExprError::NotDivisible)
    }

    /// Relabels coordinate `i` as `map[i]`.
    pub fn reindex(&self, map: &[usize]) -> Expr {
        let mut out = Expr::zero();
        for (k, c) in &self.terms {
            let mut mono: Vec<(usize, u32)> = k.mono.iter().map(|(i, p)| (map[*i], *p)).collect();
            mono.sort_by_key(|(i, _)| *i);
            let mut lin: Vec<(usize, Rational)> = Vec::new();
            for (i, w) in &k.lin {
                lin = merge_add(&lin, &[(map[*i], w.clone())]);
            }
            out.add_term(TermKey { t: k.t, mono, lin }, c.clone());
        }
        out
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Expr {
        Expr::constant(c)
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), c.clone());
        }
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), -c.clone());
        }
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(ka.mul(kb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                (&self).$f(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                self.$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut acc = Expr::zero();
        for e in iter {
            acc += &e;
        }
        acc
    }
}

/// Floating-point evaluator built once from an [`Expr`].
#[derive(Debug, Clone)]
pub struct Compiled {
    terms: Vec<CTerm>,
}

#[derive(Debug, Clone)]
struct CTerm {
    c: f64,
    t: i32,
    mono: Vec<(usize, i32)>,
    lin: Vec<(usize, f64)>,
}

impl Compiled {
    pub fn eval(&self, z: &[f64], t: f64) -> f64 {
        let mut sum = 0.0;
        for term in &self.terms {
            let mut v = term.c;
            if term.t > 0 {
                v *= t.powi(term.t);
            }
            for (i, p) in &term.mono {
                v *= z[*i].powi(*p);
            }
            if !term.lin.is_empty() {
                let arg: f64 = term.lin.iter().map(|(i, w)| w * z[*i]).sum();
                v *= arg.exp();
            }
            sum += v;
        }
        sum
    }
}

/// Coordinate names of a phase space; `t` is reserved for time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<String>,
}

impl Symbols {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Symbols {
        Symbols {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    /// `z1, …, z{dim}`.
    pub fn numbered(prefix: &str, dim: usize) -> Symbols {
        Symbols::new((1..=dim).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var(&self, name: &str) -> Result<Var, ExprError> {
        if name == "t" {
            return Ok(Var::Time);
        }
        self.index(name)
            .map(Var::Coord)
            .ok_or_else(|| ExprError::UnknownSymbol(name.to_string()))
    }

    pub fn parse(&self, src: &str) -> Result<Expr, ExprError> {
        parse_with(src, self)
    }

    /// Parses, panicking on malformed input; for literals in builders and tests.
    pub fn expr(&self, src: &str) -> Expr {
        match self.parse(src) {
            Ok(e) => e,
            Err(err) => panic!("bad expression literal `{src}`: {err}"),
        }
    }

    pub fn show<'a>(&'a self, e: &'a Expr) -> Displayed<'a> {
        Displayed::new(e, self)
    }
}
